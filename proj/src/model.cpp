#include "optdes/model.hpp"

#include <cmath>
#include <stdexcept>

namespace optdes {

namespace {

void check_theta(const Vec& theta, int q, const char* name) {
  if (theta.size() != q)
    throw std::invalid_argument(std::string(name) + ": theta must have length " +
                                std::to_string(q) + ", got " +
                                std::to_string(theta.size()));
}

double logistic_weight(double eta) {
  // e^eta / (1 + e^eta)^2, computed on the stable side
  const double a = std::exp(-std::abs(eta));
  const double denom = 1.0 + a;
  return a / (denom * denom);
}

ModelSpec make_logit2(const Vec& theta) {
  check_theta(theta, 4, "logit2_interaction");
  ModelSpec m;
  m.p = 2;
  m.q = 4;
  m.theta = theta;
  m.name = "logit2_interaction";
  m.regressor = [](const Vec& x) {
    Vec f(4);
    f << 1.0, x[0], x[1], x[0] * x[1];
    return f;
  };
  m.info_weight = [theta](const Vec& x) {
    Vec f(4);
    f << 1.0, x[0], x[1], x[0] * x[1];
    return logistic_weight(f.dot(theta));
  };
  return m;
}

ModelSpec make_logit7(const Vec& theta) {
  check_theta(theta, 8, "logit7");
  ModelSpec m;
  m.p = 7;
  m.q = 8;
  m.theta = theta;
  m.name = "logit7";
  m.regressor = [](const Vec& x) {
    Vec f(8);
    f[0] = 1.0;
    f.tail(7) = x;
    return f;
  };
  m.info_weight = [theta](const Vec& x) {
    Vec f(8);
    f[0] = 1.0;
    f.tail(7) = x;
    return logistic_weight(f.dot(theta));
  };
  return m;
}

ModelSpec make_group_testing(const Vec& theta) {
  check_theta(theta, 3, "group_testing");
  const double p0 = theta[0], p1 = theta[1], p2 = theta[2];
  ModelSpec m;
  m.p = 1;
  m.q = 3;
  m.theta = theta;
  m.name = "group_testing";
  m.regressor = [p0, p1, p2](const Vec& x) {
    const double s = std::pow(1.0 - p0, x[0]);
    Vec f(3);
    f << x[0] * (p1 + p2 - 1.0) * std::pow(1.0 - p0, x[0] - 1.0), 1.0 - s, -s;
    return f;
  };
  m.info_weight = [p0, p1, p2](const Vec& x) {
    const double pi = p1 - (p1 + p2 - 1.0) * std::pow(1.0 - p0, x[0]);
    if (!(pi > 0.0 && pi < 1.0))
      throw std::domain_error("group_testing: success probability " +
                              std::to_string(pi) + " at x=" +
                              std::to_string(x[0]) + " is degenerate");
    return 1.0 / (pi * (1.0 - pi));
  };
  return m;
}

ModelSpec make_dose_linear(const Vec& theta) {
  check_theta(theta, 2, "dose_linear");
  ModelSpec m;
  m.p = 1;
  m.q = 2;
  m.theta = theta;
  m.name = "dose_linear";
  m.regressor = [](const Vec& x) {
    Vec f(2);
    f << 1.0, x[0];
    return f;
  };
  m.info_weight = [](const Vec&) { return 1.0; };
  return m;
}

ModelSpec make_dose_emax(const Vec& theta) {
  check_theta(theta, 3, "dose_emax");
  const double ed50 = theta[2];
  const double emax = theta[1];
  ModelSpec m;
  m.p = 1;
  m.q = 3;
  m.theta = theta;
  m.name = "dose_emax";
  // eta = t0 + t1*x/(t2+x); gradient wrt (t0, t1, t2)
  m.regressor = [emax, ed50](const Vec& x) {
    const double d = ed50 + x[0];
    Vec f(3);
    f << 1.0, x[0] / d, -emax * x[0] / (d * d);
    return f;
  };
  m.info_weight = [](const Vec&) { return 1.0; };
  return m;
}

ModelSpec make_dose_logistic(const Vec& theta) {
  check_theta(theta, 4, "dose_logistic");
  const double t1 = theta[1], t2 = theta[2], t3 = theta[3];
  ModelSpec m;
  m.p = 1;
  m.q = 4;
  m.theta = theta;
  m.name = "dose_logistic";
  // eta = t0 + t1 / (1 + exp((t2 - x)/t3))
  m.regressor = [t1, t2, t3](const Vec& x) {
    const double z = (t2 - x[0]) / t3;
    const double sig = 1.0 / (1.0 + std::exp(z));
    const double sp = sig * (1.0 - sig);
    Vec f(4);
    f << 1.0, sig, -t1 * sp / t3, t1 * sp * (t2 - x[0]) / (t3 * t3);
    return f;
  };
  m.info_weight = [](const Vec&) { return 1.0; };
  return m;
}

ModelSpec make_poly_linear(const Vec& theta) {
  if (theta.size() < 2)
    throw std::invalid_argument("poly_linear: theta must have length >= 2");
  const int q = static_cast<int>(theta.size());
  ModelSpec m;
  m.p = 1;
  m.q = q;
  m.theta = theta;
  m.name = "poly_linear";
  m.regressor = [q](const Vec& x) {
    Vec f(q);
    double v = 1.0;
    for (int k = 0; k < q; ++k) {
      f[k] = v;
      v *= x[0];
    }
    return f;
  };
  m.info_weight = [](const Vec&) { return 1.0; };
  return m;
}

}  // namespace

PresetId preset_from_string(const std::string& id) {
  if (id == "logit2_interaction") return PresetId::Logit2Interaction;
  if (id == "group_testing") return PresetId::GroupTesting;
  if (id == "logit7") return PresetId::Logit7;
  if (id == "dose_linear") return PresetId::DoseLinear;
  if (id == "dose_emax") return PresetId::DoseEmax;
  if (id == "dose_logistic") return PresetId::DoseLogistic;
  if (id == "poly_linear") return PresetId::PolyLinear;
  throw std::invalid_argument("unknown model preset: " + id);
}

std::string preset_to_string(PresetId id) {
  switch (id) {
    case PresetId::Logit2Interaction: return "logit2_interaction";
    case PresetId::GroupTesting: return "group_testing";
    case PresetId::Logit7: return "logit7";
    case PresetId::DoseLinear: return "dose_linear";
    case PresetId::DoseEmax: return "dose_emax";
    case PresetId::DoseLogistic: return "dose_logistic";
    case PresetId::PolyLinear: return "poly_linear";
  }
  throw std::invalid_argument("unknown preset id");
}

ModelSpec make_preset(PresetId id, const Vec& theta) {
  switch (id) {
    case PresetId::Logit2Interaction: return make_logit2(theta);
    case PresetId::GroupTesting: return make_group_testing(theta);
    case PresetId::Logit7: return make_logit7(theta);
    case PresetId::DoseLinear: return make_dose_linear(theta);
    case PresetId::DoseEmax: return make_dose_emax(theta);
    case PresetId::DoseLogistic: return make_dose_logistic(theta);
    case PresetId::PolyLinear: return make_poly_linear(theta);
  }
  throw std::invalid_argument("unknown preset id");
}

ModelSpec make_preset(const std::string& id, const Vec& theta) {
  return make_preset(preset_from_string(id), theta);
}

Vec eval_regressor(const ModelSpec& model, const Vec& x) {
  if (x.size() != model.p)
    throw std::invalid_argument("design point has dimension " +
                                std::to_string(x.size()) + ", model expects " +
                                std::to_string(model.p));
  Vec f = model.regressor(x);
  if (f.size() != model.q)
    throw std::logic_error("regressor returned wrong length");
  return f;
}

double eval_info_weight(const ModelSpec& model, const Vec& x) {
  if (x.size() != model.p)
    throw std::invalid_argument("design point has dimension " +
                                std::to_string(x.size()) + ", model expects " +
                                std::to_string(model.p));
  return model.info_weight(x);
}

}  // namespace optdes
