#ifndef OPTDES_MODEL_HPP
#define OPTDES_MODEL_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace optdes {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A regression or GLM model reduced to what design criteria need:
/// the regressor vector f(x) (the mean-function gradient for nonlinear
/// models) and the information weight lambda(x) at the nominal parameter.
struct ModelSpec {
  int p = 0;  // design-point dimension
  int q = 0;  // parameter dimension
  Vec theta;  // nominal parameter value, length q
  std::function<Vec(const Vec&)> regressor;     // x -> R^q
  std::function<double(const Vec&)> info_weight;  // x -> [0, inf)
  std::string name;
};

enum class PresetId {
  Logit2Interaction,
  GroupTesting,
  Logit7,
  DoseLinear,
  DoseEmax,
  DoseLogistic,
  PolyLinear,
};

PresetId preset_from_string(const std::string& id);
std::string preset_to_string(PresetId id);

/// Builds the named model with the given nominal parameter.
/// Throws std::invalid_argument on a wrong theta length.
ModelSpec make_preset(PresetId id, const Vec& theta);
ModelSpec make_preset(const std::string& id, const Vec& theta);

/// f(x); throws std::invalid_argument if x has the wrong dimension.
Vec eval_regressor(const ModelSpec& model, const Vec& x);

/// lambda(x); throws std::domain_error for degenerate inputs
/// (group-testing success probability at or outside (0,1)).
double eval_info_weight(const ModelSpec& model, const Vec& x);

}  // namespace optdes

#endif
