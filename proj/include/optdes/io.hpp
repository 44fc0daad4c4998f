#ifndef OPTDES_IO_HPP
#define OPTDES_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "optdes/design.hpp"
#include "optdes/exact_solver.hpp"

#include "json.hpp"

namespace optdes {

using Json = nlohmann::json;

/// CSV rows are "x1,...,xp,weight" (or count); values printed with six
/// significant digits for plots and eyeballs. The JSON form keeps full
/// double precision and is the round-trip format.
std::string design_csv(const ApproximateDesign& d);
std::string design_csv(const ExactDesign& d);

Json design_json(const ApproximateDesign& d);
Json design_json(const ExactDesign& d);

ApproximateDesign approx_design_from_json(const Json& j);
ExactDesign exact_design_from_json(const Json& j);
/// Reads either design flavor as weights (counts become count/n).
ApproximateDesign any_design_as_approx_from_json(const Json& j);

std::string dprofile_csv(const std::vector<Vec>& candidates,
                         const std::vector<double>& d);
std::string trace_csv(const AnnealTrace& trace);
std::string restarts_csv(const std::vector<RestartReport>& reports);

void write_file(const std::filesystem::path& path, const std::string& contents);
Json read_json_file(const std::filesystem::path& path);

}  // namespace optdes

#endif
