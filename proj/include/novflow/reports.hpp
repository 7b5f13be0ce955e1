#pragma once

#include "novflow/cat_bounds.hpp"
#include "novflow/connections.hpp"
#include "novflow/hypotheses.hpp"

#include "json.hpp"

#include <limits>
#include <optional>
#include <string>

namespace novflow {

struct RunConfig {
    double tol_abs = 1e-9;
    double tol_rel = 1e-9;
    double t_max = std::numeric_limits<double>::quiet_NaN();  // NaN: per-command default
    double n_floor = std::numeric_limits<double>::quiet_NaN();
    double zero_tol = 1e-10;
    double merge_radius = 1e-3;
    double seed_radius = 1e-4;
    double box_delta = 1e-2;
    int threads = 1;
    std::uint64_t seed = 42;
};

/// Throws ValidationError for non-positive tolerances or thread counts.
void validate(const RunConfig& c);

/// Everything that can change a result. Thread count is left out on purpose: it must not.
nlohmann::json tolerance_json(const RunConfig& c);

/// Built-in scenario name or path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

nlohmann::json homology_report(const ComplexFile& f, std::optional<int> degree = std::nullopt);
nlohmann::json supp_report(const ComplexFile& f);
nlohmann::json cupbound_report(const ComplexFile& f);

nlohmann::json flow_report(const Scenario& s, const Eigen::VectorXd& x0, int direction, const RunConfig& c,
                           Trajectory* trajectory = nullptr);
/// Columns t, x1..xn, integral.
std::string trajectory_csv(const Trajectory& tr);

nlohmann::json zeros_report(const Scenario& s, const RunConfig& c);
nlohmann::json cycles_report(const Scenario& s, const RunConfig& c);
nlohmann::json verdict_report(const Scenario& s, const SpaceDescriptor& d, const RunConfig& c);

}  // namespace novflow
