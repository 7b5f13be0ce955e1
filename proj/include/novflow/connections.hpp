#pragma once

#include "novflow/zeros.hpp"

#include <optional>
#include <string>
#include <vector>

namespace novflow {

struct DetectorOptions {
    double seed_radius = 1e-4;
    double t_max = 2e4;
    /// Orbits whose integral drops below −n_floor are classified as cycling or
    /// escaping. NaN selects 3·max|period| + 10.
    double n_floor = std::numeric_limits<double>::quiet_NaN();
    double tol_abs = 1e-9;
    double tol_rel = 1e-9;
    /// Extra seeds per degenerate zero: in the plane, 4·refinement points on the circle.
    int refinement = 1;
    int threads = 1;
    size_t max_orbit_samples = 256;
};

struct SeedOutcome {
    size_t source = 0;  // zero index; npos for a probe orbit
    size_t seed = 0;    // index among the seeds of this source
    Eigen::VectorXd start;
    std::string outcome;  // edge, integral-floor, escape, left-domain, time-exhausted, box-violation, stayed-in-source, ...
    std::optional<size_t> target;
    Termination termination = Termination::TimeExhausted;
    double final_time = 0.0;
    double integral = 0.0;
    long steps = 0;
};

struct HeteroclinicEdge {
    size_t source = 0;
    size_t target = 0;
    size_t seed = 0;
    Eigen::VectorXd start;
    std::vector<Eigen::VectorXd> orbit;  // decimated, unwrapped
    double integral_drop = 0.0;
};

struct ConnectionReport {
    std::vector<HeteroclinicEdge> edges;  // one per (source, target), first seed wins
    std::vector<SeedOutcome> seeds;       // every seed and probe, in seed order
    double n_floor = 0.0;
};

static constexpr size_t probe_source = static_cast<size_t>(-1);

/// Unstable-direction seeds for a hyperbolic zero, axis and circle seeds for a degenerate one.
std::vector<Eigen::VectorXd> detector_seeds(const Scenario& s, const ZeroPoint& zero, const DetectorOptions& options);

/// Integrates one seed forward and classifies where it ends up.
SeedOutcome trace_seed(const Scenario& s, const std::vector<ZeroPoint>& zeros, const std::vector<LyapunovBox>& boxes,
                       size_t source, const Eigen::VectorXd& start, const DetectorOptions& options,
                       Trajectory* orbit = nullptr);

/// boxes[i] belongs to zeros[i]. Scenarios without zeros get one probe orbit from the window center.
ConnectionReport detect_heteroclinics(const Scenario& s, const std::vector<ZeroPoint>& zeros,
                                      const std::vector<LyapunovBox>& boxes, const DetectorOptions& options = {});

/// Boxes for every zero with a common ε (min(0.05, distance to nearest other zero / 5)) and initial δ.
std::vector<LyapunovBox> boxes_for(const Scenario& s, const std::vector<ZeroPoint>& zeros, double delta = 1e-2,
                                   const BoxOptions& options = {});

struct CycleReport {
    std::vector<HeteroclinicEdge> edges;
    bool homoclinic_orbit() const { return edges.size() == 1; }
    std::vector<size_t> zeros() const;  // source of each edge, in order
};

/// Elementary directed cycles of the connection multigraph. Sorted by length, then by zero sequence.
std::vector<CycleReport> find_homoclinic_cycles(const std::vector<HeteroclinicEdge>& edges);

}  // namespace novflow
