#pragma once

#include "novflow/zeros.hpp"

#include <string>
#include <vector>

namespace novflow {

struct HypothesisOptions {
    double eps_excl = 0.1;    // exclusion radius around zeros
    int sample_budget = 3000;  // accepted samples, split over scales
    std::vector<double> scales{1.0, 10.0, 100.0};  // window multiples on unbounded axes
    int probes = 8;
    double probe_t_max = 1e4;
    double threshold = 1e-6;  // inf estimates at or below count as zero
    std::uint64_t seed = 42;
};

struct ScaleEstimate {
    double scale = 1.0;
    int samples = 0;
    double inf_grad = 0.0;
    double sup_grad = 0.0;
    double min_metric_eigenvalue = 0.0;
};

/// Every number here is a sampled estimate, not a bound.
struct HypothesisReport {
    std::vector<ScaleEstimate> scales;
    double inf_estimate = 0.0;  // candidate c, over all scales
    double sup_estimate = 0.0;
    bool inf_decays = false;  // inf at the largest scale below a tenth of inf at scale 1
    bool sup_bounded = true;
    int probes = 0;
    int escapes = 0;
    int domain_exits = 0;
    bool complete_heuristic = false;
    std::vector<std::string> notes;
    double threshold = 1e-6;

    bool positive() const {
        return inf_estimate > threshold && !inf_decays && escapes == 0 && domain_exits == 0 && complete_heuristic;
    }
};

HypothesisReport check_hypotheses(const Scenario& s, const std::vector<ZeroPoint>& zeros,
                                  const HypothesisOptions& options = {});

}  // namespace novflow
