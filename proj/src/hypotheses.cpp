#include "novflow/hypotheses.hpp"

#include "novflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace novflow {

using Eigen::VectorXd;

HypothesisReport check_hypotheses(const Scenario& s, const std::vector<ZeroPoint>& zeros,
                                  const HypothesisOptions& options) {
    HypothesisReport report;
    report.threshold = options.threshold;
    std::mt19937_64 rng(options.seed);

    bool any_unbounded = false;
    for (int i = 0; i < s.dimension(); ++i) any_unbounded = any_unbounded || s.unbounded(i);
    std::vector<double> scales = any_unbounded ? options.scales : std::vector<double>{1.0};
    if (scales.empty()) scales.push_back(1.0);

    auto excluded = [&](const VectorXd& x) {
        for (const auto& z : zeros)
            if (s.distance(z.position, x) < options.eps_excl) return true;
        return !s.in_domain(x);
    };

    const int per_scale = std::max(1, options.sample_budget / static_cast<int>(scales.size()));
    report.inf_estimate = std::numeric_limits<double>::infinity();
    for (double scale : scales) {
        ScaleEstimate est;
        est.scale = scale;
        est.inf_grad = std::numeric_limits<double>::infinity();
        est.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
        for (int attempt = 0; attempt < 20 * per_scale && est.samples < per_scale; ++attempt) {
            const VectorXd x = s.sample(rng, scale);
            if (excluded(x)) continue;
            ++est.samples;
            const double g = gradient_norm(s, x);
            est.inf_grad = std::min(est.inf_grad, g);
            est.sup_grad = std::max(est.sup_grad, g);
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.metric(x), Eigen::EigenvaluesOnly);
            est.min_metric_eigenvalue = std::min(est.min_metric_eigenvalue, es.eigenvalues()(0));
        }
        if (est.samples == 0) est.inf_grad = est.min_metric_eigenvalue = 0.0;
        report.inf_estimate = std::min(report.inf_estimate, est.inf_grad);
        report.sup_estimate = std::max(report.sup_estimate, est.sup_grad);
        report.scales.push_back(est);
    }
    const auto& first = report.scales.front();
    const auto& last = report.scales.back();
    report.inf_decays = report.scales.size() > 1 && last.inf_grad < first.inf_grad / 10;
    report.sup_bounded = report.scales.size() == 1 || last.sup_grad < 10 * first.sup_grad;
    if (report.inf_decays) report.notes.push_back("inf |grad ω| decays as the sample window grows");
    if (!report.sup_bounded) report.notes.push_back("sup |grad ω| grows with the sample window");

    FlowOptions fo;
    fo.t_max = options.probe_t_max;
    fo.record = false;
    for (int k = 0; k < options.probes; ++k) {
        VectorXd x0 = s.sample(rng, 1.0);
        for (int attempt = 0; attempt < 100 && excluded(x0); ++attempt) x0 = s.sample(rng, 1.0);
        if (excluded(x0)) continue;
        const Trajectory tr = integrate_flow(s, x0, +1, fo);
        ++report.probes;
        if (tr.escaped) ++report.escapes;
        if (tr.termination == Termination::LeftDomain) {
            // A blow-up only counts as an escape while the integral stays bounded.
            if (!s.in_domain(tr.final_position)) ++report.domain_exits;
            else if (tr.final_integral > -default_n_floor(s)) ++report.escapes;
        }
    }
    if (report.escapes > 0)
        report.notes.push_back(std::to_string(report.escapes) + " probe orbits escape with bounded integral");
    if (report.domain_exits > 0)
        report.notes.push_back(std::to_string(report.domain_exits) + " probe orbits leave the domain in finite time");

    switch (s.model()) {
        case Model::Torus:
            report.complete_heuristic = true;
            break;
        case Model::Euclidean:
            report.complete_heuristic = last.min_metric_eigenvalue > first.min_metric_eigenvalue / 10;
            if (!report.complete_heuristic) report.notes.push_back("metric degenerates at large scale");
            break;
        case Model::Product:
            report.complete_heuristic = false;
            report.notes.push_back("metric incomplete on the open t-interval");
            break;
    }
    report.notes.push_back("completeness is only checked as no blow-up before t_max");
    return report;
}

}  // namespace novflow
