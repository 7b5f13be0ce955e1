#include "novflow/connections.hpp"

#include "novflow/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

namespace novflow {

using Eigen::VectorXd;

std::vector<VectorXd> detector_seeds(const Scenario& s, const ZeroPoint& zero, const DetectorOptions& options) {
    const int n = s.dimension();
    const double r = options.seed_radius;
    std::vector<VectorXd> seeds;
    if (zero.hyperbolic) {
        for (Eigen::Index k = 0; k < zero.eigenvalues.size(); ++k) {
            if (zero.eigenvalues(k) >= 0.0) continue;
            VectorXd v = zero.eigenvectors.col(k).normalized();
            Eigen::Index lead = 0;
            v.cwiseAbs().maxCoeff(&lead);
            if (v(lead) < 0) v = -v;
            seeds.push_back(zero.position + r * v);
            seeds.push_back(zero.position - r * v);
        }
        return seeds;
    }
    const int refine = std::max(1, options.refinement);
    if (n == 2) {
        // Quarter turns use exact axis directions so invariant coordinate lines are hit exactly.
        const int count = 4 * refine;
        for (int k = 0; k < count; ++k) {
            VectorXd d(2);
            if (k % refine == 0) {
                const int quarter = k / refine;
                d << (quarter == 0 ? 1.0 : quarter == 2 ? -1.0 : 0.0), (quarter == 1 ? 1.0 : quarter == 3 ? -1.0 : 0.0);
            } else {
                const double a = 2 * std::numbers::pi * k / count;
                d << std::cos(a), std::sin(a);
            }
            seeds.push_back(zero.position + r * d);
        }
        return seeds;
    }
    for (int i = 0; i < n; ++i)
        for (double sign : {1.0, -1.0}) {
            VectorXd d = VectorXd::Zero(n);
            d(i) = sign;
            seeds.push_back(zero.position + r * d);
        }
    if (n > 2 && refine > 1)
        for (const auto& d : sphere_samples(n, 2 * n * (refine - 1))) seeds.push_back(zero.position + r * d);
    return seeds;
}

SeedOutcome trace_seed(const Scenario& s, const std::vector<ZeroPoint>& zeros, const std::vector<LyapunovBox>& boxes,
                       size_t source, const VectorXd& start, const DetectorOptions& options, Trajectory* orbit) {
    if (boxes.size() != zeros.size()) throw ValidationError("trace_seed: one box per zero is required");
    SeedOutcome out;
    out.source = source;
    out.start = start;

    FlowOptions fo;
    fo.t_max = options.t_max;
    fo.tol_abs = options.tol_abs;
    fo.tol_rel = options.tol_rel;
    fo.integral_floor = -(std::isnan(options.n_floor) ? default_n_floor(s) : options.n_floor);
    fo.record = orbit != nullptr;
    for (const auto& b : boxes) fo.max_displacement = std::min(fo.max_displacement, b.epsilon / 8);

    bool left_source = source == probe_source;
    bool violation = false;
    std::optional<size_t> target;
    auto observer = [&](double, const VectorXd& x, double) {
        if (!left_source) {
            const auto& b = boxes[source];
            const double f = local_primitive(s, b.center, x);
            if (s.distance(b.center, x) > b.epsilon) {
                if (std::abs(f) <= b.delta) {
                    violation = true;
                    return true;
                }
                left_source = true;
            } else if (f < -b.delta) {
                left_source = true;
            } else {
                return false;
            }
        }
        for (size_t q = 0; q < boxes.size(); ++q) {
            const auto& b = boxes[q];
            if (s.distance(b.center, x) < 0.5 * b.epsilon && std::abs(local_primitive(s, b.center, x)) <= b.delta) {
                target = q;
                return true;
            }
        }
        return false;
    };

    Trajectory tr = integrate_flow(s, start, +1, fo, observer);
    out.termination = tr.termination;
    out.final_time = tr.final_time;
    out.integral = tr.final_integral;
    out.steps = tr.steps;
    out.target = target;
    switch (tr.termination) {
        case Termination::Stopped: out.outcome = target ? "edge" : "box-violation"; break;
        case Termination::IntegralFloorReached: out.outcome = "integral-floor"; break;
        case Termination::LeftDomain: out.outcome = s.in_domain(tr.final_position) ? "escape" : "left-domain"; break;
        case Termination::TimeExhausted:
            out.outcome = tr.escaped ? "escape" : "time-exhausted";
            if (tr.escaped) out.integral = tr.integral_limit;
            break;
        case Termination::ConvergedToZero: out.outcome = "converged-outside-boxes"; break;
        case Termination::StepUnderflow: out.outcome = "step-underflow"; break;
    }
    if (violation) out.outcome = "box-violation";
    else if (!left_source && !target && out.outcome != "left-domain") out.outcome = "stayed-in-source";
    if (orbit) *orbit = std::move(tr);
    return out;
}

namespace {

std::vector<VectorXd> decimate(const std::vector<VectorXd>& x, size_t limit) {
    if (x.size() <= limit || limit < 2) return x;
    std::vector<VectorXd> out;
    for (size_t k = 0; k < limit; ++k) out.push_back(x[k * (x.size() - 1) / (limit - 1)]);
    return out;
}

}  // namespace

ConnectionReport detect_heteroclinics(const Scenario& s, const std::vector<ZeroPoint>& zeros,
                                      const std::vector<LyapunovBox>& boxes, const DetectorOptions& options) {
    if (boxes.size() != zeros.size()) throw ValidationError("detect_heteroclinics: one box per zero is required");
    struct Task {
        size_t source, seed;
        VectorXd start;
    };
    std::vector<Task> tasks;
    for (size_t z = 0; z < zeros.size(); ++z) {
        const auto seeds = detector_seeds(s, zeros[z], options);
        for (size_t k = 0; k < seeds.size(); ++k) tasks.push_back({z, k, seeds[k]});
    }
    if (zeros.empty()) tasks.push_back({probe_source, 0, s.window_center()});

    std::vector<SeedOutcome> outcomes(tasks.size());
    std::vector<Trajectory> orbits(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < tasks.size();) {
            Trajectory tr;
            outcomes[i] = trace_seed(s, zeros, boxes, tasks[i].source, tasks[i].start, options, &tr);
            outcomes[i].seed = tasks[i].seed;
            if (outcomes[i].outcome == "edge") orbits[i].x = decimate(tr.x, options.max_orbit_samples);
        }
    };
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(tasks.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ConnectionReport report;
    report.n_floor = std::isnan(options.n_floor) ? default_n_floor(s) : options.n_floor;
    std::map<std::pair<size_t, size_t>, bool> seen;
    for (size_t i = 0; i < tasks.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.outcome == "edge" && !seen[{o.source, *o.target}]) {
            seen[{o.source, *o.target}] = true;
            report.edges.push_back({o.source, *o.target, o.seed, o.start, std::move(orbits[i].x), o.integral});
        }
    }
    std::stable_sort(report.edges.begin(), report.edges.end(), [](const auto& a, const auto& b) {
        return std::pair(a.source, a.target) < std::pair(b.source, b.target);
    });
    report.seeds = std::move(outcomes);
    return report;
}

std::vector<LyapunovBox> boxes_for(const Scenario& s, const std::vector<ZeroPoint>& zeros, double delta,
                                   const BoxOptions& options) {
    double epsilon = 0.05;
    for (size_t i = 0; i < zeros.size(); ++i)
        for (size_t j = i + 1; j < zeros.size(); ++j)
            epsilon = std::min(epsilon, s.distance(zeros[i].position, zeros[j].position) / 5);
    std::vector<LyapunovBox> boxes;
    for (size_t i = 0; i < zeros.size(); ++i) boxes.push_back(lyapunov_box(s, zeros, i, delta, epsilon, options));
    return boxes;
}

std::vector<size_t> CycleReport::zeros() const {
    std::vector<size_t> out;
    for (const auto& e : edges) out.push_back(e.source);
    return out;
}

std::vector<CycleReport> find_homoclinic_cycles(const std::vector<HeteroclinicEdge>& edges) {
    std::vector<size_t> nodes;
    for (const auto& e : edges) {
        nodes.push_back(e.source);
        nodes.push_back(e.target);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<CycleReport> cycles;
    std::vector<size_t> path;
    std::vector<size_t> on_path;
    // Each cycle is found once, from its smallest zero, with all other zeros larger.
    auto dfs = [&](auto&& self, size_t start, size_t node) -> void {
        for (size_t i = 0; i < edges.size(); ++i) {
            const auto& e = edges[i];
            if (e.source != node) continue;
            if (e.target == start) {
                CycleReport c;
                for (size_t j : path) c.edges.push_back(edges[j]);
                c.edges.push_back(e);
                cycles.push_back(std::move(c));
            } else if (e.target > start && std::find(on_path.begin(), on_path.end(), e.target) == on_path.end()) {
                path.push_back(i);
                on_path.push_back(e.target);
                self(self, start, e.target);
                on_path.pop_back();
                path.pop_back();
            }
        }
    };
    for (size_t start : nodes) dfs(dfs, start, start);
    std::stable_sort(cycles.begin(), cycles.end(), [](const CycleReport& a, const CycleReport& b) {
        if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
        return a.zeros() < b.zeros();
    });
    return cycles;
}

}  // namespace novflow
