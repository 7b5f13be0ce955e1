#include "novflow/zeros.hpp"

#include "novflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace novflow {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd one_form_jacobian(const Scenario& s, const VectorXd& x) {
    const int n = s.dimension();
    const double h = 1e-6;
    MatrixXd J(n, n);
    for (int j = 0; j < n; ++j) {
        VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        J.col(j) = (s.one_form(xp) - s.one_form(xm)) / (2 * h);
    }
    return J;
}

bool newton(const Scenario& s, VectorXd& x, const ZeroSearchOptions& o) {
    VectorXd w = s.one_form(x);
    for (int it = 0; it < o.max_newton; ++it) {
        if (w.norm() < o.zero_tol) return true;
        const VectorXd step = one_form_jacobian(s, x).completeOrthogonalDecomposition().solve(-w);
        if (!step.allFinite()) return false;
        double lambda = 1.0;
        for (;;) {
            const VectorXd trial = x + lambda * step;
            if (s.in_domain(trial)) {
                const VectorXd wt = s.one_form(trial);
                if (wt.norm() < w.norm()) {
                    x = trial;
                    w = wt;
                    break;
                }
            }
            lambda *= 0.5;
            if (lambda < 1e-6) return false;
        }
    }
    return w.norm() < o.zero_tol;
}

bool inside_search_window(const Scenario& s, const VectorXd& x) {
    for (int i = 0; i < s.dimension(); ++i) {
        if (s.periodic(i)) continue;
        const double lo = s.window()(i, 0), hi = s.window()(i, 1), pad = 0.05 * (hi - lo);
        if (x(i) < lo - pad || x(i) > hi + pad) return false;
    }
    return s.in_domain(x);
}

// Candidates on which more components of ω vanish exactly sit on invariant
// coordinate subspaces; prefer them as cluster representatives.
int exact_zero_components(const VectorXd& w) {
    int count = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i) count += (w(i) == 0.0);
    return count;
}

bool lexicographic_less(const VectorXd& a, const VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

ZeroPoint classify_zero(const Scenario& s, const VectorXd& x, double hyperbolic_tol) {
    ZeroPoint z;
    z.position = s.wrap(x);
    const MatrixXd H = one_form_jacobian(s, z.position);
    const MatrixXd Hs = 0.5 * (H + H.transpose());
    const MatrixXd g = s.metric(z.position);
    const Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(Hs, g);
    z.jacobian = g.llt().solve(Hs);
    z.eigenvalues = es.eigenvalues();
    z.eigenvectors = es.eigenvectors();
    z.residual = s.one_form(z.position).norm();
    z.hyperbolic = (z.eigenvalues.array().abs() > hyperbolic_tol).all();
    z.unstable_count = static_cast<int>((z.eigenvalues.array() < -hyperbolic_tol).count());
    return z;
}

ZeroSearch find_zeros(const Scenario& s, const ZeroSearchOptions& o) {
    const int n = s.dimension();
    std::vector<std::vector<double>> axes(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double lo = s.window()(i, 0), hi = s.window()(i, 1);
        auto& ax = axes[static_cast<size_t>(i)];
        if (s.periodic(i)) {
            for (int k = 0; k < o.grid_density; ++k) ax.push_back(static_cast<double>(k) / o.grid_density);
        } else {
            const bool open = !s.unbounded(i);
            for (int k = open ? 1 : 0; k <= (open ? o.grid_density - 1 : o.grid_density); ++k)
                ax.push_back(lo + (hi - lo) * k / o.grid_density);
        }
    }

    struct Candidate {
        VectorXd x;
        int exact;
        double residual;
    };
    std::vector<Candidate> candidates;
    std::vector<size_t> index(static_cast<size_t>(n), 0);
    for (;;) {
        VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = axes[static_cast<size_t>(i)][index[static_cast<size_t>(i)]];
        if (newton(s, x, o) && inside_search_window(s, x)) {
            x = s.wrap(x);
            const VectorXd w = s.one_form(x);
            candidates.push_back({x, exact_zero_components(w), w.norm()});
        }
        int axis = 0;
        while (axis < n && ++index[static_cast<size_t>(axis)] == axes[static_cast<size_t>(axis)].size())
            index[static_cast<size_t>(axis++)] = 0;
        if (axis == n) break;
    }

    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.exact != b.exact) return a.exact > b.exact;
        if (a.residual != b.residual) return a.residual < b.residual;
        return lexicographic_less(a.x, b.x);
    });
    std::vector<VectorXd> kept;
    for (const auto& c : candidates) {
        bool duplicate = false;
        for (const auto& k : kept)
            if (s.distance(c.x, k) < o.merge_radius) duplicate = true;
        if (!duplicate) kept.push_back(c.x);
    }
    std::sort(kept.begin(), kept.end(), lexicographic_less);

    ZeroSearch out;
    for (const auto& x : kept) out.zeros.push_back(classify_zero(s, x, o.hyperbolic_tol));
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = i + 1; j < kept.size(); ++j)
            if (s.distance(kept[i], kept[j]) < 2 * o.merge_radius)
                out.warnings.push_back("zeros " + std::to_string(i) + " and " + std::to_string(j) +
                                       " are closer than twice the merge radius");
    return out;
}

double local_primitive(const Scenario& s, const VectorXd& p, const VectorXd& x) {
    static const auto rule = gauss_legendre(16);
    const VectorXd d = s.displacement(p, x);
    double total = 0.0;
    for (Eigen::Index k = 0; k < rule.first.size(); ++k) total += rule.second(k) * s.one_form(p + rule.first(k) * d).dot(d);
    return total;
}

std::vector<VectorXd> sphere_samples(int dimension, int count) {
    std::vector<VectorXd> out;
    if (dimension == 1) {
        out.push_back(VectorXd::Constant(1, 1.0));
        out.push_back(VectorXd::Constant(1, -1.0));
        return out;
    }
    if (dimension == 2) {
        for (int k = 0; k < count; ++k) {
            const double a = 2 * std::numbers::pi * k / count;
            out.push_back((VectorXd(2) << std::cos(a), std::sin(a)).finished());
        }
        return out;
    }
    if (dimension == 3) {
        // Fibonacci lattice.
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / count, r = std::sqrt(1.0 - z * z);
            out.push_back((VectorXd(3) << r * std::cos(golden * k), r * std::sin(golden * k), z).finished());
        }
        return out;
    }
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    for (int k = 0; k < count; ++k) {
        VectorXd v(dimension);
        for (int i = 0; i < dimension; ++i) v(i) = normal(rng);
        out.push_back(v.normalized());
    }
    return out;
}

LyapunovBox lyapunov_box(const Scenario& s, const std::vector<ZeroPoint>& zeros, size_t index, double delta,
                         double epsilon, const BoxOptions& o) {
    if (index >= zeros.size()) throw ValidationError("lyapunov_box: zero index out of range");
    if (!(delta > 0.0) || !(epsilon > 0.0)) throw ValidationError("lyapunov_box: δ and ε must be positive");
    const VectorXd p = zeros[index].position;
    if (s.one_form(p).norm() > 1e-6) throw ValidationError("lyapunov_box: center is not a zero of ω");
    for (size_t j = 0; j < zeros.size(); ++j)
        if (j != index && s.distance(p, zeros[j].position) < 2 * epsilon)
            throw ValidationError("lyapunov_box: another zero lies within 2ε");

    const int n = s.dimension();
    std::vector<std::pair<VectorXd, double>> points;
    for (const auto& dir : sphere_samples(n, o.samples_per_dimension * n))
        for (double radius : {0.5 * epsilon, 0.25 * epsilon, 0.125 * epsilon}) points.emplace_back(dir, radius);
    FlowOptions fo;
    fo.t_max = o.t_limit;
    fo.tol_abs = fo.tol_rel = o.tol;
    fo.max_displacement = epsilon / 16;
    fo.record = false;

    LyapunovBox box;
    box.zero = index;
    box.center = p;
    box.epsilon = epsilon;
    for (int attempt = 0; attempt <= o.max_halvings; ++attempt, delta *= 0.5) {
        bool ok = true;
        int checked = 0;
        for (const auto& [dir, radius] : points) {
            const VectorXd y = p + radius * dir;
            if (!s.in_domain(y)) continue;
            const double fy = local_primitive(s, p, y);
            if (std::abs(fy) > delta) continue;
            ++checked;
            for (int direction : {+1, -1}) {
                bool strayed = false;
                integrate_flow(s, y, direction, fo, [&](double, const VectorXd& x, double) {
                    if (s.distance(p, x) > epsilon) {
                        strayed = true;
                        return true;
                    }
                    const double f = local_primitive(s, p, x);
                    return direction > 0 ? f < -delta : f > delta;
                });
                if (strayed) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) {
            box.delta = delta;
            box.halvings = attempt;
            box.samples = checked;
            return box;
        }
    }
    throw NumericalError("no Lyapunov box at resolution for zero " + std::to_string(index));
}

}  // namespace novflow
