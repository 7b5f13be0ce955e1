#include "novflow/flow.hpp"

#include "novflow/errors.hpp"

#include <cmath>

namespace novflow {

using Eigen::VectorXd;

std::string to_string(Termination t) {
    switch (t) {
        case Termination::ConvergedToZero: return "converged-to-zero";
        case Termination::LeftDomain: return "left-domain";
        case Termination::IntegralFloorReached: return "integral-floor-reached";
        case Termination::TimeExhausted: return "time-exhausted";
        case Termination::StepUnderflow: return "step-underflow";
        case Termination::Stopped: return "stopped";
    }
    return "?";
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_flow(const Scenario& s, const VectorXd& x0, int direction, const FlowOptions& options,
                          const FlowObserver& observer) {
    const int n = s.dimension();
    if (x0.size() != n) throw ValidationError("initial point has the wrong dimension");
    if (!s.in_domain(x0)) throw ValidationError("initial point lies outside the domain");
    const double sign = direction >= 0 ? 1.0 : -1.0;

    auto rhs = [&](const VectorXd& y) {
        const VectorXd x = y.head(n);
        const VectorXd w = s.one_form(x);
        const Eigen::LLT<Eigen::MatrixXd> llt(s.metric(x));
        if (llt.info() != Eigen::Success) throw NumericalError("metric is not positive definite at a flow point");
        const VectorXd g = llt.solve(w);
        VectorXd dy(n + 1);
        dy.head(n) = -sign * g;
        dy(n) = -sign * w.dot(g);
        return dy;
    };

    Trajectory tr;
    VectorXd y(n + 1);
    y << x0, 0.0;
    double t = 0.0, h = options.h_init;
    VectorXd k1 = rhs(y);
    if (options.record) {
        tr.t.push_back(t);
        tr.x.push_back(x0);
        tr.integral.push_back(0.0);
    }

    const double radius = s.window_radius();
    const VectorXd center = s.window_center();
    auto excursion = [&](const VectorXd& x) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            if (s.unbounded(i)) worst = std::max(worst, std::abs(x(i) - center(i)));
        return worst;
    };

    std::vector<std::pair<double, double>> checkpoints;  // (time, integral) at t = 1, 2, 4, ...
    double next_check = 1.0;
    bool done = false;
    tr.termination = Termination::TimeExhausted;

    // Below about tol_abs the error control cannot resolve the approach to a zero any further.
    const double converge = std::max(options.converge_tol, 10 * options.tol_abs);
    if (std::sqrt(std::abs(k1(n))) < converge) {
        tr.termination = Termination::ConvergedToZero;
        done = true;
    }

    while (!done && t < options.t_max) {
        if (tr.steps >= options.max_steps) break;
        double step = std::min(h, options.t_max - t);
        const bool to_check = next_check - t <= step;
        if (to_check) step = next_check - t;

        const VectorXd k2 = rhs(y + step * (a21 * k1));
        const VectorXd k3 = rhs(y + step * (a31 * k1 + a32 * k2));
        const VectorXd k4 = rhs(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const VectorXd k5 = rhs(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const VectorXd k6 = rhs(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const VectorXd y5 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const VectorXd k7 = rhs(y5);
        const VectorXd err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double norm = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double sc = options.tol_abs + options.tol_rel * std::max(std::abs(y(i)), std::abs(y5(i)));
            norm += (err(i) / sc) * (err(i) / sc);
        }
        norm = std::sqrt(norm / (n + 1));
        const double moved = (y5.head(n) - y.head(n)).cwiseAbs().maxCoeff();

        if (norm > 1.0 || !std::isfinite(norm) || moved > options.max_displacement) {
            ++tr.rejected;
            double factor = std::isfinite(norm) && norm > 1.0 ? std::max(0.2, 0.9 * std::pow(norm, -0.2)) : 0.2;
            if (moved > options.max_displacement) factor = std::min(factor, 0.5 * options.max_displacement / moved);
            h = step * factor;
            if (h < options.h_min) {
                tr.termination = Termination::StepUnderflow;
                break;
            }
            continue;
        }

        const double grown = step * (norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(norm, -0.2))));
        // A step clipped to a checkpoint or t_max should not shrink the next one.
        h = (to_check || step < h) ? std::max(h, grown) : grown;
        t += step;
        y = y5;
        k1 = k7;
        ++tr.steps;
        tr.min_step = std::min(tr.min_step, step);
        const VectorXd x = y.head(n);
        if (options.record) {
            tr.t.push_back(t);
            tr.x.push_back(x);
            tr.integral.push_back(y(n));
        }
        if (to_check) {
            checkpoints.emplace_back(t, y(n));
            next_check *= 2.0;
        }

        if (!s.in_domain(x) || (radius > 0.0 && excursion(x) > 1e6 * radius)) {
            tr.termination = Termination::LeftDomain;
            break;
        }
        if (y(n) < options.integral_floor) {
            tr.termination = Termination::IntegralFloorReached;
            break;
        }
        if (std::sqrt(std::abs(k1(n))) < converge) {
            tr.termination = Termination::ConvergedToZero;
            break;
        }
        if (observer && observer(t, x, y(n))) {
            tr.termination = Termination::Stopped;
            break;
        }
    }

    tr.final_time = t;
    tr.final_position = y.head(n);
    tr.final_integral = y(n);
    tr.integral_limit = y(n);
    if (checkpoints.size() >= 3) {
        const auto k = checkpoints.size();
        const double d1 = checkpoints[k - 2].second - checkpoints[k - 3].second;
        const double d2 = checkpoints[k - 1].second - checkpoints[k - 2].second;
        if (d1 != 0.0) tr.contraction_ratio = d2 / d1;
        const double r = tr.contraction_ratio;
        if (tr.termination == Termination::TimeExhausted && r > 0.0 && r < 0.9) {
            tr.integral_limit = checkpoints[k - 1].second + d2 * r / (1.0 - r);
            tr.escaped = radius > 0.0 && excursion(tr.final_position) > 10.0 * radius;
        }
    }
    return tr;
}

}  // namespace novflow
