#pragma once

#include "novflow/scenario.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace novflow {

enum class Termination { ConvergedToZero, LeftDomain, IntegralFloorReached, TimeExhausted, StepUnderflow, Stopped };

std::string to_string(Termination t);

struct FlowOptions {
    double t_max = 1e4;
    double tol_abs = 1e-9;
    double tol_rel = 1e-9;
    double h_init = 1e-3;
    double h_min = 1e-14;
    /// Largest coordinate displacement allowed in one step (keeps event sampling fine).
    double max_displacement = std::numeric_limits<double>::infinity();
    /// |grad ω|_g below max(converge_tol, 10·tol_abs) counts as convergence to a zero.
    double converge_tol = 1e-11;
    /// Stop once the accumulated integral drops below this.
    double integral_floor = -std::numeric_limits<double>::infinity();
    bool record = true;
    long max_steps = 50'000'000;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x;  // unwrapped lift
    std::vector<double> integral;    // ∫ω along the path so far
    Termination termination = Termination::TimeExhausted;
    long steps = 0;
    long rejected = 0;
    double min_step = std::numeric_limits<double>::infinity();

    Eigen::VectorXd final_position;
    double final_time = 0.0;
    double final_integral = 0.0;

    /// Position left every window multiple up to 10x with a geometrically
    /// contracting integral (increments over time doublings shrink by a ratio below 0.9).
    bool escaped = false;
    double contraction_ratio = std::numeric_limits<double>::quiet_NaN();
    /// Extrapolated limit of the integral (equals final_integral unless the tail contracts).
    double integral_limit = 0.0;

    Eigen::VectorXd wrapped(const Scenario& s, size_t i) const { return s.wrap(x[i]); }
};

/// Called after each accepted step with (t, unwrapped x, integral); return true to stop.
using FlowObserver = std::function<bool(double, const Eigen::VectorXd&, double)>;

/// Dormand–Prince 5(4) integration of ẋ = −direction · grad ω with the integral
/// ∫ω carried as an extra state (d/dt ∫ = −direction · |grad ω|²_g).
Trajectory integrate_flow(const Scenario& s, const Eigen::VectorXd& x0, int direction, const FlowOptions& options,
                          const FlowObserver& observer = {});

}  // namespace novflow
