#pragma once

#include "novflow/flow.hpp"

#include <string>
#include <vector>

namespace novflow {

struct ZeroPoint {
    Eigen::VectorXd position;  // wrapped on periodic axes
    Eigen::MatrixXd jacobian;  // g⁻¹ Dω at the zero
    Eigen::VectorXd eigenvalues;   // ascending, real (g⁻¹ Dω is g-self-adjoint)
    Eigen::MatrixXd eigenvectors;  // columns, coordinate basis
    double residual = 0.0;         // |ω| at position
    bool hyperbolic = false;
    int unstable_count = 0;        // eigenvalues below −hyperbolic_tol
};

struct ZeroSearchOptions {
    int grid_density = 16;  // seeds per axis
    double zero_tol = 1e-10;
    double merge_radius = 1e-3;
    double hyperbolic_tol = 1e-3;
    int max_newton = 200;
};

struct ZeroSearch {
    std::vector<ZeroPoint> zeros;
    std::vector<std::string> warnings;
};

/// Newton on ω = 0 from a grid over the window. Deterministic ordering by position.
ZeroSearch find_zeros(const Scenario& s, const ZeroSearchOptions& options = {});

/// Classification of the linearization at x.
ZeroPoint classify_zero(const Scenario& s, const Eigen::VectorXd& x, double hyperbolic_tol = 1e-3);

/// f(x) = ∫₀¹ ω(p + s·d)·d ds with d the shortest displacement p → x.
double local_primitive(const Scenario& s, const Eigen::VectorXd& p, const Eigen::VectorXd& x);

/// B = {x : |f(x)| ≤ δ, and the orbit segment of x inside the slab |f| ≤ δ comes
/// within ε/2 of p}. Acceptance: sampled orbit segments from the spheres of radius
/// ε/2, ε/4, ε/8 stay within distance ε, so B sits in the ε-ball and is left only through f = −δ.
struct LyapunovBox {
    size_t zero = 0;
    Eigen::VectorXd center;
    double delta = 0.0;
    double epsilon = 0.0;
    int halvings = 0;
    int samples = 0;  // sphere samples inside the slab that were checked
};

struct BoxOptions {
    int samples_per_dimension = 64;
    double t_limit = 1e3;
    double tol = 1e-9;
    int max_halvings = 20;
};

/// Throws ValidationError if zeros[index] is not a zero or another zero lies
/// within 2ε; NumericalError ("no Lyapunov box at resolution") if no δ passes.
LyapunovBox lyapunov_box(const Scenario& s, const std::vector<ZeroPoint>& zeros, size_t index, double delta,
                         double epsilon, const BoxOptions& options = {});

/// Points on the sphere of the given radius around the origin used for box checks.
std::vector<Eigen::VectorXd> sphere_samples(int dimension, int count);

}  // namespace novflow
