#pragma once

#include "novflow/expression.hpp"

#include "json.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace novflow {

enum class Model { Torus, Euclidean, Product };

std::string to_string(Model m);

/// Plain description of a scenario, as read from or written to JSON.
/// ω = period_vector + d(exact_part); metric = conformal · (base metric ⊕ 1 on t).
struct ScenarioDescription {
    std::string name;
    Model model = Model::Euclidean;
    Model base_model = Model::Euclidean;  // product only: Torus or Euclidean
    int dimension = 1;                    // dimension of M (the t axis of a product is extra)
    std::vector<double> period_vector;    // per torus axis of M
    std::string exact_part = "0";
    std::vector<std::vector<std::string>> metric;  // empty: euclidean
    std::string conformal = "1";
    std::vector<std::pair<double, double>> window;  // per euclidean axis of M
    std::pair<double, double> t_range{-1.0, 1.0};
    bool claims_bounded_gradient = false;
    bool claims_complete = false;
    bool bounded_geometry = false;  // metadata only
};

ScenarioDescription scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioDescription& d);
ScenarioDescription load_scenario_file(const std::string& path);

/// Compiled scenario. Coordinates of a product are (x1..xn, t).
class Scenario {
public:
    explicit Scenario(ScenarioDescription description);

    const ScenarioDescription& description() const { return desc_; }
    const std::string& name() const { return desc_.name; }
    Model model() const { return desc_.model; }
    int dimension() const { return n_; }
    bool periodic(int axis) const { return periodic_[static_cast<size_t>(axis)]; }
    bool has_periodic_axis() const;
    /// Axes that can run off to infinity (euclidean axes of M).
    bool unbounded(int axis) const;

    /// Search window per axis; [0,1] on torus axes, t_range on the product axis.
    const Eigen::MatrixX2d& window() const { return window_; }
    Eigen::VectorXd window_center() const;
    /// Largest half-width over unbounded axes (0 if there are none).
    double window_radius() const;

    Eigen::VectorXd one_form(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd metric(const Eigen::VectorXd& x) const;
    /// Primitive of ω on the universal cover: period_vector·x + exact_part(x).
    double lift_primitive(const Eigen::VectorXd& x) const;

    Eigen::VectorXd wrap(const Eigen::VectorXd& x) const;
    /// Shortest coordinate displacement from a to b (periodic axes wrapped to [-1/2, 1/2)).
    Eigen::VectorXd displacement(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    /// Inside the open t interval of a product; always true otherwise.
    bool in_domain(const Eigen::VectorXd& x) const;

    /// Uniform sample of the window.
    Eigen::VectorXd sample(std::mt19937_64& rng, double scale = 1.0) const;

private:
    ScenarioDescription desc_;
    int n_ = 0;
    std::vector<bool> periodic_;
    Eigen::VectorXd periods_;
    Expression exact_, conformal_;
    std::vector<Expression> metric_;  // row-major n_M × n_M
    Eigen::MatrixX2d window_;
};

/// g(x)⁻¹ ω(x). Throws NumericalError if the metric is not SPD at x.
Eigen::VectorXd gradient(const Scenario& s, const Eigen::VectorXd& x);
/// |grad ω|_g = sqrt(ω · g⁻¹ ω).
double gradient_norm(const Scenario& s, const Eigen::VectorXd& x);

/// Largest |∂ω_i/∂x_j − ∂ω_j/∂x_i| by central differences over random samples.
double closedness_defect(const Scenario& s, std::mt19937_64& rng, int samples = 32);
/// ∫ ω along x0 → x0 + e_axis (one wrap of a periodic axis) by Gauss–Legendre quadrature.
double period_integral(const Scenario& s, const Eigen::VectorXd& x0, int axis);

/// Integral cutoff for cycling orbits: 3·max|period| + 10.
double default_n_floor(const Scenario& s);

/// Nodes and weights of n-point Gauss–Legendre quadrature on [0, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

/// M × (t_lo, t_hi) with ω' = ω + d(t f + t³/3) and metric g ⊕ dt².
/// Throws ValidationError if f < 0 at a sampled point.
Scenario product_scenario(const Scenario& base, const std::string& f, std::pair<double, double> t_range = {-1.0, 1.0},
                          std::uint64_t seed = 42);

/// Conformal change g' = φ g. Throws ValidationError if a sample leaves [1/C, C].
Scenario perturb_metric(const Scenario& s, const std::string& phi, double C, std::uint64_t seed = 42);

namespace scenarios {

Scenario circle_dtheta();      // T¹, ω = dθ
Scenario circle_homoclinic();  // T¹, ω = (1 − cos 2πθ) dθ
Scenario torus_two_zero(double eps = 0.05);
Scenario arctan_line();  // ℝ, ω = dx / (1 + x²)
Scenario double_well();  // ℝ, ω = d(x⁴/4 − x²/2)
Scenario line_dx();      // ℝ, ω = dx
Scenario quadratic_line();  // ℝ, ω = d(x²/2)
Scenario bowl();            // ℝ², ω = d((x² + y²)/2)
Scenario saddle();          // ℝ², ω = d((x² − y²)/2)
Scenario product_homoclinic();  // circle_homoclinic × (−1, 1) with f = 1 − cos 2πθ

std::vector<std::string> names();
Scenario by_name(const std::string& name);

}  // namespace scenarios

}  // namespace novflow
