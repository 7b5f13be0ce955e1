#include "novflow/scenario.hpp"

#include "novflow/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace novflow {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(Model m) {
    switch (m) {
        case Model::Torus: return "torus";
        case Model::Euclidean: return "euclidean";
        case Model::Product: return "product";
    }
    return "?";
}

namespace {

Model model_from_string(const std::string& s) {
    if (s == "torus") return Model::Torus;
    if (s == "euclidean") return Model::Euclidean;
    if (s == "product") return Model::Product;
    throw ValidationError("unknown model \"" + s + "\" (expected torus, euclidean or product)");
}

std::string scaled_metric_entry(const std::string& phi, const std::string& entry) {
    return "(" + phi + ")*(" + entry + ")";
}

}  // namespace

ScenarioDescription scenario_from_json(const nlohmann::json& j) {
    ScenarioDescription d;
    d.name = j.value("name", std::string("scenario"));
    if (!j.contains("model")) throw ValidationError("scenario: missing `model`");
    d.model = model_from_string(j.at("model").get<std::string>());
    d.base_model = d.model == Model::Product ? model_from_string(j.value("base_model", std::string("torus"))) : d.model;
    if (d.base_model == Model::Product) throw ValidationError("scenario: `base_model` cannot be product");
    d.dimension = j.value("dimension", 1);
    if (d.dimension < 1) throw ValidationError("scenario: `dimension` must be positive");
    if (j.contains("period_vector")) d.period_vector = j.at("period_vector").get<std::vector<double>>();
    d.exact_part = j.value("exact_part", std::string("0"));
    if (j.contains("metric") && !j.at("metric").is_string()) {
        d.metric = j.at("metric").get<std::vector<std::vector<std::string>>>();
    } else if (j.contains("metric") && j.at("metric").get<std::string>() != "euclidean") {
        throw ValidationError("scenario: `metric` must be \"euclidean\" or a matrix of expressions");
    }
    d.conformal = j.value("conformal", std::string("1"));
    if (j.contains("window"))
        for (const auto& w : j.at("window")) {
            if (!w.is_array() || w.size() != 2) throw ValidationError("scenario: `window` entries must be [lo, hi]");
            d.window.emplace_back(w[0].get<double>(), w[1].get<double>());
        }
    if (j.contains("t_range")) {
        const auto& t = j.at("t_range");
        if (!t.is_array() || t.size() != 2) throw ValidationError("scenario: `t_range` must be [lo, hi]");
        d.t_range = {t[0].get<double>(), t[1].get<double>()};
    }
    if (j.contains("flags")) {
        const auto& f = j.at("flags");
        d.claims_bounded_gradient = f.value("claims_bounded_gradient", false);
        d.claims_complete = f.value("claims_complete", false);
        d.bounded_geometry = f.value("bounded_geometry", false);
    }
    return d;
}

nlohmann::json to_json(const ScenarioDescription& d) {
    nlohmann::json j;
    j["name"] = d.name;
    j["model"] = to_string(d.model);
    if (d.model == Model::Product) j["base_model"] = to_string(d.base_model);
    j["dimension"] = d.dimension;
    j["period_vector"] = d.period_vector;
    j["exact_part"] = d.exact_part;
    if (d.metric.empty())
        j["metric"] = "euclidean";
    else
        j["metric"] = d.metric;
    j["conformal"] = d.conformal;
    auto window = nlohmann::json::array();
    for (const auto& [lo, hi] : d.window) window.push_back({lo, hi});
    j["window"] = window;
    if (d.model == Model::Product) j["t_range"] = {d.t_range.first, d.t_range.second};
    j["flags"] = {{"claims_bounded_gradient", d.claims_bounded_gradient},
                  {"claims_complete", d.claims_complete},
                  {"bounded_geometry", d.bounded_geometry}};
    return j;
}

ScenarioDescription load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return scenario_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min(text.size(), static_cast<size_t>(e.byte));
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ValidationError(path + ":" + std::to_string(line) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

Scenario::Scenario(ScenarioDescription description) : desc_(std::move(description)) {
    const bool product = desc_.model == Model::Product;
    if (!product) desc_.base_model = desc_.model;
    const int m = desc_.dimension;
    n_ = m + (product ? 1 : 0);
    const bool torus = desc_.base_model == Model::Torus;
    periodic_.assign(static_cast<size_t>(n_), false);
    for (int i = 0; i < m; ++i) periodic_[static_cast<size_t>(i)] = torus;

    periods_ = VectorXd::Zero(n_);
    if (torus) {
        if (static_cast<int>(desc_.period_vector.size()) != m)
            throw ValidationError("scenario: `period_vector` needs one entry per torus axis");
        for (int i = 0; i < m; ++i) periods_(i) = desc_.period_vector[static_cast<size_t>(i)];
    } else if (!desc_.period_vector.empty() &&
               std::any_of(desc_.period_vector.begin(), desc_.period_vector.end(), [](double p) { return p != 0.0; })) {
        throw ValidationError("scenario: euclidean axes carry no periods");
    }

    const auto names = coordinate_names(m, product);
    exact_ = Expression::parse(desc_.exact_part, names);
    conformal_ = Expression::parse(desc_.conformal, names);
    if (!desc_.metric.empty()) {
        if (static_cast<int>(desc_.metric.size()) != m)
            throw ValidationError("scenario: `metric` must be a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
        for (const auto& row : desc_.metric) {
            if (static_cast<int>(row.size()) != m) throw ValidationError("scenario: `metric` rows have the wrong length");
            for (const auto& entry : row) metric_.push_back(Expression::parse(entry, names));
        }
    }

    window_.resize(n_, 2);
    for (int i = 0; i < m; ++i) {
        if (torus) {
            window_.row(i) << 0.0, 1.0;
            continue;
        }
        if (static_cast<int>(desc_.window.size()) != m)
            throw ValidationError("scenario: `window` needs one [lo, hi] per euclidean axis");
        const auto [lo, hi] = desc_.window[static_cast<size_t>(i)];
        if (!(lo < hi)) throw ValidationError("scenario: window bounds must satisfy lo < hi");
        window_.row(i) << lo, hi;
    }
    if (product) {
        if (!(desc_.t_range.first < desc_.t_range.second)) throw ValidationError("scenario: `t_range` must satisfy lo < hi");
        window_.row(m) << desc_.t_range.first, desc_.t_range.second;
    }

    // Sampled sanity checks: periodic exact part, symmetric positive-definite metric.
    std::mt19937_64 rng(7);
    for (int k = 0; k < 16; ++k) {
        const VectorXd x = sample(rng);
        const double f = exact_.value(x);
        for (int i = 0; i < n_; ++i) {
            if (!periodic(i)) continue;
            VectorXd y = x;
            y(i) += 1.0;
            if (std::abs(exact_.value(y) - f) > 1e-8 * (1.0 + std::abs(f)))
                throw ValidationError("scenario: `exact_part` is not periodic along x" + std::to_string(i + 1));
        }
        const MatrixXd g = metric(x);
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("scenario: metric is not symmetric");
        if (Eigen::LLT<MatrixXd>(g).info() != Eigen::Success)
            throw ValidationError("scenario: metric is not positive definite at a sampled point");
    }
}

bool Scenario::has_periodic_axis() const { return std::find(periodic_.begin(), periodic_.end(), true) != periodic_.end(); }

bool Scenario::unbounded(int axis) const {
    return !periodic(axis) && !(desc_.model == Model::Product && axis == n_ - 1);
}

VectorXd Scenario::window_center() const { return 0.5 * (window_.col(0) + window_.col(1)); }

double Scenario::window_radius() const {
    double r = 0.0;
    for (int i = 0; i < n_; ++i)
        if (unbounded(i)) r = std::max(r, 0.5 * (window_(i, 1) - window_(i, 0)));
    return r;
}

VectorXd Scenario::one_form(const VectorXd& x) const {
    VectorXd g;
    exact_.value_and_gradient(x, g);
    return periods_ + g;
}

MatrixXd Scenario::metric(const VectorXd& x) const {
    MatrixXd g = MatrixXd::Identity(n_, n_);
    const int m = desc_.dimension;
    if (!metric_.empty())
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) g(i, j) = metric_[static_cast<size_t>(i * m + j)].value(x);
    if (desc_.conformal != "1") g *= conformal_.value(x);
    return g;
}

double Scenario::lift_primitive(const VectorXd& x) const { return periods_.dot(x) + exact_.value(x); }

VectorXd Scenario::wrap(const VectorXd& x) const {
    VectorXd y = x;
    for (int i = 0; i < n_; ++i)
        if (periodic(i)) {
            y(i) -= std::floor(y(i));
            if (y(i) >= 1.0) y(i) = 0.0;  // tiny negatives round up to 1
        }
    return y;
}

VectorXd Scenario::displacement(const VectorXd& a, const VectorXd& b) const {
    VectorXd d = b - a;
    for (int i = 0; i < n_; ++i)
        if (periodic(i)) d(i) -= std::floor(d(i) + 0.5);
    return d;
}

double Scenario::distance(const VectorXd& a, const VectorXd& b) const { return displacement(a, b).norm(); }

bool Scenario::in_domain(const VectorXd& x) const {
    if (desc_.model != Model::Product) return true;
    const double t = x(n_ - 1);
    return t > window_(n_ - 1, 0) && t < window_(n_ - 1, 1);
}

VectorXd Scenario::sample(std::mt19937_64& rng, double scale) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    VectorXd x(n_);
    for (int i = 0; i < n_; ++i) {
        const double lo = window_(i, 0), hi = window_(i, 1);
        if (unbounded(i)) {
            const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo) * scale;
            x(i) = c - h + 2.0 * h * u(rng);
        } else {
            x(i) = lo + (hi - lo) * u(rng);
        }
    }
    return x;
}

double default_n_floor(const Scenario& s) {
    double largest = 0.0;
    for (double p : s.description().period_vector) largest = std::max(largest, std::abs(p));
    return 3.0 * largest + 10.0;
}

VectorXd gradient(const Scenario& s, const VectorXd& x) {
    const VectorXd w = s.one_form(x);
    const Eigen::LLT<MatrixXd> llt(s.metric(x));
    if (llt.info() != Eigen::Success) throw NumericalError("metric is not positive definite at a flow point");
    return llt.solve(w);
}

double gradient_norm(const Scenario& s, const VectorXd& x) {
    return std::sqrt(std::max(0.0, s.one_form(x).dot(gradient(s, x))));
}

double closedness_defect(const Scenario& s, std::mt19937_64& rng, int samples) {
    const int n = s.dimension();
    const double h = 1e-5;
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const VectorXd x = s.sample(rng);
        MatrixXd J(n, n);
        for (int j = 0; j < n; ++j) {
            VectorXd xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            J.col(j) = (s.one_form(xp) - s.one_form(xm)) / (2 * h);
        }
        worst = std::max(worst, (J - J.transpose()).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::pair<VectorXd, VectorXd> gauss_legendre(int n) {
    // Golub–Welsch: nodes are eigenvalues of the Jacobi matrix.
    MatrixXd jacobi = MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = jacobi(k - 1, k) = beta;
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(jacobi);
    const VectorXd nodes = 0.5 * (es.eigenvalues().array() + 1.0);
    const VectorXd weights = es.eigenvectors().row(0).transpose().array().square();
    return {nodes, weights};
}

double period_integral(const Scenario& s, const VectorXd& x0, int axis) {
    static const auto rule = gauss_legendre(16);
    const int panels = 64;
    double total = 0.0;
    for (int p = 0; p < panels; ++p)
        for (Eigen::Index k = 0; k < rule.first.size(); ++k) {
            VectorXd x = x0;
            x(axis) += (p + rule.first(k)) / panels;
            total += rule.second(k) / panels * s.one_form(x)(axis);
        }
    return total;
}

Scenario product_scenario(const Scenario& base, const std::string& f, std::pair<double, double> t_range,
                          std::uint64_t seed) {
    const ScenarioDescription& b = base.description();
    if (b.model == Model::Product) throw ValidationError("product_scenario: base is already a product");
    const Expression fx = Expression::parse(f, coordinate_names(b.dimension, false));
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 256; ++k) {
        const VectorXd x = base.sample(rng);
        if (fx.value(x) < -1e-12) throw ValidationError("product_scenario: f is negative at a sampled point");
    }
    ScenarioDescription d = b;
    d.name = b.name + "-product";
    d.model = Model::Product;
    d.base_model = b.model;
    d.exact_part = "(" + b.exact_part + ") + t*(" + f + ") + t^3/3";
    d.t_range = t_range;
    d.claims_complete = false;  // a flat open interval is incomplete
    // Keep any conformal factor on the M block only.
    if (b.conformal != "1") {
        if (d.metric.empty()) {
            d.metric.assign(static_cast<size_t>(b.dimension), std::vector<std::string>(static_cast<size_t>(b.dimension), "0"));
            for (int i = 0; i < b.dimension; ++i) d.metric[static_cast<size_t>(i)][static_cast<size_t>(i)] = b.conformal;
        } else {
            for (auto& row : d.metric)
                for (auto& entry : row) entry = scaled_metric_entry(b.conformal, entry);
        }
        d.conformal = "1";
    }
    return Scenario(d);
}

Scenario perturb_metric(const Scenario& s, const std::string& phi, double C, std::uint64_t seed) {
    if (!(C >= 1.0)) throw ValidationError("perturb_metric: C must be at least 1");
    const ScenarioDescription& d0 = s.description();
    const Expression e = Expression::parse(phi, coordinate_names(d0.dimension, d0.model == Model::Product));
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 1024; ++k) {
        const double v = e.value(s.sample(rng));
        if (!(v >= 1.0 / C - 1e-12 && v <= C + 1e-12))
            throw ValidationError("perturb_metric: conformal factor leaves [1/C, C] at a sampled point");
    }
    ScenarioDescription d = d0;
    d.name = d0.name + "-perturbed";
    d.conformal = d0.conformal == "1" ? phi : "(" + d0.conformal + ")*(" + phi + ")";
    return Scenario(d);
}

namespace scenarios {

namespace {

ScenarioDescription torus(std::string name, std::vector<double> periods, std::string exact) {
    ScenarioDescription d;
    d.name = std::move(name);
    d.model = d.base_model = Model::Torus;
    d.dimension = static_cast<int>(periods.size());
    d.period_vector = std::move(periods);
    d.exact_part = std::move(exact);
    d.claims_bounded_gradient = d.claims_complete = true;
    return d;
}

ScenarioDescription euclidean(std::string name, std::string exact, std::vector<std::pair<double, double>> window) {
    ScenarioDescription d;
    d.name = std::move(name);
    d.model = d.base_model = Model::Euclidean;
    d.dimension = static_cast<int>(window.size());
    d.exact_part = std::move(exact);
    d.window = std::move(window);
    return d;
}

}  // namespace

Scenario circle_dtheta() { return Scenario(torus("circle-dtheta", {1.0}, "0")); }

Scenario circle_homoclinic() { return Scenario(torus("circle-homoclinic", {1.0}, "-sin(2*pi*x1)/(2*pi)")); }

Scenario torus_two_zero(double eps) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "-sin(2*pi*x1)/(2*pi) + %.17g*cos(2*pi*x2)", eps);
    return Scenario(torus("torus-two-zero", {1.0, 0.0}, buf));
}

Scenario arctan_line() {
    auto d = euclidean("arctan", "atan(x1)", {{-2.0, 2.0}});
    d.claims_bounded_gradient = d.claims_complete = true;
    return Scenario(d);
}

Scenario double_well() { return Scenario(euclidean("double-well", "x1^4/4 - x1^2/2", {{-3.0, 3.0}})); }

Scenario line_dx() {
    auto d = euclidean("line-dx", "x1", {{-1.0, 1.0}});
    d.claims_bounded_gradient = d.claims_complete = true;
    return Scenario(d);
}

Scenario quadratic_line() { return Scenario(euclidean("quadratic-line", "x1^2/2", {{-2.0, 2.0}})); }

Scenario bowl() { return Scenario(euclidean("bowl", "(x1^2 + x2^2)/2", {{-1.0, 1.0}, {-1.0, 1.0}})); }

Scenario saddle() { return Scenario(euclidean("saddle", "(x1^2 - x2^2)/2", {{-1.0, 1.0}, {-1.0, 1.0}})); }

Scenario product_homoclinic() { return product_scenario(circle_homoclinic(), "1 - cos(2*pi*x1)"); }

std::vector<std::string> names() {
    return {"circle-dtheta", "circle-homoclinic", "torus-two-zero", "arctan",  "double-well",
            "line-dx",       "quadratic-line",    "bowl",           "saddle", "product-homoclinic"};
}

Scenario by_name(const std::string& name) {
    if (name == "circle-dtheta") return circle_dtheta();
    if (name == "circle-homoclinic") return circle_homoclinic();
    if (name == "torus-two-zero") return torus_two_zero();
    if (name == "arctan") return arctan_line();
    if (name == "double-well") return double_well();
    if (name == "line-dx") return line_dx();
    if (name == "quadratic-line") return quadratic_line();
    if (name == "bowl") return bowl();
    if (name == "saddle") return saddle();
    if (name == "product-homoclinic") return product_homoclinic();
    throw ValidationError("unknown built-in scenario \"" + name + "\"");
}

}  // namespace scenarios

}  // namespace novflow
