#include "doctest.h"

#include "novflow/connections.hpp"
#include "novflow/errors.hpp"
#include "novflow/hypotheses.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace novflow;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

VectorXd V(std::initializer_list<double> v) {
    VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) x(i++) = c;
    return x;
}

Scenario line_with_metric(const std::string& exact, const std::string& metric) {
    ScenarioDescription d;
    d.name = "line";
    d.model = d.base_model = Model::Euclidean;
    d.dimension = 1;
    d.exact_part = exact;
    d.metric = {{metric}};
    d.window = {{-2.0, 2.0}};
    return Scenario(d);
}

double double_well_f(double x) { return x * x * x * x / 4 - x * x / 2; }

struct Pipeline {
    std::vector<ZeroPoint> zeros;
    std::vector<LyapunovBox> boxes;
    ConnectionReport report;
    std::vector<CycleReport> cycles;
};

Pipeline run_pipeline(const Scenario& s, DetectorOptions options = {}) {
    Pipeline p;
    p.zeros = find_zeros(s).zeros;
    p.boxes = boxes_for(s, p.zeros);
    p.report = detect_heteroclinics(s, p.zeros, p.boxes, options);
    p.cycles = find_homoclinic_cycles(p.report.edges);
    return p;
}

std::vector<std::pair<size_t, size_t>> edge_pairs(const std::vector<HeteroclinicEdge>& edges) {
    std::vector<std::pair<size_t, size_t>> out;
    for (const auto& e : edges) out.emplace_back(e.source, e.target);
    return out;
}

HeteroclinicEdge edge(size_t a, size_t b) {
    HeteroclinicEdge e;
    e.source = a;
    e.target = b;
    return e;
}

}  // namespace

TEST_CASE("expressions parse and differentiate") {
    const auto vars = coordinate_names(2, true);
    const Expression e = Expression::parse("x1^2*sin(x2) + atan(t) - 3/x1", vars);
    const VectorXd x = V({1.5, 0.7, -0.4});
    VectorXd grad;
    const double v = e.value_and_gradient(x, grad);
    CHECK(v == doctest::Approx(2.25 * std::sin(0.7) + std::atan(-0.4) - 2.0).epsilon(1e-14));
    CHECK(v == doctest::Approx(e.value(x)).epsilon(1e-15));
    CHECK(grad(0) == doctest::Approx(2 * 1.5 * std::sin(0.7) + 3 / (1.5 * 1.5)).epsilon(1e-13));
    CHECK(grad(1) == doctest::Approx(2.25 * std::cos(0.7)).epsilon(1e-13));
    CHECK(grad(2) == doctest::Approx(1 / (1 + 0.16)).epsilon(1e-13));

    CHECK(Expression::parse("-2^2", vars).value(x) == -4.0);
    CHECK(Expression::parse("(-2)^3", vars).value(x) == -8.0);
    CHECK(Expression::parse("2*pi", vars).value(x) == doctest::Approx(2 * pi));
    CHECK(Expression::parse("  7 ", vars).is_constant());
    CHECK_FALSE(Expression::parse("x1 - x1", vars).is_constant());
    CHECK_THROWS_AS(Expression::parse("x3", vars), ValidationError);
    CHECK_THROWS_AS(Expression::parse("sin x1", vars), ValidationError);
    CHECK_THROWS_AS(Expression::parse("(x1", vars), ValidationError);
    CHECK_THROWS_AS(Expression::parse("x1 +", vars), ValidationError);
}

TEST_CASE("gradient examples") {
    CHECK(gradient(scenarios::line_dx(), V({0.3}))(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gradient(line_with_metric("x1", "2"), V({0.3}))(0) == doctest::Approx(0.5).epsilon(1e-15));
    const Scenario arctan = scenarios::arctan_line();
    for (double x : {-50.0, -3.0, -0.5, 0.0, 0.25, 1.0, 7.0, 1e3})
        CHECK(gradient(arctan, V({x}))(0) == doctest::Approx(1 / (1 + x * x)).epsilon(1e-14));

    // ω(grad ω) = |grad ω|² ≥ 0 for a non-diagonal metric.
    ScenarioDescription d;
    d.model = d.base_model = Model::Euclidean;
    d.dimension = 2;
    d.exact_part = "x1*x2 + sin(x1)";
    d.metric = {{"2 + x2^2", "0.5"}, {"0.5", "1"}};
    d.window = {{-1, 1}, {-1, 1}};
    const Scenario skew(d);
    const VectorXd x = V({0.2, -0.6});
    const VectorXd g = gradient(skew, x);
    CHECK((skew.metric(x) * g - skew.one_form(x)).norm() < 1e-14);
    CHECK(skew.one_form(x).dot(g) == doctest::Approx(gradient_norm(skew, x) * gradient_norm(skew, x)));

    // SPD on the window, indefinite far outside it.
    CHECK_THROWS_AS(gradient(line_with_metric("x1", "3 + x1"), V({-5.0})), NumericalError);
    CHECK_THROWS_AS(line_with_metric("x1", "x1"), ValidationError);
}

TEST_CASE("metric scaling identity") {
    std::mt19937_64 rng(7);
    for (const auto& name : scenarios::names()) {
        const Scenario s = scenarios::by_name(name);
        const std::string phi = s.model() == Model::Product ? "1.5 + 0.4*sin(2*pi*x1) + 0.1*t" : "1.5 + 0.4*sin(2*pi*x1)";
        const Scenario p = perturb_metric(s, phi, 2.0);
        const Expression e = Expression::parse(phi, coordinate_names(s.description().dimension, s.model() == Model::Product));
        for (int k = 0; k < 20; ++k) {
            const VectorXd x = s.sample(rng);
            if (!s.in_domain(x)) continue;
            const VectorXd expect = gradient(s, x) / e.value(x);
            CHECK((gradient(p, x) - expect).norm() <= 1e-12 * std::max(1.0, expect.norm()));
        }
    }
    CHECK_THROWS_AS(perturb_metric(scenarios::circle_dtheta(), "3", 2.0), ValidationError);
    CHECK_THROWS_AS(perturb_metric(scenarios::circle_dtheta(), "1 + 0.9*sin(2*pi*x1)", 2.0), ValidationError);
}

TEST_CASE("scenario invariants: closedness, periods, metric") {
    std::mt19937_64 rng(42);
    for (const auto& name : scenarios::names()) {
        CAPTURE(name);
        const Scenario s = scenarios::by_name(name);
        CHECK(closedness_defect(s, rng) < 1e-6);
        for (int k = 0; k < 32; ++k) {
            const VectorXd x = s.sample(rng);
            CHECK(s.metric(x).llt().info() == Eigen::Success);
        }
        const auto& periods = s.description().period_vector;
        for (int i = 0; i < s.dimension(); ++i)
            if (s.periodic(i))
                for (int k = 0; k < 3; ++k)
                    CHECK(std::abs(period_integral(s, s.sample(rng), i) - periods[static_cast<size_t>(i)]) < 1e-8);
    }
    // A hand-built harmonic torus form with nonzero periods.
    ScenarioDescription d;
    d.model = d.base_model = Model::Torus;
    d.dimension = 2;
    d.period_vector = {0.5, -2.0};
    d.exact_part = "cos(2*pi*x1)*sin(2*pi*x2)/5";
    const Scenario t2(d);
    CHECK(std::abs(period_integral(t2, V({0.3, 0.1}), 0) - 0.5) < 1e-8);
    CHECK(std::abs(period_integral(t2, V({0.3, 0.1}), 1) + 2.0) < 1e-8);
    CHECK(closedness_defect(t2, rng) < 1e-6);
}

TEST_CASE("scenario json round trip") {
    for (const auto& name : scenarios::names()) {
        const Scenario s = scenarios::by_name(name);
        const ScenarioDescription back = scenario_from_json(to_json(s.description()));
        CHECK(to_json(back) == to_json(s.description()));
        const Scenario r(back);
        std::mt19937_64 rng(3);
        const VectorXd x = s.sample(rng);
        CHECK((r.one_form(x) - s.one_form(x)).norm() == 0.0);
    }
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"model", "sphere"}}), ValidationError);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"dimension", 1}}), ValidationError);
    CHECK_THROWS_AS(Scenario(scenario_from_json(nlohmann::json{{"model", "euclidean"}, {"exact_part", "x2"}})),
                    ValidationError);
}

TEST_CASE("integrate_flow examples") {
    SUBCASE("quadratic well converges and loses exactly one half") {
        const Trajectory tr = integrate_flow(scenarios::quadratic_line(), V({1.0}), +1, {});
        CHECK(tr.termination == Termination::ConvergedToZero);
        CHECK(std::abs(tr.final_position(0)) < 1e-7);
        CHECK(tr.final_integral == doctest::Approx(-0.5).epsilon(1e-8));
    }
    SUBCASE("flat circle never converges and loses T") {
        FlowOptions o;
        o.t_max = 10.0;
        const Trajectory tr = integrate_flow(scenarios::circle_dtheta(), V({0.3}), +1, o);
        CHECK(tr.termination == Termination::TimeExhausted);
        CHECK(tr.final_time == 10.0);
        CHECK(std::abs(tr.final_integral + 10.0) < 1e-6);
        CHECK(std::abs(tr.final_position(0) - (0.3 - 10.0)) < 1e-6);
        CHECK(tr.wrapped(scenarios::circle_dtheta(), tr.x.size() - 1)(0) == doctest::Approx(0.3).epsilon(1e-6));
    }
    SUBCASE("arctan orbit escapes with integral bounded by pi/2") {
        const Trajectory tr = integrate_flow(scenarios::arctan_line(), V({0.0}), +1, {});
        CHECK(tr.escaped);
        CHECK(tr.final_position(0) < -20.0);
        CHECK(std::abs(tr.final_integral) < pi / 2);
        CHECK(std::abs(tr.integral_limit) <= pi / 2);
        CHECK(std::abs(tr.integral_limit) >= pi / 2 - 1e-3);
        for (double I : tr.integral) CHECK(I > -pi / 2);
    }
    SUBCASE("backward time climbs") {
        FlowOptions o;
        o.t_max = 2.0;
        const Trajectory tr = integrate_flow(scenarios::quadratic_line(), V({0.1}), -1, o);
        CHECK(tr.final_position(0) == doctest::Approx(0.1 * std::exp(2.0)).epsilon(1e-7));
        CHECK(tr.final_integral > 0.0);
    }
    SUBCASE("product orbits leave the open interval") {
        const Trajectory tr = integrate_flow(scenarios::product_homoclinic(), V({0.3, 0.0}), +1, {});
        CHECK(tr.termination == Termination::LeftDomain);
        CHECK(tr.final_position(1) <= -1.0);
    }
    CHECK_THROWS_AS(integrate_flow(scenarios::product_homoclinic(), V({0.3, 1.5}), +1, {}), ValidationError);
    CHECK_THROWS_AS(integrate_flow(scenarios::bowl(), V({0.3}), +1, {}), ValidationError);
}

TEST_CASE("monotone integral, exactness and reversibility") {
    std::mt19937_64 rng(11);
    for (const auto& name : scenarios::names()) {
        CAPTURE(name);
        const Scenario s = scenarios::by_name(name);
        FlowOptions o;
        o.t_max = 20.0;
        for (int k = 0; k < 10; ++k) {
            const VectorXd x0 = s.sample(rng);
            if (!s.in_domain(x0)) continue;
            const Trajectory tr = integrate_flow(s, x0, +1, o);
            double violation = 0.0;
            for (size_t i = 1; i < tr.integral.size(); ++i)
                violation += std::max(0.0, tr.integral[i] - tr.integral[i - 1]);
            CHECK(violation <= 10 * o.tol_abs * static_cast<double>(std::max(1L, tr.steps)));
            // Integral against the lifted primitive, which the test recomputes from the description.
            if (tr.termination != Termination::LeftDomain)
                CHECK(std::abs(tr.final_integral - (s.lift_primitive(tr.final_position) - s.lift_primitive(x0))) <
                      1e-6 * std::max(1.0, std::abs(tr.final_integral)));
        }
    }

    const Scenario well = scenarios::double_well();
    for (double x0 : {-2.5, -0.3, 0.01, 0.7, 2.0}) {
        const Trajectory tr = integrate_flow(well, V({x0}), +1, {});
        CHECK(std::abs(tr.final_integral - (double_well_f(tr.final_position(0)) - double_well_f(x0))) < 1e-6);
    }

    FlowOptions tight;
    tight.tol_abs = tight.tol_rel = 1e-10;
    tight.t_max = 1.0;
    for (double x0 : {-2.0, -0.5, 0.4, 2.5}) {
        const Trajectory fwd = integrate_flow(well, V({x0}), +1, tight);
        const Trajectory back = integrate_flow(well, fwd.final_position, -1, tight);
        CHECK(std::abs(back.final_position(0) - x0) < 1e-5);
    }
    const Scenario t2 = scenarios::torus_two_zero();
    const Trajectory fwd = integrate_flow(t2, V({0.4, 0.2}), +1, tight);
    const Trajectory back = integrate_flow(t2, fwd.final_position, -1, tight);
    CHECK((back.final_position - V({0.4, 0.2})).norm() < 1e-5);
}

TEST_CASE("find_zeros examples") {
    CHECK(find_zeros(scenarios::circle_dtheta()).zeros.empty());
    CHECK(find_zeros(scenarios::arctan_line()).zeros.empty());

    const auto h = find_zeros(scenarios::circle_homoclinic()).zeros;
    REQUIRE(h.size() == 1);
    CHECK(std::abs(h[0].position(0)) < 1e-3);
    CHECK_FALSE(h[0].hyperbolic);

    const auto t2 = find_zeros(scenarios::torus_two_zero(0.05));
    REQUIRE(t2.zeros.size() == 2);
    CHECK(t2.warnings.empty());
    // Components vanish iff θ₁ = 0 and sin 2πθ₂ = 0.
    CHECK(t2.zeros[0].position(1) == 0.0);
    CHECK(t2.zeros[1].position(1) == doctest::Approx(0.5).epsilon(1e-12));
    for (const auto& z : t2.zeros) {
        CHECK(std::abs(z.position(0)) < 1e-3);
        CHECK_FALSE(z.hyperbolic);
    }
    CHECK(t2.zeros[0].unstable_count == 1);
    CHECK(t2.zeros[1].unstable_count == 0);

    const auto well = find_zeros(scenarios::double_well()).zeros;
    REQUIRE(well.size() == 3);
    const double expect[] = {-1.0, 0.0, 1.0};
    const double curvature[] = {2.0, -1.0, 2.0};  // f'' = 3x² − 1
    for (int i = 0; i < 3; ++i) {
        CHECK(well[static_cast<size_t>(i)].position(0) == doctest::Approx(expect[i]).epsilon(1e-9));
        CHECK(well[static_cast<size_t>(i)].eigenvalues(0) == doctest::Approx(curvature[i]).epsilon(1e-6));
        CHECK(well[static_cast<size_t>(i)].hyperbolic);
    }
    CHECK(well[1].unstable_count == 1);

    const auto saddle = find_zeros(scenarios::saddle()).zeros;
    REQUIRE(saddle.size() == 1);
    CHECK(saddle[0].unstable_count == 1);

    const auto prod = find_zeros(scenarios::product_homoclinic()).zeros;
    REQUIRE(prod.size() == 1);
    CHECK(prod[0].position.norm() < 1e-3);

    // Metric 2: eigenvalues halve.
    const auto scaled = find_zeros(line_with_metric("x1^2/2", "2")).zeros;
    REQUIRE(scaled.size() == 1);
    CHECK(scaled[0].eigenvalues(0) == doctest::Approx(0.5).epsilon(1e-6));

    // Two zeros inside the merge radius: one survives, or a warning is raised.
    ZeroSearchOptions coarse;
    coarse.merge_radius = 0.3;
    const auto close = find_zeros(line_with_metric("x1^3/3 - 0.04*x1", "1"), coarse);
    CHECK((close.zeros.size() == 1 || !close.warnings.empty()));
}

TEST_CASE("local primitive") {
    const Scenario bowl = scenarios::bowl();
    CHECK(local_primitive(bowl, V({0, 0}), V({0.3, -0.4})) == doctest::Approx(0.125).epsilon(1e-14));
    const Scenario h = scenarios::circle_homoclinic();
    // f(x) = x − sin(2πx)/(2π) through the short way around.
    for (double x : {0.1, 0.45, 0.7, 0.95}) {
        const double d = x > 0.5 ? x - 1 : x;
        CHECK(local_primitive(h, V({0.0}), V({x})) == doctest::Approx(d - std::sin(2 * pi * d) / (2 * pi)).epsilon(1e-12));
    }
}

TEST_CASE("lyapunov box examples") {
    const Scenario bowl = scenarios::bowl();
    const auto bz = find_zeros(bowl).zeros;
    const LyapunovBox b = lyapunov_box(bowl, bz, 0, 0.01, 0.3);
    CHECK(b.delta <= 0.01);
    CHECK(b.epsilon == 0.3);
    CHECK(b.samples > 0);

    const Scenario saddle = scenarios::saddle();
    const auto sz = find_zeros(saddle).zeros;
    const LyapunovBox sb = lyapunov_box(saddle, sz, 0, 0.01, 0.3);
    CHECK(sb.delta > 0.0);
    // Explicit linear flow x(t) = x₀e^{−t}, y(t) = y₀e^{t} from the slab |f| ≤ δ on the ε/2 circle:
    // forward it leaves through f = −δ with |y| ≤ sqrt(ε²/4 + 2δ) < ε.
    for (const auto& d : sphere_samples(2, 128)) {
        const double x0 = 0.15 * d(0), y0 = 0.15 * d(1);
        if (std::abs(x0 * x0 - y0 * y0) / 2 > sb.delta) continue;
        double t = 0.0;
        while ((x0 * x0 * std::exp(-2 * t) - y0 * y0 * std::exp(2 * t)) / 2 >= -sb.delta) t += 1e-3;
        CHECK(std::hypot(x0 * std::exp(-t), y0 * std::exp(t)) < 0.3);
    }

    const auto hz = find_zeros(scenarios::circle_homoclinic()).zeros;
    CHECK(lyapunov_box(scenarios::circle_homoclinic(), hz, 0, 0.01, 0.05).delta > 0.0);

    CHECK_THROWS_AS(lyapunov_box(scenarios::line_dx(), {}, 0, 0.01, 0.1), ValidationError);
    ZeroPoint fake = classify_zero(scenarios::line_dx(), V({0.0}));
    CHECK_THROWS_AS(lyapunov_box(scenarios::line_dx(), {fake}, 0, 0.01, 0.1), ValidationError);

    const auto wz = find_zeros(scenarios::double_well()).zeros;
    CHECK_THROWS_AS(lyapunov_box(scenarios::double_well(), wz, 1, 0.01, 0.6), ValidationError);
}

TEST_CASE("heteroclinic detector examples") {
    SUBCASE("double well: saddle to both minima") {
        const Pipeline p = run_pipeline(scenarios::double_well());
        CHECK(edge_pairs(p.report.edges) == std::vector<std::pair<size_t, size_t>>{{1, 0}, {1, 2}});
        for (const auto& e : p.report.edges) {
            // Drop equals f(±1) − f(0) = −1/4 up to the box level.
            CHECK(std::abs(e.integral_drop + 0.25) < 0.01);
            CHECK((e.start - p.zeros[1].position).norm() == doctest::Approx(1e-4));
        }
        CHECK(p.cycles.empty());
    }
    SUBCASE("circle homoclinic: one self-edge") {
        const Pipeline p = run_pipeline(scenarios::circle_homoclinic());
        CHECK(edge_pairs(p.report.edges) == std::vector<std::pair<size_t, size_t>>{{0, 0}});
        // One wrap loses the period.
        CHECK(std::abs(p.report.edges[0].integral_drop + 1.0) < 0.01);
        REQUIRE(p.cycles.size() == 1);
        CHECK(p.cycles[0].homoclinic_orbit());
    }
    SUBCASE("arctan: no edges, escape") {
        const Pipeline p = run_pipeline(scenarios::arctan_line());
        CHECK(p.report.edges.empty());
        REQUIRE(p.report.seeds.size() == 1);
        CHECK(p.report.seeds[0].outcome == "escape");
        CHECK(std::abs(p.report.seeds[0].integral) <= pi / 2);
    }
    SUBCASE("two-zero torus") {
        const Pipeline p = run_pipeline(scenarios::torus_two_zero(0.05));
        CHECK(edge_pairs(p.report.edges) == std::vector<std::pair<size_t, size_t>>{{0, 0}, {0, 1}, {1, 1}});
        CHECK(p.cycles.size() == 2);
        for (const auto& c : p.cycles) CHECK(c.homoclinic_orbit());
    }
    SUBCASE("product: no cycles") {
        const Pipeline p = run_pipeline(scenarios::product_homoclinic());
        CHECK(p.cycles.empty());
        for (const auto& s : p.report.seeds) CHECK(s.outcome != "edge");
    }
    SUBCASE("saddle orbits drop below the floor") {
        const Pipeline p = run_pipeline(scenarios::saddle());
        CHECK(p.report.edges.empty());
        for (const auto& s : p.report.seeds) CHECK(s.outcome == "integral-floor");
        CHECK(p.report.n_floor == 10.0);
    }
}

TEST_CASE("detector soundness and determinism") {
    for (const char* name : {"double-well", "circle-homoclinic", "torus-two-zero"}) {
        CAPTURE(name);
        const Scenario s = scenarios::by_name(name);
        const Pipeline p = run_pipeline(s);
        DetectorOptions tight;
        tight.tol_abs = tight.tol_rel = 1e-10;
        for (const auto& e : p.report.edges) {
            const SeedOutcome o = trace_seed(s, p.zeros, p.boxes, e.source, e.start, tight);
            CHECK(o.outcome == "edge");
            CHECK(o.target == std::optional<size_t>(e.target));
        }
        DetectorOptions many;
        many.threads = 4;
        const ConnectionReport r4 = detect_heteroclinics(s, p.zeros, p.boxes, many);
        REQUIRE(r4.seeds.size() == p.report.seeds.size());
        for (size_t i = 0; i < r4.seeds.size(); ++i) {
            CHECK(r4.seeds[i].outcome == p.report.seeds[i].outcome);
            CHECK(r4.seeds[i].integral == p.report.seeds[i].integral);
        }
        CHECK(edge_pairs(r4.edges) == edge_pairs(p.report.edges));
    }
}

TEST_CASE("two-zero torus agrees with refined seeding") {
    const Scenario s = scenarios::torus_two_zero(0.05);
    const Pipeline p = run_pipeline(s);
    DetectorOptions refined;
    refined.refinement = 10;
    refined.tol_abs = refined.tol_rel = 1e-10;
    const Pipeline q = run_pipeline(s, refined);
    CHECK(q.report.seeds.size() == 10 * p.report.seeds.size());
    CHECK(edge_pairs(q.report.edges) == edge_pairs(p.report.edges));
}

TEST_CASE("cycle enumeration examples") {
    CHECK(find_homoclinic_cycles({edge(0, 1)}).empty());
    const auto self = find_homoclinic_cycles({edge(0, 0)});
    REQUIRE(self.size() == 1);
    CHECK(self[0].homoclinic_orbit());

    const auto two = find_homoclinic_cycles({edge(0, 1), edge(1, 0), edge(0, 0)});
    REQUIRE(two.size() == 2);
    CHECK(two[0].zeros() == std::vector<size_t>{0});
    CHECK(two[1].zeros() == std::vector<size_t>{0, 1});
    for (const auto& c : two) {
        for (size_t i = 0; i < c.edges.size(); ++i) CHECK(c.edges[i].target == c.edges[(i + 1) % c.edges.size()].source);
    }

    // Complete digraph on three nodes without loops: 3 two-cycles and 2 three-cycles.
    std::vector<HeteroclinicEdge> k3;
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = 0; b < 3; ++b)
            if (a != b) k3.push_back(edge(a, b));
    const auto c3 = find_homoclinic_cycles(k3);
    CHECK(c3.size() == 5);
    // Parallel edges give distinct cycles.
    CHECK(find_homoclinic_cycles({edge(2, 5), edge(5, 2), edge(5, 2)}).size() == 2);
}

TEST_CASE("hypothesis checks") {
    const Scenario flat = scenarios::circle_dtheta();
    const HypothesisReport f = check_hypotheses(flat, {});
    CHECK(f.inf_estimate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.sup_estimate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.escapes == 0);
    CHECK(f.positive());

    const Scenario arctan = scenarios::arctan_line();
    const HypothesisReport a = check_hypotheses(arctan, {});
    CHECK(a.inf_decays);
    CHECK(a.scales.back().inf_grad < a.scales.front().inf_grad);
    CHECK(a.escapes > 0);
    CHECK_FALSE(a.positive());

    const Scenario well = scenarios::double_well();
    const auto zeros = find_zeros(well).zeros;
    HypothesisOptions o;
    o.eps_excl = 0.1;
    const HypothesisReport w = check_hypotheses(well, zeros, o);
    // Oracle: minimize |x³ − x| over [−3, 3] outside the balls by dense scanning.
    double oracle = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 600000; ++k) {
        const double x = -3.0 + 6.0 * k / 600000;
        if (std::abs(x) < 0.1 || std::abs(x - 1) < 0.1 || std::abs(x + 1) < 0.1) continue;
        oracle = std::min(oracle, std::abs(x * x * x - x));
    }
    CHECK(w.inf_estimate > 0.0);
    CHECK(w.scales.front().inf_grad >= oracle - 1e-9);
    CHECK(w.scales.front().inf_grad < oracle * 1.2);
    CHECK(w.escapes == 0);
    CHECK(w.positive());

    const Scenario prod = scenarios::product_homoclinic();
    const HypothesisReport pr = check_hypotheses(prod, find_zeros(prod).zeros);
    CHECK_FALSE(pr.complete_heuristic);
    CHECK_FALSE(pr.positive());

    // Same seed, same report.
    const HypothesisReport again = check_hypotheses(well, zeros, o);
    CHECK(again.inf_estimate == w.inf_estimate);
    CHECK(again.sup_estimate == w.sup_estimate);
}

TEST_CASE("product scenario") {
    const Scenario base = scenarios::circle_homoclinic();
    const Scenario prod = product_scenario(base, "1 - cos(2*pi*x1)");
    CHECK(prod.dimension() == 2);
    CHECK_FALSE(prod.in_domain(V({0.2, 1.0})));
    CHECK(prod.in_domain(V({0.2, 0.999})));
    // ω′ = (ω₁ + t f′, f + t²).
    const VectorXd x = V({0.3, 0.4});
    const double f = 1 - std::cos(2 * pi * 0.3), df = 2 * pi * std::sin(2 * pi * 0.3);
    CHECK(prod.one_form(x)(0) == doctest::Approx(f + 0.4 * df).epsilon(1e-13));
    CHECK(prod.one_form(x)(1) == doctest::Approx(f + 0.16).epsilon(1e-13));
    CHECK(prod.metric(x).isApprox(Eigen::Matrix2d::Identity()));

    std::mt19937_64 rng(5);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
        const VectorXd x0 = prod.sample(rng);
        if (!prod.in_domain(x0)) continue;
        FlowOptions o;
        o.t_max = 100.0;
        const Trajectory tr = integrate_flow(prod, x0, +1, o);
        for (size_t i = 1; i < tr.x.size(); ++i) worst = std::max(worst, tr.x[i](1) - tr.x[i - 1](1));
    }
    CHECK(worst < 0.0);

    CHECK_THROWS_AS(product_scenario(base, "sin(2*pi*x1)"), ValidationError);
    CHECK_THROWS_AS(product_scenario(prod, "1"), ValidationError);
}

TEST_CASE("metric perturbation examples") {
    const Scenario s = scenarios::circle_homoclinic();
    const Scenario same = perturb_metric(s, "1", 1.0);
    const Trajectory a = integrate_flow(s, V({0.3}), +1, {});
    const Trajectory b = integrate_flow(same, V({0.3}), +1, {});
    CHECK(a.x.size() == b.x.size());
    CHECK(a.final_position == b.final_position);

    const Scenario flat = scenarios::circle_dtheta();
    const Scenario doubled = perturb_metric(flat, "2", 2.0);
    std::mt19937_64 rng(1);
    for (int k = 0; k < 10; ++k) {
        const VectorXd x = flat.sample(rng);
        CHECK(gradient_norm(doubled, x) == doctest::Approx(gradient_norm(flat, x) / std::sqrt(2.0)).epsilon(1e-14));
    }
    const double c = check_hypotheses(flat, {}).inf_estimate;
    const double c2 = check_hypotheses(doubled, {}).inf_estimate;
    CHECK(c2 >= c / 2);
    CHECK(c2 <= c * 2);

    const Scenario wobbly = perturb_metric(s, "1.5 + 0.4*sin(2*pi*x1)", 2.0);
    const Pipeline p = run_pipeline(wobbly);
    CHECK(edge_pairs(p.report.edges) == std::vector<std::pair<size_t, size_t>>{{0, 0}});
}
