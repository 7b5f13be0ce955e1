#include "novflow/reports.hpp"

#include "novflow/cup_product.hpp"
#include "novflow/errors.hpp"
#include "novflow/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

namespace novflow {

using Eigen::VectorXd;
using nlohmann::json;

namespace {

json vec(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json decomposition_json(const ModuleDecomposition& m) {
    json torsion = json::array();
    for (const auto& p : m.torsion_factors) torsion.push_back(p.str());
    return json{{"free_rank", m.free_rank}, {"torsion", torsion}};
}

json supp_json(const SuppSet& s) {
    json rational = json::array(), residual = json::array(), numeric = json::array();
    for (const auto& r : s.rational_roots) rational.push_back(to_string(r));
    for (const auto& p : s.residual_factors) residual.push_back(p.str());
    for (const auto& z : s.numeric_roots) numeric.push_back({z.real(), z.imag()});
    return json{{"rational", rational}, {"residual_factors", residual}, {"numeric_roots", numeric}};
}

json zero_json(const ZeroPoint& z) {
    json j{{"position", vec(z.position)},
           {"eigenvalues", vec(z.eigenvalues)},
           {"residual", z.residual},
           {"classification", z.hyperbolic ? "hyperbolic" : "degenerate"},
           {"unstable", z.unstable_count}};
    return j;
}

json hypothesis_json(const HypothesisReport& h) {
    json scales = json::array();
    for (const auto& s : h.scales)
        scales.push_back({{"scale", s.scale},
                          {"samples", s.samples},
                          {"inf_grad", s.inf_grad},
                          {"sup_grad", s.sup_grad},
                          {"min_metric_eigenvalue", s.min_metric_eigenvalue}});
    return json{{"inf_estimate", h.inf_estimate},
                {"sup_estimate", h.sup_estimate},
                {"inf_decays", h.inf_decays},
                {"sup_bounded", h.sup_bounded},
                {"probes", h.probes},
                {"escapes", h.escapes},
                {"domain_exits", h.domain_exits},
                {"complete_heuristic", h.complete_heuristic},
                {"positive", h.positive()},
                {"scales", scales},
                {"notes", h.notes},
                {"estimates_only", true}};
}

ZeroSearchOptions zero_options(const RunConfig& c) {
    ZeroSearchOptions o;
    o.zero_tol = c.zero_tol;
    o.merge_radius = c.merge_radius;
    return o;
}

DetectorOptions detector_options(const RunConfig& c) {
    DetectorOptions o;
    o.seed_radius = c.seed_radius;
    if (!std::isnan(c.t_max)) o.t_max = c.t_max;
    o.n_floor = c.n_floor;
    o.tol_abs = c.tol_abs;
    o.tol_rel = c.tol_rel;
    o.threads = c.threads;
    o.max_orbit_samples = 32;
    return o;
}

HypothesisOptions hypothesis_options(const RunConfig& c) {
    HypothesisOptions o;
    o.seed = c.seed;
    return o;
}

struct CyclePipeline {
    ZeroSearch zeros;
    std::vector<LyapunovBox> boxes;
    ConnectionReport connections;
    std::vector<CycleReport> cycles;
    HypothesisReport hypotheses;
};

CyclePipeline run_cycles(const Scenario& s, const RunConfig& c) {
    CyclePipeline p;
    p.zeros = find_zeros(s, zero_options(c));
    BoxOptions bo;
    bo.tol = std::min(c.tol_abs, c.tol_rel);
    p.boxes = boxes_for(s, p.zeros.zeros, c.box_delta, bo);
    p.connections = detect_heteroclinics(s, p.zeros.zeros, p.boxes, detector_options(c));
    p.cycles = find_homoclinic_cycles(p.connections.edges);
    p.hypotheses = check_hypotheses(s, p.zeros.zeros, hypothesis_options(c));
    return p;
}

json cycles_json(const std::vector<CycleReport>& cycles) {
    json out = json::array();
    for (const auto& cy : cycles) {
        json edges = json::array();
        for (const auto& e : cy.edges) edges.push_back({e.source, e.target});
        out.push_back({{"kind", cy.homoclinic_orbit() ? "homoclinic-orbit" : "cycle"},
                       {"zeros", cy.zeros()},
                       {"edges", edges}});
    }
    return out;
}

}  // namespace

void validate(const RunConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ValidationError(std::string(name) + " must be positive");
    };
    positive(c.tol_abs, "--tol-abs");
    positive(c.tol_rel, "--tol-rel");
    positive(c.zero_tol, "--zero-tol");
    positive(c.merge_radius, "--merge-radius");
    positive(c.seed_radius, "--seed-radius");
    positive(c.box_delta, "--box-delta");
    if (!std::isnan(c.t_max)) positive(c.t_max, "--t-max");
    if (!std::isnan(c.n_floor)) positive(c.n_floor, "--n-floor");
    if (c.threads < 1) throw ValidationError("--threads must be at least 1");
}

json tolerance_json(const RunConfig& c) {
    json j{{"tol_abs", c.tol_abs},           {"tol_rel", c.tol_rel},         {"zero_tol", c.zero_tol},
           {"merge_radius", c.merge_radius}, {"seed_radius", c.seed_radius}, {"box_delta", c.box_delta},
           {"seed", c.seed}};
    j["t_max"] = std::isnan(c.t_max) ? json("default") : json(c.t_max);
    j["n_floor"] = std::isnan(c.n_floor) ? json("default") : json(c.n_floor);
    return j;
}

Scenario resolve_scenario(const std::string& name_or_path) {
    const auto names = scenarios::names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return scenarios::by_name(name_or_path);
    if (!std::filesystem::exists(name_or_path))
        throw ValidationError("no scenario file or built-in scenario named \"" + name_or_path + "\"");
    return Scenario(load_scenario_file(name_or_path));
}

json homology_report(const ComplexFile& f, std::optional<int> degree) {
    const TwistedChainComplex cover = cover_complex(f.complex, f.cocycle);
    json degrees = json::array();
    for (int d = 0; d <= cover.dimension(); ++d) {
        if (degree && *degree != d) continue;
        const ModuleDecomposition m = twisted_homology(cover, d);
        json entry = decomposition_json(m);
        entry["degree"] = d;
        entry["supp"] = supp_json(supp_of(m));
        degrees.push_back(entry);
    }
    if (degree && (*degree < 0 || *degree > cover.dimension()))
        throw ValidationError("degree " + std::to_string(*degree) + " is outside 0.." + std::to_string(cover.dimension()));
    return json{{"name", f.name},
                {"cocycle", f.cocycle.values},
                {"variable", "t"},
                {"homology", degrees},
                {"supp", supp_json(supp(f.complex, f.cocycle))}};
}

json supp_report(const ComplexFile& f) {
    const SuppSet s = supp(f.complex, f.cocycle);
    json j{{"name", f.name}, {"cocycle", f.cocycle.values}, {"supp", supp_json(s)}};
    j["size_bound"] = s.size_bound();
    return j;
}

json cupbound_report(const ComplexFile& f) {
    const CupBound b = cat_cup_lower_bound(f.complex, f.cocycle);
    return json{{"name", f.name},
                {"cocycle", f.cocycle.values},
                {"bound", b.bound},
                {"factors", b.factors},
                {"classical", b.classical},
                {"a", to_string(b.a)},
                {"b", to_string(b.b)},
                {"degrees", b.degrees}};
}

json flow_report(const Scenario& s, const VectorXd& x0, int direction, const RunConfig& c, Trajectory* trajectory) {
    FlowOptions o;
    o.t_max = std::isnan(c.t_max) ? 1e4 : c.t_max;
    o.tol_abs = c.tol_abs;
    o.tol_rel = c.tol_rel;
    if (!std::isnan(c.n_floor)) o.integral_floor = -c.n_floor;
    const Trajectory tr = integrate_flow(s, x0, direction, o);
    json j{{"scenario", s.name()},
           {"x0", vec(x0)},
           {"direction", direction >= 0 ? "forward" : "backward"},
           {"termination", to_string(tr.termination)},
           {"final_time", tr.final_time},
           {"final_position", vec(tr.final_position)},
           {"final_position_wrapped", vec(s.wrap(tr.final_position))},
           {"final_integral", tr.final_integral},
           {"integral_limit", tr.integral_limit},
           {"escaped", tr.escaped},
           {"steps", tr.steps},
           {"rejected", tr.rejected},
           {"tolerances", tolerance_json(c)}};
    j["contraction_ratio"] = std::isnan(tr.contraction_ratio) ? json(nullptr) : json(tr.contraction_ratio);
    if (tr.escaped) j["note"] = "escape to infinity with bounded integral";
    if (tr.termination == Termination::ConvergedToZero) {
        const auto zeros = find_zeros(s, zero_options(c)).zeros;
        size_t best = 0;
        for (size_t i = 1; i < zeros.size(); ++i)
            if (s.distance(zeros[i].position, tr.final_position) < s.distance(zeros[best].position, tr.final_position))
                best = i;
        if (!zeros.empty()) j["converged_to"] = {{"zero", best}, {"position", vec(zeros[best].position)}};
    }
    if (trajectory) *trajectory = tr;
    return j;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream out;
    out.precision(17);
    out << "t";
    const Eigen::Index n = tr.x.empty() ? 0 : tr.x.front().size();
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
    out << ",integral\n";
    for (size_t k = 0; k < tr.t.size(); ++k) {
        out << tr.t[k];
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << tr.x[k](i);
        out << ',' << tr.integral[k] << '\n';
    }
    return out.str();
}

json zeros_report(const Scenario& s, const RunConfig& c) {
    const ZeroSearch z = find_zeros(s, zero_options(c));
    json zeros = json::array();
    for (const auto& p : z.zeros) zeros.push_back(zero_json(p));
    return json{{"scenario", s.name()}, {"zeros", zeros}, {"warnings", z.warnings}, {"tolerances", tolerance_json(c)}};
}

json cycles_report(const Scenario& s, const RunConfig& c) {
    const CyclePipeline p = run_cycles(s, c);
    json zeros = json::array();
    for (size_t i = 0; i < p.zeros.zeros.size(); ++i) {
        json z = zero_json(p.zeros.zeros[i]);
        z["box"] = {{"delta", p.boxes[i].delta},
                    {"epsilon", p.boxes[i].epsilon},
                    {"halvings", p.boxes[i].halvings},
                    {"samples", p.boxes[i].samples}};
        zeros.push_back(z);
    }
    json seeds = json::array();
    for (const auto& o : p.connections.seeds) {
        json j{{"seed", o.seed},
               {"start", vec(o.start)},
               {"outcome", o.outcome},
               {"termination", to_string(o.termination)},
               {"final_time", o.final_time},
               {"integral", o.integral}};
        j["source"] = o.source == probe_source ? json("probe") : json(o.source);
        j["target"] = o.target ? json(*o.target) : json(nullptr);
        seeds.push_back(j);
    }
    json edges = json::array();
    for (const auto& e : p.connections.edges) {
        json orbit = json::array();
        for (const auto& x : e.orbit) orbit.push_back(vec(x));
        edges.push_back({{"source", e.source},
                         {"target", e.target},
                         {"seed", e.seed},
                         {"start", vec(e.start)},
                         {"integral_drop", e.integral_drop},
                         {"orbit", orbit}});
    }
    json notes = json::array();
    notes.push_back("boxes and connections are sampled numerical certificates, not proofs");
    if (s.model() == Model::Product) {
        // Along ω' the t-component f + t² is nonnegative, so t can only decrease.
        std::mt19937_64 rng(c.seed);
        double worst = -std::numeric_limits<double>::infinity();
        FlowOptions o;
        o.t_max = 1e3;
        o.tol_abs = c.tol_abs;
        o.tol_rel = c.tol_rel;
        int orbits = 0;
        while (orbits < 20) {
            const VectorXd x0 = s.sample(rng);
            if (!s.in_domain(x0)) continue;
            const Trajectory tr = integrate_flow(s, x0, +1, o);
            for (size_t i = 1; i < tr.x.size(); ++i) worst = std::max(worst, tr.x[i](s.dimension() - 1) - tr.x[i - 1](s.dimension() - 1));
            ++orbits;
        }
        std::ostringstream note;
        note << "t-coordinate monotone: largest step increase " << worst << " over " << orbits << " orbits";
        notes.push_back(note.str());
    }
    return json{{"scenario", s.name()},
                {"model", to_string(s.model())},
                {"zeros", zeros},
                {"zero_warnings", p.zeros.warnings},
                {"n_floor", p.connections.n_floor},
                {"seeds", seeds},
                {"edges", edges},
                {"cycles", cycles_json(p.cycles)},
                {"hypotheses", hypothesis_json(p.hypotheses)},
                {"notes", notes},
                {"tolerances", tolerance_json(c)}};
}

json verdict_report(const Scenario& s, const SpaceDescriptor& d, const RunConfig& c) {
    const CatBound bound = apply_rules(d);
    const CyclePipeline p = run_cycles(s, c);
    const Verdict v = homoclinic_prediction(bound, static_cast<int>(p.zeros.zeros.size()), p.hypotheses);
    json j = to_json(v);
    j["scenario"] = s.name();
    j["descriptor"] = to_json(d);
    j["bound"] = to_json(bound);
    j["hypotheses"] = hypothesis_json(p.hypotheses);
    j["detector"] = {{"edges", p.connections.edges.size()},
                     {"cycles", cycles_json(p.cycles)},
                     {"homoclinic_orbits", std::count_if(p.cycles.begin(), p.cycles.end(),
                                                         [](const CycleReport& cy) { return cy.homoclinic_orbit(); })}};
    if (v.kind == VerdictKind::Predicted && p.cycles.empty())
        j["detector"]["note"] = "prediction unmet at current resolution";
    j["tolerances"] = tolerance_json(c);
    return j;
}

}  // namespace novflow
