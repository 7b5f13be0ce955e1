#include "novflow/cat_bounds.hpp"

#include "novflow/cup_product.hpp"
#include "novflow/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace novflow {

using Kind = SpaceDescriptor::Kind;
using nlohmann::json;

namespace {

SpaceDescriptor wrap(Kind kind, SpaceDescriptor child) {
    SpaceDescriptor d;
    d.kind = kind;
    d.child = std::make_shared<const SpaceDescriptor>(std::move(child));
    return d;
}

const std::vector<std::pair<Kind, std::vector<std::string>>>& required_obligations() {
    static const std::vector<std::pair<Kind, std::vector<std::string>>> table{
        {Kind::ProductRn, {"f_bounded"}},
        {Kind::AddBoundedExact, {"f_bounded"}},
        {Kind::VectorBundle, {"line_integral_bounded"}},
    };
    return table;
}

std::vector<std::string> obligations_for(Kind k) {
    for (const auto& [kind, names] : required_obligations())
        if (kind == k) return names;
    return {};
}

// Whether the class restricted to the space is zero, when that is decidable from the descriptor.
bool class_vanishes(const SpaceDescriptor& d) {
    switch (d.kind) {
        case Kind::Point: return true;
        case Kind::Line: return d.xi == 0;
        case Kind::Circle: return d.xi == 0;
        case Kind::Complex: return d.complex->cocycle.is_zero();
        case Kind::WedgeCircle: return false;
        case Kind::ProductRn:
        case Kind::AddBoundedExact:
        case Kind::VectorBundle: return class_vanishes(*d.child);
    }
    return false;
}

ComplexFile builtin_complex(const std::string& name) {
    if (name == "circle") return complexes::circle(1, 0);
    if (name == "torus") return complexes::torus_cw(0, 0);
    if (name == "torus-simplicial") return complexes::torus_simplicial(0, 0);
    if (name == "sphere-simplicial") return complexes::sphere_simplicial();
    if (name == "circle-simplicial") return complexes::circle_simplicial(0);
    throw ValidationError("descriptor: unknown built-in complex \"" + name + "\"");
}

}  // namespace

SpaceDescriptor SpaceDescriptor::point() { return {}; }

SpaceDescriptor SpaceDescriptor::line(bool dx) {
    SpaceDescriptor d;
    d.kind = Kind::Line;
    d.xi = dx ? 1 : 0;
    return d;
}

SpaceDescriptor SpaceDescriptor::circle(long xi) {
    SpaceDescriptor d;
    d.kind = Kind::Circle;
    d.xi = xi;
    return d;
}

SpaceDescriptor SpaceDescriptor::complex_ref(std::string name, ComplexFile file) {
    SpaceDescriptor d;
    d.kind = Kind::Complex;
    d.name = std::move(name);
    d.complex = std::make_shared<const ComplexFile>(std::move(file));
    return d;
}

SpaceDescriptor SpaceDescriptor::wedge_circle(SpaceDescriptor y, long xi) {
    if (xi == 0) throw ValidationError("wedge_circle: ξ on the circle must be nonzero");
    SpaceDescriptor d = wrap(Kind::WedgeCircle, std::move(y));
    d.xi = xi;
    return d;
}

SpaceDescriptor SpaceDescriptor::product_rn(SpaceDescriptor m, int n, bool f_bounded) {
    if (n < 1) throw ValidationError("product_rn: n must be positive");
    SpaceDescriptor d = wrap(Kind::ProductRn, std::move(m));
    d.rn = n;
    d.obligations["f_bounded"] = f_bounded;
    return d;
}

SpaceDescriptor SpaceDescriptor::add_bounded_exact(SpaceDescriptor x, bool f_bounded) {
    SpaceDescriptor d = wrap(Kind::AddBoundedExact, std::move(x));
    d.obligations["f_bounded"] = f_bounded;
    return d;
}

SpaceDescriptor SpaceDescriptor::vector_bundle(SpaceDescriptor m, bool line_integral_bounded) {
    SpaceDescriptor d = wrap(Kind::VectorBundle, std::move(m));
    d.obligations["line_integral_bounded"] = line_integral_bounded;
    return d;
}

std::string to_string(Kind k) {
    switch (k) {
        case Kind::Point: return "point";
        case Kind::Line: return "line";
        case Kind::Circle: return "circle";
        case Kind::Complex: return "complex";
        case Kind::WedgeCircle: return "wedge_circle";
        case Kind::ProductRn: return "product_rn";
        case Kind::AddBoundedExact: return "add_bounded_exact";
        case Kind::VectorBundle: return "vector_bundle";
    }
    return "?";
}

SpaceDescriptor descriptor_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ValidationError("descriptor: expected an object");
    if (j.contains("atom")) {
        const std::string atom = j.at("atom").get<std::string>();
        if (atom == "point") return SpaceDescriptor::point();
        if (atom == "line") {
            const std::string form = j.value("form", std::string("dx"));
            if (form != "dx" && form != "zero") throw ValidationError("descriptor: line `form` must be \"dx\" or \"zero\"");
            return SpaceDescriptor::line(form == "dx");
        }
        if (atom == "circle") return SpaceDescriptor::circle(j.value("xi", 0L));
        if (atom == "complex") {
            const std::string name = j.value("name", std::string("complex"));
            ComplexFile file;
            if (j.contains("complex"))
                file = complex_file_from_json(j.at("complex"));
            else if (j.contains("file"))
                file = load_complex_file((std::filesystem::path(base_dir) / j.at("file").get<std::string>()).string());
            else
                file = builtin_complex(name);
            if (j.contains("cocycle")) {
                file.cocycle.values = j.at("cocycle").get<std::vector<long>>();
                if (static_cast<Eigen::Index>(file.cocycle.values.size()) != file.complex.cell_count(1))
                    throw ValidationError("descriptor: `cocycle` must hold one integer per 1-cell");
            }
            return SpaceDescriptor::complex_ref(name, std::move(file));
        }
        throw ValidationError("descriptor: unknown atom \"" + atom + "\"");
    }
    if (!j.contains("op")) throw ValidationError("descriptor: expected `atom` or `op`");
    const std::string op = j.at("op").get<std::string>();
    if (!j.contains("of")) throw ValidationError("descriptor: `" + op + "` needs an `of` operand");
    SpaceDescriptor child = descriptor_from_json(j.at("of"), base_dir);
    const json obligations = j.value("obligations", json::object());
    auto attested = [&](const char* key) { return obligations.value(key, false); };
    if (op == "wedge_circle") return SpaceDescriptor::wedge_circle(std::move(child), j.value("xi", 1L));
    if (op == "product_rn") return SpaceDescriptor::product_rn(std::move(child), j.value("n", 1), attested("f_bounded"));
    if (op == "add_bounded_exact") return SpaceDescriptor::add_bounded_exact(std::move(child), attested("f_bounded"));
    if (op == "vector_bundle")
        return SpaceDescriptor::vector_bundle(std::move(child), attested("line_integral_bounded"));
    throw ValidationError("descriptor: unknown op \"" + op + "\"");
}

SpaceDescriptor load_descriptor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open descriptor file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    try {
        return descriptor_from_json(json::parse(text), dir.empty() ? "." : dir);
    } catch (const json::parse_error& e) {
        const auto upto = std::min(text.size(), static_cast<size_t>(e.byte));
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ValidationError(path + ":" + std::to_string(line) + ": " + e.what());
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

json to_json(const SpaceDescriptor& d) {
    json j;
    switch (d.kind) {
        case Kind::Point: j["atom"] = "point"; return j;
        case Kind::Line:
            j["atom"] = "line";
            j["form"] = d.xi != 0 ? "dx" : "zero";
            return j;
        case Kind::Circle:
            j["atom"] = "circle";
            j["xi"] = d.xi;
            return j;
        case Kind::Complex:
            j["atom"] = "complex";
            j["name"] = d.name;
            j["complex"] = complex_to_json(d.complex->complex, d.complex->cocycle);
            return j;
        default: break;
    }
    j["op"] = to_string(d.kind);
    if (d.kind == Kind::WedgeCircle) j["xi"] = d.xi;
    if (d.kind == Kind::ProductRn) j["n"] = d.rn;
    if (!d.obligations.empty()) j["obligations"] = d.obligations;
    j["of"] = to_json(*d.child);
    return j;
}

json to_json(const CatBound& b) {
    json steps = json::array();
    for (const auto& s : b.provenance) {
        json step{{"rule", s.rule}, {"statement", s.statement}, {"lo", s.lo}};
        step["hi"] = s.hi ? json(*s.hi) : json("unknown");
        if (!s.detail.empty()) step["detail"] = s.detail;
        steps.push_back(step);
    }
    json j{{"lo", b.lo}, {"provenance", steps}, {"warnings", b.warnings}};
    j["hi"] = b.hi ? json(*b.hi) : json("unknown");
    return j;
}

CatBound base_values(const SpaceDescriptor& atom) {
    CatBound b;
    auto exact = [&](long v, std::string rule, std::string statement) {
        b.lo = v;
        b.hi = v;
        b.provenance.push_back({std::move(rule), std::move(statement), v, v, {}});
    };
    switch (atom.kind) {
        case Kind::Point:
            exact(1, "base:point", "cat(point) = 1 at the shifted convention cat(M, 0) = cat(M) + 1");
            return b;
        case Kind::Line:
            if (atom.xi != 0)
                exact(0, "base:line-dx", "cat(ℝ, dx) = 0");
            else
                exact(1, "base:line-zero", "cat(ℝ, 0) = 1");
            return b;
        case Kind::Circle:
            if (atom.xi == 0)
                exact(2, "base:circle-zero", "cat(S¹, 0) = cat(S¹) + 1 = 2");
            else
                exact(1, "base:circle-nonzero", "S¹ = point ∨ S¹ with ξ ≠ 0 on the circle, so cat = cat(point) = 1");
            return b;
        case Kind::Complex: {
            CupBound cup;
            try {
                cup = cat_cup_lower_bound(atom.complex->complex, atom.complex->cocycle);
            } catch (const ValidationError& e) {
                b.warnings.push_back("complex " + atom.name + ": no cup bound (" + e.what() + ")");
                b.provenance.push_back({"base:complex", "no certified lower bound", 0, std::nullopt, e.what()});
                return b;
            }
            b.lo = cup.bound;
            std::string detail = cup.classical ? "classical cup length " + std::to_string(cup.factors)
                                               : "nonzero product of " + std::to_string(cup.factors) +
                                                     " classes with twists a = " + to_string(cup.a) +
                                                     ", b = " + to_string(cup.b);
            if (cup.bound == 0) detail = "no nonzero product found";
            b.provenance.push_back({"base:complex-cup",
                                    cup.classical ? "cup length n gives cat ≥ n + 1"
                                                  : "nonzero u ∪ v ∪ w₁ ∪ ⋯ ∪ w_r with a, b ∉ Supp gives cat > r",
                                    b.lo, std::nullopt, atom.name + ": " + detail});
            return b;
        }
        default: break;
    }
    throw ValidationError("base_values: " + to_string(atom.kind) + " is a constructor, not an atom");
}

CatBound apply_rules(const SpaceDescriptor& d) {
    if (!d.child) return base_values(d);
    CatBound b = apply_rules(*d.child);

    std::vector<std::string> unmet;
    for (const auto& name : obligations_for(d.kind)) {
        const auto it = d.obligations.find(name);
        if (it == d.obligations.end() || !it->second) unmet.push_back(name);
    }
    if (d.kind == Kind::WedgeCircle && !class_vanishes(*d.child)) unmet.push_back("class_vanishes_on_Y");

    auto step = [&](std::string rule, std::string statement, std::string detail = {}) {
        b.provenance.push_back({std::move(rule), std::move(statement), b.lo, b.hi, std::move(detail)});
    };

    if (!unmet.empty()) {
        std::string list;
        for (const auto& u : unmet) list += (list.empty() ? "" : ", ") + u;
        b.warnings.push_back(to_string(d.kind) + ": unmet obligation " + list + "; bound widened to [0, unknown]");
        b.lo = 0;
        b.hi.reset();
        step(to_string(d.kind), "rule not applicable", "unmet: " + list);
        return b;
    }

    std::string attested;
    for (const auto& [name, ok] : d.obligations)
        if (ok) attested += (attested.empty() ? "attested: " : ", ") + name;

    switch (d.kind) {
        case Kind::WedgeCircle:
            if (b.lo < 1) {
                b.lo = 1;
                if (b.hi && *b.hi < 1) b.hi = 1;
            }
            step("wedge_circle", "cat(Y ∨ S¹, ξ) = cat(Y) with ξ nonzero on the circle and zero on Y",
                 "ξ on circle = " + std::to_string(d.xi) + "; cat(Y) ≥ 1 for nonempty Y");
            break;
        case Kind::ProductRn:
            step("product_rn", "cat(M × ℝⁿ, ω + df) = cat(M, ω) for bounded f",
                 "n = " + std::to_string(d.rn) + "; " + attested);
            break;
        case Kind::AddBoundedExact:
            step("add_bounded_exact", "cat(X, ω + df) = cat(X, ω) for bounded f", attested);
            break;
        case Kind::VectorBundle:
            step("vector_bundle", "cat(E, π*ω) = cat(M, ω) for a vector bundle π: E → M", attested);
            break;
        default: break;
    }
    return b;
}

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Predicted: return "predicted";
        case VerdictKind::NotApplicable: return "not-applicable";
        case VerdictKind::HypothesisUnverified: return "hypothesis-unverified";
    }
    return "?";
}

Verdict homoclinic_prediction(const CatBound& bound, int zero_count, const HypothesisReport& h) {
    Verdict v;
    v.lo = bound.lo;
    v.zero_count = zero_count;
    v.hypothesis_positive = h.positive();
    const std::string counts = std::to_string(zero_count) + " zeros, cat ≥ " + std::to_string(bound.lo);
    if (zero_count >= bound.lo) {
        v.kind = VerdictKind::NotApplicable;
        v.reasons.push_back(counts + ": the zero count does not fall below the category bound");
    } else if (v.hypothesis_positive) {
        v.kind = VerdictKind::Predicted;
        v.reasons.push_back(counts + ": fewer zeros than the bound and the gradient hypotheses look satisfied");
    } else {
        v.kind = VerdictKind::HypothesisUnverified;
        v.reasons.push_back(counts + ": fewer zeros than the bound, but the gradient hypotheses are not verified");
    }
    if (!(h.inf_estimate > h.threshold)) v.reasons.push_back("inf |grad ω| estimate is not positive");
    if (h.inf_decays) v.reasons.push_back("inf |grad ω| decays with the sample window");
    if (h.escapes > 0) v.reasons.push_back("escape to infinity detected (" + std::to_string(h.escapes) + " probes)");
    if (h.domain_exits > 0)
        v.reasons.push_back("orbits leave the domain in finite time (" + std::to_string(h.domain_exits) + " probes)");
    if (!h.complete_heuristic) v.reasons.push_back("metric completeness not verified");
    for (const auto& w : bound.warnings) v.reasons.push_back("bound: " + w);
    return v;
}

json to_json(const Verdict& v) {
    return json{{"verdict", to_string(v.kind)},
                {"lo", v.lo},
                {"zero_count", v.zero_count},
                {"hypothesis_positive", v.hypothesis_positive},
                {"reasons", v.reasons}};
}

}  // namespace novflow
