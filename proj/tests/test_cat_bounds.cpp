#include "doctest.h"

#include "novflow/cat_bounds.hpp"
#include "novflow/errors.hpp"

#include <filesystem>
#include <fstream>

using namespace novflow;
using nlohmann::json;
using D = SpaceDescriptor;

namespace {

void check_interval(const CatBound& b, long lo, std::optional<long> hi) {
    CHECK(b.lo == lo);
    CHECK(b.hi == hi);
    if (b.hi) CHECK(b.lo <= *b.hi);
}

HypothesisReport positive_report() {
    HypothesisReport h;
    h.inf_estimate = 0.5;
    h.sup_estimate = 1.0;
    h.complete_heuristic = true;
    return h;
}

}  // namespace

TEST_CASE("base values") {
    check_interval(base_values(D::line(true)), 0, 0);
    check_interval(base_values(D::line(false)), 1, 1);
    check_interval(base_values(D::point()), 1, 1);
    check_interval(base_values(D::circle(0)), 2, 2);
    check_interval(base_values(D::circle(1)), 1, 1);
    check_interval(base_values(D::circle(-3)), 1, 1);
    CHECK_THROWS_AS(base_values(D::wedge_circle(D::point(), 1)), ValidationError);

    // Complex atoms: lower bound from cup products, upper bound never claimed.
    check_interval(base_values(D::complex_ref("torus", complexes::torus_simplicial(0, 0))), 3, std::nullopt);
    check_interval(base_values(D::complex_ref("sphere", complexes::sphere_simplicial())), 2, std::nullopt);
    check_interval(base_values(D::complex_ref("circle", complexes::circle_simplicial(1))), 0, std::nullopt);
    const CatBound cw = base_values(D::complex_ref("torus-cw", complexes::torus_cw(0, 0)));
    check_interval(cw, 0, std::nullopt);
    CHECK_FALSE(cw.warnings.empty());
}

TEST_CASE("rewrite rules") {
    const CatBound wedge = apply_rules(D::wedge_circle(D::complex_ref("torus", complexes::torus_simplicial(0, 0)), 1));
    check_interval(wedge, 3, std::nullopt);
    CHECK(wedge.provenance.size() == 2);
    CHECK(wedge.provenance.back().rule == "wedge_circle");

    // Y = point reproduces the circle base value.
    check_interval(apply_rules(D::wedge_circle(D::point(), 2)), 1, 1);
    // A sphere: cup bound 2.
    check_interval(apply_rules(D::wedge_circle(D::complex_ref("s2", complexes::sphere_simplicial()), 1)), 2,
                   std::nullopt);

    check_interval(apply_rules(D::product_rn(D::circle(1), 2, true)), 1, 1);
    check_interval(apply_rules(D::add_bounded_exact(D::line(true), true)), 0, 0);
    check_interval(apply_rules(D::vector_bundle(D::circle(0), true)), 2, 2);
    CHECK_THROWS_AS(D::wedge_circle(D::point(), 0), ValidationError);
    CHECK_THROWS_AS(D::product_rn(D::point(), 0, true), ValidationError);
}

TEST_CASE("unmet obligations are never silent") {
    const CatBound b = apply_rules(D::product_rn(D::circle(1), 2, false));
    check_interval(b, 0, std::nullopt);
    REQUIRE(b.warnings.size() == 1);
    CHECK(b.warnings[0].find("f_bounded") != std::string::npos);
    CHECK(b.provenance.back().detail.find("f_bounded") != std::string::npos);

    // The wedge rule needs the class to vanish on Y.
    const CatBound w = apply_rules(D::wedge_circle(D::circle(1), 1));
    check_interval(w, 0, std::nullopt);
    CHECK_FALSE(w.warnings.empty());
}

TEST_CASE("monotone refinement, idempotence and provenance") {
    std::vector<D> bases{D::point(), D::line(true), D::line(false), D::circle(0), D::circle(2),
                         D::complex_ref("torus", complexes::torus_simplicial(0, 0))};
    for (const auto& base : bases) {
        const CatBound b0 = apply_rules(base);
        for (const D& d : {D::product_rn(base, 3, true), D::add_bounded_exact(base, true), D::vector_bundle(base, true)}) {
            const CatBound b = apply_rules(d);
            CHECK(b.lo >= b0.lo);
            if (b0.hi) REQUIRE(b.hi);
            if (b0.hi) CHECK(*b.hi <= *b0.hi);
            // Every number is traced: the last step records the final interval.
            CHECK(b.provenance.back().lo == b.lo);
            CHECK(b.provenance.back().hi == b.hi);
            CHECK(b.provenance.size() == b0.provenance.size() + 1);
            for (const auto& s : b.provenance) CHECK_FALSE(s.statement.empty());
        }
        const CatBound once = apply_rules(D::add_bounded_exact(base, true));
        const CatBound twice = apply_rules(D::add_bounded_exact(D::add_bounded_exact(base, true), true));
        CHECK(once.lo == twice.lo);
        CHECK(once.hi == twice.hi);
    }
}

TEST_CASE("descriptor json") {
    const json j = json::parse(R"({
        "op": "product_rn", "n": 2, "obligations": {"f_bounded": true},
        "of": {"op": "wedge_circle", "xi": 1, "of": {"atom": "complex", "name": "torus-simplicial"}}
    })");
    const D d = descriptor_from_json(j);
    check_interval(apply_rules(d), 3, std::nullopt);
    const D back = descriptor_from_json(to_json(d));
    CHECK(to_json(back) == to_json(d));
    check_interval(apply_rules(back), 3, std::nullopt);

    check_interval(apply_rules(descriptor_from_json(json{{"atom", "line"}, {"form", "zero"}})), 1, 1);
    check_interval(apply_rules(descriptor_from_json(json{{"atom", "circle"}, {"xi", 1}})), 1, 1);
    CHECK_THROWS_AS(descriptor_from_json(json{{"atom", "sphere"}}), ValidationError);
    CHECK_THROWS_AS(descriptor_from_json(json{{"op", "wedge_circle"}}), ValidationError);
    CHECK_THROWS_AS(descriptor_from_json(json{{"atom", "line"}, {"form", "dy"}}), ValidationError);
    CHECK_THROWS_AS(descriptor_from_json(json{{"atom", "complex"}, {"name", "nowhere"}}), ValidationError);

    // Complex files resolve relative to the descriptor.
    const auto dir = std::filesystem::temp_directory_path() / "novflow_descriptor_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "t2.json") << complex_to_json(complexes::torus_simplicial(0, 0).complex,
                                                          complexes::torus_simplicial(0, 0).cocycle);
        std::ofstream(dir / "desc.json") << R"({"op": "wedge_circle", "of": {"atom": "complex", "name": "t2", "file": "t2.json"}})";
        std::ofstream(dir / "bad.json") << "{\n \"op\": \"wedge_circle\",\n ,\n}";
    }
    check_interval(apply_rules(load_descriptor_file((dir / "desc.json").string())), 3, std::nullopt);
    try {
        load_descriptor_file((dir / "bad.json").string());
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("bad.json:3") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("homoclinic prediction") {
    CatBound two;
    two.lo = 2;
    CHECK(homoclinic_prediction(two, 1, positive_report()).kind == VerdictKind::Predicted);
    CHECK(homoclinic_prediction(two, 2, positive_report()).kind == VerdictKind::NotApplicable);

    CatBound one;
    one.lo = 1;
    CHECK(homoclinic_prediction(one, 1, positive_report()).kind == VerdictKind::NotApplicable);

    HypothesisReport escaping = positive_report();
    escaping.escapes = 3;
    const Verdict u = homoclinic_prediction(two, 1, escaping);
    CHECK(u.kind == VerdictKind::HypothesisUnverified);
    CHECK(std::any_of(u.reasons.begin(), u.reasons.end(),
                      [](const std::string& r) { return r.find("escape") != std::string::npos; }));

    HypothesisReport flat = positive_report();
    flat.inf_estimate = 0.0;
    CHECK(homoclinic_prediction(two, 0, flat).kind == VerdictKind::HypothesisUnverified);

    // Arctan summary: no zeros, lo = 0.
    const CatBound line = apply_rules(D::line(true));
    const Verdict a = homoclinic_prediction(line, 0, escaping);
    CHECK(a.kind == VerdictKind::NotApplicable);
    CHECK(std::any_of(a.reasons.begin(), a.reasons.end(),
                      [](const std::string& r) { return r.find("escape") != std::string::npos; }));
    CHECK(to_json(a)["verdict"] == "not-applicable");
}
