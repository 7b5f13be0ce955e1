#include "doctest.h"
#include "generators.hpp"

#include "novflow/laurent_matrix.hpp"

using namespace novflow;
using novflow::testing::numeric_rank;
using novflow::testing::product;

namespace {

LaurentPoly P(const char* s) { return parse_laurent(s); }

LaurentMatrix mat(std::initializer_list<std::initializer_list<const char*>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
    LaurentMatrix m(r, c);
    Eigen::Index i = 0;
    for (auto row : rows) {
        Eigen::Index j = 0;
        for (auto e : row) m(i, j++) = P(e);
        ++i;
    }
    return m;
}

void check_smith(const LaurentMatrix& m, const SmithForm& s) {
    CHECK(product(product(s.U, m), s.V) == s.D);
    CHECK(product(s.U, s.U_inv) == laurent_identity(m.rows()));
    CHECK(product(s.V, s.V_inv) == laurent_identity(m.cols()));
    CHECK(determinant(s.U).is_unit());
    CHECK(determinant(s.V).is_unit());
    for (Eigen::Index i = 0; i < s.D.rows(); ++i)
        for (Eigen::Index j = 0; j < s.D.cols(); ++j)
            if (i != j) CHECK(s.D(i, j).is_zero());
    const auto d = s.diagonal();
    for (size_t i = 0; i + 1 < d.size(); ++i) CHECK(divides(d[i], d[i + 1]));
    for (const auto& x : d)
        if (!x.is_zero()) CHECK(x == x.normalized());
}

}  // namespace

TEST_CASE("poly arithmetic") {
    CHECK(P("t-1") * P("t+1") == P("t^2-1"));
    CHECK(P("3t^2 - 1/2") + LaurentPoly() == P("3t^2 - 1/2"));
    CHECK(P("2t^-1 + 1") * P("t") == P("2 + t"));
    CHECK(P("t - t").is_zero());
    CHECK(P("t^2-1").str() == "t^2 - 1");
    CHECK(parse_laurent(P("-3/2*t^-2 + t").str()) == P("-3/2*t^-2 + t"));
    CHECK_THROWS(parse_laurent("t^"));
    CHECK_THROWS(parse_laurent(""));
}

TEST_CASE("span is additive under multiplication") {
    std::mt19937 rng(42);
    for (int k = 0; k < 200; ++k) {
        auto a = novflow::testing::random_poly(rng, 3, 0.0);
        auto b = novflow::testing::random_poly(rng, 3, 0.0);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK((a * b).span() == a.span() + b.span());
    }
}

TEST_CASE("euclidean division") {
    auto [q, r] = divmod(P("t^3 - 1"), P("t - 1"));
    CHECK(q == P("t^2 + t + 1"));
    CHECK(r.is_zero());
    auto [q2, r2] = divmod(P("t^2 + t^-1"), P("2t"));
    CHECK(q2 * P("2t") + r2 == P("t^2 + t^-1"));
    CHECK((r2.is_zero() || r2.span() < 0));
    CHECK(gcd(P("t^2-1"), P("t^2 - 2t + 1")) == P("t - 1"));
    CHECK(P("5t^3 - 5t^2").normalized() == P("t - 1"));
}

TEST_CASE("smith normal form examples") {
    SUBCASE("already diagonal") {
        const auto m = mat({{"t-1"}});
        const auto s = smith_normal_form(m);
        check_smith(m, s);
        CHECK(s.D(0, 0) == P("t-1"));
    }
    SUBCASE("zero column preserved") {
        const auto m = mat({{"t-1", "0"}, {"0", "0"}});
        const auto s = smith_normal_form(m);
        check_smith(m, s);
        CHECK(s.D(0, 0) == P("t-1"));
        CHECK(s.D(1, 1).is_zero());
        CHECK(s.rank == 1);
    }
    SUBCASE("[[t,1],[1,t]]") {
        const auto m = mat({{"t", "1"}, {"1", "t"}});
        const auto s = smith_normal_form(m);
        check_smith(m, s);
        CHECK(s.D(0, 0) == P("1"));
        CHECK(s.D(1, 1) == P("t^2 - 1"));
        // numeric rank oracle at τ = 2, 3 (both off the roots ±1)
        for (int a : {2, 3}) CHECK(numeric_rank(evaluate_at(m, Rational(a))) == 2);
        CHECK(numeric_rank(evaluate_at(m, Rational(1))) == 1);
    }
    SUBCASE("empty matrices") {
        LaurentMatrix m = laurent_zero(0, 2);
        const auto s = smith_normal_form(m);
        CHECK(s.rank == 0);
        CHECK(s.V.rows() == 2);
    }
}

TEST_CASE("module decomposition") {
    SUBCASE("free module") {
        const auto d = module_decompose(laurent_zero(0, 1));
        CHECK(d.free_rank == 1);
        CHECK(d.torsion_factors.empty());
    }
    SUBCASE("circle cover H0") {
        const auto d = module_decompose(mat({{"t-1"}}));
        CHECK(d.free_rank == 0);
        REQUIRE(d.torsion_factors.size() == 1);
        CHECK(d.torsion_factors[0] == P("t-1"));
    }
    SUBCASE("unit entries dropped") {
        const auto d = module_decompose(mat({{"1", "0"}, {"0", "t-2"}}));
        CHECK(d.free_rank == 0);
        REQUIRE(d.torsion_factors.size() == 1);
        CHECK(d.torsion_factors[0] == P("t-2"));
        CHECK(d.torsion_dimension() == 1);
    }
    SUBCASE("units are stripped from factors") {
        const auto d = module_decompose(mat({{"-3t^4 + 3t^3"}}));
        REQUIRE(d.torsion_factors.size() == 1);
        CHECK(d.torsion_factors[0] == P("t-1"));
    }
}

TEST_CASE("supp") {
    ModuleDecomposition d;
    CHECK(supp_of(d).empty());
    d.torsion_factors = {P("t-1")};
    auto s = supp_of(d);
    REQUIRE(s.rational_roots.size() == 1);
    CHECK(s.rational_roots[0] == 1);
    d.torsion_factors = {P("t^2-4")};
    s = supp_of(d);
    REQUIRE(s.rational_roots.size() == 2);
    CHECK(s.rational_roots[0] == -2);
    CHECK(s.rational_roots[1] == 2);
    CHECK(s.residual_factors.empty());
    // (2t - 1)(t^2 + 1)(t^2 + 1): rational root 1/2, residual t^2+1 once
    d.torsion_factors = {P("t^2+1"), P("2t - 1") * P("t^2+1") * P("t^2+1")};
    s = supp_of(d);
    REQUIRE(s.rational_roots.size() == 1);
    CHECK(s.rational_roots[0] == Rational(1, 2));
    REQUIRE(s.residual_factors.size() == 1);
    CHECK(s.residual_factors[0] == P("t^2+1"));
    REQUIRE(s.numeric_roots.size() == 2);
    for (auto z : s.numeric_roots) CHECK(std::abs(z * z + 1.0) < kNumericRootPrecision);
    CHECK(s.size_bound() <= d.torsion_dimension());
    CHECK(s.contains(Rational(1, 2)));
    CHECK_FALSE(s.contains(Rational(2)));
}

TEST_CASE("supp union merges shared residual factors") {
    SuppSet a, b;
    a.residual_factors = {P("t^2 + 1")};
    b.residual_factors = {P("t^4 - 1")};  // contributes ±1 only via residuals here
    b.rational_roots = {Rational(3)};
    const auto u = supp_union(a, b);
    CHECK(u.rational_roots == std::vector<Rational>{Rational(3)});
    // coprime base of {t^2+1, t^4-1} is {t^2-1, t^2+1}
    REQUIRE(u.residual_factors.size() == 2);
}

TEST_CASE("evaluate_at") {
    CHECK(evaluate_at(mat({{"t-1"}}), Rational(1))(0, 0) == 0);
    CHECK(evaluate_at(mat({{"t^-1"}}), Rational(2))(0, 0) == Rational(1, 2));
    CHECK_THROWS_AS(evaluate_at(mat({{"t"}}), Rational(0)), std::domain_error);
}

TEST_CASE("rank consistency and decomposition invariance on random matrices") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = novflow::testing::random_matrix(rng, 3, 3);
        const auto s = smith_normal_form(m);
        check_smith(m, s);
        const auto dec = module_decompose(m);
        // rank at a point off every invariant-factor root equals the Λ-rank
        int checked = 0;
        for (int a : {2, 3, 5, 7, 11, -3}) {
            bool is_root = false;
            for (const auto& d : s.diagonal())
                if (!d.is_zero() && d.evaluate(Rational(a)) == 0) is_root = true;
            if (is_root) continue;
            CHECK(numeric_rank(evaluate_at(m, Rational(a))) == s.rank);
            if (++checked == 3) break;
        }
        CHECK(supp_of(dec).size_bound() <= dec.torsion_dimension());
        const auto u = novflow::testing::random_unimodular(rng, 3);
        const auto v = novflow::testing::random_unimodular(rng, 3);
        CHECK(module_decompose(product(product(u, m), v)) == dec);
    }
}

TEST_CASE("determinant") {
    CHECK(determinant(mat({{"t", "1"}, {"1", "t"}})) == P("t^2 - 1"));
    CHECK(determinant(mat({{"0", "1"}, {"1", "0"}})) == P("-1"));
    CHECK(determinant(laurent_identity(3)) == P("1"));
}
