#pragma once

#include "novflow/twisted.hpp"

#include <vector>

namespace novflow {

/// Cochain with values in the local system a^ξ; one value per p-simplex.
struct TwistedCochain {
    int degree = 0;
    Rational twist{1};
    RationalVector values;

    bool is_zero() const;
};

/// Cochain complexes C^*(x; a^ξ) over a simplicial complex. The coboundary is
/// the transpose of the cover boundary specialized at τ = a:
///   (δu)(σ) = a^{w(v0,v1)} u(d₀σ) + Σ_{i≥1} (−1)^i u(d_iσ).
class LocalSystemComplex {
public:
    LocalSystemComplex(CellComplex x, IntegerCocycle xi);

    const CellComplex& complex() const { return x_; }
    const TwistedChainComplex& cover() const { return cover_; }

    /// δ : C^p → C^{p+1}, rows indexed by (p+1)-simplices.
    RationalMatrix coboundary_matrix(const Rational& a, int p) const;
    TwistedCochain coboundary(const TwistedCochain& u) const;

    bool is_cocycle(const TwistedCochain& u) const;
    bool is_coboundary(const TwistedCochain& u) const;
    /// Cocycle whose class is nonzero.
    bool is_nontrivial_class(const TwistedCochain& u) const { return is_cocycle(u) && !is_coboundary(u); }

    /// Cocycle representatives of a basis of H^p(x; a^ξ).
    std::vector<TwistedCochain> cohomology_basis(const Rational& a, int p) const;

    /// Sum of gauge twists along the edge path v_i → v_j of a simplex.
    long holonomy(const Vertices& simplex, size_t i, size_t j) const;

    TwistedCochain zero_cochain(const Rational& a, int p) const;

private:
    CellComplex x_;
    IntegerCocycle xi_;
    TwistedChainComplex cover_;
};

/// Alexander–Whitney product (u∪v)(σ) = u(σ|[v0..vp]) · b^{w(v0,vp)} · v(σ|[vp..vp+q]).
/// Throws ValidationError unless both factors are cocycles.
TwistedCochain twisted_cup(const LocalSystemComplex& c, const TwistedCochain& u, const TwistedCochain& v);

/// Product without the cocycle precondition; used for chain-level checks.
TwistedCochain cup_unchecked(const LocalSystemComplex& c, const TwistedCochain& u, const TwistedCochain& v);

struct CupBound {
    long bound = 0;        // certified lower bound on cat (0 when nothing was found)
    long factors = 0;      // length of the nonzero product behind the bound
    bool classical = false;
    Rational a{1}, b{1};   // twists used when not classical
    std::vector<int> degrees;
};

/// Twists scanned by the search, before removing Supp.
std::vector<Rational> cup_twist_scan();

/// ξ ≃ 0: cup length n gives cat ≥ n+1. Otherwise: a nonzero u∪v∪w₁∪⋯∪w_r
/// with a, b ∉ Supp and all degrees positive gives cat > r.
CupBound cat_cup_lower_bound(const CellComplex& x, const IntegerCocycle& xi);

}  // namespace novflow
