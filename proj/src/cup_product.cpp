#include "novflow/cup_product.hpp"

#include <functional>
#include <map>

namespace novflow {

using Index = Eigen::Index;

namespace {

Index rank_of(const RationalMatrix& m) { return m.size() == 0 ? 0 : exact_rank(m); }

RationalMatrix append_column(const RationalMatrix& m, const RationalVector& v) {
    RationalMatrix out(v.size(), m.cols() + 1);
    if (m.cols() > 0) out.leftCols(m.cols()) = m;
    out.col(m.cols()) = v;
    return out;
}

}  // namespace

bool TwistedCochain::is_zero() const {
    for (Index i = 0; i < values.size(); ++i)
        if (values(i) != 0) return false;
    return true;
}

LocalSystemComplex::LocalSystemComplex(CellComplex x, IntegerCocycle xi)
    : x_(std::move(x)), xi_(std::move(xi)) {
    if (!x_.is_simplicial()) throw ValidationError("cup products need a simplicial complex");
    cover_ = cover_complex(x_, xi_);
}

RationalMatrix LocalSystemComplex::coboundary_matrix(const Rational& a, int p) const {
    if (a == 0) throw ValidationError("local system parameter must be nonzero");
    const LaurentMatrix b = cover_.boundary_at(p + 1);
    RationalMatrix out(b.cols(), b.rows());
    if (b.size() == 0) return out;
    return evaluate_at(b, a).transpose();
}

TwistedCochain LocalSystemComplex::zero_cochain(const Rational& a, int p) const {
    return {p, a, RationalVector::Zero(x_.cell_count(p))};
}

TwistedCochain LocalSystemComplex::coboundary(const TwistedCochain& u) const {
    if (u.values.size() != x_.cell_count(u.degree)) throw ValidationError("cochain has the wrong length");
    TwistedCochain out = zero_cochain(u.twist, u.degree + 1);
    if (out.values.size() > 0) out.values = coboundary_matrix(u.twist, u.degree) * u.values;
    return out;
}

bool LocalSystemComplex::is_cocycle(const TwistedCochain& u) const { return coboundary(u).is_zero(); }

bool LocalSystemComplex::is_coboundary(const TwistedCochain& u) const {
    if (u.is_zero()) return true;
    if (u.degree == 0) return false;
    const RationalMatrix prev = coboundary_matrix(u.twist, u.degree - 1);
    return rank_of(append_column(prev, u.values)) == rank_of(prev);
}

std::vector<TwistedCochain> LocalSystemComplex::cohomology_basis(const Rational& a, int p) const {
    std::vector<TwistedCochain> out;
    if (p < 0 || p > x_.dimension()) return out;
    const Index n = x_.cell_count(p);
    const RationalMatrix delta = coboundary_matrix(a, p);
    const RationalMatrix cycles = delta.rows() == 0 ? RationalMatrix(RationalMatrix::Identity(n, n)) : null_space(delta);
    RationalMatrix span = p > 0 ? coboundary_matrix(a, p - 1) : RationalMatrix(n, 0);
    Index rank = rank_of(span);
    for (Index k = 0; k < cycles.cols(); ++k) {
        RationalMatrix grown = append_column(span, cycles.col(k));
        const Index r = rank_of(grown);
        if (r == rank) continue;
        rank = r;
        span = std::move(grown);
        out.push_back({p, a, cycles.col(k)});
    }
    return out;
}

long LocalSystemComplex::holonomy(const Vertices& simplex, size_t i, size_t j) const {
    if (i == j) return 0;
    if (i > j) return -holonomy(simplex, j, i);
    const Index edge = *x_.find_simplex({simplex[i], simplex[j]});
    return cover_.gauge.edge_twist[static_cast<size_t>(edge)];
}

TwistedCochain cup_unchecked(const LocalSystemComplex& c, const TwistedCochain& u, const TwistedCochain& v) {
    const CellComplex& x = c.complex();
    const int p = u.degree, q = v.degree;
    TwistedCochain out = c.zero_cochain(u.twist * v.twist, p + q);
    if (p + q > x.dimension()) return out;
    for (Index s = 0; s < x.cell_count(p + q); ++s) {
        const Vertices& sigma = x.simplex(p + q, s);
        const Vertices front(sigma.begin(), sigma.begin() + p + 1);
        const Vertices back(sigma.begin() + p, sigma.end());
        const Rational& uf = u.values(*x.find_simplex(front));
        if (uf == 0) continue;
        const Rational& vb = v.values(*x.find_simplex(back));
        if (vb == 0) continue;
        out.values(s) = uf * rational_pow(v.twist, c.holonomy(sigma, 0, static_cast<size_t>(p))) * vb;
    }
    return out;
}

TwistedCochain twisted_cup(const LocalSystemComplex& c, const TwistedCochain& u, const TwistedCochain& v) {
    if (!c.is_cocycle(u) || !c.is_cocycle(v)) throw ValidationError("cup product factors must be cocycles");
    return cup_unchecked(c, u, v);
}

std::vector<Rational> cup_twist_scan() {
    return {Rational(2), Rational(3), Rational(1, 2), Rational(-1), Rational(-2)};
}

CupBound cat_cup_lower_bound(const CellComplex& x, const IntegerCocycle& xi) {
    const LocalSystemComplex c(x, xi);
    const int top = x.dimension();
    const auto& twists = c.cover().gauge.edge_twist;
    const bool trivial = std::all_of(twists.begin(), twists.end(), [](long w) { return w == 0; });

    std::vector<TwistedCochain> untwisted;
    for (int p = 1; p <= top; ++p)
        for (auto& u : c.cohomology_basis(Rational(1), p)) untwisted.push_back(std::move(u));

    // Longest nonzero extension prod ∪ w_i ∪ w_j ∪ ... with nondecreasing indices.
    std::function<void(const TwistedCochain&, size_t, std::vector<int>&, long&, std::vector<int>&)> extend =
        [&](const TwistedCochain& prod, size_t first, std::vector<int>& degrees, long& best,
            std::vector<int>& best_degrees) {
            if (static_cast<long>(degrees.size()) > best) {
                best = static_cast<long>(degrees.size());
                best_degrees = degrees;
            }
            for (size_t k = first; k < untwisted.size(); ++k) {
                if (prod.degree + untwisted[k].degree > top) continue;
                TwistedCochain next = cup_unchecked(c, prod, untwisted[k]);
                if (next.is_zero() || c.is_coboundary(next)) continue;
                degrees.push_back(untwisted[k].degree);
                extend(next, k, degrees, best, best_degrees);
                degrees.pop_back();
            }
        };

    CupBound result;
    if (trivial) {
        result.classical = true;
        long best = 0;
        std::vector<int> degrees, best_degrees;
        for (size_t k = 0; k < untwisted.size(); ++k) {
            degrees = {untwisted[k].degree};
            extend(untwisted[k], k, degrees, best, best_degrees);
        }
        result.factors = best;
        result.degrees = best_degrees;
        result.bound = best + 1;
        return result;
    }

    const SuppSet s = supp(x, xi);
    std::map<Rational, std::vector<TwistedCochain>> bases;
    auto basis_for = [&](const Rational& a) -> const std::vector<TwistedCochain>& {
        auto it = bases.find(a);
        if (it != bases.end()) return it->second;
        std::vector<TwistedCochain> all;
        for (int p = 1; p <= top; ++p)
            for (auto& u : c.cohomology_basis(a, p)) all.push_back(std::move(u));
        return bases.emplace(a, std::move(all)).first->second;
    };

    long best_r = -1;
    for (const Rational& a : cup_twist_scan()) {
        if (s.contains(a)) continue;
        for (const Rational& b : cup_twist_scan()) {
            if (s.contains(b)) continue;
            for (const auto& u : basis_for(a))
                for (const auto& v : basis_for(b)) {
                    if (u.degree + v.degree > top) continue;
                    const TwistedCochain uv = cup_unchecked(c, u, v);
                    if (uv.is_zero() || c.is_coboundary(uv)) continue;
                    std::vector<int> degrees{u.degree, v.degree}, best_degrees = degrees;
                    long length = 2;
                    extend(uv, 0, degrees, length, best_degrees);
                    if (length - 2 > best_r) {
                        best_r = length - 2;
                        result.a = a;
                        result.b = b;
                        result.factors = length;
                        result.degrees = best_degrees;
                    }
                }
        }
    }
    result.bound = best_r < 0 ? 0 : best_r + 1;
    return result;
}

}  // namespace novflow
