#include "novflow/laurent_matrix.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <stdexcept>

namespace novflow {

namespace {

using Integer = boost::multiprecision::mpz_int;
using Index = Eigen::Index;

// Pivot order: smaller span first, then smaller coefficient height.
bool better_pivot(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.span() != b.span()) return a.span() < b.span();
    return a.height() < b.height();
}

struct Reducer {
    LaurentMatrix D, U, U_inv, V, V_inv;

    explicit Reducer(const LaurentMatrix& m)
        : D(m),
          U(laurent_identity(m.rows())),
          U_inv(laurent_identity(m.rows())),
          V(laurent_identity(m.cols())),
          V_inv(laurent_identity(m.cols())) {}

    void swap_rows(Index i, Index j) {
        if (i == j) return;
        D.row(i).swap(D.row(j));
        U.row(i).swap(U.row(j));
        U_inv.col(i).swap(U_inv.col(j));
    }
    void swap_cols(Index i, Index j) {
        if (i == j) return;
        D.col(i).swap(D.col(j));
        V.col(i).swap(V.col(j));
        V_inv.row(i).swap(V_inv.row(j));
    }
    // row_i += q * row_k
    void add_row(Index i, Index k, const LaurentPoly& q) {
        if (q.is_zero()) return;
        for (Index c = 0; c < D.cols(); ++c)
            if (!D(k, c).is_zero()) D(i, c) += q * D(k, c);
        for (Index c = 0; c < U.cols(); ++c)
            if (!U(k, c).is_zero()) U(i, c) += q * U(k, c);
        for (Index r = 0; r < U_inv.rows(); ++r)
            if (!U_inv(r, i).is_zero()) U_inv(r, k) -= U_inv(r, i) * q;
    }
    // col_j += q * col_k
    void add_col(Index j, Index k, const LaurentPoly& q) {
        if (q.is_zero()) return;
        for (Index r = 0; r < D.rows(); ++r)
            if (!D(r, k).is_zero()) D(r, j) += D(r, k) * q;
        for (Index r = 0; r < V.rows(); ++r)
            if (!V(r, k).is_zero()) V(r, j) += V(r, k) * q;
        for (Index c = 0; c < V_inv.cols(); ++c)
            if (!V_inv(j, c).is_zero()) V_inv(k, c) -= q * V_inv(j, c);
    }
    void scale_row(Index i, const LaurentPoly& unit) {
        const LaurentPoly inv = unit.unit_inverse();
        for (Index c = 0; c < D.cols(); ++c) D(i, c) = unit * D(i, c);
        for (Index c = 0; c < U.cols(); ++c) U(i, c) = unit * U(i, c);
        for (Index r = 0; r < U_inv.rows(); ++r) U_inv(r, i) = U_inv(r, i) * inv;
    }

    bool find_pivot(Index t, Index& pi, Index& pj) const {
        bool found = false;
        for (Index i = t; i < D.rows(); ++i)
            for (Index j = t; j < D.cols(); ++j) {
                if (D(i, j).is_zero()) continue;
                if (!found || better_pivot(D(i, j), D(pi, pj))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        return found;
    }

    // Clears row t and column t below/right of the pivot; false if a nonzero
    // remainder was left (a smaller pivot now exists).
    bool eliminate(Index t) {
        bool clean = true;
        const LaurentPoly pivot = D(t, t);
        for (Index i = t + 1; i < D.rows(); ++i) {
            if (D(i, t).is_zero()) continue;
            auto [q, r] = divmod(D(i, t), pivot);
            add_row(i, t, -q);
            if (!r.is_zero()) clean = false;
        }
        for (Index j = t + 1; j < D.cols(); ++j) {
            if (D(t, j).is_zero()) continue;
            auto [q, r] = divmod(D(t, j), pivot);
            add_col(j, t, -q);
            if (!r.is_zero()) clean = false;
        }
        return clean;
    }

    // Finds a row i > t holding an entry not divisible by the pivot.
    bool fix_divisibility(Index t) {
        for (Index i = t + 1; i < D.rows(); ++i)
            for (Index j = t + 1; j < D.cols(); ++j)
                if (!D(i, j).is_zero() && !divides(D(t, t), D(i, j))) {
                    add_row(t, i, LaurentPoly(1));
                    return true;
                }
        return false;
    }

    Index run() {
        const Index steps = std::min(D.rows(), D.cols());
        Index t = 0;
        for (; t < steps; ++t) {
            Index pi = t, pj = t;
            if (!find_pivot(t, pi, pj)) break;
            swap_rows(t, pi);
            swap_cols(t, pj);
            for (;;) {
                if (!eliminate(t) || fix_divisibility(t)) {
                    if (!find_pivot(t, pi, pj)) throw std::logic_error("pivot vanished during reduction");
                    swap_rows(t, pi);
                    swap_cols(t, pj);
                    continue;
                }
                break;
            }
            scale_row(t, D(t, t).unit_part().unit_inverse());
        }
        return t;
    }
};

Integer lcm_of_denominators(const LaurentPoly& p) {
    Integer l(1);
    for (const auto& [e, c] : p.terms()) l = boost::multiprecision::lcm(l, Integer(denominator(c)));
    return l;
}

std::vector<Integer> positive_divisors(Integer n) {
    if (n < 0) n = -n;
    std::vector<Integer> small, large;
    for (Integer d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

LaurentPoly derivative(const LaurentPoly& p) {
    LaurentPoly::Terms out;
    for (const auto& [e, c] : p.terms())
        if (e != 0) out.emplace(e - 1, c * e);
    return LaurentPoly(out);
}

LaurentPoly exact_quotient(const LaurentPoly& a, const LaurentPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::logic_error("inexact division " + a.str() + " / " + b.str());
    return q;
}

LaurentPoly squarefree_part(const LaurentPoly& p) {
    const LaurentPoly poly = p.normalized();
    if (poly.span() <= 0) return poly;
    const LaurentPoly g = gcd(poly, derivative(poly));
    return exact_quotient(poly, g).normalized();
}

// Splits a list of polynomials into a pairwise-coprime list with the same roots.
std::vector<LaurentPoly> coprime_base(std::vector<LaurentPoly> polys) {
    auto nontrivial = [](const LaurentPoly& p) { return !p.is_zero() && p.span() > 0; };
    std::vector<LaurentPoly> work;
    for (auto& p : polys)
        if (nontrivial(p)) work.push_back(squarefree_part(p));
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < work.size() && !changed; ++i)
            for (size_t j = i + 1; j < work.size() && !changed; ++j) {
                LaurentPoly g = gcd(work[i], work[j]);
                if (g.span() <= 0) continue;
                LaurentPoly a = exact_quotient(work[i], g).normalized();
                LaurentPoly b = exact_quotient(work[j], g).normalized();
                work.erase(work.begin() + static_cast<long>(j));
                work.erase(work.begin() + static_cast<long>(i));
                for (auto* p : {&a, &b, &g})
                    if (nontrivial(*p)) work.push_back(*p);
                changed = true;
            }
    }
    std::sort(work.begin(), work.end(), [](const LaurentPoly& a, const LaurentPoly& b) {
        if (a.span() != b.span()) return a.span() < b.span();
        return a.str() < b.str();
    });
    return work;
}

}  // namespace

LaurentMatrix laurent_identity(Eigen::Index n) {
    LaurentMatrix m = laurent_zero(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = LaurentPoly(1);
    return m;
}

LaurentMatrix laurent_zero(Eigen::Index rows, Eigen::Index cols) {
    LaurentMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = LaurentPoly();
    return m;
}

std::vector<LaurentPoly> SmithForm::diagonal() const {
    std::vector<LaurentPoly> d;
    for (Index i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
}

SmithForm smith_normal_form(const LaurentMatrix& m) {
    Reducer r(m);
    const Index rank = r.run();
    return SmithForm{std::move(r.U), std::move(r.D), std::move(r.V), std::move(r.U_inv), std::move(r.V_inv), rank};
}

Eigen::Index laurent_rank(const LaurentMatrix& m) {
    Reducer r(m);
    return r.run();
}

LaurentPoly determinant(LaurentMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const Index n = m.rows();
    if (n == 0) return LaurentPoly(1);
    LaurentPoly prev(1);
    int sign = 1;
    for (Index k = 0; k < n - 1; ++k) {
        if (m(k, k).is_zero()) {
            Index swap = k + 1;
            while (swap < n && m(swap, k).is_zero()) ++swap;
            if (swap == n) return LaurentPoly();
            m.row(k).swap(m.row(swap));
            sign = -sign;
        }
        for (Index i = k + 1; i < n; ++i)
            for (Index j = k + 1; j < n; ++j)
                m(i, j) = exact_quotient(m(k, k) * m(i, j) - m(i, k) * m(k, j), prev);
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

RationalMatrix evaluate_at(const LaurentMatrix& m, const Rational& a) {
    if (a == 0) throw std::domain_error("evaluate_at requires a nonzero specialization value");
    RationalMatrix out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).evaluate(a);
    return out;
}

long ModuleDecomposition::torsion_dimension() const {
    long dim = 0;
    for (const auto& f : torsion_factors) dim += f.span();
    return dim;
}

ModuleDecomposition module_decompose(const LaurentMatrix& presentation) {
    const SmithForm snf = smith_normal_form(presentation);
    ModuleDecomposition out;
    out.free_rank = presentation.cols() - snf.rank;
    for (Index i = 0; i < snf.rank; ++i) {
        const LaurentPoly& d = snf.D(i, i);
        if (!d.is_unit()) out.torsion_factors.push_back(d.normalized());
    }
    return out;
}

std::vector<Rational> rational_roots(const LaurentPoly& p) {
    if (p.is_zero()) throw std::domain_error("rational_roots of the zero polynomial");
    LaurentPoly work = p.normalized();
    std::vector<Rational> roots;
    while (work.span() > 0) {
        const Integer scale = lcm_of_denominators(work);
        const Integer a0 = Integer(numerator(work.trailing_coefficient() * Rational(scale)));
        const Integer an = Integer(numerator(work.leading_coefficient() * Rational(scale)));
        bool found = false;
        for (const auto& num : positive_divisors(a0)) {
            for (const auto& den : positive_divisors(an)) {
                for (int sign : {1, -1}) {
                    const Rational cand = Rational(num * sign) / Rational(den);
                    if (work.evaluate(cand) != 0) continue;
                    if (std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
                    LaurentPoly linear = LaurentPoly::tau(1) - LaurentPoly(cand);
                    work = exact_quotient(work, linear).normalized();
                    found = true;
                    break;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<std::complex<double>> numeric_roots(const LaurentPoly& p) {
    if (p.is_zero()) throw std::domain_error("numeric_roots of the zero polynomial");
    const LaurentPoly poly = p.normalized();
    const long deg = poly.span();
    if (deg <= 0) return {};
    std::vector<double> c(static_cast<size_t>(deg + 1));
    for (long e = 0; e <= deg; ++e) c[static_cast<size_t>(e)] = poly.coeff(e).convert_to<double>();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (long i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (long i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<size_t>(i)];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> roots;
    for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
        std::complex<double> z = solver.eigenvalues()(i);
        for (int it = 0; it < 50; ++it) {
            std::complex<double> f = 0.0, df = 0.0;
            for (long e = deg; e >= 0; --e) {
                df = df * z + f;
                f = f * z + c[static_cast<size_t>(e)];
            }
            if (std::abs(df) == 0.0) break;
            const std::complex<double> step = f / df;
            z -= step;
            if (std::abs(step) <= kNumericRootPrecision * 1e-3 * std::max(1.0, std::abs(z))) break;
        }
        roots.push_back(z);
    }
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

long SuppSet::size_bound() const {
    long n = static_cast<long>(rational_roots.size());
    for (const auto& f : residual_factors) n += f.span();
    return n;
}

bool SuppSet::contains(const Rational& a) const {
    if (std::find(rational_roots.begin(), rational_roots.end(), a) != rational_roots.end()) return true;
    for (const auto& f : residual_factors)
        if (f.evaluate(a) == 0) return true;
    return false;
}

namespace {

SuppSet supp_from_polys(const std::vector<Rational>& roots, const std::vector<LaurentPoly>& residuals) {
    SuppSet s;
    s.rational_roots = roots;
    std::sort(s.rational_roots.begin(), s.rational_roots.end());
    s.rational_roots.erase(std::unique(s.rational_roots.begin(), s.rational_roots.end()), s.rational_roots.end());
    s.residual_factors = coprime_base(residuals);
    for (const auto& f : s.residual_factors)
        for (const auto& z : numeric_roots(f)) s.numeric_roots.push_back(z);
    return s;
}

}  // namespace

SuppSet supp_of(const ModuleDecomposition& decomposition) {
    if (decomposition.torsion_factors.empty()) return {};
    // The factors form a divisibility chain, so the last one carries every root.
    LaurentPoly work = decomposition.torsion_factors.back().normalized();
    const auto roots = rational_roots(work);
    for (const auto& r : roots) {
        const LaurentPoly linear = LaurentPoly::tau(1) - LaurentPoly(r);
        while (work.span() > 0 && divides(linear, work)) work = exact_quotient(work, linear).normalized();
    }
    std::vector<LaurentPoly> residual;
    if (work.span() > 0) residual.push_back(work);
    return supp_from_polys(roots, residual);
}

SuppSet supp_union(const SuppSet& a, const SuppSet& b) {
    std::vector<Rational> roots = a.rational_roots;
    roots.insert(roots.end(), b.rational_roots.begin(), b.rational_roots.end());
    std::vector<LaurentPoly> residual = a.residual_factors;
    residual.insert(residual.end(), b.residual_factors.begin(), b.residual_factors.end());
    return supp_from_polys(roots, residual);
}

}  // namespace novflow
