#pragma once

// Random inputs shared by the property suites.

#include "novflow/laurent_matrix.hpp"

#include <random>

namespace novflow::testing {

/// Span <= max_span, coefficients in {-2..2}, lowest exponent in {-1, 0, 1}.
inline LaurentPoly random_poly(std::mt19937& rng, int max_span = 3, double zero_prob = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < zero_prob) return {};
    std::uniform_int_distribution<int> coeff(-2, 2), low(-1, 1), span(0, max_span);
    const int lo = low(rng);
    const int s = span(rng);
    LaurentPoly p;
    for (int e = lo; e <= lo + s; ++e) p += LaurentPoly::monomial(Rational(coeff(rng)), e);
    return p;
}

inline LaurentMatrix random_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols, int max_span = 3) {
    LaurentMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_poly(rng, max_span);
    return m;
}

/// Product of random elementary operations, so invertible over Λ by construction.
inline LaurentMatrix random_unimodular(std::mt19937& rng, Eigen::Index n, int ops = 6) {
    LaurentMatrix u = laurent_identity(n);
    if (n == 0) return u;
    std::uniform_int_distribution<Eigen::Index> idx(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 2), shift(-2, 2), c(1, 3);
    for (int k = 0; k < ops; ++k) {
        const Eigen::Index i = idx(rng), j = idx(rng);
        switch (kind(rng)) {
            case 0:
                if (i != j) u.row(i).swap(u.row(j));
                break;
            case 1: {
                const LaurentPoly unit = LaurentPoly::monomial(Rational(c(rng)), shift(rng));
                for (Eigen::Index col = 0; col < n; ++col) u(i, col) = unit * u(i, col);
                break;
            }
            default:
                if (i != j) {
                    const LaurentPoly q = random_poly(rng, 2, 0.0);
                    for (Eigen::Index col = 0; col < n; ++col) u(i, col) += q * u(j, col);
                }
        }
    }
    return u;
}

/// Rank of a double matrix via full-pivot LU, independent of the exact code path.
inline Eigen::Index numeric_rank(const RationalMatrix& m) {
    if (m.size() == 0) return 0;
    Eigen::MatrixXd d(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).convert_to<double>();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
    lu.setThreshold(1e-9);
    return lu.rank();
}

inline LaurentMatrix product(const LaurentMatrix& a, const LaurentMatrix& b) {
    LaurentMatrix out = laurent_zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

}  // namespace novflow::testing
