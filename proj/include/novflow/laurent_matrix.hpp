#pragma once

#include "novflow/laurent_poly.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace novflow {

using LaurentMatrix = Eigen::Matrix<LaurentPoly, Eigen::Dynamic, Eigen::Dynamic>;

LaurentMatrix laurent_identity(Eigen::Index n);
LaurentMatrix laurent_zero(Eigen::Index rows, Eigen::Index cols);

/// U·m·V = D with U, V invertible over Λ. The inverses are carried along so
/// callers can change bases without a separate inversion.
struct SmithForm {
    LaurentMatrix U, D, V;
    LaurentMatrix U_inv, V_inv;
    Eigen::Index rank = 0;

    std::vector<LaurentPoly> diagonal() const;
};

/// Smith normal form over the PID Λ. Diagonal entries are normalized
/// (lowest exponent 0, leading coefficient 1) and satisfy d_i | d_{i+1}.
SmithForm smith_normal_form(const LaurentMatrix& m);

/// Rank over the fraction field Q(τ).
Eigen::Index laurent_rank(const LaurentMatrix& m);

/// Determinant by fraction-free elimination.
LaurentPoly determinant(LaurentMatrix m);

/// Entry-wise specialization τ → a. Throws for a == 0.
RationalMatrix evaluate_at(const LaurentMatrix& m, const Rational& a);

/// A finitely generated Λ-module Λ^free_rank ⊕ ⨁ Λ/(d_i).
struct ModuleDecomposition {
    Eigen::Index free_rank = 0;
    std::vector<LaurentPoly> torsion_factors;

    /// dim_Q of the torsion part.
    long torsion_dimension() const;
    bool is_zero() const { return free_rank == 0 && torsion_factors.empty(); }

    friend bool operator==(const ModuleDecomposition&, const ModuleDecomposition&) = default;
};

/// Presentation convention: rows are relations, columns are generators.
ModuleDecomposition module_decompose(const LaurentMatrix& presentation);

struct SuppSet {
    std::vector<Rational> rational_roots;             // sorted, distinct, nonzero
    std::vector<LaurentPoly> residual_factors;        // pairwise coprime, no rational roots
    std::vector<std::complex<double>> numeric_roots;  // roots of residual factors

    bool empty() const { return rational_roots.empty() && residual_factors.empty(); }
    long size_bound() const;
    bool contains(const Rational& a) const;
};

/// Precision target for numeric_roots.
inline constexpr double kNumericRootPrecision = 1e-10;

/// Eigenvalues of τ on the torsion part.
SuppSet supp_of(const ModuleDecomposition& decomposition);

/// Merges two Supp sets (set union of eigenvalues).
SuppSet supp_union(const SuppSet& a, const SuppSet& b);

/// Distinct rational roots of a nonzero polynomial, via the rational root theorem.
std::vector<Rational> rational_roots(const LaurentPoly& p);

/// Complex roots of a Laurent polynomial (zero roots of the polynomial part excluded).
std::vector<std::complex<double>> numeric_roots(const LaurentPoly& p);

}  // namespace novflow
