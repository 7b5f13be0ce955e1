#pragma once

#include "novflow/cell_complex.hpp"
#include "novflow/laurent_matrix.hpp"

#include <vector>

namespace novflow {

/// Spanning tree of the 1-skeleton together with the sheet heights it induces:
/// every tree edge satisfies h(head) = h(tail) + ξ(e).
struct Gauge {
    std::vector<bool> tree_edge;      // per 1-cell
    std::vector<long> vertex_height;  // per 0-cell
    std::vector<long> edge_twist;     // w(e) = h(tail) + ξ(e) − h(head); zero on the tree
};

/// BFS tree from vertex 0 over 1-cells in index order.
Gauge make_gauge(const CellComplex& x, const IntegerCocycle& xi);
/// Tree grown by adding edges in `edge_order` whenever they join two components.
Gauge make_gauge(const CellComplex& x, const IntegerCocycle& xi, const std::vector<Eigen::Index>& edge_order);

/// Chain complex of the infinite cyclic cover as free Λ-modules.
/// boundary[d] : C_d → C_{d-1}, rows indexed by (d-1)-cells; boundary[0] is 0×n₀.
struct TwistedChainComplex {
    std::vector<LaurentMatrix> boundary;
    Gauge gauge;

    int dimension() const { return static_cast<int>(boundary.size()) - 1; }
    /// ∂_d, or the appropriately sized zero matrix outside 0..dimension()+1.
    LaurentMatrix boundary_at(int d) const;
};

TwistedChainComplex cover_complex(const CellComplex& x, const IntegerCocycle& xi);
TwistedChainComplex cover_complex(const CellComplex& x, const IntegerCocycle& xi, const Gauge& gauge);

/// ker ∂_d / im ∂_{d+1} over Λ.
ModuleDecomposition twisted_homology(const TwistedChainComplex& c, int d);
ModuleDecomposition twisted_homology(const CellComplex& x, const IntegerCocycle& xi, int d);

/// Union of Supp over all degrees.
SuppSet supp(const CellComplex& x, const IntegerCocycle& xi);

/// Whether the class of an integer d-cycle (lifted to sheet 0 cell by cell)
/// lies in the Λ-torsion of H_d. Throws ValidationError if the lift is not a cycle.
bool movable_to_infinity(const CellComplex& x, const IntegerCocycle& xi, int d, const std::vector<long>& chain);

/// dim_Q H^p(x; a^ξ), computed from the cover complex specialized at τ = a.
Eigen::Index local_cohomology(const CellComplex& x, const IntegerCocycle& xi, const Rational& a, int p);

}  // namespace novflow
