#pragma once

#include "novflow/errors.hpp"

#include <Eigen/Dense>
#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace novflow {

using IntegerMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;
using Vertices = std::vector<Eigen::Index>;

struct Incidence {
    Eigen::Index face;  // index within dimension d-1
    long coefficient;
};

/// Finite CW complex. For 2-cells the incidence list is read as an ordered
/// attaching word (edge, ±k); in simplicial mode every cell also carries its
/// increasing vertex list and the boundary follows from vertex deletion.
class CellComplex {
public:
    CellComplex() = default;
    explicit CellComplex(std::vector<Eigen::Index> counts);

    /// Closure of the given simplices (vertex lists are sorted on entry).
    static CellComplex from_simplices(const std::vector<Vertices>& facets);

    int dimension() const { return static_cast<int>(counts_.size()) - 1; }
    Eigen::Index cell_count(int d) const;
    const std::vector<Eigen::Index>& counts() const { return counts_; }

    void add_incidence(int d, Eigen::Index cell, Eigen::Index face, long coefficient);
    const std::vector<Incidence>& incidences(int d, Eigen::Index cell) const;

    /// Integer boundary ∂_d : C_d → C_{d-1} (rows: (d-1)-cells).
    IntegerMatrix boundary_matrix(int d) const;

    bool is_simplicial() const { return !simplices_.empty(); }
    const Vertices& simplex(int d, Eigen::Index cell) const;
    std::optional<Eigen::Index> find_simplex(const Vertices& vertices) const;

    /// Endpoints (tail, head) of a 1-cell.
    std::pair<Eigen::Index, Eigen::Index> endpoints(Eigen::Index edge) const;

    long euler_characteristic() const;

private:
    friend CellComplex complex_from_json(const nlohmann::json&);
    void set_simplices(std::vector<std::vector<Vertices>> simplices);

    std::vector<Eigen::Index> counts_;
    std::vector<std::vector<std::vector<Incidence>>> boundary_;  // [d][cell]
    std::vector<std::vector<Vertices>> simplices_;               // [d][cell]
    std::map<Vertices, Eigen::Index> simplex_index_;
};

/// Integer value per 1-cell.
struct IntegerCocycle {
    std::vector<long> values;

    bool is_zero() const;
};

IntegerCocycle zero_cocycle(const CellComplex& complex);

struct ValidationReport {
    bool ok = true;
    int dim_high = -1;  // failing pair (d, d-1)
    int dim_low = -1;
    std::string message;
};

/// Checks ∂∂ = 0 and, in simplicial mode, that faces agree with vertex deletion.
ValidationReport validate(const CellComplex& complex);

/// Signed sum of cocycle values over each 2-cell boundary vanishes.
bool is_cocycle(const CellComplex& complex, const IntegerCocycle& xi);

/// Complex file: `cells` (counts per dimension), `boundary` ([cell, face, coefficient]
/// with global cell ids numbered dimension by dimension), optional `simplices`
/// (one vertex list per cell), optional `cocycle` (one integer per 1-cell).
struct ComplexFile {
    CellComplex complex;
    IntegerCocycle cocycle;
    std::string name;
};

CellComplex complex_from_json(const nlohmann::json& j);
ComplexFile complex_file_from_json(const nlohmann::json& j);
ComplexFile load_complex_file(const std::string& path);
nlohmann::json complex_to_json(const CellComplex& complex, const IntegerCocycle& xi);

namespace complexes {

/// Circle with `edges` vertices and edges; cocycle value `winding` on the first edge.
ComplexFile circle(int edges = 1, long winding = 1);
/// One vertex, edges a and b, one 2-cell attached along a b a⁻¹ b⁻¹.
ComplexFile torus_cw(long xi_a = 1, long xi_b = 0);
/// Wedge of circles on a single vertex.
ComplexFile wedge_of_circles(const std::vector<long>& windings);
/// 3x3 grid torus with 18 triangles; cocycle counts seam crossings (xi_a along
/// the first grid axis, xi_b along the second).
ComplexFile torus_simplicial(long xi_a = 0, long xi_b = 0);
/// Boundary of the tetrahedron.
ComplexFile sphere_simplicial();
/// Boundary of a triangle; cocycle value on the edge [0,2] is -winding.
ComplexFile circle_simplicial(long winding = 1);

}  // namespace complexes

}  // namespace novflow
