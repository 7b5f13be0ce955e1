#include "novflow/cell_complex.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace novflow {

using Index = Eigen::Index;

CellComplex::CellComplex(std::vector<Index> counts) : counts_(std::move(counts)) {
    boundary_.resize(counts_.size());
    for (size_t d = 0; d < counts_.size(); ++d) {
        if (counts_[d] < 0) throw ValidationError("negative cell count in dimension " + std::to_string(d));
        boundary_[d].resize(static_cast<size_t>(counts_[d]));
    }
}

CellComplex CellComplex::from_simplices(const std::vector<Vertices>& facets) {
    std::vector<std::set<Vertices>> by_dim;
    std::set<Index> labels;
    for (auto facet : facets) {
        std::sort(facet.begin(), facet.end());
        if (facet.empty() || std::adjacent_find(facet.begin(), facet.end()) != facet.end())
            throw ValidationError("simplex with repeated or missing vertices");
        const size_t n = facet.size();
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            Vertices face;
            for (size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) face.push_back(facet[i]);
            if (by_dim.size() < face.size()) by_dim.resize(face.size());
            by_dim[face.size() - 1].insert(face);
            if (face.size() == 1) labels.insert(face[0]);
        }
    }
    // Relabel vertices to 0..n-1 in increasing order.
    std::map<Index, Index> relabel;
    for (Index v : labels) relabel.emplace(v, static_cast<Index>(relabel.size()));
    std::vector<std::vector<Vertices>> simplices(by_dim.size());
    for (size_t d = 0; d < by_dim.size(); ++d)
        for (const auto& s : by_dim[d]) {
            Vertices mapped;
            for (Index v : s) mapped.push_back(relabel.at(v));
            simplices[d].push_back(mapped);
        }
    std::vector<Index> counts;
    for (const auto& level : simplices) counts.push_back(static_cast<Index>(level.size()));
    CellComplex out(counts);
    out.set_simplices(std::move(simplices));
    for (int d = 1; d <= out.dimension(); ++d)
        for (Index c = 0; c < out.cell_count(d); ++c) {
            const Vertices& s = out.simplex(d, c);
            for (size_t i = 0; i < s.size(); ++i) {
                Vertices face = s;
                face.erase(face.begin() + static_cast<long>(i));
                out.add_incidence(d, c, *out.find_simplex(face), (i % 2 == 0) ? 1 : -1);
            }
        }
    return out;
}

void CellComplex::set_simplices(std::vector<std::vector<Vertices>> simplices) {
    simplices_ = std::move(simplices);
    simplex_index_.clear();
    for (const auto& level : simplices_)
        for (size_t c = 0; c < level.size(); ++c) simplex_index_.emplace(level[c], static_cast<Index>(c));
}

Index CellComplex::cell_count(int d) const {
    if (d < 0 || d > dimension()) return 0;
    return counts_[static_cast<size_t>(d)];
}

void CellComplex::add_incidence(int d, Index cell, Index face, long coefficient) {
    if (d < 1 || d > dimension()) throw ValidationError("incidence in invalid dimension " + std::to_string(d));
    if (cell < 0 || cell >= cell_count(d)) throw ValidationError("incidence cell index out of range");
    if (face < 0 || face >= cell_count(d - 1)) throw ValidationError("incidence face index out of range");
    boundary_[static_cast<size_t>(d)][static_cast<size_t>(cell)].push_back({face, coefficient});
}

const std::vector<Incidence>& CellComplex::incidences(int d, Index cell) const {
    return boundary_.at(static_cast<size_t>(d)).at(static_cast<size_t>(cell));
}

IntegerMatrix CellComplex::boundary_matrix(int d) const {
    IntegerMatrix m = IntegerMatrix::Zero(cell_count(d - 1), cell_count(d));
    if (d < 1 || d > dimension()) return m;
    for (Index c = 0; c < cell_count(d); ++c)
        for (const auto& inc : incidences(d, c)) m(inc.face, c) += inc.coefficient;
    return m;
}

const Vertices& CellComplex::simplex(int d, Index cell) const {
    if (!is_simplicial()) throw ValidationError("complex has no simplicial structure");
    return simplices_.at(static_cast<size_t>(d)).at(static_cast<size_t>(cell));
}

std::optional<Index> CellComplex::find_simplex(const Vertices& vertices) const {
    auto it = simplex_index_.find(vertices);
    if (it == simplex_index_.end()) return std::nullopt;
    return it->second;
}

std::pair<Index, Index> CellComplex::endpoints(Index edge) const {
    if (edge < 0 || edge >= cell_count(1)) throw ValidationError("edge index out of range");
    std::optional<Index> head, tail;
    long net = 0;
    for (const auto& inc : incidences(1, edge)) {
        net += inc.coefficient;
        if (inc.coefficient == 1 && !head) head = inc.face;
        else if (inc.coefficient == -1 && !tail) tail = inc.face;
        else throw ValidationError("1-cell " + std::to_string(edge) + " has a malformed boundary");
    }
    if (!head && !tail) {
        if (cell_count(0) == 1) return {0, 0};
        throw ValidationError("1-cell " + std::to_string(edge) + " has no boundary in a multi-vertex complex");
    }
    if (!head || !tail || net != 0) throw ValidationError("1-cell " + std::to_string(edge) + " has a malformed boundary");
    return {*tail, *head};
}

long CellComplex::euler_characteristic() const {
    long chi = 0;
    for (int d = 0; d <= dimension(); ++d) chi += (d % 2 == 0 ? 1 : -1) * cell_count(d);
    return chi;
}

bool IntegerCocycle::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](long v) { return v == 0; });
}

IntegerCocycle zero_cocycle(const CellComplex& complex) {
    return IntegerCocycle{std::vector<long>(static_cast<size_t>(complex.cell_count(1)), 0)};
}

ValidationReport validate(const CellComplex& complex) {
    ValidationReport report;
    auto fail = [&](int d, std::string message) {
        report.ok = false;
        report.dim_high = d;
        report.dim_low = d - 1;
        report.message = std::move(message);
        return report;
    };
    for (int d = 2; d <= complex.dimension(); ++d) {
        const IntegerMatrix composed = complex.boundary_matrix(d - 1) * complex.boundary_matrix(d);
        if (!composed.isZero()) {
            Index r = 0, c = 0;
            composed.cwiseAbs().maxCoeff(&r, &c);
            std::ostringstream os;
            os << "boundary of boundary is nonzero: " << d << "-cell " << c << " hits " << (d - 2) << "-cell " << r;
            return fail(d, os.str());
        }
    }
    if (complex.is_simplicial()) {
        for (int d = 1; d <= complex.dimension(); ++d)
            for (Index c = 0; c < complex.cell_count(d); ++c) {
                const Vertices& s = complex.simplex(d, c);
                if (static_cast<int>(s.size()) != d + 1 || !std::is_sorted(s.begin(), s.end()) ||
                    std::adjacent_find(s.begin(), s.end()) != s.end())
                    return fail(d, "simplex " + std::to_string(c) + " in dimension " + std::to_string(d) +
                                       " does not have increasing vertices");
                Eigen::Matrix<long, Eigen::Dynamic, 1> expected =
                    Eigen::Matrix<long, Eigen::Dynamic, 1>::Zero(complex.cell_count(d - 1));
                for (size_t i = 0; i < s.size(); ++i) {
                    Vertices face = s;
                    face.erase(face.begin() + static_cast<long>(i));
                    auto idx = complex.find_simplex(face);
                    if (!idx)
                        return fail(d, "face of simplex " + std::to_string(c) + " in dimension " +
                                           std::to_string(d) + " is missing");
                    expected(*idx) += (i % 2 == 0) ? 1 : -1;
                }
                if (expected != complex.boundary_matrix(d).col(c))
                    return fail(d, "incidences of simplex " + std::to_string(c) + " in dimension " +
                                       std::to_string(d) + " disagree with vertex deletion");
            }
    }
    return report;
}

bool is_cocycle(const CellComplex& complex, const IntegerCocycle& xi) {
    if (static_cast<Index>(xi.values.size()) != complex.cell_count(1)) return false;
    for (Index c = 0; c < complex.cell_count(2); ++c) {
        long sum = 0;
        for (const auto& inc : complex.incidences(2, c)) sum += inc.coefficient * xi.values[static_cast<size_t>(inc.face)];
        if (sum != 0) return false;
    }
    return true;
}

CellComplex complex_from_json(const nlohmann::json& j) {
    if (!j.contains("cells") || !j["cells"].is_array()) throw ValidationError("complex file: missing `cells` array");
    std::vector<Index> counts;
    for (const auto& c : j["cells"]) {
        if (!c.is_number_integer() || c.get<long>() < 0)
            throw ValidationError("complex file: `cells` must hold non-negative integers");
        counts.push_back(c.get<Index>());
    }
    std::vector<Index> offsets(counts.size() + 1, 0);
    for (size_t d = 0; d < counts.size(); ++d) offsets[d + 1] = offsets[d] + counts[d];
    const Index total = offsets.back();
    auto locate = [&](Index global) -> std::pair<int, Index> {
        if (global < 0 || global >= total) throw ValidationError("cell id " + std::to_string(global) + " out of range");
        int d = 0;
        while (offsets[static_cast<size_t>(d) + 1] <= global) ++d;
        return {d, global - offsets[static_cast<size_t>(d)]};
    };

    CellComplex out(counts);
    const bool has_boundary = j.contains("boundary") && !j["boundary"].empty();
    if (j.contains("simplices")) {
        const auto& sj = j["simplices"];
        if (!sj.is_array() || static_cast<Index>(sj.size()) != total)
            throw ValidationError("complex file: `simplices` must list one vertex list per cell");
        std::vector<std::vector<Vertices>> simplices(counts.size());
        for (Index g = 0; g < total; ++g) {
            auto [d, idx] = locate(g);
            Vertices vs = sj[static_cast<size_t>(g)].get<Vertices>();
            if (static_cast<int>(vs.size()) != d + 1)
                throw ValidationError("simplices[" + std::to_string(g) + "]: expected " + std::to_string(d + 1) +
                                      " vertices");
            simplices[static_cast<size_t>(d)].push_back(std::move(vs));
        }
        out.set_simplices(std::move(simplices));
        if (!has_boundary) {
            for (int d = 1; d <= out.dimension(); ++d)
                for (Index c = 0; c < out.cell_count(d); ++c) {
                    const Vertices& s = out.simplex(d, c);
                    for (size_t i = 0; i < s.size(); ++i) {
                        Vertices face = s;
                        face.erase(face.begin() + static_cast<long>(i));
                        auto idx = out.find_simplex(face);
                        if (!idx)
                            throw ValidationError("simplices: face of cell " + std::to_string(offsets[d] + c) +
                                                  " is not listed");
                        out.add_incidence(d, c, *idx, (i % 2 == 0) ? 1 : -1);
                    }
                }
        }
    }
    if (has_boundary) {
        size_t k = 0;
        for (const auto& entry : j["boundary"]) {
            const std::string where = "boundary[" + std::to_string(k++) + "]";
            if (!entry.is_array() || entry.size() != 3) throw ValidationError(where + ": expected [cell, face, coefficient]");
            auto [d, cell] = locate(entry[0].get<Index>());
            auto [fd, face] = locate(entry[1].get<Index>());
            if (fd != d - 1) throw ValidationError(where + ": face is not of dimension one less than the cell");
            out.add_incidence(d, cell, face, entry[2].get<long>());
        }
    }
    return out;
}

ComplexFile complex_file_from_json(const nlohmann::json& j) {
    ComplexFile f;
    f.complex = complex_from_json(j);
    f.name = j.value("name", std::string{});
    if (j.contains("cocycle")) {
        f.cocycle.values = j["cocycle"].get<std::vector<long>>();
        if (static_cast<Index>(f.cocycle.values.size()) != f.complex.cell_count(1))
            throw ValidationError("complex file: `cocycle` must hold one integer per 1-cell");
    } else {
        f.cocycle = zero_cocycle(f.complex);
    }
    return f;
}

ComplexFile load_complex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open complex file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min(text.size(), static_cast<size_t>(e.byte));
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ValidationError(path + ":" + std::to_string(line) + ": " + e.what());
    }
    try {
        return complex_file_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

nlohmann::json complex_to_json(const CellComplex& complex, const IntegerCocycle& xi) {
    nlohmann::json j;
    j["cells"] = complex.counts();
    std::vector<Index> offsets(complex.counts().size() + 1, 0);
    for (size_t d = 0; d < complex.counts().size(); ++d) offsets[d + 1] = offsets[d] + complex.counts()[d];
    auto boundary = nlohmann::json::array();
    for (int d = 1; d <= complex.dimension(); ++d)
        for (Index c = 0; c < complex.cell_count(d); ++c)
            for (const auto& inc : complex.incidences(d, c))
                boundary.push_back({offsets[static_cast<size_t>(d)] + c, offsets[static_cast<size_t>(d) - 1] + inc.face,
                                    inc.coefficient});
    j["boundary"] = boundary;
    if (complex.is_simplicial()) {
        auto simplices = nlohmann::json::array();
        for (int d = 0; d <= complex.dimension(); ++d)
            for (Index c = 0; c < complex.cell_count(d); ++c) simplices.push_back(complex.simplex(d, c));
        j["simplices"] = simplices;
    }
    j["cocycle"] = xi.values;
    return j;
}

namespace complexes {

ComplexFile circle(int edges, long winding) {
    if (edges < 1) throw ValidationError("circle needs at least one edge");
    CellComplex c({edges, edges});
    for (Index e = 0; e < edges; ++e) {
        c.add_incidence(1, e, (e + 1) % edges, 1);
        c.add_incidence(1, e, e, -1);
    }
    IntegerCocycle xi = zero_cocycle(c);
    xi.values[0] = winding;
    return {c, xi, "circle"};
}

ComplexFile torus_cw(long xi_a, long xi_b) {
    CellComplex c({1, 2, 1});
    for (Index e = 0; e < 2; ++e) {
        c.add_incidence(1, e, 0, 1);
        c.add_incidence(1, e, 0, -1);
    }
    c.add_incidence(2, 0, 0, 1);
    c.add_incidence(2, 0, 1, 1);
    c.add_incidence(2, 0, 0, -1);
    c.add_incidence(2, 0, 1, -1);
    return {c, IntegerCocycle{{xi_a, xi_b}}, "torus"};
}

ComplexFile wedge_of_circles(const std::vector<long>& windings) {
    const auto k = static_cast<Index>(windings.size());
    CellComplex c({1, k});
    for (Index e = 0; e < k; ++e) {
        c.add_incidence(1, e, 0, 1);
        c.add_incidence(1, e, 0, -1);
    }
    return {c, IntegerCocycle{windings}, "wedge"};
}

ComplexFile torus_simplicial(long xi_a, long xi_b) {
    auto id = [](int i, int j) -> Index { return 3 * ((i % 3 + 3) % 3) + ((j % 3 + 3) % 3); };
    std::vector<Vertices> facets;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            facets.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            facets.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
        }
    CellComplex c = CellComplex::from_simplices(facets);
    IntegerCocycle xi = zero_cocycle(c);
    auto crossing = [](Index from, Index to) -> long {
        const Index step = ((to - from) % 3 + 3) % 3;
        if (step == 1 && from == 2) return 1;
        if (step == 2 && from == 0) return -1;
        return 0;
    };
    for (Index e = 0; e < c.cell_count(1); ++e) {
        const Vertices& s = c.simplex(1, e);
        const Index u = s[0], v = s[1];
        xi.values[static_cast<size_t>(e)] = xi_a * crossing(u / 3, v / 3) + xi_b * crossing(u % 3, v % 3);
    }
    return {c, xi, "torus"};
}

ComplexFile sphere_simplicial() {
    CellComplex c = CellComplex::from_simplices({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    return {c, zero_cocycle(c), "sphere"};
}

ComplexFile circle_simplicial(long winding) {
    CellComplex c = CellComplex::from_simplices({{0, 1}, {1, 2}, {0, 2}});
    IntegerCocycle xi = zero_cocycle(c);
    xi.values[static_cast<size_t>(*c.find_simplex({0, 2}))] = -winding;
    return {c, xi, "circle"};
}

}  // namespace complexes

}  // namespace novflow
