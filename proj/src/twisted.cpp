#include "novflow/twisted.hpp"

#include <deque>
#include <numeric>

namespace novflow {

using Index = Eigen::Index;

namespace {

void check_inputs(const CellComplex& x, const IntegerCocycle& xi) {
    if (x.cell_count(0) == 0) throw ValidationError("complex has no vertices");
    const ValidationReport report = validate(x);
    if (!report.ok) throw ValidationError("invalid complex: " + report.message);
    if (!is_cocycle(x, xi)) throw ValidationError("cocycle condition fails on some 2-cell");
}

// Heights by BFS over tree edges from vertex 0.
Gauge finish_gauge(const CellComplex& x, const IntegerCocycle& xi, std::vector<bool> tree) {
    const Index nv = x.cell_count(0), ne = x.cell_count(1);
    std::vector<std::vector<Index>> adjacent(static_cast<size_t>(nv));
    std::vector<std::pair<Index, Index>> ends(static_cast<size_t>(ne));
    for (Index e = 0; e < ne; ++e) {
        ends[static_cast<size_t>(e)] = x.endpoints(e);
        if (!tree[static_cast<size_t>(e)]) continue;
        adjacent[static_cast<size_t>(ends[e].first)].push_back(e);
        adjacent[static_cast<size_t>(ends[e].second)].push_back(e);
    }
    Gauge g;
    g.vertex_height.assign(static_cast<size_t>(nv), 0);
    std::vector<bool> seen(static_cast<size_t>(nv), false);
    std::deque<Index> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index e : adjacent[static_cast<size_t>(v)]) {
            auto [tail, head] = ends[static_cast<size_t>(e)];
            const long value = xi.values[static_cast<size_t>(e)];
            if (tail == v && !seen[static_cast<size_t>(head)]) {
                g.vertex_height[static_cast<size_t>(head)] = g.vertex_height[static_cast<size_t>(v)] + value;
                seen[static_cast<size_t>(head)] = true;
                queue.push_back(head);
            } else if (head == v && !seen[static_cast<size_t>(tail)]) {
                g.vertex_height[static_cast<size_t>(tail)] = g.vertex_height[static_cast<size_t>(v)] - value;
                seen[static_cast<size_t>(tail)] = true;
                queue.push_back(tail);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw ValidationError("complex is disconnected; the gauge needs a connected 1-skeleton");
    g.edge_twist.resize(static_cast<size_t>(ne));
    for (Index e = 0; e < ne; ++e) {
        auto [tail, head] = ends[static_cast<size_t>(e)];
        g.edge_twist[static_cast<size_t>(e)] = g.vertex_height[static_cast<size_t>(tail)] +
                                               xi.values[static_cast<size_t>(e)] -
                                               g.vertex_height[static_cast<size_t>(head)];
    }
    g.tree_edge = std::move(tree);
    return g;
}

Index find_root(std::vector<Index>& parent, Index v) {
    while (parent[static_cast<size_t>(v)] != v) {
        parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
        v = parent[static_cast<size_t>(v)];
    }
    return v;
}

bool all_twists_zero(const Gauge& g) {
    return std::all_of(g.edge_twist.begin(), g.edge_twist.end(), [](long w) { return w == 0; });
}

LaurentMatrix lift_constant(const IntegerMatrix& m) {
    LaurentMatrix out = laurent_zero(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) out(i, j) = LaurentPoly(Rational(m(i, j)));
    return out;
}

// Walks the attaching word of a 2-cell, tracking the sheet. Returns false if
// the word is not an edge path.
bool walk_word(const CellComplex& x, const Gauge& g, Index cell, LaurentMatrix& out) {
    long sheet = 0;
    std::optional<Index> start, current;
    for (const auto& inc : x.incidences(2, cell)) {
        auto [tail, head] = x.endpoints(inc.face);
        const long w = g.edge_twist[static_cast<size_t>(inc.face)];
        const long reps = std::labs(inc.coefficient);
        for (long k = 0; k < reps; ++k) {
            if (inc.coefficient > 0) {
                if (current && *current != tail) return false;
                if (!start) start = tail;
                out(inc.face, cell) += LaurentPoly::tau(sheet);
                sheet += w;
                current = head;
            } else {
                if (current && *current != head) return false;
                if (!start) start = head;
                sheet -= w;
                out(inc.face, cell) -= LaurentPoly::tau(sheet);
                current = tail;
            }
        }
    }
    if (start && (*current != *start || sheet != 0)) return false;
    return true;
}

}  // namespace

Gauge make_gauge(const CellComplex& x, const IntegerCocycle& xi) {
    const Index nv = x.cell_count(0), ne = x.cell_count(1);
    std::vector<std::vector<Index>> adjacent(static_cast<size_t>(nv));
    for (Index e = 0; e < ne; ++e) {
        auto [tail, head] = x.endpoints(e);
        adjacent[static_cast<size_t>(tail)].push_back(e);
        if (head != tail) adjacent[static_cast<size_t>(head)].push_back(e);
    }
    std::vector<bool> tree(static_cast<size_t>(ne), false), seen(static_cast<size_t>(nv), false);
    std::deque<Index> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index e : adjacent[static_cast<size_t>(v)]) {
            auto [tail, head] = x.endpoints(e);
            const Index other = (tail == v) ? head : tail;
            if (seen[static_cast<size_t>(other)]) continue;
            seen[static_cast<size_t>(other)] = true;
            tree[static_cast<size_t>(e)] = true;
            queue.push_back(other);
        }
    }
    return finish_gauge(x, xi, std::move(tree));
}

Gauge make_gauge(const CellComplex& x, const IntegerCocycle& xi, const std::vector<Index>& edge_order) {
    const Index nv = x.cell_count(0), ne = x.cell_count(1);
    std::vector<Index> parent(static_cast<size_t>(nv));
    std::iota(parent.begin(), parent.end(), Index{0});
    std::vector<bool> tree(static_cast<size_t>(ne), false);
    for (Index e : edge_order) {
        if (e < 0 || e >= ne) throw ValidationError("edge order refers to a missing edge");
        auto [tail, head] = x.endpoints(e);
        const Index a = find_root(parent, tail), b = find_root(parent, head);
        if (a == b) continue;
        parent[static_cast<size_t>(a)] = b;
        tree[static_cast<size_t>(e)] = true;
    }
    return finish_gauge(x, xi, std::move(tree));
}

LaurentMatrix TwistedChainComplex::boundary_at(int d) const {
    if (d >= 0 && d <= dimension()) return boundary[static_cast<size_t>(d)];
    if (d == dimension() + 1) return laurent_zero(boundary.back().cols(), 0);
    return laurent_zero(0, 0);
}

TwistedChainComplex cover_complex(const CellComplex& x, const IntegerCocycle& xi) {
    check_inputs(x, xi);
    return cover_complex(x, xi, make_gauge(x, xi));
}

TwistedChainComplex cover_complex(const CellComplex& x, const IntegerCocycle& xi, const Gauge& gauge) {
    check_inputs(x, xi);
    TwistedChainComplex out;
    out.gauge = gauge;
    out.boundary.push_back(laurent_zero(0, x.cell_count(0)));
    const bool untwisted = all_twists_zero(gauge);
    for (int d = 1; d <= x.dimension(); ++d) {
        LaurentMatrix m = laurent_zero(x.cell_count(d - 1), x.cell_count(d));
        if (untwisted) {
            m = lift_constant(x.boundary_matrix(d));
        } else if (d == 1) {
            for (Index e = 0; e < x.cell_count(1); ++e) {
                auto [tail, head] = x.endpoints(e);
                m(head, e) += LaurentPoly::tau(gauge.edge_twist[static_cast<size_t>(e)]);
                m(tail, e) -= LaurentPoly(1);
            }
        } else if (x.is_simplicial()) {
            for (Index c = 0; c < x.cell_count(d); ++c) {
                const Vertices& s = x.simplex(d, c);
                const Index edge = *x.find_simplex({s[0], s[1]});
                for (size_t i = 0; i < s.size(); ++i) {
                    Vertices face = s;
                    face.erase(face.begin() + static_cast<long>(i));
                    const Index f = *x.find_simplex(face);
                    if (i == 0)
                        m(f, c) += LaurentPoly::tau(gauge.edge_twist[static_cast<size_t>(edge)]);
                    else
                        m(f, c) += LaurentPoly(i % 2 == 0 ? 1 : -1);
                }
            }
        } else if (d == 2) {
            for (Index c = 0; c < x.cell_count(2); ++c) {
                LaurentMatrix column = laurent_zero(m.rows(), m.cols());
                if (!walk_word(x, gauge, c, column))
                    throw ValidationError("2-cell " + std::to_string(c) +
                                          " attaching word is not a closed edge path; cannot lift it");
                m.col(c) = column.col(c);
            }
        } else {
            throw ValidationError("twisted cells of dimension >= 3 need simplicial mode");
        }
        out.boundary.push_back(std::move(m));
    }
    return out;
}

ModuleDecomposition twisted_homology(const TwistedChainComplex& c, int d) {
    if (d < 0 || d > c.dimension()) return {};
    const SmithForm snf = smith_normal_form(c.boundary_at(d));
    const LaurentMatrix next = c.boundary_at(d + 1);
    const Index n = snf.V.cols(), r = snf.rank;
    // Λ-basis of ker ∂_d: columns r.. of V. Coordinates of im ∂_{d+1} in it:
    const LaurentMatrix coords = snf.V_inv * next;
    const LaurentMatrix relations = coords.bottomRows(n - r).transpose();
    return module_decompose(relations);
}

ModuleDecomposition twisted_homology(const CellComplex& x, const IntegerCocycle& xi, int d) {
    return twisted_homology(cover_complex(x, xi), d);
}

SuppSet supp(const CellComplex& x, const IntegerCocycle& xi) {
    const TwistedChainComplex c = cover_complex(x, xi);
    SuppSet out;
    for (int d = 0; d <= c.dimension(); ++d) out = supp_union(out, supp_of(twisted_homology(c, d)));
    return out;
}

bool movable_to_infinity(const CellComplex& x, const IntegerCocycle& xi, int d, const std::vector<long>& chain) {
    if (d < 0 || d > x.dimension()) throw ValidationError("degree out of range");
    if (static_cast<Index>(chain.size()) != x.cell_count(d))
        throw ValidationError("chain length does not match the number of " + std::to_string(d) + "-cells");
    const TwistedChainComplex c = cover_complex(x, xi);
    LaurentMatrix z = laurent_zero(x.cell_count(d), 1);
    for (Index i = 0; i < z.rows(); ++i)
        if (chain[static_cast<size_t>(i)] != 0) z(i, 0) = LaurentPoly(Rational(chain[static_cast<size_t>(i)]));
    const LaurentMatrix image = c.boundary_at(d) * z;
    for (Index i = 0; i < image.rows(); ++i)
        if (!image(i, 0).is_zero()) throw ValidationError("chain is not a cycle in the cover complex");
    const LaurentMatrix next = c.boundary_at(d + 1);
    LaurentMatrix augmented(next.rows(), next.cols() + 1);
    augmented << next, z;
    return laurent_rank(augmented) == laurent_rank(next);
}

Eigen::Index local_cohomology(const CellComplex& x, const IntegerCocycle& xi, const Rational& a, int p) {
    if (a == 0) throw ValidationError("local system parameter must be nonzero");
    if (p < 0 || p > x.dimension()) return 0;
    const TwistedChainComplex c = cover_complex(x, xi);
    auto rank_at = [&](int d) -> Index {
        const LaurentMatrix m = c.boundary_at(d);
        return m.size() == 0 ? 0 : exact_rank(evaluate_at(m, a));
    };
    return x.cell_count(p) - rank_at(p + 1) - rank_at(p);
}

}  // namespace novflow
