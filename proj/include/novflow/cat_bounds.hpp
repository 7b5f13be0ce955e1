#pragma once

#include "novflow/cell_complex.hpp"
#include "novflow/hypotheses.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace novflow {

/// Space with a cohomology class, built from atoms by the rewrite constructors.
struct SpaceDescriptor {
    enum class Kind { Point, Line, Circle, Complex, WedgeCircle, ProductRn, AddBoundedExact, VectorBundle };

    Kind kind = Kind::Point;
    long xi = 0;        // circle: ξ on the circle; line: 1 for dx, 0 for the zero form; wedge: ξ on the new circle
    int rn = 0;         // product_rn: n
    std::string name;   // complex: reference name
    std::shared_ptr<const ComplexFile> complex;
    std::map<std::string, bool> obligations;  // user-attested side conditions
    std::shared_ptr<const SpaceDescriptor> child;

    static SpaceDescriptor point();
    static SpaceDescriptor line(bool dx);
    static SpaceDescriptor circle(long xi);
    static SpaceDescriptor complex_ref(std::string name, ComplexFile file);
    static SpaceDescriptor wedge_circle(SpaceDescriptor y, long xi);
    static SpaceDescriptor product_rn(SpaceDescriptor m, int n, bool f_bounded);
    static SpaceDescriptor add_bounded_exact(SpaceDescriptor x, bool f_bounded);
    static SpaceDescriptor vector_bundle(SpaceDescriptor m, bool line_integral_bounded);
};

std::string to_string(SpaceDescriptor::Kind k);

/// Complex references resolve to built-in names (circle, torus, torus-simplicial,
/// sphere-simplicial, circle-simplicial), a `file` relative to base_dir, or an inline `complex`.
SpaceDescriptor descriptor_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
SpaceDescriptor load_descriptor_file(const std::string& path);
nlohmann::json to_json(const SpaceDescriptor& d);

struct RuleStep {
    std::string rule;
    std::string statement;
    long lo = 0;
    std::optional<long> hi;
    std::string detail;
};

/// cat at the shifted convention cat(M, 0) = cat(M) + 1.
struct CatBound {
    long lo = 0;
    std::optional<long> hi;  // empty: unknown
    std::vector<RuleStep> provenance;
    std::vector<std::string> warnings;
};

nlohmann::json to_json(const CatBound& b);

/// Atoms only; throws ValidationError for constructors.
CatBound base_values(const SpaceDescriptor& atom);

/// Recursive rewrite. An unmet obligation widens the bound to [0, unknown] with a warning.
CatBound apply_rules(const SpaceDescriptor& d);

enum class VerdictKind { Predicted, NotApplicable, HypothesisUnverified };

std::string to_string(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::NotApplicable;
    long lo = 0;
    int zero_count = 0;
    bool hypothesis_positive = false;
    std::vector<std::string> reasons;
};

/// predicted: zeros < lo and the hypotheses look positive; not-applicable: zeros ≥ lo;
/// hypothesis-unverified: zeros < lo but the hypothesis estimates fail.
Verdict homoclinic_prediction(const CatBound& bound, int zero_count, const HypothesisReport& hypothesis);

nlohmann::json to_json(const Verdict& v);

}  // namespace novflow
