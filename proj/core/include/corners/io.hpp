#ifndef CORNERS_IO_HPP
#define CORNERS_IO_HPP

#include <string>

#include "corners/complex.hpp"
#include "corners/dual.hpp"
#include "corners/geometry.hpp"
#include "corners/localization.hpp"
#include "corners/operators.hpp"
#include "corners/symbols.hpp"

namespace corners {

/// All interchange formats are JSON with a "format": 1 field. Parse problems
/// throw std::invalid_argument with the offending location.

std::string complex_to_json(const CornerComplex& complex);
CornerComplex complex_from_json(const std::string& text);

/// Polytope input {dim, vertices, facets: [vertex index lists]}; builds the
/// face lattice through from_polytope.
CornerComplex polytope_from_json(const std::string& text);

std::string dual_to_json(const DualComplex& dual, const CornerComplex& source);

std::string multiplier_to_json(const MultiplierSymbol& symbol);
MultiplierSymbol multiplier_from_json(const std::string& text);

/// Translation-invariant operators travel as circulant generators: the first
/// block-row of the matrix.
std::string operator_to_json(const TranslationInvariantOp& op);
TranslationInvariantOp operator_from_json(const std::string& text);

/// Chart atlas {face, eps, charts: [{model, bump, transition_maps}]}.
struct AtlasFile {
    FaceId face = 0;
    double eps = 0.25;
    std::vector<Chart> charts;
    PartitionOfUnity partition;
};
AtlasFile atlas_from_json(const std::string& text);

/// Operator family input for the localization checks: a grid space, a
/// parameter grid, and either diagonal multiplication data or explicit
/// matrices; optional local-representative centers.
struct FamilyFile {
    GridSpace space;
    ParamFamily family;
    std::vector<int> centers;
    std::vector<ParamFamily> reps;
    double hood_radius_scale = 1.0; ///< U(eps, x) = ball(x, scale * eps)
    double eps = 0.1;
};
FamilyFile family_from_json(const std::string& text);

std::string tuple_to_json(const SymbolTuple& tuple);
SymbolTuple tuple_from_json(const std::string& text);

} // namespace corners

#endif
