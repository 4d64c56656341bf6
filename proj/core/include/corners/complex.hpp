#ifndef CORNERS_COMPLEX_HPP
#define CORNERS_COMPLEX_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corners/permutation.hpp"

namespace corners {

/// Index of a face within a CornerComplex. Index 0 always denotes the
/// interior face (codimension 0).
using FaceId = int;

constexpr FaceId kInteriorFace = 0;

struct CornerFace {
    FaceId id = 0;
    int codim = 0;
    int dim = 0;
    /// Structure group of the normal bundle: subgroup of the symmetric group
    /// on `codim` letters, stored as the group generated by the supplied
    /// monodromy generators (the minimal faithful choice).
    PermutationGroup structure_group = PermutationGroup::trivial(0);
    std::string label;
};

/// One immersion i_{jl} of a local face of the closed face of `parent` onto
/// the face `target` of the ambient complex.
struct CoveringData {
    FaceId parent = 0;
    /// Index of the local face in the enumeration used by closed_face(parent):
    /// 0 is the interior of the closed face, so actual local faces start at 1.
    int local_face = 0;
    FaceId target = 0;
    int sheets = 1;
    /// Monodromy generators on `sheets` letters.
    std::vector<Permutation> monodromy;
    /// Injection of the parent's normal slots into the target's normal frame
    /// (parent_slots[i] = slot of the parent's i-th defining direction inside
    /// the target's frame). Empty means the first-fit default [0, .., d_p-1].
    std::vector<int> parent_slots;
};

/// Combinatorial face lattice of a manifold with corners: faces with
/// codimensions and normal structure groups, the adjacency order, and the
/// covering records of closed-face immersions.
struct CornerComplex {
    int ambient_dim = 0;
    std::vector<CornerFace> faces;
    /// (j, r) means the closed face of j contains r in its boundary image,
    /// written j > r; codim strictly increases along pairs.
    std::set<std::pair<FaceId, FaceId>> adjacency;
    std::vector<CoveringData> coverings;

    int face_count() const { return static_cast<int>(faces.size()); }
    bool valid_id(FaceId j) const { return j >= 0 && j < face_count(); }
    int codim(FaceId j) const { return faces.at(j).codim; }
    bool adjacent(FaceId j, FaceId r) const { return adjacency.count({j, r}) > 0; }

    std::vector<FaceId> faces_of_codim(int c) const {
        std::vector<FaceId> out;
        for (const auto& f : faces)
            if (f.codim == c) out.push_back(f.id);
        return out;
    }

    /// Covering records with the given parent, in stored order.
    std::vector<const CoveringData*> coverings_of(FaceId parent) const {
        std::vector<const CoveringData*> out;
        for (const auto& c : coverings)
            if (c.parent == parent) out.push_back(&c);
        return out;
    }

    /// Resolved parent_slots of a record (first-fit default when unset).
    static std::vector<int> resolved_slots(const CoveringData& c, int parent_codim) {
        if (!c.parent_slots.empty()) return c.parent_slots;
        std::vector<int> s(parent_codim);
        for (int i = 0; i < parent_codim; ++i) s[i] = i;
        return s;
    }
};

struct Violation {
    std::string invariant;
    std::string detail;
};

/// Checks every CornerComplex invariant; the report is empty iff the complex
/// is valid. Violations are data, not failures.
std::vector<Violation> validate(const CornerComplex& complex);

int depth(const CornerComplex& complex);

/// Builds the face lattice of a simple polytope from its vertex-facet
/// incidence matrix (rows = vertices, columns = facets). Faces are the
/// nonempty intersections of facet subsets; all structure groups are trivial
/// and all coverings 1-sheeted. Throws std::invalid_argument naming the
/// offending vertex if the polytope is not simple.
CornerComplex from_polytope(const std::vector<std::vector<bool>>& vertex_facet_incidence,
                            int dim);

/// Recovers the vertex-facet incidence matrix of a polytope-like lattice
/// (vertices = maximal-codim faces, facets = hyperfaces, incidence =
/// adjacency). Inverse of from_polytope on simple-polytope lattices.
std::vector<std::vector<bool>> incidence_of_lattice(const CornerComplex& complex);

/// Face lattice of the closed face of j, together with the covering data back
/// into the ambient complex.
struct ClosedFace {
    CornerComplex complex;              ///< lattice of the closed face, ambient_dim = n - d_j
    FaceId source = 0;                  ///< j in the parent complex
    std::vector<FaceId> target_in_parent; ///< per local face: the ambient face it maps onto
    std::vector<int> sheets_to_parent;    ///< per local face: sheets of that immersion
};

/// The face lattice of the closed face of j as a manifold with corners of
/// dimension n - d_j. Throws for j = interior.
ClosedFace closed_face(const CornerComplex& complex, FaceId j);

/// Principal structure-group covering of the closed face of j trivializing
/// its normal bundle.
struct TrivializingCover {
    FaceId base_face = 0;
    PermutationGroup deck_group;
    int sheets = 1;
    bool connected = true;
    CornerComplex lifted; ///< face lattice of the cover
};

TrivializingCover trivializing_cover(const CornerComplex& complex, FaceId j);

/// Pairs (j, r) of the adjacency order with no intermediate face.
std::vector<std::pair<FaceId, FaceId>> hasse_edges(const CornerComplex& complex);

// Small ready-made lattices used throughout: the closed interval and the
// 1-gon (disk whose boundary has a single corner; the closed edge is an
// interval immersed with both endpoints on the corner).
CornerComplex interval_complex();
CornerComplex one_gon_complex();

} // namespace corners

#endif
