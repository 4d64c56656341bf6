#include "corners/complex.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace corners {

namespace {

std::string face_name(const CornerComplex& c, FaceId j) {
    std::ostringstream os;
    os << "face " << j;
    if (c.valid_id(j) && !c.faces[j].label.empty()) os << " (" << c.faces[j].label << ")";
    return os.str();
}

std::string subset_label(const std::vector<int>& facets) {
    if (facets.empty()) return "interior";
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < facets.size(); ++i) {
        if (i) os << " ";
        os << facets[i];
    }
    os << "}";
    return os.str();
}

} // namespace

int depth(const CornerComplex& complex) {
    int d = 0;
    for (const auto& f : complex.faces) d = std::max(d, f.codim);
    return d;
}

std::vector<Violation> validate(const CornerComplex& complex) {
    std::vector<Violation> report;
    auto add = [&](const std::string& inv, const std::string& detail) {
        report.push_back({inv, detail});
    };

    if (complex.faces.empty()) {
        add("interior face", "complex has no faces");
        return report;
    }

    for (int i = 0; i < complex.face_count(); ++i) {
        const CornerFace& f = complex.faces[i];
        if (f.id != i)
            add("face ids", "face at position " + std::to_string(i) + " has id " +
                                std::to_string(f.id));
        if (f.codim < 0 || f.codim > complex.ambient_dim)
            add("codim range", face_name(complex, i) + " has codim " + std::to_string(f.codim));
        if (f.codim + f.dim != complex.ambient_dim)
            add("codim + dim = n", face_name(complex, i) + ": " + std::to_string(f.codim) +
                                       " + " + std::to_string(f.dim) +
                                       " != " + std::to_string(complex.ambient_dim));
        if (f.structure_group.degree() != f.codim)
            add("structure group degree", face_name(complex, i) + ": group acts on " +
                                              std::to_string(f.structure_group.degree()) +
                                              " letters, codim is " + std::to_string(f.codim));
        if (f.codim <= 1 && !f.structure_group.is_trivial())
            add("hyperface structure group trivial",
                face_name(complex, i) + " has codim " + std::to_string(f.codim) +
                    " but a nontrivial structure group");
    }

    if (complex.faces[0].codim != 0)
        add("interior face", "face 0 must have codim 0, has " +
                                 std::to_string(complex.faces[0].codim));
    int interior_count = 0;
    for (const auto& f : complex.faces)
        if (f.codim == 0) ++interior_count;
    if (interior_count != 1)
        add("unique interior", std::to_string(interior_count) + " faces of codim 0");

    const int dep = depth(complex);
    if (dep > 0 && complex.faces_of_codim(1).empty())
        add("hyperface exists", "depth " + std::to_string(dep) + " but no codim-1 face");
    for (int c = 0; c <= dep; ++c)
        if (complex.faces_of_codim(c).empty())
            add("codim realized", "no face of codim " + std::to_string(c) +
                                      " although depth is " + std::to_string(dep));

    for (const auto& [j, r] : complex.adjacency) {
        if (!complex.valid_id(j) || !complex.valid_id(r)) {
            add("adjacency ids", "pair (" + std::to_string(j) + ", " + std::to_string(r) +
                                     ") out of range");
            continue;
        }
        if (complex.codim(r) <= complex.codim(j))
            add("adjacency codim-increasing",
                "pair (" + std::to_string(j) + ", " + std::to_string(r) + ") has codims " +
                    std::to_string(complex.codim(j)) + " -> " + std::to_string(complex.codim(r)));
    }
    for (const auto& [a, b] : complex.adjacency) {
        for (const auto& [b2, c] : complex.adjacency) {
            if (b2 != b) continue;
            if (!complex.adjacent(a, c))
                add("adjacency transitive", "(" + std::to_string(a) + ", " + std::to_string(b) +
                                                ") and (" + std::to_string(b) + ", " +
                                                std::to_string(c) + ") without (" +
                                                std::to_string(a) + ", " + std::to_string(c) + ")");
        }
    }

    std::map<FaceId, std::set<int>> local_faces_seen;
    for (size_t k = 0; k < complex.coverings.size(); ++k) {
        const CoveringData& cov = complex.coverings[k];
        const std::string where = "covering " + std::to_string(k);
        if (!complex.valid_id(cov.parent) || !complex.valid_id(cov.target)) {
            add("covering ids", where + " references a missing face");
            continue;
        }
        if (!complex.adjacent(cov.parent, cov.target))
            add("covering pair adjacent", where + ": (" + std::to_string(cov.parent) + ", " +
                                              std::to_string(cov.target) + ") not in adjacency");
        if (cov.sheets < 1)
            add("sheets positive", where + ": sheets = " + std::to_string(cov.sheets));
        if (cov.local_face < 1)
            add("local face index", where + ": local_face = " + std::to_string(cov.local_face));
        if (!local_faces_seen[cov.parent].insert(cov.local_face).second)
            add("local face index", where + ": duplicate local_face " +
                                        std::to_string(cov.local_face) + " for parent " +
                                        std::to_string(cov.parent));
        for (const auto& m : cov.monodromy)
            if (m.degree() != cov.sheets)
                add("monodromy degree", where + ": permutation on " +
                                            std::to_string(m.degree()) + " letters, sheets = " +
                                            std::to_string(cov.sheets));
        bool degrees_ok = true;
        for (const auto& m : cov.monodromy) degrees_ok = degrees_ok && m.degree() == cov.sheets;
        if (cov.sheets >= 1 && degrees_ok) {
            auto group = PermutationGroup::generated_by(cov.monodromy, cov.sheets);
            if (!group.transitive())
                add("monodromy transitive", where + ": image does not act transitively on " +
                                                std::to_string(cov.sheets) + " sheets");
        }
        if (!cov.parent_slots.empty()) {
            const int dp = complex.valid_id(cov.parent) ? complex.codim(cov.parent) : -1;
            const int dt = complex.valid_id(cov.target) ? complex.codim(cov.target) : -1;
            if (static_cast<int>(cov.parent_slots.size()) != dp)
                add("parent slots size", where + ": " + std::to_string(cov.parent_slots.size()) +
                                             " slots for a codim-" + std::to_string(dp) +
                                             " parent");
            std::set<int> seen;
            for (int s : cov.parent_slots)
                if (s < 0 || s >= dt || !seen.insert(s).second)
                    add("parent slots injective", where + ": slot " + std::to_string(s));
        }
    }

    return report;
}

CornerComplex from_polytope(const std::vector<std::vector<bool>>& incidence, int dim) {
    const int num_vertices = static_cast<int>(incidence.size());
    if (num_vertices == 0) throw std::invalid_argument("polytope has no vertices");
    const int num_facets = static_cast<int>(incidence[0].size());

    std::vector<std::vector<int>> vertex_facets(num_vertices);
    for (int v = 0; v < num_vertices; ++v) {
        if (static_cast<int>(incidence[v].size()) != num_facets)
            throw std::invalid_argument("ragged incidence matrix at vertex " + std::to_string(v));
        for (int f = 0; f < num_facets; ++f)
            if (incidence[v][f]) vertex_facets[v].push_back(f);
        if (static_cast<int>(vertex_facets[v].size()) != dim)
            throw std::invalid_argument(
                "not a simple polytope: vertex " + std::to_string(v) + " lies on " +
                std::to_string(vertex_facets[v].size()) + " facets, expected " +
                std::to_string(dim));
    }

    // Faces are the facet subsets supported by at least one vertex.
    std::set<std::vector<int>> subsets;
    subsets.insert(std::vector<int>{});
    for (int v = 0; v < num_vertices; ++v) {
        const auto& fs = vertex_facets[v];
        const int n = static_cast<int>(fs.size());
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> subset;
            for (int b = 0; b < n; ++b)
                if (mask & (1u << b)) subset.push_back(fs[b]);
            subsets.insert(subset);
        }
    }

    std::vector<std::vector<int>> ordered(subsets.begin(), subsets.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });

    CornerComplex complex;
    complex.ambient_dim = dim;
    std::map<std::vector<int>, FaceId> id_of;
    for (const auto& s : ordered) {
        CornerFace face;
        face.id = complex.face_count();
        face.codim = static_cast<int>(s.size());
        face.dim = dim - face.codim;
        face.structure_group = PermutationGroup::trivial(face.codim);
        face.label = subset_label(s);
        id_of[s] = face.id;
        complex.faces.push_back(std::move(face));
    }

    auto contains = [](const std::vector<int>& big, const std::vector<int>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };

    for (size_t a = 0; a < ordered.size(); ++a)
        for (size_t b = 0; b < ordered.size(); ++b) {
            if (ordered[a].size() >= ordered[b].size()) continue;
            if (contains(ordered[b], ordered[a]))
                complex.adjacency.insert({id_of[ordered[a]], id_of[ordered[b]]});
        }

    // One embedded (1-sheeted) covering record per strict inclusion S < T;
    // parent_slots records where S's facets sit inside T's sorted frame.
    for (const auto& s : ordered) {
        int local = 0;
        for (const auto& t : ordered) {
            if (t.size() <= s.size() || !contains(t, s)) continue;
            CoveringData cov;
            cov.parent = id_of[s];
            cov.local_face = ++local;
            cov.target = id_of[t];
            cov.sheets = 1;
            for (int f : s) {
                auto it = std::lower_bound(t.begin(), t.end(), f);
                cov.parent_slots.push_back(static_cast<int>(it - t.begin()));
            }
            complex.coverings.push_back(std::move(cov));
        }
    }

    return complex;
}

std::vector<std::vector<bool>> incidence_of_lattice(const CornerComplex& complex) {
    const auto vertices = complex.faces_of_codim(depth(complex));
    const auto facets = complex.faces_of_codim(1);
    std::vector<std::vector<bool>> incidence(vertices.size(),
                                             std::vector<bool>(facets.size(), false));
    for (size_t v = 0; v < vertices.size(); ++v)
        for (size_t f = 0; f < facets.size(); ++f)
            // In dimension one the hyperfaces are the vertices themselves.
            if (facets[f] == vertices[v] || complex.adjacent(facets[f], vertices[v]))
                incidence[v][f] = true;
    return incidence;
}

ClosedFace closed_face(const CornerComplex& complex, FaceId j) {
    if (!complex.valid_id(j)) throw std::invalid_argument("no face " + std::to_string(j));
    if (j == kInteriorFace)
        throw std::invalid_argument("interior has no closed-face complex");

    const int dj = complex.codim(j);
    auto records = complex.coverings_of(j);
    std::sort(records.begin(), records.end(),
              [](const CoveringData* a, const CoveringData* b) {
                  return a->local_face < b->local_face;
              });

    ClosedFace out;
    out.source = j;
    out.complex.ambient_dim = complex.ambient_dim - dj;

    CornerFace interior;
    interior.id = 0;
    interior.codim = 0;
    interior.dim = out.complex.ambient_dim;
    interior.structure_group = PermutationGroup::trivial(0);
    interior.label = complex.faces[j].label;
    out.complex.faces.push_back(interior);
    out.target_in_parent.push_back(j);
    out.sheets_to_parent.push_back(1);

    for (const CoveringData* rec : records) {
        CornerFace face;
        face.id = out.complex.face_count();
        face.codim = complex.codim(rec->target) - dj;
        face.dim = out.complex.ambient_dim - face.codim;
        face.structure_group = PermutationGroup::trivial(face.codim);
        face.label = complex.faces[rec->target].label;
        out.complex.faces.push_back(std::move(face));
        out.target_in_parent.push_back(rec->target);
        out.sheets_to_parent.push_back(rec->sheets);
    }

    // Local faces inherit adjacency from their ambient targets. Exact for
    // embedded lattices; distinct local faces over one target (immersed
    // closures, e.g. the 1-gon) stay non-adjacent since the ambient relation
    // is strictly codim-increasing.
    for (int k1 = 1; k1 < out.complex.face_count(); ++k1) {
        out.complex.adjacency.insert({0, k1});
        for (int k2 = 1; k2 < out.complex.face_count(); ++k2)
            if (complex.adjacent(out.target_in_parent[k1], out.target_in_parent[k2]))
                out.complex.adjacency.insert({k1, k2});
    }

    // Interior covering records of the closed face: the local faces are
    // honestly embedded in it.
    for (int k = 1; k < out.complex.face_count(); ++k) {
        CoveringData cov;
        cov.parent = 0;
        cov.local_face = k;
        cov.target = k;
        cov.sheets = 1;
        out.complex.coverings.push_back(std::move(cov));
    }

    // Deeper records, re-indexed from the ambient ones through the slot
    // frames: a record r1 -> r2 descends to k1 -> k2 when its slot map is
    // coherent with the two defining records of k1 and k2.
    for (int k1 = 1; k1 < out.complex.face_count(); ++k1) {
        const FaceId r1 = out.target_in_parent[k1];
        const auto slots_k1 = CornerComplex::resolved_slots(*records[k1 - 1], dj);
        std::vector<int> local_frame_k1; // r1-frame slots of k1's own normals
        for (int s = 0; s < complex.codim(r1); ++s)
            if (std::find(slots_k1.begin(), slots_k1.end(), s) == slots_k1.end())
                local_frame_k1.push_back(s);

        int local_index = 0;
        for (int k2 = 1; k2 < out.complex.face_count(); ++k2) {
            if (!out.complex.adjacent(k1, k2)) continue;
            const FaceId r2 = out.target_in_parent[k2];
            const auto slots_k2 = CornerComplex::resolved_slots(*records[k2 - 1], dj);
            std::vector<int> local_frame_k2;
            for (int s = 0; s < complex.codim(r2); ++s)
                if (std::find(slots_k2.begin(), slots_k2.end(), s) == slots_k2.end())
                    local_frame_k2.push_back(s);

            for (const CoveringData* rec : complex.coverings_of(r1)) {
                if (rec->target != r2) continue;
                const auto p12 = CornerComplex::resolved_slots(*rec, complex.codim(r1));
                bool coherent = true;
                for (int i = 0; i < dj && coherent; ++i)
                    coherent = p12[slots_k1[i]] == slots_k2[i];
                if (!coherent) continue;

                CoveringData cov;
                cov.parent = k1;
                cov.local_face = ++local_index;
                cov.target = k2;
                cov.sheets = rec->sheets;
                cov.monodromy = rec->monodromy;
                for (int a : local_frame_k1) {
                    const int image = p12[a];
                    auto it = std::find(local_frame_k2.begin(), local_frame_k2.end(), image);
                    if (it == local_frame_k2.end()) { coherent = false; break; }
                    cov.parent_slots.push_back(static_cast<int>(it - local_frame_k2.begin()));
                }
                if (coherent) out.complex.coverings.push_back(std::move(cov));
            }
        }
    }

    return out;
}

TrivializingCover trivializing_cover(const CornerComplex& complex, FaceId j) {
    if (!complex.valid_id(j)) throw std::invalid_argument("no face " + std::to_string(j));
    if (complex.codim(j) < 1)
        throw std::invalid_argument("trivializing cover needs codim >= 1");

    TrivializingCover cover;
    cover.base_face = j;
    cover.deck_group = complex.faces[j].structure_group;
    cover.sheets = cover.deck_group.order();
    // The deck group is the monodromy image by minimality, so the principal
    // covering is connected.
    cover.connected = true;

    const CornerComplex base = closed_face(complex, j).complex;
    if (cover.deck_group.is_trivial()) {
        cover.lifted = base;
        return cover;
    }

    CornerComplex lifted;
    lifted.ambient_dim = base.ambient_dim;
    CornerFace interior = base.faces[0];
    interior.label += " lifted";
    lifted.faces.push_back(interior);

    // One copy of every local face per sheet; faces on different sheets are
    // never identified. That is the product gluing, valid when local faces
    // carry no extra monodromy of their own.
    std::map<std::pair<FaceId, int>, FaceId> lifted_id;
    for (int g = 0; g < cover.sheets; ++g)
        for (int k = 1; k < base.face_count(); ++k) {
            CornerFace face = base.faces[k];
            face.id = lifted.face_count();
            face.label += " sheet " + std::to_string(g);
            lifted_id[{k, g}] = face.id;
            lifted.faces.push_back(std::move(face));
        }
    for (int g = 0; g < cover.sheets; ++g)
        for (int k1 = 1; k1 < base.face_count(); ++k1) {
            lifted.adjacency.insert({0, lifted_id[{k1, g}]});
            for (int k2 = 1; k2 < base.face_count(); ++k2)
                if (base.adjacent(k1, k2))
                    lifted.adjacency.insert({lifted_id[{k1, g}], lifted_id[{k2, g}]});
        }
    cover.lifted = std::move(lifted);
    return cover;
}

std::vector<std::pair<FaceId, FaceId>> hasse_edges(const CornerComplex& complex) {
    std::vector<std::pair<FaceId, FaceId>> edges;
    for (const auto& [j, r] : complex.adjacency) {
        bool minimal = true;
        for (FaceId t = 0; t < complex.face_count() && minimal; ++t)
            if (t != j && t != r && complex.adjacent(j, t) && complex.adjacent(t, r))
                minimal = false;
        if (minimal) edges.emplace_back(j, r);
    }
    return edges;
}

CornerComplex interval_complex() {
    CornerComplex c;
    c.ambient_dim = 1;
    c.faces = {
        {0, 0, 1, PermutationGroup::trivial(0), "interior"},
        {1, 1, 0, PermutationGroup::trivial(1), "left end"},
        {2, 1, 0, PermutationGroup::trivial(1), "right end"},
    };
    c.adjacency = {{0, 1}, {0, 2}};
    c.coverings.push_back({0, 1, 1, 1, {}, {}});
    c.coverings.push_back({0, 2, 2, 1, {}, {}});
    return c;
}

CornerComplex one_gon_complex() {
    CornerComplex c;
    c.ambient_dim = 2;
    c.faces = {
        {0, 0, 2, PermutationGroup::trivial(0), "interior"},
        {1, 1, 1, PermutationGroup::trivial(1), "edge"},
        {2, 2, 0, PermutationGroup::trivial(2), "corner"},
    };
    c.adjacency = {{0, 1}, {0, 2}, {1, 2}};
    c.coverings.push_back({0, 1, 1, 1, {}, {}});
    c.coverings.push_back({0, 2, 2, 1, {}, {}});
    // The closed edge is an interval; each endpoint covers the corner once,
    // landing on one of the corner's two defining directions.
    c.coverings.push_back({1, 1, 2, 1, {}, {0}});
    c.coverings.push_back({1, 2, 2, 1, {}, {1}});
    return c;
}

} // namespace corners
