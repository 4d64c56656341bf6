#include "corners/symbols.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace corners {

SphereGrid::SphereGrid(int ambient_dim, int points_per_angle)
    : dim_(ambient_dim), per_angle_(points_per_angle) {
    if (dim_ < 1) throw std::invalid_argument("sphere needs ambient dimension >= 1");
    if (dim_ == 1) {
        points_.push_back(Eigen::VectorXd::Constant(1, 1.0));
        points_.push_back(Eigen::VectorXd::Constant(1, -1.0));
        return;
    }
    // Hyperspherical product grid with half-offset angles: polar angles in
    // (0, pi), the last angle a full turn.
    const int angles = dim_ - 1;
    std::vector<int> idx(angles, 0);
    while (true) {
        Eigen::VectorXd a(angles);
        for (int i = 0; i < angles - 1; ++i) a[i] = M_PI * (idx[i] + 0.5) / per_angle_;
        a[angles - 1] = 2.0 * M_PI * (idx[angles - 1] + 0.5) / per_angle_;

        Eigen::VectorXd p(dim_);
        double sines = 1.0;
        for (int i = 0; i < angles; ++i) {
            p[i] = sines * std::cos(a[i]);
            sines *= std::sin(a[i]);
        }
        p[dim_ - 1] = sines;
        points_.push_back(p);

        int axis = 0;
        while (axis < angles && ++idx[axis] == per_angle_) idx[axis++] = 0;
        if (axis == angles) break;
    }
}

int SphereGrid::nearest(const Eigen::VectorXd& v) const {
    if (v.size() != dim_) throw std::invalid_argument("sphere point dimension mismatch");
    const double norm = v.norm();
    if (norm <= 0.0) throw std::invalid_argument("no radial projection of the zero vector");
    int best = 0;
    double best_dot = -2.0;
    for (int i = 0; i < size(); ++i) {
        const double dot = points_[i].dot(v) / norm;
        if (dot > best_dot + 1e-15) {
            best_dot = dot;
            best = i;
        }
    }
    return best;
}

InteriorSymbol::InteriorSymbol(SphereGrid grid, std::vector<BaseSample> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
    values_.assign(samples_.size(), std::vector<Eigen::MatrixXcd>(grid_.size()));
}

int InteriorSymbol::sample_attached_to(FaceId face) const {
    for (int b = 0; b < base_count(); ++b)
        if (samples_[b].attached_face == face) return b;
    return -1;
}

const Eigen::MatrixXcd& InteriorSymbol::value(int base, int node) const {
    return values_.at(base).at(node);
}

Eigen::MatrixXcd& InteriorSymbol::value(int base, int node) {
    return values_.at(base).at(node);
}

void InteriorSymbol::set_values(std::vector<std::vector<Eigen::MatrixXcd>> values) {
    if (static_cast<int>(values.size()) != base_count())
        throw std::invalid_argument("one value row per base sample");
    for (const auto& row : values)
        if (static_cast<int>(row.size()) != grid_.size())
            throw std::invalid_argument("one value per sphere node");
    values_ = std::move(values);
}

Eigen::MatrixXcd InteriorSymbol::eval(int base, const Eigen::VectorXd& v) const {
    const Eigen::VectorXd u = v / v.norm();
    const int node = grid_.nearest(u);
    if ((u - grid_.point(node)).norm() < 1e-9) return values_.at(base).at(node);
    if (evaluator_) return evaluator_(base, u);
    return values_.at(base).at(node);
}

double InteriorSymbol::continuity_modulus() const {
    double worst = 0.0;
    for (int a = 0; a < base_count(); ++a)
        for (int b = a + 1; b < base_count(); ++b)
            for (int k = 0; k < grid_.size(); ++k)
                worst = std::max(worst,
                                 (values_[a][k] - values_[b][k]).cwiseAbs().maxCoeff());
    return worst;
}

double InteriorSymbol::min_singular_over_grid(int* worst_base, int* worst_node) const {
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < base_count(); ++b)
        for (int k = 0; k < grid_.size(); ++k) {
            const double sv = min_singular_value(values_[b][k]);
            if (sv < best) {
                best = sv;
                if (worst_base) *worst_base = b;
                if (worst_node) *worst_node = k;
            }
        }
    return best;
}

double InteriorSymbol::max_norm() const {
    double worst = 0.0;
    for (int b = 0; b < base_count(); ++b)
        for (int k = 0; k < grid_.size(); ++k)
            worst = std::max(worst, spectral_norm(values_[b][k]));
    return worst;
}

std::vector<CoveringTriangle> covering_triangles(const CornerComplex& complex, FaceId f1,
                                                 FaceId f2) {
    std::vector<CoveringTriangle> triangles;
    for (size_t i = 0; i < complex.coverings.size(); ++i) {
        const CoveringData& rec = complex.coverings[i];
        if (rec.parent != f1 || rec.target != f2) continue;
        CoveringTriangle tri;
        tri.f1 = f1;
        tri.f2 = f2;
        tri.record_index = static_cast<int>(i);
        tri.local_face = rec.local_face;
        // closed_face numbers the local faces by the rank of their
        // local_face value, which is what symbol recursion is keyed by.
        tri.lattice_face = 1;
        for (const CoveringData* other : complex.coverings_of(f1))
            if (other->local_face < rec.local_face) ++tri.lattice_face;
        tri.sheets = rec.sheets;
        tri.slot_injection = CornerComplex::resolved_slots(rec, complex.codim(f1));
        bool ok = static_cast<int>(tri.slot_injection.size()) == complex.codim(f1);
        std::set<int> seen;
        for (int s : tri.slot_injection)
            ok = ok && s >= 0 && s < complex.codim(f2) && seen.insert(s).second;
        for (const auto& m : rec.monodromy) ok = ok && m.degree() == rec.sheets;
        if (ok) ok = PermutationGroup::generated_by(rec.monodromy, rec.sheets).transitive();
        tri.commutes = ok;
        triangles.push_back(std::move(tri));
    }
    if (triangles.empty())
        throw std::invalid_argument("no covering triangle connects faces " + std::to_string(f1) +
                                    " and " + std::to_string(f2));
    return triangles;
}

namespace {

/// Rewrites a sphere argument from the slot order of the deeper face symbol
/// (tangent, normals of f2, params) to the nested order of a face-of-face
/// symbol (tangent, normals of Gamma inside f1, normals of f1, params).
Eigen::VectorXd nest_argument(const Eigen::VectorXd& zeta, int tangent_dim, int d1, int d2,
                              int trailing_params, const std::vector<int>& slot_injection) {
    Eigen::VectorXd out(zeta.size());
    out.head(tangent_dim) = zeta.head(tangent_dim);
    out.tail(trailing_params) = zeta.tail(trailing_params);
    std::vector<int> complement;
    for (int t = 0; t < d2; ++t)
        if (std::find(slot_injection.begin(), slot_injection.end(), t) == slot_injection.end())
            complement.push_back(t);
    for (int i = 0; i < d1; ++i)
        out[tangent_dim + (d2 - d1) + i] = zeta[tangent_dim + slot_injection[i]];
    for (size_t k = 0; k < complement.size(); ++k)
        out[tangent_dim + static_cast<int>(k)] = zeta[tangent_dim + complement[k]];
    return out;
}

void track_worst(CompatReport& report, double value, FaceId face, int node,
                 const std::string& where) {
    if (value > report.worst) {
        report.worst = value;
        report.worst_face = face;
        report.worst_node = node;
        report.where = where;
    }
}

std::string chain_append(const std::string& chain, FaceId face) {
    std::ostringstream os;
    if (!chain.empty()) os << chain << " > ";
    os << "face " << face;
    return os.str();
}

void comp1_level(const SymbolTuple& tuple, const std::string& chain, CompatReport& report) {
    for (const auto& face : tuple.complex.faces) {
        if (face.codim == 0) continue;
        auto it = tuple.face_symbols.find(face.id);
        if (it == tuple.face_symbols.end())
            throw std::invalid_argument("missing face symbol for " + chain_append(chain, face.id));
        const SymbolTuple& ft = *it->second.tuple;

        const int b = tuple.sigma0.sample_attached_to(face.id);
        if (b < 0)
            throw std::invalid_argument("no boundary sample of sigma0 over " +
                                        chain_append(chain, face.id));
        if (ft.sigma0.grid().size() != tuple.sigma0.grid().size())
            throw std::invalid_argument("sphere grids differ at " + chain_append(chain, face.id));

        for (int k = 0; k < tuple.sigma0.grid().size(); ++k) {
            const double diff =
                (tuple.sigma0.value(b, k) - ft.sigma0.value(0, k)).cwiseAbs().maxCoeff();
            track_worst(report, diff, face.id, k, chain_append(chain, face.id));
        }
        comp1_level(ft, chain_append(chain, face.id), report);
    }
}

void comp2_level(const SymbolTuple& tuple, const std::string& chain, CompatReport& report) {
    const CornerComplex& C = tuple.complex;
    for (const auto& [f1, f2] : C.adjacency) {
        if (C.codim(f1) < 1) continue;
        const auto triangles = covering_triangles(C, f1, f2);
        const FaceSymbol& fs1 = tuple.face_symbols.at(f1);
        const FaceSymbol& fs2 = tuple.face_symbols.at(f2);
        const SymbolTuple& t2 = *fs2.tuple;
        const int d1 = C.codim(f1);
        const int d2 = C.codim(f2);
        const int tangent_dim = t2.complex.ambient_dim;

        for (const auto& tri : triangles) {
            if (!tri.commutes)
                throw std::invalid_argument("covering triangle over (" + std::to_string(f1) +
                                            ", " + std::to_string(f2) + ") does not commute");
            const auto git = fs1.tuple->face_symbols.find(tri.lattice_face);
            if (git == fs1.tuple->face_symbols.end())
                throw std::invalid_argument("face symbol of face symbol missing at " +
                                            chain_append(chain, f1));
            const SymbolTuple& t1g = *git->second.tuple;
            if (t1g.complex.face_count() != t2.complex.face_count() ||
                t1g.complex.ambient_dim != t2.complex.ambient_dim)
                throw std::invalid_argument("covering triangle face lattices differ over (" +
                                            std::to_string(f1) + ", " + std::to_string(f2) + ")");
        }

        // Sheet-invariant compression: weighted average of the nested symbols
        // over all triangles, compared sample-wise against the deep symbol.
        for (int b = 0; b < t2.sigma0.base_count(); ++b) {
            for (int k = 0; k < t2.sigma0.grid().size(); ++k) {
                const Eigen::VectorXd zeta = t2.sigma0.grid().point(k);
                Eigen::MatrixXcd acc;
                double weight = 0.0;
                for (const auto& tri : triangles) {
                    const SymbolTuple& t1g = *fs1.tuple->face_symbols.at(tri.lattice_face).tuple;
                    const Eigen::VectorXd nested = nest_argument(
                        zeta, tangent_dim, d1, d2, tuple.params, tri.slot_injection);
                    const Eigen::MatrixXcd v = t1g.sigma0.eval(b, nested) *
                                               static_cast<double>(tri.sheets);
                    if (weight == 0.0)
                        acc = v;
                    else
                        acc += v;
                    weight += tri.sheets;
                }
                const Eigen::MatrixXcd compressed = acc / weight;
                const double diff =
                    (compressed - t2.sigma0.value(b, k)).cwiseAbs().maxCoeff();
                track_worst(report, diff, f2, k,
                            chain_append(chain_append(chain, f1), f2));
            }
        }

        // Interior-symbol pullback consistency along the covering (the
        // covering of a trivial-group face is the identity, so this reduces
        // to the boundary restriction comparison run by comp1).
        const int b1 = tuple.sigma0.sample_attached_to(f1);
        if (b1 >= 0) {
            for (int k = 0; k < tuple.sigma0.grid().size(); ++k) {
                const double diff =
                    (tuple.sigma0.value(b1, k) - fs1.tuple->sigma0.value(0, k))
                        .cwiseAbs()
                        .maxCoeff();
                track_worst(report, diff, f1, k, chain_append(chain, f1));
            }
        }
    }

    for (const auto& [face, fs] : tuple.face_symbols)
        comp2_level(*fs.tuple, chain_append(chain, face), report);
}

} // namespace

CompatReport check_comp1(const SymbolTuple& tuple, double tol) {
    CompatReport report;
    comp1_level(tuple, "", report);
    report.pass = report.worst <= tol;
    return report;
}

CompatReport check_comp2(const SymbolTuple& tuple, double tol) {
    CompatReport report;
    comp2_level(tuple, "", report);
    report.pass = report.worst <= tol;
    return report;
}

ScvReport scv_check(const ParamFamily& A, double d_window, double eps, double R) {
    ScvReport report;
    if (A.A.empty()) throw std::invalid_argument("empty family");
    const int n = static_cast<int>(A.A[0].rows());
    const int budget = std::max(1, n / 4);

    const bool all_pairs = A.params() * A.params() <= 2500;
    auto check_pair = [&](int a, int b) {
        const Eigen::MatrixXcd diff = A.A[a] - A.A[b];
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(diff);
        const auto& sv = svd.singularValues();
        if (sv.size() > budget)
            report.worst_tail = std::max(report.worst_tail, double(sv(budget)));
        if ((A.Q[a] - A.Q[b]).norm() < d_window &&
            std::min(A.Q[a].norm(), A.Q[b].norm()) > R)
            report.worst_far_variation = std::max(report.worst_far_variation, double(sv(0)));
    };
    for (int a = 0; a < A.params(); ++a) {
        if (all_pairs) {
            for (int b = a + 1; b < A.params(); ++b) check_pair(a, b);
        } else if (a + 1 < A.params()) {
            check_pair(a, a + 1);
        }
    }
    report.compact_ok = report.worst_tail <= eps;
    report.slow_ok = report.worst_far_variation <= eps;
    report.pass = report.compact_ok && report.slow_ok;
    return report;
}

ParamFamily quantize_interior(const InteriorSymbol& sigma0, int base, const LatticeModel& model,
                              const std::vector<Eigen::VectorXd>& q_grid) {
    model.check();
    if (sigma0.sample(base).attached_face != kInteriorFace)
        throw std::invalid_argument("quantize_interior needs an interior base sample");
    ParamFamily family;
    family.Q = q_grid;
    const int L = model.lattice_size();
    for (const auto& q : q_grid) {
        MultiplierSymbol symbol;
        symbol.model = model;
        symbol.values.reserve(L);
        for (int k = 0; k < L; ++k) {
            Eigen::VectorXd arg(model.d + q.size());
            arg << model.frequency(k), q;
            if (arg.norm() <= 0.0)
                throw std::invalid_argument("frequency and parameter both zero");
            symbol.values.push_back(sigma0.eval(base, arg));
        }
        family.A.push_back(quantize(symbol).matrix);
    }
    return family;
}

namespace {

SymbolTuple build_level(const GlobalSymbol& symbol, const CornerComplex& complex, int params,
                        const TupleBuildOptions& options) {
    SymbolTuple tuple;
    tuple.complex = complex;
    tuple.params = params;

    const int m = complex.ambient_dim + params;
    SphereGrid grid(m, options.sphere_points_per_angle);

    std::vector<BaseSample> samples;
    samples.push_back({kInteriorFace, Eigen::VectorXd::Zero(complex.ambient_dim)});
    for (const auto& face : complex.faces)
        if (face.codim > 0)
            samples.push_back({face.id, Eigen::VectorXd::Zero(complex.ambient_dim)});

    InteriorSymbol sigma0(grid, samples);
    std::vector<std::vector<Eigen::MatrixXcd>> values(
        samples.size(), std::vector<Eigen::MatrixXcd>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd v = symbol(grid.point(k));
        for (size_t b = 0; b < samples.size(); ++b) values[b][k] = v;
    }
    sigma0.set_values(std::move(values));
    sigma0.set_evaluator([symbol](int, const Eigen::VectorXd& u) { return symbol(u); });
    tuple.sigma0 = std::move(sigma0);

    for (const auto& face : complex.faces) {
        if (face.codim == 0) continue;
        if (!face.structure_group.is_trivial())
            throw std::invalid_argument(
                "restricted tuples require trivial structure groups (face " +
                std::to_string(face.id) + ")");
        ClosedFace cf = closed_face(complex, face.id);
        FaceSymbol fs;
        fs.face = face.id;
        fs.param_dim = face.codim + params;
        fs.tuple = std::make_shared<SymbolTuple>(
            build_level(symbol, cf.complex, fs.param_dim, options));
        fs.local_targets = cf.target_in_parent;
        fs.local_sheets = cf.sheets_to_parent;
        fs.equivariance_defect = 0.0;
        fs.equivariance_checked = true;
        tuple.face_symbols.emplace(face.id, std::move(fs));
    }

    return tuple;
}

} // namespace

SymbolTuple build_restricted_tuple(const GlobalSymbol& symbol, const CornerComplex& complex,
                                   int params, const TupleBuildOptions& options) {
    SymbolTuple tuple = build_level(symbol, complex, params, options);

    // Chart-coherence spot check: along every covering triangle the symbol
    // must take equal values under the induced slot rewrite.
    const int m = tuple.sphere_dim();
    SphereGrid probe(m, 8);
    for (const auto& [f1, f2] : complex.adjacency) {
        if (complex.codim(f1) < 1) continue;
        for (const auto& tri : covering_triangles(complex, f1, f2)) {
            const int d1 = complex.codim(f1);
            const int d2 = complex.codim(f2);
            const int tangent_dim = complex.ambient_dim - d2;
            for (int k = 0; k < probe.size(); ++k) {
                const Eigen::VectorXd zeta = probe.point(k);
                const Eigen::VectorXd nested =
                    nest_argument(zeta, tangent_dim, d1, d2, params, tri.slot_injection);
                const double diff = (symbol(zeta) - symbol(nested)).cwiseAbs().maxCoeff();
                if (diff > options.overlap_tol)
                    throw std::invalid_argument(
                        "global symbol disagrees across charts near faces " +
                        std::to_string(f1) + " and " + std::to_string(f2) + " (discrepancy " +
                        std::to_string(diff) + ")");
            }
        }
    }
    return tuple;
}

SymbolTuple compose(const SymbolTuple& t1, const SymbolTuple& t2) {
    if (t1.complex.face_count() != t2.complex.face_count() ||
        t1.complex.ambient_dim != t2.complex.ambient_dim || t1.params != t2.params)
        throw std::invalid_argument("tuples live on different complexes");
    if (t1.sigma0.grid().size() != t2.sigma0.grid().size() ||
        t1.sigma0.base_count() != t2.sigma0.base_count())
        throw std::invalid_argument("tuple sample shapes differ");

    SymbolTuple out;
    out.complex = t1.complex;
    out.params = t1.params;

    std::vector<BaseSample> samples;
    for (int b = 0; b < t1.sigma0.base_count(); ++b) samples.push_back(t1.sigma0.sample(b));
    InteriorSymbol sigma0(t1.sigma0.grid(), samples);
    std::vector<std::vector<Eigen::MatrixXcd>> values(
        samples.size(), std::vector<Eigen::MatrixXcd>(t1.sigma0.grid().size()));
    for (size_t b = 0; b < samples.size(); ++b)
        for (int k = 0; k < t1.sigma0.grid().size(); ++k)
            values[b][k] = t1.sigma0.value(static_cast<int>(b), k) *
                           t2.sigma0.value(static_cast<int>(b), k);
    sigma0.set_values(std::move(values));
    if (t1.sigma0.has_evaluator() && t2.sigma0.has_evaluator()) {
        const auto e1 = t1.sigma0.evaluator();
        const auto e2 = t2.sigma0.evaluator();
        sigma0.set_evaluator([e1, e2](int b, const Eigen::VectorXd& u) {
            return (e1(b, u) * e2(b, u)).eval();
        });
    }
    out.sigma0 = std::move(sigma0);

    for (const auto& [face, fs1] : t1.face_symbols) {
        const auto it = t2.face_symbols.find(face);
        if (it == t2.face_symbols.end())
            throw std::invalid_argument("face symbol sets differ at face " + std::to_string(face));
        FaceSymbol fs;
        fs.face = face;
        fs.param_dim = fs1.param_dim;
        fs.tuple = std::make_shared<SymbolTuple>(compose(*fs1.tuple, *it->second.tuple));
        fs.local_targets = fs1.local_targets;
        fs.local_sheets = fs1.local_sheets;
        out.face_symbols.emplace(face, std::move(fs));
    }
    return out;
}

namespace {

void elliptic_level(const SymbolTuple& tuple, const EllipticityOptions& options,
                    const std::string& chain, EllipticityReport& report) {
    int wb = 0, wk = 0;
    const double interior_min = tuple.sigma0.min_singular_over_grid(&wb, &wk);
    report.min_interior_singular = std::min(report.min_interior_singular, interior_min);
    if (interior_min < options.tol && report.witness.empty()) {
        std::ostringstream os;
        os << (chain.empty() ? "sigma0" : chain + " sigma0") << " at base " << wb << ", node "
           << wk << " (singular value " << interior_min << ")";
        report.witness = os.str();
    }

    for (const auto& [face, fs] : tuple.face_symbols) {
        const std::string sub = chain_append(chain, face);
        elliptic_level(*fs.tuple, options, sub, report);

        // Invertibility as a parameter family: finite-section quantization of
        // the face symbol over its parameter grid plus the far annulus.
        const SymbolTuple& ft = *fs.tuple;
        const int base_dim = ft.complex.ambient_dim;
        const auto q_grid = param_grid_with_annulus(fs.param_dim, options.params_per_axis, 2.0,
                                                    options.annulus_radius);
        double family_min = std::numeric_limits<double>::infinity();
        if (base_dim == 0) {
            for (const auto& p : q_grid)
                family_min = std::min(family_min, min_singular_value(ft.sigma0.eval(0, p)));
        } else if (base_dim == 1) {
            LatticeModel model;
            model.d = 1;
            model.N = options.model_points;
            model.base_dim = static_cast<int>(ft.sigma0.value(0, 0).rows());
            for (const auto& p : q_grid) {
                MultiplierSymbol symbol;
                symbol.model = model;
                for (int k = 0; k < model.lattice_size(); ++k) {
                    Eigen::VectorXd arg(1 + p.size());
                    arg << model.frequency(k), p;
                    symbol.values.push_back(ft.sigma0.eval(0, arg));
                }
                const Eigen::MatrixXcd full = quantize(symbol).matrix;
                const int lo = model.N / 4 * model.base_dim;
                const int len = model.N / 2 * model.base_dim;
                family_min =
                    std::min(family_min, min_singular_value(full.block(lo, lo, len, len)));
            }
        } else {
            // Deeper bases: sample the frozen local representatives on the
            // joint frequency-parameter directions.
            SphereGrid directions(ft.sphere_dim(), 8);
            for (int k = 0; k < directions.size(); ++k)
                family_min = std::min(family_min,
                                      min_singular_value(ft.sigma0.eval(0, directions.point(k))));
        }
        report.min_family_singular = std::min(report.min_family_singular, family_min);
        if (family_min < options.tol && report.witness.empty()) {
            std::ostringstream os;
            os << sub << " as a parameter family (singular value " << family_min << ")";
            report.witness = os.str();
        }
    }
}

} // namespace

EllipticityReport is_elliptic(const SymbolTuple& tuple, const EllipticityOptions& options) {
    EllipticityReport report;
    report.min_interior_singular = std::numeric_limits<double>::infinity();
    report.min_family_singular = std::numeric_limits<double>::infinity();
    elliptic_level(tuple, options, "", report);
    report.elliptic = report.witness.empty();
    return report;
}

double slot_equivariance_defect(const InteriorSymbol& sigma0, const PermutationGroup& group,
                                int slot_offset) {
    double worst = 0.0;
    for (const auto& g : group.elements()) {
        if (g.is_identity()) continue;
        for (int b = 0; b < sigma0.base_count(); ++b)
            for (int k = 0; k < sigma0.grid().size(); ++k) {
                const Eigen::VectorXd zeta = sigma0.grid().point(k);
                Eigen::VectorXd permuted = zeta;
                for (int i = 0; i < g.degree(); ++i)
                    permuted[slot_offset + g(i)] = zeta[slot_offset + i];
                const double diff =
                    (sigma0.eval(b, permuted) - sigma0.value(b, k)).cwiseAbs().maxCoeff();
                worst = std::max(worst, diff);
            }
    }
    return worst;
}

} // namespace corners
