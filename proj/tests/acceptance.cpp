// Acceptance suite: one criterion per block, one PASS/FAIL line each, exit
// status 0 only if everything passed. Tolerances are pinned here, not
// configurable.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

#include "corners/complex.hpp"
#include "corners/dual.hpp"
#include "corners/geometry.hpp"
#include "corners/io.hpp"
#include "corners/localization.hpp"
#include "corners/operators.hpp"
#include "corners/symbols.hpp"
#include "oracles.hpp"

using namespace corners;
using namespace testutil;
using complexd = std::complex<double>;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %-38s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool anti_isomorphic(const DualComplex& dual, const CornerComplex& source) {
    for (int a = 0; a < dual.stratum_count(); ++a)
        for (int b = 0; b < dual.stratum_count(); ++b) {
            const bool dual_adj = dual.adjacency.count({a, b}) > 0;
            const bool src_adj =
                source.adjacent(dual.strata[b].source_face, dual.strata[a].source_face);
            if (dual_adj != src_adj) return false;
        }
    return true;
}

std::map<int, int> stratum_counts(const DualComplex& d) {
    std::map<int, int> counts;
    for (const auto& s : d.strata) counts[s.dim]++;
    return counts;
}

Eigen::MatrixXcd elliptic_scalar(const Eigen::VectorXd& z) {
    const complexd num(1.0, z.sum());
    return Eigen::MatrixXcd::Constant(1, 1, num / (z.cwiseAbs().sum() + 1.0));
}

Eigen::MatrixXcd second_scalar(const Eigen::VectorXd& z) {
    return Eigen::MatrixXcd::Constant(
        1, 1, complexd(2.0 + z.cwiseAbs().maxCoeff(), -0.5 * z.sum()));
}

void polytope_duality() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    const CornerComplex cube = from_polytope(cube_incidence(), 3);
    const DualComplex dcube = dualize(cube);
    auto counts = stratum_counts(dcube);
    pass = pass && counts[0] == 6 && counts[1] == 12 && counts[2] == 8;
    pass = pass && anti_isomorphic(dcube, cube);

    const CornerComplex tetra = from_polytope(tetrahedron_incidence(), 3);
    const DualComplex dtetra = dualize(tetra);
    auto tcounts = stratum_counts(dtetra);
    pass = pass && tcounts[0] == 4 && tcounts[1] == 6 && tcounts[2] == 4;
    pass = pass && anti_isomorphic(dtetra, tetra);
    // Self-duality: the dual stratum counts coincide with the face counts of
    // the source itself, dimension by dimension.
    for (int c = 1; c <= 3; ++c)
        pass = pass && tcounts[c - 1] == static_cast<int>(tetra.faces_of_codim(c).size());

    const CornerComplex dodeca = from_polytope(dodecahedron_incidence(), 3);
    auto dcounts = stratum_counts(dualize(dodeca));
    pass = pass && dcounts[0] == 12 && dcounts[1] == 30 && dcounts[2] == 20;
    const CornerComplex icosa = polar_lattice(dodeca);
    auto icounts = stratum_counts(dualize(icosa));
    pass = pass && icounts[0] == 20 && icounts[1] == 30 && icounts[2] == 12;

    const double ms = ms_since(t0);
    pass = pass && ms < 1000.0;
    detail = "cube 6/12/8, tetra self-dual, dodeca<->icosa 12/30/20, " +
             std::to_string(ms) + " ms";
    report("polytope-duality", pass, detail);
}

void boundary_retraction() {
    bool pass = true;
    for (int b : {1, 3, 7}) {
        CornerComplex c;
        c.ambient_dim = 3;
        c.faces.push_back({0, 0, 3, PermutationGroup::trivial(0), "interior"});
        for (int i = 1; i <= b; ++i) {
            c.faces.push_back({i, 1, 2, PermutationGroup::trivial(1), "component"});
            c.adjacency.insert({0, i});
        }
        pass = pass && validate(c).empty();
        const DualComplex d = dualize(c);
        pass = pass && d.stratum_count() == b;
        for (const auto& s : d.strata) pass = pass && s.dim == 0;
    }
    report("boundary-retraction", pass, "b components -> b point strata, exact");
}

void cone_fibration_roundtrip() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> ydim(1, 4), xdim(0, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        LogPoint p;
        p.x = Eigen::VectorXd(xdim(rng));
        for (int i = 0; i < p.x.size(); ++i) p.x[i] = 3.0 * unif(rng);
        p.y = Eigen::VectorXd(ydim(rng));
        const double floor = p.x_total() + 1.0;
        for (int i = 0; i < p.y.size(); ++i) p.y[i] = floor + 0.05 + 20.0 * unif(rng);
        p.omega = Eigen::VectorXd(1);
        p.omega[0] = unif(rng);

        const LogPoint back = fibration_inverse(fibration_forward(p));
        worst = std::max(worst, (back.y - p.y).cwiseAbs().maxCoeff());

        FibrationImage img;
        img.theta = p.y / p.y.sum();
        img.r = 0.02 + 0.95 * unif(rng);
        img.x = p.x;
        img.omega = p.omega;
        const FibrationImage img2 = fibration_forward(fibration_inverse(img));
        worst = std::max(worst, (img2.theta - img.theta).cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(img2.r - img.r));
    }
    const double ms = ms_since(t0);
    const bool pass = worst < 1e-10 && ms < 1000.0;
    report("cone-fibration-roundtrip", pass,
           "max error " + std::to_string(worst) + " over 10^4 points, " + std::to_string(ms) +
               " ms");
}

void one_gon_injectivity() {
    const InjectivityReport r = check_U_injectivity(one_gon_complex(), 1, 10000);
    const bool pass = !r.vacuous && r.symbolic_pass && r.sampled_pass;
    report("one-gon-injectivity", pass,
           std::string("swap systems infeasible, symbolic certificate ") +
               (r.symbolic_pass ? "verified" : "FAILED"));
}

void multiplier_roundtrip() {
    std::mt19937 rng(1);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> bdim(1, 8);
    double worst_rt = 0.0, worst_norm = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        LatticeModel model{1, 64, bdim(rng), 1.0};
        MultiplierSymbol s;
        s.model = model;
        for (int k = 0; k < 64; ++k) {
            Eigen::MatrixXcd m(model.base_dim, model.base_dim);
            for (int i = 0; i < model.base_dim; ++i)
                for (int j = 0; j < model.base_dim; ++j)
                    m(i, j) = complexd(gauss(rng), gauss(rng));
            s.values.push_back(std::move(m));
        }
        const TranslationInvariantOp op = quantize(s);
        const MultiplierSymbol back = extract_symbol(op);
        for (int k = 0; k < 64; ++k)
            worst_rt =
                std::max(worst_rt, (back.values[k] - s.values[k]).cwiseAbs().maxCoeff());
        worst_norm =
            std::max(worst_norm, std::abs(spectral_norm(op.matrix) - s.max_norm()));
    }
    const bool pass = worst_rt < 1e-12 && worst_norm < 1e-12;
    report("multiplier-roundtrip", pass,
           "roundtrip " + std::to_string(worst_rt) + ", norm identity " +
               std::to_string(worst_norm));
}

void group_uniqueness() {
    OffsetGrid grid{2, 8, 1.0};
    Eigen::MatrixXcd S(2, 2);
    S << 0.0, 1.0, 1.0, 0.0;
    GroupAction swap_action;
    swap_action.sigma = {Permutation::identity(2), Permutation::transposition(2, 0, 1)};
    swap_action.S = {Eigen::MatrixXcd::Identity(2, 2), S};

    bool pass = swap_action.sigma_faithful();

    // The zero symbol is the only one that annihilates every constructed
    // invariant function.
    const auto zero = uniqueness_test(
        [](const Eigen::VectorXd&) { return Eigen::MatrixXcd::Zero(2, 2); }, swap_action, grid,
        1e-8);
    pass = pass && zero.is_zero && zero.annihilates_all && zero.witness_node == -1;

    std::mt19937 rng(2);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 5; ++trial) {
        const double c0 = gauss(rng), c1 = gauss(rng);
        const auto r = uniqueness_test(
            [&](const Eigen::VectorXd& p) {
                Eigen::MatrixXcd m(2, 2);
                m << c0 * p[0], c1, -c1, c0 * p[1];
                return m;
            },
            swap_action, grid, 1e-8);
        pass = pass && r.lemma_consistent && !r.annihilates_all && r.witness_node >= 0;
    }

    // Non-faithful counterexample: refused by the gate, demonstrated under
    // the bypass flag.
    GroupAction broken;
    broken.sigma = {Permutation::identity(2), Permutation::identity(2)};
    Eigen::MatrixXcd anti(2, 2);
    anti << 0.5, -0.5, -0.5, 0.5;
    broken.S = {Eigen::MatrixXcd::Identity(2, 2), S};
    auto A = [anti](const Eigen::VectorXd&) { return anti; };
    bool refused = false;
    try {
        uniqueness_test(A, broken, grid, 1e-8);
    } catch (const std::invalid_argument&) {
        refused = true;
    }
    const auto bypass = uniqueness_test(A, broken, grid, 1e-8, true);
    pass = pass && refused && bypass.annihilates_all && !bypass.is_zero &&
           !bypass.lemma_consistent;

    report("group-uniqueness-lemma", pass,
           "zero forced on faithful swap grid; non-faithful case refused and demonstrated");
}

void localization_suite() {
    bool pass = true;

    // Monotonicity on 1000 random (A, U subset V) instances.
    std::mt19937 rng(3);
    std::normal_distribution<double> gauss;
    const GridSpace X = GridSpace::interval(12);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::MatrixXcd M(12, 12);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j) M(i, j) = complexd(gauss(rng), gauss(rng));
        ParamFamily A;
        A.Q.push_back(Eigen::VectorXd::Zero(1));
        A.A.push_back(M);
        std::vector<int> V;
        for (int i = 0; i < 12; ++i)
            if (rng() % 2) V.push_back(i);
        if (V.empty()) V.push_back(rng() % 12);
        std::vector<int> U;
        for (int i : V)
            if (rng() % 2) U.push_back(i);
        if (U.empty()) U.push_back(V[0]);
        if (restricted_norm(A, X, U) > restricted_norm(A, X, V) + 1e-12) pass = false;
    }

    // Gluing a constant family returns it exactly.
    const GridSpace Y = GridSpace::interval(32);
    std::vector<int> centers = {4, 12, 20, 28};
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(32, 32) * complexd(0.7, -0.2);
    LocalRepFamily constant;
    constant.centers = centers;
    {
        ParamFamily f;
        f.Q.push_back(Eigen::VectorXd::Zero(1));
        f.A.push_back(M);
        constant.reps.assign(centers.size(), f);
    }
    constant.hood_radius = [](double eps) { return eps; };
    std::vector<Eigen::VectorXd> psi(centers.size(), Eigen::VectorXd::Zero(32));
    for (int i = 0; i < 32; ++i) {
        std::vector<double> raw(centers.size());
        double total = 0.0;
        for (size_t c = 0; c < centers.size(); ++c) {
            const double dist = (Y.nodes[i] - Y.nodes[centers[c]]).norm();
            raw[c] = std::max(0.0, 1.0 - dist / 0.2); // pairwise overlaps only
            total += raw[c] * raw[c];
        }
        for (size_t c = 0; c < centers.size(); ++c) psi[c][i] = raw[c] / std::sqrt(total);
    }
    const GlueResult gc = glue(constant, Y, psi, 0.5);
    double exact = 0.0;
    for (const auto& a : gc.family.A) exact = std::max(exact, (a - M).cwiseAbs().maxCoeff());
    pass = pass && exact < 1e-12;

    // Corollary bound with the reported overlap constant on the interval
    // frozen-coefficient example.
    const double L = 2.0;
    const double eps = 0.4;
    LocalRepFamily frozen;
    frozen.centers = centers;
    for (int c : centers) {
        ParamFamily f;
        f.Q.push_back(Eigen::VectorXd::Zero(1));
        Eigen::VectorXd diag = Eigen::VectorXd::Constant(32, L * Y.nodes[c][0] + 0.5);
        f.A.push_back(diag.cast<complexd>().asDiagonal());
        frozen.reps.push_back(f);
    }
    frozen.hood_radius = [&](double e) { return e / (2.0 * L); };
    pass = pass && family_continuity(frozen, Y, eps).pass;
    const GlueResult gf = glue(frozen, Y, psi, eps);
    pass = pass && gf.corollary_bound_ok &&
           gf.worst_local_defect <= gf.overlap_count * eps;

    report("localization-suite", pass,
           "monotone restricted norms, exact constant gluing, corollary bound C = " +
               std::to_string(gf.overlap_count));
}

void end_to_end_ellipticity() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;

    const CornerComplex interval = interval_complex();
    SymbolTuple tuple = build_restricted_tuple(elliptic_scalar, interval, 1);
    pass = pass && check_comp1(tuple, 1e-9).pass;
    pass = pass && check_comp2(tuple, 1e-9).pass;

    EllipticityOptions opt;
    opt.tol = 1e-3;
    const EllipticityReport er = is_elliptic(tuple, opt);
    pass = pass && er.elliptic;

    // Independent finite-section check of the glued global quantization at
    // N = 256 through the localization machinery.
    LatticeModel model{1, 256, 1, 0.5};
    const auto q_grid = param_grid_with_annulus(1, 4, 2.0, 8.0);
    const ParamFamily global = quantize_interior(tuple.sigma0, 0, model, q_grid);
    GridSpace X;
    for (int i = 0; i < 256; ++i)
        X.nodes.push_back(Eigen::VectorXd::Constant(1, i * model.spacing));
    X.weights = Eigen::VectorXd::Constant(256, model.spacing);
    X.hood_radius0 = 16.0;
    LocalRepFamily reps;
    reps.centers = {64, 192};
    reps.reps = {global, global};
    reps.hood_radius = [](double e) { return 16.0 * e; };
    const FredholmReport fr = fredholm_check(global, reps, X, 1e-3);
    pass = pass && fr.fredholm && fr.inverse_residual < 0.05;

    // Perturbing one face-symbol sample must flip comp1 with the right
    // witness.
    SymbolTuple broken = build_restricted_tuple(elliptic_scalar, interval, 1);
    broken.face_symbols.at(2).tuple->sigma0.value(0, 5) +=
        Eigen::MatrixXcd::Constant(1, 1, 0.5);
    const CompatReport cr = check_comp1(broken, 1e-9);
    pass = pass && !cr.pass && cr.worst_face == 2 && cr.worst_node == 5;

    const double ms = ms_since(t0);
    pass = pass && ms < 60000.0;
    report("end-to-end-ellipticity", pass,
           "comp1/comp2 at 1e-9, elliptic, finite-section residual " +
               std::to_string(fr.inverse_residual) + ", witness recovery, " +
               std::to_string(ms) + " ms");
}

void exp_map_certificates() {
    bool pass = true;

    Chart a;
    a.face = 1;
    a.normal_dim = 1;
    a.tangent_dim = 1;
    a.map = PolynomialMap::identity(2);
    Chart b = a;
    {
        PolynomialMap m = PolynomialMap::identity(2);
        PolynomialMap::Term cross;
        cross.coeff = 0.3;
        cross.exponents = {1, 1};
        m.components[1].push_back(cross);
        b.map = std::move(m);
    }
    PartitionOfUnity part;
    part.bumps.push_back({Eigen::VectorXd::Constant(1, 0.2), 0.55});
    part.bumps.push_back({Eigen::VectorXd::Constant(1, 0.8), 0.55});

    GlueOptions opt;
    opt.base_samples_per_axis = 50;
    opt.fiber_samples_per_axis = 50;
    const ExpMapGrid grid = glue_exp_maps({a, b}, part, 1, opt);
    pass = pass && grid.zero_section_exact;
    pass = pass && grid.min_abs_jacobian > 0.5;

    Chart v;
    v.face = 2;
    v.normal_dim = 2;
    v.tangent_dim = 0;
    v.map = PolynomialMap::identity(2);
    PartitionOfUnity vpart;
    vpart.bumps.push_back({Eigen::VectorXd::Zero(0), 1.0});
    const ExpMap f_vertex({v}, vpart, 2, 0.5);
    const ExpMap f_edge({a, b}, part, 1, 0.25);

    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            samples.push_back({Eigen::VectorXd::Constant(1, 0.02 + 0.45 * i / 20.0),
                               Eigen::VectorXd::Constant(1, 0.01 + 0.2 * j / 20.0)});
    const DiagramResidual res = check_compatibility_diagram(f_edge, f_vertex, samples, 1e-8);
    pass = pass && res.pass;

    Chart b_bad = b;
    {
        PolynomialMap m = PolynomialMap::identity(2);
        PolynomialMap::Term cross;
        cross.coeff = 0.3;
        cross.exponents = {1, 1};
        m.components[1].push_back(cross);
        PolynomialMap::Term bad;
        bad.coeff = 0.05;
        bad.exponents = {0, 2};
        m.components[0].push_back(bad);
        b_bad.map = std::move(m);
    }
    const ExpMap f_bad({a, b_bad}, part, 1, 0.25);
    const DiagramResidual bad = check_compatibility_diagram(f_bad, f_vertex, samples, 1e-8);
    pass = pass && !bad.pass;

    report("exp-map-certificates", pass,
           "zero section exact, |det J| >= " + std::to_string(grid.min_abs_jacobian) +
               ", diagram residual " + std::to_string(res.max_residual) +
               ", perturbation detected at " + std::to_string(bad.max_residual));
}

void composition_homomorphism() {
    const CornerComplex square = from_polytope(square_incidence(), 2);
    const SymbolTuple ta = build_restricted_tuple(elliptic_scalar, square, 1);
    const SymbolTuple tb = build_restricted_tuple(second_scalar, square, 1);
    auto product = [](const Eigen::VectorXd& z) {
        return (elliptic_scalar(z) * second_scalar(z)).eval();
    };
    const SymbolTuple tab = build_restricted_tuple(product, square, 1);
    const SymbolTuple composed = compose(ta, tb);

    std::function<double(const SymbolTuple&, const SymbolTuple&)> worst_diff =
        [&](const SymbolTuple& x, const SymbolTuple& y) {
            double worst = 0.0;
            for (int b = 0; b < x.sigma0.base_count(); ++b)
                for (int k = 0; k < x.sigma0.grid().size(); ++k)
                    worst = std::max(
                        worst,
                        (x.sigma0.value(b, k) - y.sigma0.value(b, k)).cwiseAbs().maxCoeff());
            for (const auto& [face, fs] : x.face_symbols)
                worst =
                    std::max(worst, worst_diff(*fs.tuple, *y.face_symbols.at(face).tuple));
            return worst;
        };
    const double diff = worst_diff(composed, tab);
    report("composition-homomorphism", diff < 1e-9,
           "compose vs restricted product differ by " + std::to_string(diff));
}

} // namespace

int main() {
    polytope_duality();
    boundary_retraction();
    cone_fibration_roundtrip();
    one_gon_injectivity();
    multiplier_roundtrip();
    group_uniqueness();
    localization_suite();
    end_to_end_ellipticity();
    exp_map_certificates();
    composition_homomorphism();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
