#include <doctest.h>

#include <random>

#include "corners/symbols.hpp"
#include "oracles.hpp"

using namespace corners;
using namespace testutil;
using complexd = std::complex<double>;

namespace {

/// The running elliptic example: (i(sum of covector and parameter slots) + 1)
/// over the l1 norm plus one; slot-symmetric, hence chart-coherent.
Eigen::MatrixXcd elliptic_scalar(const Eigen::VectorXd& z) {
    const complexd num(1.0, z.sum());
    return Eigen::MatrixXcd::Constant(1, 1, num / (z.cwiseAbs().sum() + 1.0));
}

Eigen::MatrixXcd second_scalar(const Eigen::VectorXd& z) {
    return Eigen::MatrixXcd::Constant(
        1, 1, complexd(2.0 + z.cwiseAbs().maxCoeff(), -0.5 * z.sum()));
}

} // namespace

TEST_CASE("sphere grids") {
    const SphereGrid circle(2, 32);
    CHECK(circle.size() == 32);
    for (int k = 0; k < 32; ++k) {
        CHECK(circle.point(k).norm() == doctest::Approx(1.0));
        // closure under the coordinate swap
        Eigen::Vector2d swapped(circle.point(k)[1], circle.point(k)[0]);
        const int j = circle.nearest(swapped);
        CHECK((circle.point(j) - swapped).norm() < 1e-12);
    }
    const SphereGrid s2(3, 8);
    CHECK(s2.size() == 64);
    const SphereGrid pair(1);
    CHECK(pair.size() == 2);
}

TEST_CASE("homogeneity is structural: scaling does not change evaluation") {
    const CornerComplex c = interval_complex();
    const SymbolTuple t = build_restricted_tuple(elliptic_scalar, c, 1);
    const Eigen::Vector2d z(0.3, -0.8);
    const Eigen::MatrixXcd a = t.sigma0.eval(0, z);
    const Eigen::MatrixXcd b = t.sigma0.eval(0, (2.0 * z).eval());
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scv: constant families pass") {
    ParamFamily A;
    for (double q : {0.5, 1.5, 9.0, 10.0})
        A.Q.push_back(Eigen::VectorXd::Constant(1, q)),
            A.A.push_back(Eigen::MatrixXcd::Identity(8, 8));
    const auto report = scv_check(A, 2.0, 1e-10, 8.0);
    CHECK(report.pass);
}

TEST_CASE("scv: arctan times a fixed low-rank operator passes") {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(16, 16);
    K(0, 0) = 1.0; // rank one
    ParamFamily A;
    for (double q = 0.5; q < 40.0; q *= 1.5) {
        A.Q.push_back(Eigen::VectorXd::Constant(1, q));
        A.A.push_back(std::atan(q) * K);
    }
    const auto report = scv_check(A, 3.0, 5e-2, 20.0);
    CHECK(report.compact_ok);
    CHECK(report.slow_ok);
    CHECK(report.pass);
}

TEST_CASE("scv: sin of the radius fails slow variation") {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(16, 16);
    K(0, 0) = 1.0;
    ParamFamily A;
    for (double q = 30.0; q < 40.0; q += 1.5) {
        A.Q.push_back(Eigen::VectorXd::Constant(1, q));
        A.A.push_back(std::sin(q) * K);
    }
    const auto report = scv_check(A, 2.0, 5e-2, 20.0);
    CHECK(report.compact_ok);
    CHECK(!report.slow_ok);
    CHECK(!report.pass);
}

TEST_CASE("quantize_interior of the constant symbol is the identity family") {
    SphereGrid circle(2, 32);
    InteriorSymbol sigma0(circle, {{0, Eigen::VectorXd()}});
    std::vector<std::vector<Eigen::MatrixXcd>> values(
        1, std::vector<Eigen::MatrixXcd>(circle.size(), Eigen::MatrixXcd::Identity(1, 1)));
    sigma0.set_values(values);

    LatticeModel model{1, 16, 1, 1.0};
    const auto family = quantize_interior(sigma0, 0, model, param_grid_with_annulus(1, 2, 1.0, 4.0));
    for (const auto& a : family.A)
        CHECK((a - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quantize_interior matches extract_symbol samples") {
    SphereGrid circle(2, 32);
    InteriorSymbol sigma0(circle, {{0, Eigen::VectorXd()}});
    auto formula = [](const Eigen::VectorXd& z) {
        return Eigen::MatrixXcd::Constant(1, 1, z[0] / (std::abs(z[0]) + std::abs(z[1])));
    };
    std::vector<std::vector<Eigen::MatrixXcd>> values(1);
    for (int k = 0; k < circle.size(); ++k) values[0].push_back(formula(circle.point(k)));
    sigma0.set_values(values);
    sigma0.set_evaluator([formula](int, const Eigen::VectorXd& u) { return formula(u); });

    LatticeModel model{1, 16, 1, 1.0};
    const std::vector<Eigen::VectorXd> q_grid = {Eigen::VectorXd::Constant(1, 1.3)};
    const ParamFamily family = quantize_interior(sigma0, 0, model, q_grid);

    TranslationInvariantOp op{model, family.A[0]};
    const MultiplierSymbol back = extract_symbol(op);
    for (int k = 0; k < model.lattice_size(); ++k) {
        Eigen::VectorXd arg(2);
        arg << model.frequency(k), q_grid[0];
        CHECK((back.values[k] - sigma0.eval(0, arg)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("restricted tuple on the interval") {
    const CornerComplex c = interval_complex();
    const SymbolTuple t = build_restricted_tuple(elliptic_scalar, c, 1);
    CHECK(t.sphere_dim() == 2);
    CHECK(t.face_symbols.size() == 2);
    for (const auto& [face, fs] : t.face_symbols) {
        CHECK(fs.param_dim == 2);
        CHECK(fs.tuple->complex.face_count() == 1);
    }
    CHECK(check_comp1(t, 1e-9).pass);
    CHECK(check_comp2(t, 1e-9).pass);
}

TEST_CASE("zero symbols pass both compatibility checks") {
    auto zero = [](const Eigen::VectorXd&) { return Eigen::MatrixXcd::Zero(1, 1); };
    const SymbolTuple t = build_restricted_tuple(zero, one_gon_complex(), 1);
    CHECK(check_comp1(t, 1e-12).pass);
    CHECK(check_comp2(t, 1e-12).pass);
}

TEST_CASE("comp1 fails at the perturbed sample with the right witness") {
    const CornerComplex c = interval_complex();
    SymbolTuple t = build_restricted_tuple(elliptic_scalar, c, 1);
    SymbolTuple& left = *t.face_symbols.at(1).tuple;
    const int node = 7;
    left.sigma0.value(0, node) += Eigen::MatrixXcd::Constant(1, 1, 0.5);
    const auto report = check_comp1(t, 1e-9);
    CHECK(!report.pass);
    CHECK(report.worst == doctest::Approx(0.5));
    CHECK(report.worst_face == 1);
    CHECK(report.worst_node == node);
}

TEST_CASE("square restricted tuple satisfies comp2") {
    const CornerComplex square = from_polytope(square_incidence(), 2);
    const SymbolTuple t = build_restricted_tuple(elliptic_scalar, square, 1);
    CHECK(t.face_symbols.size() == 8);
    CHECK(check_comp1(t, 1e-9).pass);
    CHECK(check_comp2(t, 1e-9).pass);
}

TEST_CASE("1-gon comp2 compresses the two sheets and detects asymmetry") {
    const CornerComplex gon = one_gon_complex();
    SymbolTuple t = build_restricted_tuple(elliptic_scalar, gon, 1);
    REQUIRE(check_comp2(t, 1e-9).pass);

    // Perturb one endpoint (one sheet over the corner) of the edge symbol;
    // sheet 2 carries the identity slot assignment, so its stored samples are
    // exactly the ones the compression reads.
    SymbolTuple& edge = *t.face_symbols.at(1).tuple;
    SymbolTuple& one_end = *edge.face_symbols.at(2).tuple;
    for (int k = 0; k < one_end.sigma0.grid().size(); ++k)
        one_end.sigma0.value(0, k) += Eigen::MatrixXcd::Constant(1, 1, 0.5);
    const auto report = check_comp2(t, 1e-9);
    CHECK(!report.pass);
    // The average of one perturbed and one clean sheet misses by half.
    CHECK(report.worst == doctest::Approx(0.25));
}

TEST_CASE("covering triangles exist exactly for covered pairs") {
    const CornerComplex gon = one_gon_complex();
    const auto triangles = covering_triangles(gon, 1, 2);
    CHECK(triangles.size() == 2);
    for (const auto& tri : triangles) CHECK(tri.commutes);
    CHECK(triangles[0].slot_injection != triangles[1].slot_injection);
    CHECK_THROWS_WITH_AS(covering_triangles(interval_complex(), 1, 2),
                         doctest::Contains("no covering triangle"), std::invalid_argument);
}

TEST_CASE("depth-3 cube tuple passes both checks and is elliptic") {
    // Exercises the re-indexed covering records of nested closed faces and
    // three levels of comp2 recursion; coarser grids keep it quick.
    const CornerComplex cube = from_polytope(cube_incidence(), 3);
    TupleBuildOptions bopt;
    bopt.sphere_points_per_angle = 8;
    const SymbolTuple t = build_restricted_tuple(elliptic_scalar, cube, 1, bopt);
    CHECK(t.face_symbols.size() == 26);
    CHECK(t.sphere_dim() == 4);
    CHECK(check_comp1(t, 1e-9).pass);
    CHECK(check_comp2(t, 1e-9).pass);

    EllipticityOptions eopt;
    eopt.tol = 1e-3;
    eopt.model_points = 32;
    eopt.params_per_axis = 2;
    const auto report = is_elliptic(t, eopt);
    CHECK(report.elliptic);
    CHECK(report.min_interior_singular > 0.3);
}

TEST_CASE("compose with the identity tuple is the identity") {
    auto one = [](const Eigen::VectorXd&) { return Eigen::MatrixXcd::Identity(1, 1); };
    const CornerComplex c = interval_complex();
    const SymbolTuple t = build_restricted_tuple(elliptic_scalar, c, 1);
    const SymbolTuple id = build_restricted_tuple(one, c, 1);
    const SymbolTuple prod = compose(t, id);
    for (int b = 0; b < t.sigma0.base_count(); ++b)
        for (int k = 0; k < t.sigma0.grid().size(); ++k)
            CHECK((prod.sigma0.value(b, k) - t.sigma0.value(b, k)).cwiseAbs().maxCoeff() <
                  1e-15);
}

TEST_CASE("compose equals the restricted tuple of the product") {
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
                worst = std::max(worst,
                                 worst_diff(*fs.tuple, *y.face_symbols.at(face).tuple));
            return worst;
        };
    CHECK(worst_diff(composed, tab) < 1e-9);
    CHECK(check_comp1(composed, 1e-9).pass);
    CHECK(check_comp2(composed, 1e-9).pass);
}

TEST_CASE("composition is associative to machine precision") {
    const CornerComplex c = interval_complex();
    const SymbolTuple a = build_restricted_tuple(elliptic_scalar, c, 1);
    const SymbolTuple b = build_restricted_tuple(second_scalar, c, 1);
    auto third = [](const Eigen::VectorXd& z) {
        return Eigen::MatrixXcd::Constant(1, 1, complexd(0.3, 0.1) + complexd(z[0], 0.0));
    };
    const SymbolTuple d = build_restricted_tuple(third, c, 1);
    const SymbolTuple left = compose(compose(a, b), d);
    const SymbolTuple right = compose(a, compose(b, d));
    for (int k = 0; k < left.sigma0.grid().size(); ++k)
        CHECK((left.sigma0.value(0, k) - right.sigma0.value(0, k)).cwiseAbs().maxCoeff() <
              1e-12);
}

TEST_CASE("identity tuple is elliptic") {
    auto one = [](const Eigen::VectorXd&) { return Eigen::MatrixXcd::Identity(1, 1); };
    const SymbolTuple t = build_restricted_tuple(one, interval_complex(), 1);
    const auto report = is_elliptic(t);
    CHECK(report.elliptic);
    CHECK(report.min_interior_singular == doctest::Approx(1.0));
}

TEST_CASE("a vanishing sphere sample breaks ellipticity with a witness") {
    SymbolTuple t = build_restricted_tuple(elliptic_scalar, interval_complex(), 1);
    t.sigma0.value(0, 3) = Eigen::MatrixXcd::Zero(1, 1);
    const auto report = is_elliptic(t);
    CHECK(!report.elliptic);
    CHECK(report.witness.find("node 3") != std::string::npos);
}

TEST_CASE("the interval tuple of the running example is elliptic") {
    const SymbolTuple t = build_restricted_tuple(elliptic_scalar, interval_complex(), 1);
    REQUIRE(check_comp1(t, 1e-9).pass);
    REQUIRE(check_comp2(t, 1e-9).pass);
    const auto report = is_elliptic(t);
    CHECK(report.elliptic);
    CHECK(report.min_interior_singular > 0.4);
    CHECK(report.min_family_singular > 1e-3);
}

TEST_CASE("ellipticity is stable under perturbations below half the tolerance") {
    EllipticityOptions opt;
    opt.tol = 1e-3;
    SymbolTuple t = build_restricted_tuple(elliptic_scalar, interval_complex(), 1);
    const bool before = is_elliptic(t, opt).elliptic;
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int b = 0; b < t.sigma0.base_count(); ++b)
        for (int k = 0; k < t.sigma0.grid().size(); ++k)
            t.sigma0.value(b, k) +=
                Eigen::MatrixXcd::Constant(1, 1, opt.tol / 2.0 * 0.9 * unif(rng));
    CHECK(is_elliptic(t, opt).elliptic == before);
}

TEST_CASE("slot equivariance certifies symmetric face symbols") {
    // A corner with the swap group: symbols must be invariant under swapping
    // the two normal parameter slots.
    const auto s2 = PermutationGroup::generated_by({Permutation::transposition(2, 0, 1)}, 2);
    const SymbolTuple sym = build_restricted_tuple(elliptic_scalar, interval_complex(), 1);
    // The interval endpoint symbol has slots (p, q); test invariance under
    // swapping them for a symmetric and an asymmetric formula.
    const SymbolTuple& endpoint = *sym.face_symbols.at(1).tuple;
    CHECK(slot_equivariance_defect(endpoint.sigma0, s2, 0) < 1e-12);

    auto skew = [](const Eigen::VectorXd& z) {
        return Eigen::MatrixXcd::Constant(1, 1, complexd(z[0] - 2.0 * z[1], 1.0));
    };
    const SymbolTuple asym = build_restricted_tuple(skew, interval_complex(), 1);
    const SymbolTuple& endpoint2 = *asym.face_symbols.at(1).tuple;
    CHECK(slot_equivariance_defect(endpoint2.sigma0, s2, 0) > 0.1);
}
