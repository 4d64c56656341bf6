#ifndef CORNERS_LOCALIZATION_HPP
#define CORNERS_LOCALIZATION_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace corners {

/// Finite metric measure space carrying the localization checks: nodes with
/// positive weights and a dyadic family of shrinking neighborhoods.
struct GridSpace {
    std::vector<Eigen::VectorXd> nodes;
    Eigen::VectorXd weights;
    double hood_radius0 = 1.0; ///< largest radius of the dyadic family r_i = r0 2^-i

    int size() const { return static_cast<int>(nodes.size()); }
    std::vector<int> ball(int center, double radius) const;
    std::vector<double> dyadic_radii(int levels = 9) const;
    void check() const; ///< positive weights, nonempty

    /// Uniform grid on [lo, hi] with unit total weight.
    static GridSpace interval(int n, double lo = 0.0, double hi = 1.0);
};

/// Bounded operator family over a finite parameter grid; the grid is expected
/// to include a large-|q| annulus so decay at infinity is visible.
struct ParamFamily {
    std::vector<Eigen::VectorXd> Q;
    std::vector<Eigen::MatrixXcd> A;

    int params() const { return static_cast<int>(Q.size()); }
    double sup_norm() const;
    void check(int space_dim) const;
};

/// Half-offset core grid of parameters in R^s plus an annulus of the given
/// radius (the finite stand-in for the behavior at infinity).
std::vector<Eigen::VectorXd> param_grid_with_annulus(int s, int per_axis, double core_max,
                                                     double annulus_radius,
                                                     int annulus_count = 16);

/// Operator norm with respect to the weighted inner products.
double weighted_norm(const GridSpace& X, const Eigen::MatrixXcd& M);
double weighted_min_singular_value(const GridSpace& X, const Eigen::MatrixXcd& M);

/// sup over q of the norm of A(q) restricted to functions supported in U.
double restricted_norm(const ParamFamily& A, const GridSpace& X, const std::vector<int>& U);

struct IdealProfile {
    std::vector<double> radii;
    std::vector<double> values; ///< restricted norms on the shrinking balls
    bool in_ideal = false;      ///< final value below tolerance
};

IdealProfile ideal_membership_profile(const ParamFamily& A, const GridSpace& X, int node,
                                      const std::vector<double>& radii, double tol);

struct LocalityReport {
    bool pass = false;
    double worst_annulus_norm = 0.0; ///< commutator norm on the far parameter annulus
    double worst_tail = 0.0;         ///< singular value past the rank budget, any q
    int rank_budget = 0;
};

/// Local-operator test: commutators with multiplication operators must decay
/// in the parameter and be compact (singular value tail past the budget).
LocalityReport commutator_locality_check(const ParamFamily& A, const GridSpace& X,
                                         const std::vector<Eigen::VectorXd>& test_functions,
                                         double tol);

/// Family of local representatives: one parameter family per owning node,
/// with neighborhoods U(eps, x) = ball(x, hood_radius(eps)).
struct LocalRepFamily {
    std::vector<int> centers;
    std::vector<ParamFamily> reps;
    std::function<double(double)> hood_radius;
};

struct ContinuityReport {
    bool pass = false;
    double worst_value = 0.0;
    int worst_a = -1;
    int worst_b = -1;
};

/// Checks ||A_y - A_y'|| restricted to U(eps,y) n U(eps,y') against eps for
/// every pair of centers.
ContinuityReport family_continuity(const LocalRepFamily& F, const GridSpace& X, double eps);

struct GlueResult {
    ParamFamily family;
    int overlap_count = 0;        ///< max number of patches covering one node
    double worst_local_defect = 0.0; ///< max restricted_norm(A_x - A, U(eps,x))
    bool corollary_bound_ok = false; ///< worst defect <= overlap_count * eps
};

/// Symmetric gluing A = sum psi_x A_x psi_x of a continuous family under a
/// partition with sum psi^2 = 1 (checked to 1e-12); the corollary-style bound
/// is verified a posteriori and reported.
GlueResult glue(const LocalRepFamily& F, const GridSpace& X,
                const std::vector<Eigen::VectorXd>& partition, double eps);

struct FredholmReport {
    bool fredholm = false;
    double min_singular = 0.0;
    int witness_center = -1;
    int witness_param = -1;
    double inverse_residual = 0.0; ///< finite-section defect past the compact budget
    int rank_budget = 0;
};

/// Localization-based Fredholm certificate: every local representative must
/// be uniformly invertible over the parameter grid; the global family also
/// gets a finite-section cross-check (norm of A pinv(A) - I after allowing a
/// compact defect of rank n/4).
FredholmReport fredholm_check(const ParamFamily& A, const LocalRepFamily& F, const GridSpace& X,
                              double tol);

} // namespace corners

#endif
