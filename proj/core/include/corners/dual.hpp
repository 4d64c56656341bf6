#ifndef CORNERS_DUAL_HPP
#define CORNERS_DUAL_HPP

#include <functional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corners/complex.hpp"

namespace corners {

/// Stratum of the dual space contributed by a positive-codim face: the open
/// (codim-1)-simplex modulo the face's structure group.
struct DualStratum {
    FaceId source_face = 0;
    int dim = 0; ///< codim(source) - 1; hyperfaces give points
    PermutationGroup quotient_group;
    /// Orbit count of the group action on the simplex's coordinate letters
    /// (at the barycenter every letter class collapses to one orbit point).
    int orbit_count_at_barycenter = 1;
};

struct DualComplex {
    bool has_interior = true; ///< the interior of M is always part of the dual space
    std::vector<DualStratum> strata;
    /// (a, b) with stratum b contained in the closure of stratum a, so
    /// dimension decreases along pairs; as a relation this is the opposite of
    /// the source-face adjacency.
    std::set<std::pair<int, int>> adjacency;

    int stratum_count() const { return static_cast<int>(strata.size()); }
    std::vector<int> strata_of_dim(int d) const {
        std::vector<int> out;
        for (int i = 0; i < stratum_count(); ++i)
            if (strata[i].dim == d) out.push_back(i);
        return out;
    }
};

/// One stratum per positive-codim face; adjacency reversed from the source
/// lattice.
DualComplex dualize(const CornerComplex& complex);

/// Neighborhood of a dual stratum fibered over it with a cone fiber; the cone
/// base is the dual of the closed face, computed recursively.
struct ConeFibration {
    DualStratum base;
    DualComplex cone_base;
    bool product_form = true; ///< U^# = F^# x cone(cone_base)
};

/// Requires a trivial structure group (the fibration statement assumes the
/// normal bundle is trivial); throws otherwise.
ConeFibration cone_neighborhood(const CornerComplex& complex, FaceId j);

/// Point of the positive normal quadrant in logarithmic coordinates:
/// y = -log of the defining functions (fiber), x = log coordinates toward a
/// deeper face of the base, omega = remaining base coordinates.
struct LogPoint {
    Eigen::VectorXd y;
    Eigen::VectorXd x;
    Eigen::VectorXd omega;

    double x_total() const { return x.size() ? x.sum() : 0.0; }
    bool in_U() const { return y.size() > 0 && y.minCoeff() > x_total() + 1.0; }
};

struct FibrationImage {
    Eigen::VectorXd theta; ///< point of the open simplex, sum = 1
    double r = 0.0;        ///< cone radius in (0, 1)
    Eigen::VectorXd x;
    Eigen::VectorXd omega;
};

FibrationImage fibration_forward(const LogPoint& p);
LogPoint fibration_inverse(const FibrationImage& img);

/// Certificate that the projection of the neighborhood U into M is
/// one-to-one: for every nonempty swap set I the original inequality system
/// and the index-swapped one are jointly infeasible.
struct InjectivityReport {
    bool vacuous = false;     ///< face has no self-adjacent closure
    bool symbolic_pass = true; ///< every swap set refuted by the summed-inequality certificate
    bool sampled_pass = true;  ///< no sampled point satisfied both systems
    long samples_checked = 0;
    std::vector<int> counterexample_set; ///< swap set of a failure, empty if none
};

InjectivityReport check_U_injectivity(const CornerComplex& complex, FaceId j,
                                      int samples, unsigned seed = 0);

/// Numeric membership test for the algebra of functions with uniform radial
/// limits: f(omega * R, x) must be Cauchy along the radius schedule uniformly
/// in the ray omega and the transverse variable x.
struct CkmOptions {
    std::vector<double> radii;      ///< default 2^3 .. 2^16
    int rays_per_axis = 16;         ///< resolution of the direction grid
    std::vector<Eigen::VectorXd> x_samples; ///< transverse samples; empty = origin only
    double tol = 1e-6;
};

struct CkmReport {
    bool accepted = false;
    double achieved_modulus = 0.0; ///< worst final Cauchy increment over (ray, x)
    double x_variation = 0.0;      ///< worst x-dependence at the final radius
    std::vector<Eigen::VectorXd> rays;
    std::vector<double> boundary_values; ///< empirical F(omega) per ray
};

CkmReport ckm_membership(const std::function<double(const Eigen::VectorXd&,
                                                    const Eigen::VectorXd&)>& f,
                         int ray_dim, int x_dim, const CkmOptions& options = {});

std::vector<double> default_radius_schedule();

} // namespace corners

#endif
