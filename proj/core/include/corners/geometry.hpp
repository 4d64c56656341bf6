#ifndef CORNERS_GEOMETRY_HPP
#define CORNERS_GEOMETRY_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corners/complex.hpp"

namespace corners {

/// Polynomial map R^in -> R^out given by monomial coefficient tables, the
/// wire format of chart transition data.
struct PolynomialMap {
    struct Term {
        double coeff = 0.0;
        std::vector<int> exponents; ///< one exponent per input coordinate
    };
    int input_dim = 0;
    int output_dim = 0;
    std::vector<std::vector<Term>> components;

    Eigen::VectorXd operator()(const Eigen::VectorXd& p) const;
    static PolynomialMap identity(int dim);
};

/// C^2 bump (1 - s^2)^3 supported on |u - center| < radius.
struct BumpFunction {
    Eigen::VectorXd center;
    double radius = 1.0;
    double operator()(const Eigen::VectorXd& u) const;
};

/// Family of bumps used as a partition of unity over a chart cover. When
/// `normalized` is set the family divides by the pointwise sum (exact
/// partition up to rounding); a raw family is checked against 1 by the
/// consumers.
struct PartitionOfUnity {
    std::vector<BumpFunction> bumps;
    bool normalized = true;

    int size() const { return static_cast<int>(bumps.size()); }
    double value(int c, const Eigen::VectorXd& u) const;
};

/// One chart of the exponential atlas of a face: local model
/// quadrant(d) x R^{n-d}, the local exponential map as a polynomial table
/// over (base, rho), and the defining-function bookkeeping.
struct Chart {
    FaceId face = 0;
    int normal_dim = 0;  ///< d, the straddled codimension
    int tangent_dim = 0; ///< n - d
    std::vector<std::string> defining_labels;
    double domain_bound = 1.5; ///< defining functions are coordinates where < 3/2
    PolynomialMap map;         ///< (u, rho) -> ambient point; "rho = r" is the identity table
    int dim() const { return normal_dim + tangent_dim; }
};

struct TransitionDecomposition {
    Permutation pi;
    Eigen::VectorXd lambda; ///< strictly positive diagonal
    Eigen::MatrixXd pi_matrix() const;
};

/// Splits the normal block of a transition at rho = 0 into
/// permutation x positive diagonal. Throws naming the offending row when the
/// matrix does not have that shape.
TransitionDecomposition decompose_transition(const Eigen::MatrixXd& A, double tol = 1e-12);

/// Duality pairing of a conormal form (coefficients of rho^-1 drho) against a
/// normal vector: plain coefficient sum.
double pairing(const Eigen::VectorXd& omega, const Eigen::VectorXd& xi);

Eigen::VectorXd log_coords(const Eigen::VectorXd& rho); ///< t = -ln rho, needs rho > 0
Eigen::VectorXd exp_coords(const Eigen::VectorXd& t);   ///< rho = e^-t

/// Glued exponential map of one face: convex combination of chart maps under
/// a partition of unity, evaluable anywhere in its |rho| <= eps domain.
class ExpMap {
public:
    ExpMap(std::vector<Chart> charts, PartitionOfUnity partition, FaceId face, double eps);

    /// Fiberwise glued value at base point u (tangent coords) and fiber rho.
    Eigen::VectorXd operator()(const Eigen::VectorXd& u, const Eigen::VectorXd& rho) const;

    /// The face immersion: the glued map on the zero section.
    Eigen::VectorXd immersion(const Eigen::VectorXd& u) const;

    FaceId face() const { return face_; }
    int base_dim() const { return tangent_dim_; }
    int fiber_dim() const { return normal_dim_; }
    int ambient_dim() const { return tangent_dim_ + normal_dim_; }
    double eps() const { return eps_; }

private:
    std::vector<Chart> charts_;
    PartitionOfUnity partition_;
    FaceId face_ = 0;
    int normal_dim_ = 0;
    int tangent_dim_ = 0;
    double eps_ = 0.0;
};

/// Sampled certificate of a glued exponential map.
struct ExpMapGrid {
    FaceId face = 0;
    double eps = 0.0;
    std::vector<Eigen::VectorXd> base_samples;
    std::vector<Eigen::VectorXd> fiber_samples;
    std::vector<Eigen::VectorXd> values; ///< base-major over (base, fiber)
    bool zero_section_exact = false;
    double min_abs_jacobian = 0.0;
    bool injective_near_face = false;
    double min_image_separation = 0.0; ///< over the near-face sample set
    double near_face_rho = 0.0;        ///< fiber layer on which injectivity was sampled
};

struct GlueOptions {
    double eps = 0.25;
    int base_samples_per_axis = 20;
    int fiber_samples_per_axis = 5;
    std::pair<double, double> base_range{0.0, 1.0};
    double jacobian_tol = 1e-8;
    double fd_step = 1e-6;
};

/// Glues the atlas into one exponential map and certifies it on a grid:
/// exact zero-section equality, nonsingular finite-difference Jacobians, and
/// sampled injectivity near the open face. Throws when the partition fails to
/// sum to 1 within 1e-12 or a Jacobian is singular (naming the sample).
ExpMapGrid glue_exp_maps(const std::vector<Chart>& atlas, const PartitionOfUnity& partition,
                         FaceId face, const GlueOptions& options = {});

/// The glued map kept as a callable for diagram checks.
ExpMap glued_exp_map(const std::vector<Chart>& atlas, const PartitionOfUnity& partition,
                     FaceId face, double eps);

struct DiagramResidual {
    double max_residual = 0.0;
    bool pass = false;
    Eigen::VectorXd worst_base;
    Eigen::VectorXd worst_fiber;
};

/// Two-path comparison around the compatibility square for adjacent faces:
/// project-then-map against map-then-project, with the inverse of the deeper
/// map computed by a damped Newton solve.
DiagramResidual check_compatibility_diagram(
    const ExpMap& f_j, const ExpMap& f_l,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples, double tol);

struct ConvexDiffeoReport {
    bool hypothesis_ok = false; ///< all Jacobian ratios at 0 diagonal
    bool conclusion_ok = false; ///< combined map nonsingular on shrinking balls
    double worst_off_diagonal = 0.0;
    double min_abs_det = 0.0;
};

/// Checks the gluing lemma hypotheses and conclusion for a family of corner
/// diffeomorphisms of the closed quadrant of dimension `dim` fixing the
/// origin, combined with nonnegative weights.
ConvexDiffeoReport convex_diffeo_check(
    const std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>& maps,
    const Eigen::VectorXd& lambdas, int dim, int samples_per_ball = 8, double tol = 1e-6);

} // namespace corners

#endif
