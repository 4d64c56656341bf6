#ifndef CORNERS_SYMBOLS_HPP
#define CORNERS_SYMBOLS_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corners/complex.hpp"
#include "corners/localization.hpp"
#include "corners/operators.hpp"

namespace corners {

/// Product angular grid on the unit sphere of R^m. Angles carry half-offsets,
/// so for m <= 2 the grid is closed under coordinate permutations and sign
/// flips; higher-dimensional comparisons go through exact evaluators instead.
class SphereGrid {
public:
    explicit SphereGrid(int ambient_dim, int points_per_angle = 32);

    int ambient_dim() const { return dim_; }
    int size() const { return static_cast<int>(points_.size()); }
    int points_per_angle() const { return per_angle_; }
    const Eigen::VectorXd& point(int i) const { return points_.at(i); }

    /// Node nearest to the radial projection of a nonzero vector.
    int nearest(const Eigen::VectorXd& v) const;

private:
    int dim_ = 0;
    int per_angle_ = 0;
    std::vector<Eigen::VectorXd> points_;
};

/// Degree-0 homogeneous matrix symbol: values live only on the sphere, so
/// evaluation at (lambda xi, lambda q) is the value at the radial projection
/// by construction. A sample either sits in the interior of the base manifold
/// or is attached to a boundary face, where the argument order is
/// (tangent-to-face, conormal frame, parameters).
struct BaseSample {
    FaceId attached_face = kInteriorFace;
    Eigen::VectorXd coords; ///< reporting only
};

class InteriorSymbol {
public:
    InteriorSymbol() : grid_(1, 2) {}
    InteriorSymbol(SphereGrid grid, std::vector<BaseSample> samples);

    using Evaluator = std::function<Eigen::MatrixXcd(int base, const Eigen::VectorXd&)>;

    int base_count() const { return static_cast<int>(samples_.size()); }
    const SphereGrid& grid() const { return grid_; }
    const BaseSample& sample(int b) const { return samples_.at(b); }
    int sample_attached_to(FaceId face) const; ///< -1 if none

    const Eigen::MatrixXcd& value(int base, int node) const;
    Eigen::MatrixXcd& value(int base, int node); ///< mutable for perturbation studies
    void set_values(std::vector<std::vector<Eigen::MatrixXcd>> values);
    void set_evaluator(Evaluator e) { evaluator_ = std::move(e); }
    bool has_evaluator() const { return static_cast<bool>(evaluator_); }
    const Evaluator& evaluator() const { return evaluator_; }

    /// Homogeneous evaluation at a nonzero vector: the stored value when the
    /// projection hits a grid node, the exact evaluator when available, the
    /// nearest node otherwise.
    Eigen::MatrixXcd eval(int base, const Eigen::VectorXd& v) const;

    /// Largest value variation across base samples (reported, not assumed).
    double continuity_modulus() const;
    double min_singular_over_grid(int* worst_base = nullptr, int* worst_node = nullptr) const;
    double max_norm() const;

private:
    SphereGrid grid_;
    std::vector<BaseSample> samples_;
    std::vector<std::vector<Eigen::MatrixXcd>> values_; ///< [base][node]
    Evaluator evaluator_;
};

struct FaceSymbol;

/// Interior symbol plus one face symbol per positive-codim face. The face
/// symbol is independent of the dual point by data layout: there is exactly
/// one per face.
struct SymbolTuple {
    CornerComplex complex;
    int params = 0; ///< parameter dimensions at this level
    InteriorSymbol sigma0;
    std::map<FaceId, FaceSymbol> face_symbols;

    int sphere_dim() const { return complex.ambient_dim + params; }
};

struct FaceSymbol {
    FaceId face = 0;
    int param_dim = 0; ///< codim + parent params
    std::shared_ptr<SymbolTuple> tuple; ///< over the trivializing cover of the closed face
    std::vector<FaceId> local_targets; ///< per face of tuple->complex: parent-level face
    std::vector<int> local_sheets;
    double equivariance_defect = 0.0;
    bool equivariance_checked = false;
};

/// Commuting-triangle data of one covering record between adjacent faces.
struct CoveringTriangle {
    FaceId f1 = 0;
    FaceId f2 = 0;
    int record_index = -1;
    int local_face = 0;   ///< local_face value of the record
    int lattice_face = 0; ///< Gamma's id inside closed_face(f1).complex
    int sheets = 1;
    std::vector<int> slot_injection; ///< parent normal slots inside f2's frame
    bool commutes = false;
};

/// All triangles over an adjacent pair; throws citing the missing triangle
/// when no covering record connects the pair.
std::vector<CoveringTriangle> covering_triangles(const CornerComplex& complex, FaceId f1,
                                                 FaceId f2);

/// Slow-compact-variation test for a parameter family: differences must be
/// compact past the rank budget and the family must settle down on the far
/// annulus.
struct ScvReport {
    bool pass = false;
    bool compact_ok = false;
    bool slow_ok = false;
    double worst_tail = 0.0;
    double worst_far_variation = 0.0;
};

ScvReport scv_check(const ParamFamily& A, double d_window, double eps, double R);

/// Frozen-coefficient quantization of an interior symbol at one base sample:
/// the translation-invariant local representative over a parameter grid.
ParamFamily quantize_interior(const InteriorSymbol& sigma0, int base, const LatticeModel& model,
                              const std::vector<Eigen::VectorXd>& q_grid);

struct CompatReport {
    bool pass = false;
    double worst = 0.0;
    FaceId worst_face = -1;
    int worst_node = -1;
    std::string where; ///< face chain of the worst discrepancy
};

/// Interior-boundary compatibility: the restriction of sigma0 to each face
/// (conormal covector read as extra parameters) must equal the face symbol's
/// own interior symbol; recurses through all levels.
CompatReport check_comp1(const SymbolTuple& tuple, double tol);

/// Face-to-face compatibility along covering triangles: the face symbol of a
/// face symbol, compressed to the sheet-invariant subspace, must equal the
/// deeper face symbol; recurses through all levels.
CompatReport check_comp2(const SymbolTuple& tuple, double tol);

/// Global symbols feeding the restriction construction: one degree-0 function
/// on R^{n+s} minus 0, read in every face's adapted slot order. Coherence
/// across charts is the caller's promise and is spot-checked on overlaps.
using GlobalSymbol = std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>;

struct TupleBuildOptions {
    int sphere_points_per_angle = 32;
    double overlap_tol = 1e-9;
};

/// Builds the symbol tuple of a global symbol by restriction: sphere samples
/// for sigma0, recursive restricted tuples for every face. The output passes
/// both compatibility checks by construction.
SymbolTuple build_restricted_tuple(const GlobalSymbol& symbol, const CornerComplex& complex,
                                   int params, const TupleBuildOptions& options = {});

/// Componentwise product (sphere-sample matrix products, recursive on faces).
SymbolTuple compose(const SymbolTuple& t1, const SymbolTuple& t2);

struct EllipticityOptions {
    double tol = 1e-3;
    int model_points = 128;     ///< lattice size for 1-dim face quantizations
    double annulus_radius = 8.0;
    int params_per_axis = 4;
};

struct EllipticityReport {
    bool elliptic = false;
    double min_interior_singular = 0.0;
    double min_family_singular = 0.0;
    std::string witness; ///< face chain and sample of the failure, empty if elliptic
};

/// Recursive ellipticity: sigma0 uniformly invertible on the sphere samples,
/// every face symbol elliptic, and every face symbol invertible as a
/// parameter family (finite-section quantization on a truncated model).
EllipticityReport is_elliptic(const SymbolTuple& tuple, const EllipticityOptions& options = {});

/// Sup defect of sigma0 under a permutation action on selected argument
/// slots; the structure-group invariance certificate of face symbols.
double slot_equivariance_defect(const InteriorSymbol& sigma0, const PermutationGroup& group,
                                int slot_offset);

} // namespace corners

#endif
