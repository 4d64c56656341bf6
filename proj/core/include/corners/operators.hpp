#ifndef CORNERS_OPERATORS_HPP
#define CORNERS_OPERATORS_HPP

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "corners/permutation.hpp"

namespace corners {

double spectral_norm(const Eigen::MatrixXcd& m);
double min_singular_value(const Eigen::MatrixXcd& m);

/// Periodic lattice model Z_N^d with a base grid of size base_dim attached to
/// every node; discretizes translation-invariant operators so that shift
/// invariance is exact block-circulance.
struct LatticeModel {
    int d = 1;
    int N = 64;        ///< points per axis, even and >= 8 so the frequency grid is symmetric
    int base_dim = 1;
    double spacing = 1.0;

    int lattice_size() const;
    int total_dim() const { return lattice_size() * base_dim; }
    std::vector<int> unflatten(int node) const;
    int flatten(const std::vector<int>& idx) const;
    /// Frequency of a node: q_a = 2 pi (k_a - N/2) / (N h).
    Eigen::VectorXd frequency(int node) const;
    void check() const; ///< throws on invalid sizes
};

/// Operator-valued Fourier multiplier sampled on the model's frequency grid.
struct MultiplierSymbol {
    LatticeModel model;
    std::vector<Eigen::MatrixXcd> values; ///< one base_dim x base_dim block per frequency node

    double max_norm() const;
};

/// Shift-commuting operator on functions over (lattice x base).
struct TranslationInvariantOp {
    LatticeModel model;
    Eigen::MatrixXcd matrix;
};

/// Unitary DFT on the lattice factor (kron over axes), base factor untouched.
Eigen::MatrixXcd dft_matrix(const LatticeModel& model);

/// Quantizes a multiplier: inverse DFT o (multiply by B(q)) o DFT per base
/// index. The result commutes with every lattice shift exactly.
TranslationInvariantOp quantize(const MultiplierSymbol& symbol);

/// Recovers the symbol of a shift-commuting operator; throws with the largest
/// commutator norm when the input is not block-circulant within tol.
MultiplierSymbol extract_symbol(const TranslationInvariantOp& op, double tol = 1e-12);

/// Cyclic shift by `steps` along `axis` (the quantization of q -> e^{-i q a h}).
Eigen::MatrixXcd shift_operator(const LatticeModel& model, int axis, int steps);

/// Corner measure weights on a rectangular chart grid: the first
/// `normal_axes` axes are defining-function directions (all nodes must be
/// positive; the weight carries the 1/(rho_1 ... rho_k) density), remaining
/// axes are flat. Cell volumes come from centered cell widths.
struct MeasureWeights {
    std::vector<Eigen::VectorXd> axis_nodes;
    int normal_axes = 0;
    Eigen::VectorXd weights; ///< per flattened grid node, row-major with axis 0 slowest

    int size() const { return static_cast<int>(weights.size()); }
};

MeasureWeights corner_measure(int normal_axes, const std::vector<Eigen::VectorXd>& axis_nodes);

/// Pointwise blend of per-chart measures under a partition of unity:
/// mu = sum_j e_j mu_j on a shared grid.
Eigen::VectorXd blend_measures(const std::vector<Eigen::VectorXd>& weights,
                               const std::vector<Eigen::VectorXd>& partition_values);

/// Finite group acting on (lattice x base) functions by
/// [T_g f](p) = S_g f(sigma_g^{-1} p), sigma permuting the d axes. The
/// element list must be closed under products with matching S factors.
struct GroupAction {
    std::vector<Permutation> sigma;  ///< on d letters (the axes)
    std::vector<Eigen::MatrixXcd> S; ///< unitary on the base grid

    int size() const { return static_cast<int>(sigma.size()); }
    bool sigma_faithful() const;
    /// Closure of the element list under composition, within tol on S.
    bool closed_under_products(double tol = 1e-10) const;
};

/// Index permutation of lattice nodes induced by an axis permutation.
int permute_node(const LatticeModel& model, const Permutation& sigma, int node);

/// Orthogonal projector onto the G-invariant functions u(sigma p) = S u(p).
Eigen::MatrixXcd invariant_projector(const GroupAction& action, const LatticeModel& model);

/// Product grid offset by half a spacing per axis; the value set is symmetric
/// and axis permutations act on it, while generic nodes have trivial
/// stabilizer (nodes on fixed hyperplanes are skipped as construction
/// points).
struct OffsetGrid {
    int d = 1;
    int N = 8;
    double spacing = 1.0;

    int size() const;
    std::vector<int> unflatten(int node) const;
    int flatten(const std::vector<int>& idx) const;
    Eigen::VectorXd point(int node) const;
    int permuted(const Permutation& sigma, int node) const;
};

struct UniquenessReport {
    bool is_zero = false;          ///< max_p ||A(p)|| <= tol over the grid
    bool annihilates_all = false;  ///< A kills every constructed invariant function
    bool lemma_consistent = false; ///< the two verdicts agree
    int witness_node = -1;         ///< first node where annihilation failed
    double max_norm = 0.0;
};

/// Rebuilds the locally supported invariant functions of the uniqueness
/// lemma on the offset grid and tests whether A annihilates all of them;
/// refuses non-faithful sigma unless bypass_faithfulness demonstrates the
/// failure mode on purpose.
UniquenessReport uniqueness_test(
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& A, const GroupAction& action,
    const OffsetGrid& grid, double tol = 1e-8, bool bypass_faithfulness = false);

struct EquivarianceReport {
    bool relation_holds = false;      ///< A(p) = S_g^-1 A(sigma_g p) S_g on the grid
    bool preserves_invariants = false; ///< multiplication by A maps range(P) to itself
    bool lemma_direction_ok = false;   ///< preserves_invariants implies relation_holds
    double worst_defect = 0.0;
    int witness_node = -1;
};

EquivarianceReport equivariance_check(
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& A, const GroupAction& action,
    const OffsetGrid& grid, int base_dim, double tol = 1e-8);

} // namespace corners

#endif
