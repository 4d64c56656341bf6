#include "corners/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace corners {

using complexd = std::complex<double>;

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() > 32 || m.cols() > 32) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
        return svd.singularValues()(0);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double min_singular_value(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() > 32 || m.cols() > 32) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
        return svd.singularValues()(svd.singularValues().size() - 1);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

int LatticeModel::lattice_size() const {
    int s = 1;
    for (int i = 0; i < d; ++i) s *= N;
    return s;
}

std::vector<int> LatticeModel::unflatten(int node) const {
    std::vector<int> idx(d);
    for (int a = d - 1; a >= 0; --a) {
        idx[a] = node % N;
        node /= N;
    }
    return idx;
}

int LatticeModel::flatten(const std::vector<int>& idx) const {
    int node = 0;
    for (int a = 0; a < d; ++a) node = node * N + ((idx[a] % N) + N) % N;
    return node;
}

Eigen::VectorXd LatticeModel::frequency(int node) const {
    const auto idx = unflatten(node);
    Eigen::VectorXd q(d);
    for (int a = 0; a < d; ++a) q[a] = 2.0 * M_PI * (idx[a] - N / 2) / (N * spacing);
    return q;
}

void LatticeModel::check() const {
    if (N < 8 || N % 2 != 0)
        throw std::invalid_argument("lattice needs even N >= 8, got " + std::to_string(N));
    if (d < 1 || base_dim < 1 || spacing <= 0.0)
        throw std::invalid_argument("invalid lattice model");
}

double MultiplierSymbol::max_norm() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, spectral_norm(v));
    return m;
}

Eigen::MatrixXcd dft_matrix(const LatticeModel& model) {
    Eigen::MatrixXcd axis(model.N, model.N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(model.N));
    for (int k = 0; k < model.N; ++k)
        for (int j = 0; j < model.N; ++j) {
            const double phase = -2.0 * M_PI * (k - model.N / 2) * j / model.N;
            axis(k, j) = scale * complexd(std::cos(phase), std::sin(phase));
        }
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Ones(1, 1);
    for (int a = 0; a < model.d; ++a) {
        Eigen::MatrixXcd next(full.rows() * model.N, full.cols() * model.N);
        for (int i = 0; i < full.rows(); ++i)
            for (int j = 0; j < full.cols(); ++j)
                next.block(i * model.N, j * model.N, model.N, model.N) = full(i, j) * axis;
        full = std::move(next);
    }
    return full;
}

namespace {

Eigen::MatrixXcd with_base(const Eigen::MatrixXcd& lattice_op, int base_dim) {
    const int L = static_cast<int>(lattice_op.rows());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(L * base_dim, L * base_dim);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            for (int b = 0; b < base_dim; ++b)
                out(i * base_dim + b, j * base_dim + b) = lattice_op(i, j);
    return out;
}

} // namespace

TranslationInvariantOp quantize(const MultiplierSymbol& symbol) {
    const LatticeModel& model = symbol.model;
    model.check();
    const int L = model.lattice_size();
    if (static_cast<int>(symbol.values.size()) != L)
        throw std::invalid_argument("symbol needs one block per frequency node");
    for (const auto& v : symbol.values)
        if (v.rows() != model.base_dim || v.cols() != model.base_dim)
            throw std::invalid_argument("symbol block size mismatch");

    Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(model.total_dim(), model.total_dim());
    for (int k = 0; k < L; ++k)
        blocks.block(k * model.base_dim, k * model.base_dim, model.base_dim, model.base_dim) =
            symbol.values[k];

    const Eigen::MatrixXcd F = with_base(dft_matrix(model), model.base_dim);
    TranslationInvariantOp op;
    op.model = model;
    op.matrix = F.adjoint() * blocks * F;
    return op;
}

Eigen::MatrixXcd shift_operator(const LatticeModel& model, int axis, int steps) {
    const int L = model.lattice_size();
    Eigen::MatrixXcd lattice_op = Eigen::MatrixXcd::Zero(L, L);
    for (int j = 0; j < L; ++j) {
        auto idx = model.unflatten(j);
        idx[axis] += steps;
        lattice_op(model.flatten(idx), j) = 1.0;
    }
    return with_base(lattice_op, model.base_dim);
}

MultiplierSymbol extract_symbol(const TranslationInvariantOp& op, double tol) {
    const LatticeModel& model = op.model;
    double worst = 0.0;
    for (int axis = 0; axis < model.d; ++axis) {
        const Eigen::MatrixXcd S = shift_operator(model, axis, 1);
        worst = std::max(worst, (op.matrix * S - S * op.matrix).cwiseAbs().maxCoeff());
    }
    if (worst > tol)
        throw std::invalid_argument("operator is not shift-commuting (max commutator entry " +
                                    std::to_string(worst) + ")");

    const Eigen::MatrixXcd F = with_base(dft_matrix(model), model.base_dim);
    const Eigen::MatrixXcd diag = F * op.matrix * F.adjoint();

    MultiplierSymbol symbol;
    symbol.model = model;
    const int L = model.lattice_size();
    symbol.values.reserve(L);
    for (int k = 0; k < L; ++k)
        symbol.values.push_back(
            diag.block(k * model.base_dim, k * model.base_dim, model.base_dim, model.base_dim));
    return symbol;
}

MeasureWeights corner_measure(int normal_axes, const std::vector<Eigen::VectorXd>& axis_nodes) {
    const int dims = static_cast<int>(axis_nodes.size());
    if (normal_axes < 0 || normal_axes > dims)
        throw std::invalid_argument("normal axis count out of range");
    for (int a = 0; a < normal_axes; ++a)
        for (int i = 0; i < axis_nodes[a].size(); ++i)
            if (axis_nodes[a][i] <= 0.0)
                throw std::invalid_argument("grid touches rho = 0 on axis " + std::to_string(a));

    std::vector<Eigen::VectorXd> cell(dims);
    for (int a = 0; a < dims; ++a) {
        const auto& nodes = axis_nodes[a];
        const int m = static_cast<int>(nodes.size());
        if (m < 2) throw std::invalid_argument("axis " + std::to_string(a) + " needs >= 2 nodes");
        cell[a].resize(m);
        for (int i = 0; i < m; ++i) {
            if (i == 0)
                cell[a][i] = nodes[1] - nodes[0];
            else if (i + 1 == m)
                cell[a][i] = nodes[m - 1] - nodes[m - 2];
            else
                cell[a][i] = (nodes[i + 1] - nodes[i - 1]) / 2.0;
        }
    }

    int total = 1;
    for (int a = 0; a < dims; ++a) total *= static_cast<int>(axis_nodes[a].size());

    MeasureWeights mw;
    mw.axis_nodes = axis_nodes;
    mw.normal_axes = normal_axes;
    mw.weights.resize(total);
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        double w = 1.0;
        for (int a = dims - 1; a >= 0; --a) {
            const int m = static_cast<int>(axis_nodes[a].size());
            const int i = rem % m;
            rem /= m;
            w *= cell[a][i];
            if (a < normal_axes) w /= axis_nodes[a][i];
        }
        mw.weights[flat] = w;
    }
    return mw;
}

Eigen::VectorXd blend_measures(const std::vector<Eigen::VectorXd>& weights,
                               const std::vector<Eigen::VectorXd>& partition_values) {
    if (weights.empty() || weights.size() != partition_values.size())
        throw std::invalid_argument("one partition function per chart measure");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(weights[0].size());
    for (size_t j = 0; j < weights.size(); ++j)
        out += partition_values[j].cwiseProduct(weights[j]);
    return out;
}

bool GroupAction::sigma_faithful() const {
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (sigma[a] == sigma[b]) return false;
    return true;
}

bool GroupAction::closed_under_products(double tol) const {
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b) {
            const Permutation prod = sigma[a] * sigma[b];
            const Eigen::MatrixXcd sprod = S[a] * S[b];
            bool found = false;
            for (int c = 0; c < size() && !found; ++c)
                if (sigma[c] == prod && (S[c] - sprod).cwiseAbs().maxCoeff() <= tol) found = true;
            if (!found) return false;
        }
    return true;
}

int permute_node(const LatticeModel& model, const Permutation& sigma, int node) {
    const auto idx = model.unflatten(node);
    std::vector<int> out(model.d);
    for (int a = 0; a < model.d; ++a) out[sigma(a)] = idx[a];
    return model.flatten(out);
}

Eigen::MatrixXcd invariant_projector(const GroupAction& action, const LatticeModel& model) {
    const int L = model.lattice_size();
    const int n = model.total_dim();
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    for (int g = 0; g < action.size(); ++g) {
        const Permutation inv = action.sigma[g].inverse();
        for (int p = 0; p < L; ++p) {
            const int src = permute_node(model, inv, p);
            P.block(p * model.base_dim, src * model.base_dim, model.base_dim, model.base_dim) +=
                action.S[g];
        }
    }
    return P / static_cast<double>(action.size());
}

int OffsetGrid::size() const {
    int s = 1;
    for (int i = 0; i < d; ++i) s *= N;
    return s;
}

std::vector<int> OffsetGrid::unflatten(int node) const {
    std::vector<int> idx(d);
    for (int a = d - 1; a >= 0; --a) {
        idx[a] = node % N;
        node /= N;
    }
    return idx;
}

int OffsetGrid::flatten(const std::vector<int>& idx) const {
    int node = 0;
    for (int a = 0; a < d; ++a) node = node * N + idx[a];
    return node;
}

Eigen::VectorXd OffsetGrid::point(int node) const {
    const auto idx = unflatten(node);
    Eigen::VectorXd p(d);
    for (int a = 0; a < d; ++a) p[a] = spacing * (idx[a] + 0.5 - N / 2.0);
    return p;
}

int OffsetGrid::permuted(const Permutation& sigma, int node) const {
    const auto idx = unflatten(node);
    std::vector<int> out(d);
    for (int a = 0; a < d; ++a) out[sigma(a)] = idx[a];
    return flatten(out);
}

UniquenessReport uniqueness_test(
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& A, const GroupAction& action,
    const OffsetGrid& grid, double tol, bool bypass_faithfulness) {
    if (!action.sigma_faithful() && !bypass_faithfulness)
        throw std::invalid_argument(
            "sigma is not faithful; reduce the structure group to the minimal one "
            "(or set the bypass flag to demonstrate the failure)");

    UniquenessReport report;
    const int size = grid.size();

    std::vector<Eigen::MatrixXcd> samples(size);
    double max_norm = 0.0;
    for (int p = 0; p < size; ++p) {
        samples[p] = A(grid.point(p));
        max_norm = std::max(max_norm, spectral_norm(samples[p]));
    }
    report.max_norm = max_norm;
    report.is_zero = max_norm <= tol;

    const int base = samples.empty() ? 0 : static_cast<int>(samples[0].rows());

    report.annihilates_all = true;
    for (int p0 = 0; p0 < size && report.annihilates_all; ++p0) {
        // Stabilizer of the node under the axis action.
        std::vector<int> stab;
        for (int g = 0; g < action.size(); ++g)
            if (grid.permuted(action.sigma[g], p0) == p0) stab.push_back(g);

        // When sigma is faithful the construction uses only free nodes, as in
        // the dense set of the lemma.
        if (action.sigma_faithful() && stab.size() > 1) continue;

        // Admissible vectors: fixed by the stabilizer's base action.
        Eigen::MatrixXcd stab_proj = Eigen::MatrixXcd::Zero(base, base);
        for (int g : stab) stab_proj += action.S[g];
        stab_proj /= static_cast<double>(stab.size());

        for (int col = 0; col < base; ++col) {
            const Eigen::VectorXcd v = stab_proj.col(col);
            if (v.norm() < 1e-12) continue;
            // f(sigma_g p0) = S_g v; A f = 0 requires A at every orbit node to
            // kill the transported vector.
            for (int g = 0; g < action.size(); ++g) {
                const int node = grid.permuted(action.sigma[g], p0);
                const Eigen::VectorXcd transported = action.S[g] * v;
                if ((samples[node] * transported).norm() > tol * std::max(1.0, v.norm())) {
                    report.annihilates_all = false;
                    report.witness_node = node;
                    break;
                }
            }
            if (!report.annihilates_all) break;
        }
    }

    report.lemma_consistent = report.is_zero == report.annihilates_all;
    return report;
}

EquivarianceReport equivariance_check(
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& A, const GroupAction& action,
    const OffsetGrid& grid, int base_dim, double tol) {
    EquivarianceReport report;
    const int size = grid.size();

    std::vector<Eigen::MatrixXcd> samples(size);
    for (int p = 0; p < size; ++p) samples[p] = A(grid.point(p));

    double worst = 0.0;
    int witness = -1;
    for (int g = 0; g < action.size(); ++g) {
        const Eigen::MatrixXcd Sg = action.S[g];
        const Eigen::MatrixXcd Sg_inv = Sg.adjoint(); // unitary
        for (int p = 0; p < size; ++p) {
            const int image = grid.permuted(action.sigma[g], p);
            const double defect =
                (samples[p] - Sg_inv * samples[image] * Sg).cwiseAbs().maxCoeff();
            if (defect > worst) {
                worst = defect;
                witness = p;
            }
        }
    }
    report.worst_defect = worst;
    report.relation_holds = worst <= tol;
    if (!report.relation_holds) report.witness_node = witness;

    // Lemma direction: multiplication by A preserving the invariant subspace
    // must force the relation.
    const int n = size * base_dim;
    Eigen::MatrixXcd mult = Eigen::MatrixXcd::Zero(n, n);
    for (int p = 0; p < size; ++p)
        mult.block(p * base_dim, p * base_dim, base_dim, base_dim) = samples[p];

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    for (int g = 0; g < action.size(); ++g) {
        const Permutation inv = action.sigma[g].inverse();
        for (int p = 0; p < size; ++p) {
            const int src = grid.permuted(inv, p);
            P.block(p * base_dim, src * base_dim, base_dim, base_dim) += action.S[g];
        }
    }
    P /= static_cast<double>(action.size());

    const double leak = spectral_norm((Eigen::MatrixXcd::Identity(n, n) - P) * mult * P);
    report.preserves_invariants = leak <= tol;
    report.lemma_direction_ok = !report.preserves_invariants || report.relation_holds;
    return report;
}

} // namespace corners
