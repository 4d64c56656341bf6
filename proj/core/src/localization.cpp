#include "corners/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "corners/operators.hpp"

namespace corners {

std::vector<int> GridSpace::ball(int center, double radius) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if ((nodes[i] - nodes[center]).norm() <= radius) out.push_back(i);
    return out;
}

std::vector<double> GridSpace::dyadic_radii(int levels) const {
    std::vector<double> radii;
    for (int i = 0; i < levels; ++i) radii.push_back(hood_radius0 * std::pow(2.0, -i));
    return radii;
}

void GridSpace::check() const {
    if (nodes.empty()) throw std::invalid_argument("empty grid space");
    if (weights.size() != size() || weights.minCoeff() <= 0.0)
        throw std::invalid_argument("grid space needs a positive weight per node");
}

GridSpace GridSpace::interval(int n, double lo, double hi) {
    GridSpace X;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd p(1);
        p << lo + (hi - lo) * (i + 0.5) / n;
        X.nodes.push_back(p);
    }
    X.weights = Eigen::VectorXd::Constant(n, (hi - lo) / n);
    X.hood_radius0 = (hi - lo) / 2.0;
    return X;
}

double ParamFamily::sup_norm() const {
    double m = 0.0;
    for (const auto& a : A) m = std::max(m, spectral_norm(a));
    return m;
}

void ParamFamily::check(int space_dim) const {
    if (Q.size() != A.size()) throw std::invalid_argument("one operator per parameter");
    if (Q.empty()) throw std::invalid_argument("empty parameter grid");
    for (const auto& a : A)
        if (a.rows() != space_dim || a.cols() != space_dim)
            throw std::invalid_argument("operator size mismatch");
}

std::vector<Eigen::VectorXd> param_grid_with_annulus(int s, int per_axis, double core_max,
                                                     double annulus_radius, int annulus_count) {
    std::vector<Eigen::VectorXd> Q;
    // Half-offset core avoids the origin, where homogeneous symbols have no
    // value.
    std::vector<double> axis;
    for (int k = 0; k < per_axis; ++k)
        axis.push_back(core_max * (2.0 * (k + 0.5) / per_axis - 1.0));
    if (s == 0) {
        Q.push_back(Eigen::VectorXd::Zero(0));
        return Q;
    }
    std::vector<int> idx(s, 0);
    while (true) {
        Eigen::VectorXd q(s);
        for (int a = 0; a < s; ++a) q[a] = axis[idx[a]];
        if (q.norm() > 1e-9) Q.push_back(q);
        int a = 0;
        while (a < s && ++idx[a] == per_axis) idx[a++] = 0;
        if (a == s) break;
    }
    // Annulus samples at the large radius.
    if (s == 1) {
        Q.push_back(Eigen::VectorXd::Constant(1, annulus_radius));
        Q.push_back(Eigen::VectorXd::Constant(1, -annulus_radius));
    } else {
        std::mt19937 rng(2);
        std::normal_distribution<double> gauss;
        for (int k = 0; k < annulus_count; ++k) {
            Eigen::VectorXd dir(s);
            if (s == 2) {
                const double a = 2.0 * M_PI * (k + 0.5) / annulus_count;
                dir << std::cos(a), std::sin(a);
            } else {
                for (int i = 0; i < s; ++i) dir[i] = gauss(rng);
                dir.normalize();
            }
            Q.push_back(annulus_radius * dir);
        }
    }
    return Q;
}

namespace {

Eigen::MatrixXcd weighted_conjugate(const GridSpace& X, const Eigen::MatrixXcd& M) {
    Eigen::VectorXd half = X.weights.cwiseSqrt();
    Eigen::MatrixXcd out = M;
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) *= half[i] / half[j];
    return out;
}

} // namespace

double weighted_norm(const GridSpace& X, const Eigen::MatrixXcd& M) {
    return spectral_norm(weighted_conjugate(X, M));
}

double weighted_min_singular_value(const GridSpace& X, const Eigen::MatrixXcd& M) {
    return min_singular_value(weighted_conjugate(X, M));
}

double restricted_norm(const ParamFamily& A, const GridSpace& X, const std::vector<int>& U) {
    if (U.empty()) throw std::invalid_argument("restricted norm over an empty set");
    A.check(X.size());
    const Eigen::VectorXd half = X.weights.cwiseSqrt();
    double worst = 0.0;
    for (const auto& a : A.A) {
        Eigen::MatrixXcd restricted(X.size(), U.size());
        for (size_t c = 0; c < U.size(); ++c) {
            const int j = U[c];
            restricted.col(c) = a.col(j) / half[j];
        }
        for (int i = 0; i < X.size(); ++i) restricted.row(i) *= half[i];
        worst = std::max(worst, spectral_norm(restricted));
    }
    return worst;
}

IdealProfile ideal_membership_profile(const ParamFamily& A, const GridSpace& X, int node,
                                      const std::vector<double>& radii, double tol) {
    for (size_t i = 1; i < radii.size(); ++i)
        if (radii[i] >= radii[i - 1])
            throw std::invalid_argument("radii must be strictly decreasing");
    IdealProfile profile;
    profile.radii = radii;
    for (double r : radii) profile.values.push_back(restricted_norm(A, X, X.ball(node, r)));
    profile.in_ideal = !profile.values.empty() && profile.values.back() <= tol;
    return profile;
}

LocalityReport commutator_locality_check(const ParamFamily& A, const GridSpace& X,
                                         const std::vector<Eigen::VectorXd>& test_functions,
                                         double tol) {
    A.check(X.size());
    LocalityReport report;
    report.rank_budget = std::max(1, X.size() / 4);

    double max_radius = 0.0;
    for (const auto& q : A.Q) max_radius = std::max(max_radius, q.norm());
    const double annulus_cut = 0.9 * max_radius;

    for (const auto& phi : test_functions) {
        if (phi.size() != X.size()) throw std::invalid_argument("test function size mismatch");
        for (int k = 0; k < A.params(); ++k) {
            Eigen::MatrixXcd commutator = A.A[k] * phi.asDiagonal();
            commutator -= phi.asDiagonal() * A.A[k];
            const Eigen::MatrixXcd conj = weighted_conjugate(X, commutator);
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(conj);
            const auto& sv = svd.singularValues();
            if (A.Q[k].norm() >= annulus_cut)
                report.worst_annulus_norm = std::max(report.worst_annulus_norm, double(sv(0)));
            if (sv.size() > report.rank_budget)
                report.worst_tail = std::max(report.worst_tail, double(sv(report.rank_budget)));
        }
    }
    report.pass = report.worst_annulus_norm <= tol && report.worst_tail <= tol;
    return report;
}

ContinuityReport family_continuity(const LocalRepFamily& F, const GridSpace& X, double eps) {
    ContinuityReport report;
    report.pass = true;
    const double radius = F.hood_radius(eps);
    for (size_t a = 0; a < F.centers.size(); ++a) {
        const auto ball_a = X.ball(F.centers[a], radius);
        for (size_t b = a + 1; b < F.centers.size(); ++b) {
            const auto ball_b = X.ball(F.centers[b], radius);
            std::vector<int> common;
            for (int i : ball_a)
                if (std::find(ball_b.begin(), ball_b.end(), i) != ball_b.end())
                    common.push_back(i);
            if (common.empty()) continue;

            ParamFamily diff;
            diff.Q = F.reps[a].Q;
            for (int k = 0; k < F.reps[a].params(); ++k)
                diff.A.push_back(F.reps[a].A[k] - F.reps[b].A[k]);
            const double value = restricted_norm(diff, X, common);
            if (value > report.worst_value) {
                report.worst_value = value;
                report.worst_a = static_cast<int>(a);
                report.worst_b = static_cast<int>(b);
            }
            if (value > eps) report.pass = false;
        }
    }
    return report;
}

GlueResult glue(const LocalRepFamily& F, const GridSpace& X,
                const std::vector<Eigen::VectorXd>& partition, double eps) {
    if (partition.size() != F.centers.size())
        throw std::invalid_argument("one partition function per local representative");
    for (int i = 0; i < X.size(); ++i) {
        double sum = 0.0;
        for (const auto& psi : partition) sum += psi[i] * psi[i];
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("partition squares sum to " + std::to_string(sum) +
                                        " at node " + std::to_string(i));
    }

    GlueResult result;
    result.family.Q = F.reps.front().Q;
    const int n = X.size();
    for (int k = 0; k < F.reps.front().params(); ++k) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
        for (size_t x = 0; x < F.centers.size(); ++x)
            acc += partition[x].asDiagonal() * F.reps[x].A[k] * partition[x].asDiagonal();
        result.family.A.push_back(std::move(acc));
    }

    for (int i = 0; i < n; ++i) {
        int covering = 0;
        for (const auto& psi : partition)
            if (psi[i] != 0.0) ++covering;
        result.overlap_count = std::max(result.overlap_count, covering);
    }

    const double radius = F.hood_radius(eps);
    for (size_t x = 0; x < F.centers.size(); ++x) {
        ParamFamily diff;
        diff.Q = result.family.Q;
        for (int k = 0; k < result.family.params(); ++k)
            diff.A.push_back(F.reps[x].A[k] - result.family.A[k]);
        const auto U = X.ball(F.centers[x], radius);
        result.worst_local_defect =
            std::max(result.worst_local_defect, restricted_norm(diff, X, U));
    }
    result.corollary_bound_ok = result.worst_local_defect <= result.overlap_count * eps;
    return result;
}

FredholmReport fredholm_check(const ParamFamily& A, const LocalRepFamily& F, const GridSpace& X,
                              double tol) {
    A.check(X.size());
    FredholmReport report;
    report.min_singular = std::numeric_limits<double>::infinity();
    for (size_t x = 0; x < F.centers.size(); ++x) {
        for (int k = 0; k < F.reps[x].params(); ++k) {
            const double sv = weighted_min_singular_value(X, F.reps[x].A[k]);
            if (sv < report.min_singular) {
                report.min_singular = sv;
                report.witness_center = F.centers[x];
                report.witness_param = k;
            }
        }
    }
    report.fredholm = report.min_singular >= tol;

    // Finite-section cross-check on the global family: invert through a
    // truncated SVD and measure the defect beyond a compact budget of n/4.
    report.rank_budget = std::max(1, X.size() / 4);
    for (const auto& a : A.A) {
        const Eigen::MatrixXcd conj = weighted_conjugate(X, a);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(conj, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd inv = svd.singularValues();
        for (int i = 0; i < inv.size(); ++i) inv[i] = inv[i] >= tol ? 1.0 / inv[i] : 0.0;
        const Eigen::MatrixXcd pinv =
            svd.matrixV() * inv.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
            svd.matrixU().adjoint();
        const Eigen::MatrixXcd defect =
            conj * pinv - Eigen::MatrixXcd::Identity(conj.rows(), conj.cols());
        Eigen::BDCSVD<Eigen::MatrixXcd> dsvd(defect);
        const auto& sv = dsvd.singularValues();
        const double past_budget = sv.size() > report.rank_budget
                                       ? double(sv(report.rank_budget))
                                       : 0.0;
        report.inverse_residual = std::max(report.inverse_residual, past_budget);
    }
    return report;
}

} // namespace corners
