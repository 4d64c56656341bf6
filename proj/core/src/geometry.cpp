#include "corners/geometry.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace corners {

Eigen::VectorXd PolynomialMap::operator()(const Eigen::VectorXd& p) const {
    if (p.size() != input_dim)
        throw std::invalid_argument("polynomial map expects dimension " +
                                    std::to_string(input_dim));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(output_dim);
    for (int c = 0; c < output_dim; ++c) {
        for (const Term& term : components[c]) {
            double v = term.coeff;
            for (int i = 0; i < input_dim; ++i)
                for (int e = 0; e < term.exponents[i]; ++e) v *= p[i];
            out[c] += v;
        }
    }
    return out;
}

PolynomialMap PolynomialMap::identity(int dim) {
    PolynomialMap m;
    m.input_dim = m.output_dim = dim;
    m.components.resize(dim);
    for (int c = 0; c < dim; ++c) {
        Term t;
        t.coeff = 1.0;
        t.exponents.assign(dim, 0);
        t.exponents[c] = 1;
        m.components[c].push_back(std::move(t));
    }
    return m;
}

double BumpFunction::operator()(const Eigen::VectorXd& u) const {
    if (u.size() != center.size())
        throw std::invalid_argument("bump evaluated at wrong dimension");
    const double s2 = (u - center).squaredNorm() / (radius * radius);
    if (s2 >= 1.0) return 0.0;
    const double w = 1.0 - s2;
    return w * w * w;
}

double PartitionOfUnity::value(int c, const Eigen::VectorXd& u) const {
    const double raw = bumps.at(c)(u);
    if (!normalized) return raw;
    double sum = 0.0;
    for (const auto& b : bumps) sum += b(u);
    if (sum <= 0.0)
        throw std::invalid_argument("partition of unity: no chart covers the sample");
    return raw / sum;
}

Eigen::MatrixXd TransitionDecomposition::pi_matrix() const {
    const int d = pi.degree();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) m(pi(j), j) = 1.0;
    return m;
}

TransitionDecomposition decompose_transition(const Eigen::MatrixXd& A, double tol) {
    if (A.rows() != A.cols()) throw std::invalid_argument("transition block must be square");
    const int d = static_cast<int>(A.rows());

    std::vector<int> row_of_col(d, -1);
    for (int i = 0; i < d; ++i) {
        int significant = 0;
        for (int j = 0; j < d; ++j)
            if (std::abs(A(i, j)) > tol) ++significant;
        if (significant != 1)
            throw std::invalid_argument("row " + std::to_string(i) + " has " +
                                        std::to_string(significant) + " significant entries");
    }
    for (int j = 0; j < d; ++j) {
        int hit = -1;
        for (int i = 0; i < d; ++i) {
            if (std::abs(A(i, j)) > tol) {
                if (hit >= 0)
                    throw std::invalid_argument("column " + std::to_string(j) +
                                                " has 2 significant entries");
                hit = i;
            }
        }
        if (hit < 0)
            throw std::invalid_argument("column " + std::to_string(j) +
                                        " has 0 significant entries");
        if (A(hit, j) <= 0.0)
            throw std::invalid_argument("column " + std::to_string(j) +
                                        " has a nonpositive surviving entry");
        row_of_col[j] = hit;
    }

    TransitionDecomposition dec;
    dec.pi = Permutation(row_of_col);
    dec.lambda.resize(d);
    for (int j = 0; j < d; ++j) dec.lambda[j] = A(row_of_col[j], j);

    const Eigen::MatrixXd rebuilt = dec.pi_matrix() * dec.lambda.asDiagonal();
    if ((rebuilt - A).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("matrix is not permutation x positive diagonal");
    return dec;
}

double pairing(const Eigen::VectorXd& omega, const Eigen::VectorXd& xi) {
    if (omega.size() != xi.size())
        throw std::invalid_argument("pairing needs equal coefficient counts");
    return omega.dot(xi);
}

Eigen::VectorXd log_coords(const Eigen::VectorXd& rho) {
    Eigen::VectorXd t(rho.size());
    for (int i = 0; i < rho.size(); ++i) {
        if (rho[i] <= 0.0)
            throw std::invalid_argument("log coordinates need strictly positive rho");
        t[i] = -std::log(rho[i]);
    }
    return t;
}

Eigen::VectorXd exp_coords(const Eigen::VectorXd& t) {
    Eigen::VectorXd rho(t.size());
    for (int i = 0; i < t.size(); ++i) rho[i] = std::exp(-t[i]);
    return rho;
}

ExpMap::ExpMap(std::vector<Chart> charts, PartitionOfUnity partition, FaceId face, double eps)
    : charts_(std::move(charts)), partition_(std::move(partition)), face_(face), eps_(eps) {
    if (charts_.empty()) throw std::invalid_argument("empty atlas");
    normal_dim_ = charts_[0].normal_dim;
    tangent_dim_ = charts_[0].tangent_dim;
    for (const auto& c : charts_)
        if (c.normal_dim != normal_dim_ || c.tangent_dim != tangent_dim_)
            throw std::invalid_argument("charts of one face must share the local model");
    if (partition_.size() != static_cast<int>(charts_.size()))
        throw std::invalid_argument("one bump per chart required");
}

Eigen::VectorXd ExpMap::operator()(const Eigen::VectorXd& u, const Eigen::VectorXd& rho) const {
    Eigen::VectorXd point(u.size() + rho.size());
    point << u, rho;
    Eigen::VectorXd zero_point(u.size() + rho.size());
    zero_point << u, Eigen::VectorXd::Zero(rho.size());
    // Fiberwise combination relative to the shared immersion: the zero
    // section stays exactly equal to it, whatever the weights round to.
    Eigen::VectorXd out = immersion(u);
    for (size_t c = 0; c < charts_.size(); ++c) {
        const double w = partition_.value(static_cast<int>(c), u);
        if (w != 0.0) out += w * (charts_[c].map(point) - charts_[c].map(zero_point));
    }
    return out;
}

Eigen::VectorXd ExpMap::immersion(const Eigen::VectorXd& u) const {
    Eigen::VectorXd point(u.size() + normal_dim_);
    point << u, Eigen::VectorXd::Zero(normal_dim_);
    return charts_.front().map(point);
}

ExpMap glued_exp_map(const std::vector<Chart>& atlas, const PartitionOfUnity& partition,
                     FaceId face, double eps) {
    return ExpMap(atlas, partition, face, eps);
}

namespace {

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& at, double step) {
    const Eigen::VectorXd f0 = f(at);
    Eigen::MatrixXd J(f0.size(), at.size());
    for (int i = 0; i < at.size(); ++i) {
        Eigen::VectorXd hi = at, lo = at;
        hi[i] += step;
        lo[i] -= step;
        J.col(i) = (f(hi) - f(lo)) / (2.0 * step);
    }
    return J;
}

std::string point_string(const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ")";
    return os.str();
}

} // namespace

ExpMapGrid glue_exp_maps(const std::vector<Chart>& atlas, const PartitionOfUnity& partition,
                         FaceId face, const GlueOptions& options) {
    ExpMap map(atlas, partition, face, options.eps);

    ExpMapGrid grid;
    grid.face = face;
    grid.eps = options.eps;

    const int bdim = map.base_dim();
    const int fdim = map.fiber_dim();

    std::vector<Eigen::VectorXd> base_axis;
    const int nb = options.base_samples_per_axis;
    const auto [lo, hi] = options.base_range;
    auto base_coord = [&](int k) { return lo + (hi - lo) * (k + 0.5) / nb; };

    std::vector<Eigen::VectorXd> bases;
    if (bdim == 0) {
        bases.push_back(Eigen::VectorXd::Zero(0));
    } else {
        std::vector<int> idx(bdim, 0);
        while (true) {
            Eigen::VectorXd u(bdim);
            for (int i = 0; i < bdim; ++i) u[i] = base_coord(idx[i]);
            bases.push_back(u);
            int axis = 0;
            while (axis < bdim && ++idx[axis] == nb) idx[axis++] = 0;
            if (axis == bdim) break;
        }
    }

    std::vector<Eigen::VectorXd> fibers;
    const int nf = options.fiber_samples_per_axis;
    {
        std::vector<int> idx(fdim, 0);
        while (true) {
            Eigen::VectorXd rho(fdim);
            for (int i = 0; i < fdim; ++i) rho[i] = options.eps * (idx[i] + 1.0) / nf;
            fibers.push_back(rho);
            int axis = 0;
            while (axis < fdim && ++idx[axis] == nf) idx[axis++] = 0;
            if (axis == fdim) break;
        }
        if (fdim == 0) fibers.assign(1, Eigen::VectorXd::Zero(0));
    }

    grid.base_samples = bases;
    grid.fiber_samples = fibers;

    // Partition sanity at the base samples.
    for (const auto& u : bases) {
        double sum = 0.0;
        for (int c = 0; c < partition.size(); ++c) sum += partition.value(c, u);
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("partition does not sum to 1 at " + point_string(u) +
                                        " (sum = " + std::to_string(sum) + ")");
    }

    // Zero-section equality is checked exactly: every chart must restrict to
    // the same immersion at rho = 0, so the convex combination does too.
    grid.zero_section_exact = true;
    const Eigen::VectorXd rho0 = Eigen::VectorXd::Zero(fdim);
    for (const auto& u : bases) {
        const Eigen::VectorXd glued = map(u, rho0);
        for (const auto& chart : atlas) {
            Eigen::VectorXd point(bdim + fdim);
            point << u, rho0;
            if ((chart.map(point) - glued).cwiseAbs().maxCoeff() != 0.0)
                grid.zero_section_exact = false;
        }
    }

    double min_det = std::numeric_limits<double>::infinity();
    for (const auto& u : bases) {
        for (const auto& rho : fibers) {
            grid.values.push_back(map(u, rho));
            Eigen::VectorXd at(bdim + fdim);
            at << u, rho;
            auto full = [&](const Eigen::VectorXd& p) {
                return map(p.head(bdim), p.tail(fdim));
            };
            const Eigen::MatrixXd J = fd_jacobian(full, at, options.fd_step);
            const double det = std::abs(J.determinant());
            min_det = std::min(min_det, det);
            if (det <= options.jacobian_tol)
                throw std::runtime_error("singular Jacobian (|det| = " + std::to_string(det) +
                                         ") at base " + point_string(u) + ", fiber " +
                                         point_string(rho));
        }
    }
    grid.min_abs_jacobian = min_det;

    // Injectivity near the open face: images of the smallest-fiber layer must
    // stay pairwise separated.
    double min_sep = std::numeric_limits<double>::infinity();
    std::vector<Eigen::VectorXd> near_face;
    const Eigen::VectorXd rho_near =
        fdim ? Eigen::VectorXd::Constant(fdim, options.eps / nf) : Eigen::VectorXd::Zero(0);
    for (const auto& u : bases) near_face.push_back(map(u, rho_near));
    for (size_t a = 0; a < near_face.size(); ++a)
        for (size_t b = a + 1; b < near_face.size(); ++b)
            min_sep = std::min(min_sep, (near_face[a] - near_face[b]).norm());
    grid.min_image_separation = near_face.size() > 1 ? min_sep : 0.0;
    grid.injective_near_face = near_face.size() <= 1 || min_sep > 0.0;
    grid.near_face_rho = fdim ? rho_near[0] : 0.0;

    return grid;
}

namespace {

/// Damped Newton solve of f(z) = target, used as the local inverse.
Eigen::VectorXd local_inverse(const ExpMap& f, const Eigen::VectorXd& target,
                              const Eigen::VectorXd& initial) {
    Eigen::VectorXd z = initial;
    const int bdim = f.base_dim();
    const int fdim = f.fiber_dim();
    auto eval = [&](const Eigen::VectorXd& p) { return f(p.head(bdim), p.tail(fdim)); };
    const double damping = 0.8;
    for (int step = 0; step < 100; ++step) {
        const Eigen::VectorXd r = target - eval(z);
        if (r.cwiseAbs().maxCoeff() < 1e-12) return z;
        const Eigen::MatrixXd J = fd_jacobian(eval, z, 1e-7);
        z += damping * J.partialPivLu().solve(r);
    }
    const Eigen::VectorXd r = target - eval(z);
    if (r.cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("local inverse did not converge at " + point_string(target));
    return z;
}

} // namespace

DiagramResidual check_compatibility_diagram(
    const ExpMap& f_j, const ExpMap& f_l,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples, double tol) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    const int fdim_l = f_l.fiber_dim();
    const int bdim_l = f_l.base_dim();

    auto phi = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& rho) {
        // The maps are near-identity perturbations of coordinate charts, so
        // the ambient point itself is the natural Newton seed.
        const Eigen::VectorXd ambient = f_j(u, rho);
        return local_inverse(f_l, ambient, ambient);
    };

    // Which fiber components of f_l vanish on the image of the zero section
    // determines the coordinate subbundle onto which pi_2 projects.
    std::vector<bool> vanishing(fdim_l, true);
    for (const auto& [u, rho] : samples) {
        const Eigen::VectorXd z = phi(u, Eigen::VectorXd::Zero(f_j.fiber_dim()));
        for (int i = 0; i < fdim_l; ++i)
            if (std::abs(z[bdim_l + i]) > 1e-9) vanishing[i] = false;
    }

    // pi_2 keeps the subbundle the image lives in and kills the directions
    // that vanish identically on it.
    auto project = [&](Eigen::VectorXd z) {
        for (int i = 0; i < fdim_l; ++i)
            if (vanishing[i]) z[bdim_l + i] = 0.0;
        return z;
    };

    DiagramResidual result;
    for (const auto& [u, rho] : samples) {
        const Eigen::VectorXd through_top = project(phi(u, rho));
        const Eigen::VectorXd through_bottom = phi(u, Eigen::VectorXd::Zero(f_j.fiber_dim()));
        const double residual = (through_top - project(through_bottom)).cwiseAbs().maxCoeff();
        if (residual > result.max_residual) {
            result.max_residual = residual;
            result.worst_base = u;
            result.worst_fiber = rho;
        }
    }
    result.pass = result.max_residual <= tol;
    return result;
}

ConvexDiffeoReport convex_diffeo_check(
    const std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>& maps,
    const Eigen::VectorXd& lambdas, int dim, int samples_per_ball, double tol) {
    if (maps.empty()) throw std::invalid_argument("no maps");
    if (lambdas.size() != static_cast<int>(maps.size()))
        throw std::invalid_argument("one weight per map required");
    if (lambdas.minCoeff() < 0.0 || lambdas.sum() <= 0.0)
        throw std::invalid_argument("weights must be nonnegative, not all zero");

    ConvexDiffeoReport report;

    std::vector<Eigen::MatrixXd> jac0;
    const Eigen::VectorXd origin_offset = Eigen::VectorXd::Constant(dim, 1e-5);
    for (const auto& g : maps) jac0.push_back(fd_jacobian(g, origin_offset, 1e-6));

    report.hypothesis_ok = true;
    report.worst_off_diagonal = 0.0;
    for (size_t a = 0; a < maps.size(); ++a)
        for (size_t b = 0; b < maps.size(); ++b) {
            if (a == b) continue;
            const Eigen::MatrixXd ratio = jac0[a] * jac0[b].inverse();
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    if (i != j)
                        report.worst_off_diagonal =
                            std::max(report.worst_off_diagonal, std::abs(ratio(i, j)));
        }
    if (report.worst_off_diagonal > tol) report.hypothesis_ok = false;

    auto combined = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
        for (size_t i = 0; i < maps.size(); ++i) out += lambdas[i] * maps[i](p);
        return out;
    };

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    double min_det = std::numeric_limits<double>::infinity();
    for (double radius : {1e-1, 1e-2, 1e-3}) {
        for (int s = 0; s < samples_per_ball; ++s) {
            Eigen::VectorXd p(dim);
            for (int i = 0; i < dim; ++i) p[i] = radius * unif(rng);
            const Eigen::MatrixXd J = fd_jacobian(combined, p, radius * 1e-4);
            min_det = std::min(min_det, std::abs(J.determinant()));
        }
    }
    report.min_abs_det = min_det;
    report.conclusion_ok = min_det > tol;
    return report;
}

} // namespace corners
