#include "corners/dual.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace corners {

DualComplex dualize(const CornerComplex& complex) {
    DualComplex dual;
    std::vector<int> stratum_of(complex.face_count(), -1);
    for (const auto& face : complex.faces) {
        if (face.codim == 0) continue;
        DualStratum s;
        s.source_face = face.id;
        s.dim = face.codim - 1;
        s.quotient_group = face.structure_group;
        s.orbit_count_at_barycenter = static_cast<int>(face.structure_group.orbits().size());
        stratum_of[face.id] = dual.stratum_count();
        dual.strata.push_back(std::move(s));
    }
    for (const auto& [j, r] : complex.adjacency) {
        if (complex.codim(j) == 0) continue;
        dual.adjacency.insert({stratum_of[r], stratum_of[j]});
    }
    return dual;
}

ConeFibration cone_neighborhood(const CornerComplex& complex, FaceId j) {
    if (!complex.valid_id(j) || complex.codim(j) < 1)
        throw std::invalid_argument("cone neighborhood needs a positive-codim face");
    if (!complex.faces[j].structure_group.is_trivial())
        throw std::invalid_argument("fibration requires trivial normal bundle");

    ConeFibration fib;
    fib.base.source_face = j;
    fib.base.dim = complex.codim(j) - 1;
    fib.base.quotient_group = complex.faces[j].structure_group;
    fib.base.orbit_count_at_barycenter =
        static_cast<int>(fib.base.quotient_group.orbits().size());
    fib.cone_base = dualize(closed_face(complex, j).complex);
    fib.product_form = true;
    return fib;
}

FibrationImage fibration_forward(const LogPoint& p) {
    if (!p.in_U())
        throw std::invalid_argument("point outside U: min y must exceed |x| + 1");
    FibrationImage img;
    img.theta = p.y / p.y.sum();
    img.r = (p.x_total() + 1.0) / p.y.minCoeff();
    img.x = p.x;
    img.omega = p.omega;
    return img;
}

LogPoint fibration_inverse(const FibrationImage& img) {
    if (!(img.r > 0.0 && img.r < 1.0))
        throw std::invalid_argument("cone radius must lie in (0, 1)");
    if (img.theta.size() == 0 || img.theta.minCoeff() <= 0.0)
        throw std::invalid_argument("theta must lie in the open simplex");
    LogPoint p;
    const double xt = img.x.size() ? img.x.sum() : 0.0;
    p.y = img.theta / img.theta.minCoeff() * ((xt + 1.0) / img.r);
    p.x = img.x;
    p.omega = img.omega;
    return p;
}

namespace {

/// Swap sets arise only where the closure of the face meets itself: two
/// covering records of the same parent onto one target.
bool has_self_adjacent_closure(const CornerComplex& complex, FaceId j) {
    std::map<FaceId, int> hits;
    for (const CoveringData* rec : complex.coverings_of(j)) ++hits[rec->target];
    for (const auto& [target, count] : hits)
        if (count > 1) return true;
    return false;
}

} // namespace

InjectivityReport check_U_injectivity(const CornerComplex& complex, FaceId j,
                                      int samples, unsigned seed) {
    if (!complex.valid_id(j) || complex.codim(j) < 1)
        throw std::invalid_argument("injectivity check needs a positive-codim face");

    InjectivityReport report;
    if (!has_self_adjacent_closure(complex, j)) {
        report.vacuous = true;
        return report;
    }

    // Dimensions of the two inequality systems: y has d_j fiber coordinates,
    // x has (deepest self-hit codim - d_j) base log coordinates.
    const int ydim = complex.codim(j);
    int xdim = 0;
    std::map<FaceId, int> hits;
    for (const CoveringData* rec : complex.coverings_of(j)) ++hits[rec->target];
    for (const auto& [target, count] : hits)
        if (count > 1) xdim = std::max(xdim, complex.codim(target) - ydim);
    const int swap_max = std::min(ydim, xdim);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 30.0);

    for (unsigned mask = 1; mask < (1u << swap_max); ++mask) {
        std::vector<int> I;
        for (int b = 0; b < swap_max; ++b)
            if (mask & (1u << b)) I.push_back(b);

        // Symbolic certificate: adding row i0 of system 1,
        //   y_i0 - sum(x) >= 1,
        // to row i0 of the swapped system,
        //   x_i0 - sum(y_I) - sum(x off I) >= 1,
        // must leave only nonpositive coefficients against a positive
        // constant, which is impossible for nonnegative variables. The
        // coefficient sum is recomputed here instead of trusted.
        const int i0 = I.front();
        std::vector<double> ycoef(ydim, 0.0), xcoef(xdim, 0.0);
        ycoef[i0] += 1.0;                        // system 1, row i0
        for (int s = 0; s < xdim; ++s) xcoef[s] -= 1.0;
        xcoef[i0] += 1.0;                        // swapped system, row i0
        for (int i : I) ycoef[i] -= 1.0;
        for (int s = 0; s < xdim; ++s)
            if (std::find(I.begin(), I.end(), s) == I.end()) xcoef[s] -= 1.0;
        const double rhs = 2.0;
        bool cert = rhs > 0.0;
        for (double c : ycoef) cert = cert && c <= 0.0;
        for (double c : xcoef) cert = cert && c <= 0.0;
        if (!cert) {
            report.symbolic_pass = false;
            report.counterexample_set = I;
        }

        for (int s = 0; s < samples; ++s) {
            Eigen::VectorXd y(ydim), x(xdim);
            for (int i = 0; i < ydim; ++i) y[i] = unif(rng);
            for (int i = 0; i < xdim; ++i) x[i] = unif(rng);
            ++report.samples_checked;

            const bool sys1 = y.minCoeff() > x.sum() + 1.0;
            bool sys2 = true;
            double swapped_rhs = 1.0;
            for (int i : I) swapped_rhs += y[i];
            for (int i = 0; i < xdim; ++i)
                if (std::find(I.begin(), I.end(), i) == I.end()) swapped_rhs += x[i];
            for (int i : I) sys2 = sys2 && x[i] > swapped_rhs;
            for (int i = 0; i < ydim; ++i)
                if (std::find(I.begin(), I.end(), i) == I.end())
                    sys2 = sys2 && y[i] > swapped_rhs;
            if (sys1 && sys2) {
                report.sampled_pass = false;
                report.counterexample_set = I;
            }
        }
    }

    return report;
}

std::vector<double> default_radius_schedule() {
    std::vector<double> radii;
    for (int i = 3; i <= 16; ++i) radii.push_back(std::pow(2.0, i));
    return radii;
}

namespace {

/// Direction grid on the unit sphere of R^k (positive and negative sectors).
std::vector<Eigen::VectorXd> ray_grid(int dim, int per_axis) {
    std::vector<Eigen::VectorXd> rays;
    if (dim == 1) {
        rays.push_back(Eigen::VectorXd::Constant(1, 1.0));
        rays.push_back(Eigen::VectorXd::Constant(1, -1.0));
        return rays;
    }
    if (dim == 2) {
        for (int k = 0; k < 4 * per_axis; ++k) {
            const double a = 2.0 * M_PI * (k + 0.5) / (4 * per_axis);
            Eigen::VectorXd v(2);
            v << std::cos(a), std::sin(a);
            rays.push_back(v);
        }
        return rays;
    }
    // Higher dimensions: normalized lattice directions on the cube surface.
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < per_axis * per_axis; ++k) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
        rays.push_back(v.normalized());
    }
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        v[i] = 1.0;
        rays.push_back(v);
        rays.push_back(-v);
    }
    return rays;
}

} // namespace

CkmReport ckm_membership(const std::function<double(const Eigen::VectorXd&,
                                                    const Eigen::VectorXd&)>& f,
                         int ray_dim, int x_dim, const CkmOptions& options) {
    CkmOptions opt = options;
    if (opt.radii.empty()) opt.radii = default_radius_schedule();
    if (opt.x_samples.empty()) opt.x_samples.push_back(Eigen::VectorXd::Zero(x_dim));

    CkmReport report;
    report.rays = ray_grid(ray_dim, opt.rays_per_axis);

    double worst_increment = 0.0;
    for (const auto& omega : report.rays) {
        double value_at_last = 0.0;
        for (const auto& x : opt.x_samples) {
            double prev = f(omega * opt.radii.front(), x);
            double increment = 0.0;
            for (size_t i = 1; i < opt.radii.size(); ++i) {
                const double cur = f(omega * opt.radii[i], x);
                increment = std::abs(cur - prev);
                prev = cur;
            }
            worst_increment = std::max(worst_increment, increment);
            value_at_last = prev;
        }
        report.boundary_values.push_back(value_at_last);
    }

    // Uniformity in x: at the largest radius the transverse dependence must
    // already be below tolerance.
    double x_var = 0.0;
    for (const auto& omega : report.rays) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& x : opt.x_samples) {
            const double v = f(omega * opt.radii.back(), x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        x_var = std::max(x_var, hi - lo);
    }

    report.achieved_modulus = worst_increment;
    report.x_variation = x_var;
    report.accepted = worst_increment <= opt.tol && x_var <= opt.tol;
    return report;
}

} // namespace corners
