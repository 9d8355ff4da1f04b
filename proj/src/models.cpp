#include "segproc/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "segproc/numerics.hpp"

namespace segproc {

double VonMisesAxial::pdf(double phi) const {
    return std::exp(kappa * std::cos(2.0 * (phi - mu))) / (kPi * bessel_i0(kappa));
}

double VonMisesAxial::max_pdf() const { return std::exp(kappa) / (kPi * bessel_i0(kappa)); }

double ScaledBeta::pdf(double r) const {
    if (r < 0.0 || r > support) return 0.0;
    const double t = r / support;
    const double log_b =
        std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
    double log_num = 0.0;
    if (alpha != 1.0) {
        if (t == 0.0) return alpha > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
        log_num += (alpha - 1.0) * std::log(t);
    }
    if (beta != 1.0) {
        if (t == 1.0) return beta > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
        log_num += (beta - 1.0) * std::log(1.0 - t);
    }
    return std::exp(log_num - log_b) / support;
}

double ScaledBeta::max_pdf() const {
    if (!bounded()) return std::numeric_limits<double>::infinity();
    if (alpha == 1.0 && beta == 1.0) return 1.0 / support;
    double mode;
    if (alpha == 1.0)
        mode = 0.0;
    else if (beta == 1.0)
        mode = 1.0;
    else
        mode = (alpha - 1.0) / (alpha + beta - 2.0);
    return pdf(mode * support);
}

double direction_pdf(const DirectionDensity& g, double phi) {
    if (const auto* vm = std::get_if<VonMisesAxial>(&g)) return vm->pdf(phi);
    return std::get<DensityGrid>(g).value(phi);
}

double length_pdf(const LengthDensity& f, double r) {
    if (const auto* sb = std::get_if<ScaledBeta>(&f)) return sb->pdf(r);
    return std::get<DensityGrid>(f).value(r);
}

SufficientStats sufficient_stats(const Configuration& x, const DiskWindow& w) {
    SufficientStats s;
    s.n = x.size();
    s.intersections = total_intersections(x);
    for (const Segment& u : x.segments) s.distance_sum += max_norm_distance(u, w);
    return s;
}

double conditional_intensity_gibbs(const Configuration& x, const Segment& u,
                                   const GibbsDirectionalModel& m) {
    const int hits = hit_count_torus(u, x, m.window);
    return m.tau * direction_pdf(m.g, u.direction) * std::exp(m.a * hits);
}

double conditional_intensity_inhomog(const Configuration& x, const Segment& u,
                                     const InhomogLengthModel& m) {
    if (!contained_in_disk(u, m.window)) return 0.0;
    for (const Segment& v : x.segments)
        if (!contained_in_disk(v, m.window)) return 0.0;
    return m.tau * length_pdf(m.f1, u.length) *
           std::exp(m.b * max_norm_distance(u, m.window));
}

double interaction_factor(double a, double intensity_mass) {
    if (intensity_mass < 0.0) throw std::invalid_argument("interaction_factor: negative mass");
    return std::exp(std::expm1(a) * intensity_mass);
}

double j_integral(double phi, const DensityGrid& f_x) {
    // Cell-wise closed form for |sin(phi - beta)| times the piecewise-linear
    // interpolant of f_X. sin(phi - beta) changes sign only at beta = phi on
    // [0, pi), so each cell is split there.
    const Grid1D& g = f_x.grid();
    const auto& v = f_x.values();
    const double h = g.step();
    const std::size_t n = g.count;

    auto antideriv = [phi](double A, double B, double beta) {
        // int (A + B beta) sin(phi - beta) d beta
        return (A + B * beta) * std::cos(phi - beta) + B * std::sin(phi - beta);
    };

    const double kink = canonical_direction(phi);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double b0 = g.lo + i * h;
        const double b1 = b0 + h;  // wraps onto pi for the last periodic cell
        const double v0 = v[i];
        const double v1 = v[g.periodic ? (i + 1) % n : std::min(i + 1, n - 1)];
        if (!g.periodic && i + 1 == n) break;
        // linear coefficients on [b0, b1]
        const double B = (v1 - v0) / h;
        const double A = v0 - B * b0;

        auto piece = [&](double s0, double s1) {
            if (s1 <= s0) return;
            const double mid = 0.5 * (s0 + s1);
            const double sign = std::sin(phi - mid) >= 0.0 ? 1.0 : -1.0;
            total += sign * (antideriv(A, B, s1) - antideriv(A, B, s0));
        };
        if (kink > b0 && kink < b1) {
            piece(b0, kink);
            piece(kink, b1);
        } else {
            piece(b0, b1);
        }
    }
    return total;
}

DensityGrid reference_direction_from_palm(const DensityGrid& f_x, double C, double a, double tau,
                                          double r) {
    if (!(C > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("reference_direction_from_palm: C and tau must be positive");
    const Grid1D& g = f_x.grid();
    std::vector<double> out(g.count);
    const double ea1 = std::expm1(a);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double phi = g.point(i);
        out[i] = C * f_x.values()[i] / (tau * std::exp(ea1 * C * r * r * j_integral(phi, f_x)));
    }
    DensityGrid result(g, std::move(out));
    result.normalize();
    return result;
}

DensityGrid reference_length_from_palm(const BivariateDensityGrid& palm, double b,
                                       double phi_fixed, double center_norm,
                                       const DiskWindow& w, const Grid1D& grid_r) {
    std::vector<double> out(grid_r.count);
    const Point2 y{0.0, center_norm};
    for (std::size_t i = 0; i < grid_r.count; ++i) {
        const double r = grid_r.point(i);
        if (r <= 0.0) {
            out[i] = 0.0;
            continue;
        }
        const Segment u(y, r, phi_fixed);
        out[i] = palm.value(r, phi_fixed) * std::exp(-b * max_norm_distance(u, w));
    }
    // r = 0 boundary by continuation from the first interior point
    if (grid_r.count > 1 && grid_r.point(0) <= 0.0) out[0] = out[1];
    DensityGrid result(grid_r, std::move(out));
    result.normalize();
    return result;
}

SegmentSpace gibbs_segment_space(const RectWindow& w, double fixed_length) {
    SegmentSpace s;
    s.volume = w.area() * kPi;
    s.sample = [w, fixed_length](Rng& rng) {
        return Segment(uniform_point(w, rng), fixed_length, rng.uniform(0.0, kPi));
    };
    return s;
}

SegmentSpace inhomog_segment_space(const DiskWindow& w) {
    SegmentSpace s;
    s.volume = w.area() * w.diameter * kPi;
    s.sample = [w](Rng& rng) {
        return Segment(uniform_point(w, rng), w.diameter * (1.0 - rng.uniform()),
                       rng.uniform(0.0, kPi));
    };
    return s;
}

GnzResidual gnz_residual(const Configuration& x, const TestFunction& q,
                         const ConditionalIntensity& lambda_star, const SegmentSpace& space,
                         std::size_t j_mc, Rng& rng) {
    if (j_mc == 0) throw std::invalid_argument("gnz_residual: need at least one MC segment");

    double sum_obs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Configuration rest;
        rest.segments.reserve(x.size() - 1);
        for (std::size_t j = 0; j < x.size(); ++j)
            if (j != i) rest.segments.push_back(x.segments[j]);
        sum_obs += q(x.segments[i], rest);
    }

    double mc_sum = 0.0, mc_sq = 0.0;
    for (std::size_t i = 0; i < j_mc; ++i) {
        const Segment u = space.sample(rng);
        const double t = lambda_star(x, u) * q(u, x);
        mc_sum += t;
        mc_sq += t * t;
    }
    const double mean = mc_sum / static_cast<double>(j_mc);
    const double var = std::max(0.0, mc_sq / static_cast<double>(j_mc) - mean * mean);

    GnzResidual res;
    res.value = sum_obs - space.volume * mean;
    res.mc_se = space.volume * std::sqrt(var / static_cast<double>(j_mc));
    return res;
}

}  // namespace segproc
