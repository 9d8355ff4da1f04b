#include "segproc/estimators.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "segproc/numerics.hpp"
#include "segproc/segment_index.hpp"

namespace segproc {

double beta_factor(double a, double r, double C, double phi, const DensityGrid& f_x) {
    if (!(C >= 0.0)) throw std::invalid_argument("beta_factor: C must be nonnegative");
    return std::exp(std::expm1(a) * r * r * C * j_integral(phi, f_x));
}

namespace {

struct TfSums {
    // per test segment: f_X(phi_i), N_x(u_i), s_i = (1 - e^a-part) r^2 J(phi_i)
    std::vector<double> f;
    std::vector<double> jint;
    std::vector<int> hits;
};

// weight * C * sum f_i e^{a N_i} exp((1 - e^a) r^2 J_i C) for scores 1 / N.
double tf_rhs(const TfSums& s, double weight, double r, double a, double C, bool score_hits) {
    const double one_minus_ea = -std::expm1(a);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        const double q = score_hits ? static_cast<double>(s.hits[i]) : 1.0;
        if (q == 0.0) continue;
        acc += q * s.f[i] * std::exp(a * s.hits[i] + one_minus_ea * r * r * s.jint[i] * C);
    }
    return weight * C * acc;
}

// Root of the count equation in C at fixed a. For a <= 0 the right side is
// strictly increasing in C; for a > 0 it increases and then decays, so the
// upper bracket stops growing once the value turns down (the root taken is
// the one on the increasing branch).
double tf_solve_c(const TfSums& s, double weight, double r, double a, double n_obs, double tol) {
    double c_hi = std::max(n_obs, 1.0);
    double val = tf_rhs(s, weight, r, a, c_hi, false);
    int guard = 0;
    while (val < n_obs) {
        const double next = tf_rhs(s, weight, r, a, 2.0 * c_hi, false);
        if (std::isnan(next)) throw FitError("tf_fit: count equation overflowed");
        if (next <= val)
            throw FitError("tf_fit: count equation has no root in C");
        c_hi *= 2.0;
        val = next;
        if (++guard > 200 || !std::isfinite(c_hi))
            throw FitError("tf_fit: count equation has no root in C");
    }
    return solve_scalar(
        [&](double c) { return tf_rhs(s, weight, r, a, c, false) - n_obs; }, 0.0, c_hi,
        tol * c_hi);
}

struct TfWork {
    DensityGrid f_x;
    TfSums sums;
    double weight = 0.0;
    double n_obs = 0.0;
    double sum_hits_obs = 0.0;
};

TfWork tf_prepare(const Configuration& x, double r, const RectWindow& window,
                  const TfConfig& config) {
    TfWork w;

    std::vector<double> dirs;
    dirs.reserve(x.size());
    double max_len = r;
    for (const Segment& s : x.segments) {
        dirs.push_back(s.direction);
        max_len = std::max(max_len, s.length);
    }

    const Grid1D grid{0.0, kPi, config.grid_count, true};
    w.f_x = circular_kde(dirs, CircularKdeParams{config.kde_kappa}, grid);

    SegmentIndex index(window, 0.5 * (max_len + r), /*periodic=*/true);
    for (const Segment& s : x.segments) index.insert(s);

    Rng rng(config.seed);
    w.sums.f.resize(config.j_mc);
    w.sums.jint.resize(config.j_mc);
    w.sums.hits.resize(config.j_mc);
    for (std::size_t i = 0; i < config.j_mc; ++i) {
        const Segment u(uniform_point(window, rng), r, rng.uniform(0.0, kPi));
        w.sums.f[i] = w.f_x.value(u.direction);
        w.sums.jint[i] = j_integral(u.direction, w.f_x);
        w.sums.hits[i] = index.hits(u);
    }

    w.weight = kPi * window.area() / static_cast<double>(config.j_mc);
    w.n_obs = static_cast<double>(x.size());
    w.sum_hits_obs = 2.0 * static_cast<double>(total_intersections_torus(x, window));
    return w;
}

}  // namespace

std::vector<std::pair<double, double>> tf_residual_curve(const Configuration& x, double r,
                                                         const RectWindow& window,
                                                         const TfConfig& config,
                                                         const std::vector<double>& a_values) {
    if (x.empty()) throw FitError("tf_fit: empty configuration");
    const TfWork w = tf_prepare(x, r, window, config);
    std::vector<std::pair<double, double>> out;
    out.reserve(a_values.size());
    for (double a : a_values) {
        double res;
        try {
            const double c = tf_solve_c(w.sums, w.weight, r, a, w.n_obs, config.tol);
            res = w.sum_hits_obs - tf_rhs(w.sums, w.weight, r, a, c, true);
        } catch (const FitError&) {
            res = -1e300;
        }
        out.emplace_back(a, res);
    }
    return out;
}

TfResult tf_fit(const Configuration& x, double r, const RectWindow& window,
                const TfConfig& config) {
    if (x.empty()) throw FitError("tf_fit: empty configuration");
    const TfWork w = tf_prepare(x, r, window, config);

    // Residual of the intersection-score equation in a, with C profiled out
    // through the count equation. Values of a where the count equation loses
    // its root (possible above 0) are too large; a large negative residual
    // keeps the bracketing consistent.
    auto residual_a = [&](double a) {
        double c;
        try {
            c = tf_solve_c(w.sums, w.weight, r, a, w.n_obs, config.tol);
        } catch (const FitError&) {
            return -1e300;
        }
        return w.sum_hits_obs - tf_rhs(w.sums, w.weight, r, a, c, true);
    };

    // The residual decreases through the estimate but can have spurious
    // excursions far below it, so the root taken is the sign change nearest
    // the upper end. Sampling noise can push the root above 0; the upper end
    // is expanded a little before giving up.
    double a_hi = config.a_hi;
    double res_hi = residual_a(a_hi);
    int guard = 0;
    while (res_hi > 0.0 && guard < 8) {
        a_hi += 0.25;
        res_hi = residual_a(a_hi);
        ++guard;
    }
    if (res_hi > 0.0)
        throw FitError("tf_fit: intersection-score residual still positive at a = " +
                       std::to_string(a_hi));

    const double step = (a_hi - config.a_lo) / 50.0;
    double a_lo = a_hi;
    double res_lo = res_hi;
    bool bracketed = false;
    while (a_lo > config.a_lo - 4.0 * step) {
        const double next = a_lo - step;
        const double res_next = residual_a(next);
        if (res_next >= 0.0) {
            a_hi = a_lo;
            res_hi = res_lo;
            a_lo = next;
            bracketed = true;
            break;
        }
        a_lo = next;
        res_lo = res_next;
    }
    if (!bracketed) {
        std::ostringstream msg;
        msg << "tf_fit: no sign change of the intersection-score residual; curve:";
        for (int i = 0; i <= 10; ++i) {
            const double a = config.a_lo + (config.a_hi - config.a_lo) * i / 10.0;
            msg << " (" << a << ", " << residual_a(a) << ")";
        }
        throw FitError(msg.str());
    }

    TfResult out;
    out.a = solve_scalar(residual_a, a_lo, a_hi, config.tol);
    out.C = tf_solve_c(w.sums, w.weight, r, out.a, w.n_obs, config.tol);
    out.residual_intersections = residual_a(out.a);
    out.residual_count = tf_rhs(w.sums, w.weight, r, out.a, out.C, false) - w.n_obs;

    // tau from integrating the Palm inversion over directions
    const double one_minus_ea = -std::expm1(out.a);
    double acc = 0.0;
    for (std::size_t i = 0; i < config.j_mc; ++i)
        acc += w.sums.f[i] * std::exp(one_minus_ea * r * r * w.sums.jint[i] * out.C);
    out.tau = kPi * out.C * acc / static_cast<double>(config.j_mc);

    out.f_x_hat = w.f_x;
    out.g_hat = reference_direction_from_palm(w.f_x, out.C, out.a, out.tau, r);
    return out;
}

// ---------------------------------------------------------------------------
// MLE pipeline
// ---------------------------------------------------------------------------

std::size_t mle_class_of(double center_norm, double e_a, std::size_t k) {
    const double delta = e_a / (2.0 * static_cast<double>(k));
    if (center_norm <= delta) return 1;
    const auto j = static_cast<std::size_t>(std::ceil(center_norm / delta));
    return std::min(j, k);
}

std::vector<std::vector<Segment>> mle_partition(const Configuration& x, const DiskWindow& w,
                                                std::size_t k) {
    std::vector<std::vector<Segment>> classes(k);
    for (const Segment& u : x.segments) {
        const double norm = std::hypot(u.center.x, u.center.y);
        const std::size_t j = mle_class_of(norm, w.diameter, k);
        // rotate the center onto the positive second-axis ray
        const double angle = norm > 0.0 ? kPi / 2.0 - std::atan2(u.center.y, u.center.x) : 0.0;
        classes[j - 1].push_back(rotate(u, angle));
    }
    return classes;
}

namespace {

// d(u) for u = ((0, w_j), r, phi); valid at r = 0.
double level_distance(double w_j, double r, double phi, double e_a) {
    const double half = 0.5 * r;
    return std::sqrt(w_j * w_j + half * half + r * w_j * std::abs(std::sin(phi))) / e_a;
}

double class_level(std::size_t j, double e_a, std::size_t k) {
    const double delta = e_a / (2.0 * static_cast<double>(k));
    return (static_cast<double>(j) - 1.0) * delta + 0.5 * delta;
}

double class_r_max(std::size_t j, double e_a, std::size_t k) {
    const double w_j = class_level(j, e_a, k);
    const double half = 0.5 * e_a;
    return 2.0 * std::sqrt(std::max(0.0, half * half - w_j * w_j));
}

}  // namespace

namespace {

// longest segment with center anywhere in class j: the class density pools
// the whole annulus, so its length support extends to l_j
double class_l(std::size_t j, double e_a, std::size_t k) {
    const double inner = (static_cast<double>(j) - 1.0) * e_a / (2.0 * static_cast<double>(k));
    return 2.0 * std::sqrt(std::max(0.0, 0.25 * e_a * e_a - inner * inner));
}

// integral over [0, upper] of the inverted length slice of class j:
// f_X^(y_j)(r, phi_fixed) e^(-b d(y_j, r, phi_fixed))
double slice_integral(const BivariateDensityGrid& palm_j, std::size_t j, double b, double upper,
                      double e_a, const MleConfig& config) {
    const double w_j = class_level(j, e_a, config.k);
    int panels = config.simpson_m;
    if (panels % 2 != 0) ++panels;
    panels = std::max(panels, 2);
    return simpson(
        [&](double r) {
            return palm_j.value(r, config.phi_fixed) *
                   std::exp(-b * level_distance(w_j, r, config.phi_fixed, e_a));
        },
        0.0, upper, panels);
}

}  // namespace

double mle_C_of_b(const std::vector<BivariateDensityGrid>& palm, std::size_t j, double b,
                  const DiskWindow& w, const MleConfig& config) {
    const double e_a = w.diameter;
    const double r_max = class_r_max(j, e_a, config.k);
    const double integral = slice_integral(palm[j - 1], j, b, r_max, e_a, config);
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw FitError("mle_C_of_b: degenerate class " + std::to_string(j));
    return 1.0 / integral;
}

MleResult mle_fit(const Configuration& x, const DiskWindow& window, const MleConfig& config) {
    if (x.empty()) throw FitError("mle_fit: empty configuration");
    if (config.k < 2) throw std::invalid_argument("mle_fit: need k >= 2");
    if (config.f1_class_lo < 1 || config.f1_class_hi > config.k ||
        config.f1_class_lo > config.f1_class_hi)
        throw std::invalid_argument("mle_fit: bad f1 class range");
    for (const Segment& u : x.segments)
        if (!contained_in_disk(u, window))
            throw FitError("mle_fit: partition: segment outside the disk");

    const double e_a = window.diameter;
    const std::size_t k = config.k;

    // (i) partition, rotate, per-class kernel estimates
    const auto classes = mle_partition(x, window, k);

    MleResult out;
    out.class_counts.resize(k);
    out.palm.resize(k);
    out.observed_length.reserve(k);

    const Grid1D grid_r{0.0, e_a, config.grid_count, false};
    const Grid1D grid_phi{0.0, kPi, config.grid_count, true};
    const BetaKdeParams beta_params{config.beta_bandwidth, e_a};
    const CircularKdeParams circ_params{config.circ_kappa};

    for (std::size_t j = 0; j < k; ++j) {
        out.class_counts[j] = classes[j].size();
        if (classes[j].empty())
            throw FitError("mle_fit: kde: empty class " + std::to_string(j + 1));
        std::vector<std::pair<double, double>> marks;
        std::vector<double> lengths;
        marks.reserve(classes[j].size());
        for (const Segment& u : classes[j]) {
            marks.emplace_back(u.length, u.direction);
            lengths.push_back(u.length);
        }
        out.palm[j] = product_kde(marks, beta_params, circ_params, grid_r, grid_phi);
        out.observed_length.push_back(beta_kde(lengths, beta_params, grid_r));
    }

    // (iii) Monte Carlo segments in Y, containment-filtered, grouped by class
    Rng rng(config.seed);
    std::vector<double> sum_f(k, 0.0);    // sum of f_X^(y)(r, phi)
    std::vector<double> sum_df(k, 0.0);   // sum of d(u) f_X^(y)(r, phi)
    for (std::size_t i = 0; i < config.mc_segments; ++i) {
        const Segment u(uniform_point(window, rng), e_a * (1.0 - rng.uniform()),
                        rng.uniform(0.0, kPi));
        if (!contained_in_disk(u, window)) continue;
        const double norm = std::hypot(u.center.x, u.center.y);
        const std::size_t j = mle_class_of(norm, e_a, k);
        const double angle = norm > 0.0 ? kPi / 2.0 - std::atan2(u.center.y, u.center.x) : 0.0;
        const double phi_rot = canonical_direction(u.direction + angle);
        const double f = out.palm[j - 1].value(u.length, phi_rot);
        const double d = max_norm_distance(u, window);
        sum_f[j - 1] += f;
        sum_df[j - 1] += d * f;
    }

    const SufficientStats stats = sufficient_stats(x, window);
    const double ratio_obs = stats.distance_sum / static_cast<double>(stats.n);

    auto rhs_ratio = [&](double b) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double c = mle_C_of_b(out.palm, j, b, window, config);
            num += c * sum_df[j - 1];
            den += c * sum_f[j - 1];
        }
        if (!(den > 0.0)) throw FitError("mle_fit: solve-b: zero denominator");
        return num / den - ratio_obs;
    };

    try {
        out.b = solve_scalar(rhs_ratio, config.b_lo, config.b_hi, config.tol);
    } catch (const BracketError&) {
        throw FitError("mle_fit: solve-b: no sign change over bracket [" +
                       std::to_string(config.b_lo) + ", " + std::to_string(config.b_hi) + "]");
    }

    // (iv) constants and the two tau estimates
    out.c_j.resize(k);
    double den_count = 0.0, den_dist = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
        out.c_j[j - 1] = mle_C_of_b(out.palm, j, out.b, window, config);
        den_count += out.c_j[j - 1] * sum_f[j - 1];
        den_dist += out.c_j[j - 1] * sum_df[j - 1];
    }
    const double m_total = static_cast<double>(config.mc_segments);
    const double vol_factor = 4.0 * m_total / (kPi * kPi * e_a * e_a * e_a);
    if (!(den_count > 0.0) || !(den_dist > 0.0))
        throw FitError("mle_fit: tau: degenerate Monte Carlo denominator");
    out.tau_count = vol_factor * static_cast<double>(stats.n) / den_count;
    out.tau_dist = vol_factor * stats.distance_sum / den_dist;

    // (v) reference length density averaged over the interior classes.
    // A sharper length bandwidth is used here than in the ratio equations:
    // the recovered density report benefits from lower smoothing bias while
    // the b / tau estimates need the smoother kernels above.
    const BetaKdeParams recovery_beta{config.f1_bandwidth > 0.0 ? config.f1_bandwidth
                                                                : config.beta_bandwidth,
                                      e_a};
    std::vector<double> avg(grid_r.count, 0.0);
    for (std::size_t j = config.f1_class_lo; j <= config.f1_class_hi; ++j) {
        std::vector<std::pair<double, double>> marks;
        marks.reserve(classes[j - 1].size());
        for (const Segment& u : classes[j - 1]) marks.emplace_back(u.length, u.direction);
        const BivariateDensityGrid recovery_palm =
            product_kde(marks, recovery_beta, circ_params, grid_r, grid_phi);
        const DensityGrid rec = reference_length_from_palm(
            recovery_palm, out.b, config.phi_fixed, class_level(j, e_a, k), window, grid_r);
        for (std::size_t i = 0; i < grid_r.count; ++i) avg[i] += rec.values()[i];
    }
    out.f1_hat = DensityGrid(grid_r, std::move(avg));
    out.f1_hat.normalize();
    return out;
}

}  // namespace segproc
