#include "segproc/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "segproc/geometry.hpp"
#include "segproc/numerics.hpp"

namespace segproc {

namespace {

// A1(kappa) = I1(kappa)/I0(kappa), inverted for the ML concentration.
double vm_concentration_from_rbar(double rbar) {
    if (rbar <= 1e-6) return 0.0;
    // A1(1400) ~ 0.99964; cap so the root stays inside the bracket
    if (rbar >= 0.9995) rbar = 0.9995;
    return solve_scalar(
        [rbar](double k) { return bessel_in(1, k) / bessel_i0(k) - rbar; }, 1e-12, 1400.0, 1e-9);
}

double vm_kernel_log_norm(double kappa) { return std::log(2.0 * kPi * bessel_i0(kappa)); }

std::vector<double> beta_kernel_column(const std::vector<double>& data, double t_eval, double h) {
    // Chen's estimator: kernel Beta(t/h + 1, (1-t)/h + 1) evaluated at the data.
    const double a = t_eval / h + 1.0;
    const double b = (1.0 - t_eval) / h + 1.0;
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    std::vector<double> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double t = std::clamp(data[i], 1e-12, 1.0 - 1e-12);
        out[i] = std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log(1.0 - t));
    }
    return out;
}

}  // namespace

double circular_plugin_kappa(const std::vector<double>& angles) {
    if (angles.empty()) throw std::invalid_argument("circular_plugin_kappa: empty sample");
    const double n = static_cast<double>(angles.size());
    double cs = 0.0, sn = 0.0;
    for (double phi : angles) {
        cs += std::cos(2.0 * phi);
        sn += std::sin(2.0 * phi);
    }
    const double rbar = std::hypot(cs / n, sn / n);
    const double khat = vm_concentration_from_rbar(rbar);
    if (khat <= 1e-8) return 0.25;  // near-uniform data: nearly flat kernel
    // ratio computed in logs: I2(2k)/I0(k)^2 overflows for large k
    const double log_ratio = bessel_in_log(2, 2.0 * khat) - 2.0 * bessel_in_log(0, khat);
    const double log_num = std::log(3.0 * n * khat * khat) + log_ratio;
    const double out = std::exp(0.4 * (log_num - std::log(4.0 * std::sqrt(kPi))));
    if (!std::isfinite(out)) throw std::runtime_error("circular_plugin_kappa: not finite");
    return std::max(0.25, out);
}

DensityGrid circular_kde(const std::vector<double>& angles, const CircularKdeParams& params,
                         const Grid1D& grid) {
    if (angles.empty()) throw std::invalid_argument("circular_kde: empty sample");
    if (!grid.periodic) throw std::invalid_argument("circular_kde: grid must be periodic");
    const double kappa = params.kappa > 0.0 ? params.kappa : circular_plugin_kappa(angles);
    const double log_norm = vm_kernel_log_norm(kappa);

    std::vector<double> vals(grid.count, 0.0);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double phi = grid.point(i);
        double s = 0.0;
        for (double obs : angles) s += std::exp(kappa * std::cos(2.0 * (phi - obs)) - log_norm);
        vals[i] = 2.0 * s / static_cast<double>(angles.size());
    }
    DensityGrid out(grid, std::move(vals));
    out.normalize();
    return out;
}

DensityGrid beta_kde(const std::vector<double>& lengths, const BetaKdeParams& params,
                     const Grid1D& grid) {
    if (lengths.empty()) throw std::invalid_argument("beta_kde: empty sample");
    const double L = params.support;
    std::vector<double> scaled(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 0.0 || lengths[i] > L)
            throw std::invalid_argument("beta_kde: observation outside support");
        scaled[i] = lengths[i] / L;
    }
    const double h = params.bandwidth > 0.0
                         ? params.bandwidth
                         : std::pow(static_cast<double>(lengths.size()), -0.4);

    std::vector<double> vals(grid.count, 0.0);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = std::clamp((grid.point(i) - 0.0) / L, 0.0, 1.0);
        const auto col = beta_kernel_column(scaled, t, h);
        double s = 0.0;
        for (double k : col) s += k;
        vals[i] = s / (static_cast<double>(lengths.size()) * L);
    }
    DensityGrid out(grid, std::move(vals));
    out.normalize();
    return out;
}

BivariateDensityGrid product_kde(const std::vector<std::pair<double, double>>& samples,
                                 const BetaKdeParams& beta_params,
                                 const CircularKdeParams& circ_params, const Grid1D& grid_r,
                                 const Grid1D& grid_phi) {
    if (samples.empty()) throw std::invalid_argument("product_kde: empty sample");
    const std::size_t n = samples.size();
    const double L = beta_params.support;

    std::vector<double> lens(n), dirs(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (samples[i].first < 0.0 || samples[i].first > L)
            throw std::invalid_argument("product_kde: length outside support");
        lens[i] = samples[i].first / L;
        dirs[i] = samples[i].second;
    }
    const double h =
        beta_params.bandwidth > 0.0 ? beta_params.bandwidth : std::pow(static_cast<double>(n), -0.4);
    const double kappa =
        circ_params.kappa > 0.0 ? circ_params.kappa : circular_plugin_kappa(dirs);
    const double log_norm = vm_kernel_log_norm(kappa);

    // kb[ir][i], kc[ip][i]
    std::vector<std::vector<double>> kb(grid_r.count), kc(grid_phi.count);
    for (std::size_t ir = 0; ir < grid_r.count; ++ir) {
        const double t = std::clamp(grid_r.point(ir) / L, 0.0, 1.0);
        kb[ir] = beta_kernel_column(lens, t, h);
    }
    for (std::size_t ip = 0; ip < grid_phi.count; ++ip) {
        const double phi = grid_phi.point(ip);
        auto& col = kc[ip];
        col.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = 2.0 * std::exp(kappa * std::cos(2.0 * (phi - dirs[i])) - log_norm);
    }

    std::vector<double> vals(grid_r.count * grid_phi.count, 0.0);
    const double inv = 1.0 / (static_cast<double>(n) * L);
    for (std::size_t ir = 0; ir < grid_r.count; ++ir)
        for (std::size_t ip = 0; ip < grid_phi.count; ++ip) {
            double s = 0.0;
            const auto& b = kb[ir];
            const auto& c = kc[ip];
            for (std::size_t i = 0; i < n; ++i) s += b[i] * c[i];
            vals[ir * grid_phi.count + ip] = s * inv;
        }
    BivariateDensityGrid out(grid_r, grid_phi, std::move(vals));
    out.normalize();
    return out;
}

}  // namespace segproc
