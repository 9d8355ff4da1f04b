#include "segproc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segproc {

DensityGrid::DensityGrid(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count)
        throw std::invalid_argument("DensityGrid: value count does not match grid");
    if (grid_.count < 2) throw std::invalid_argument("DensityGrid: need at least 2 points");
}

double DensityGrid::value(double x) const {
    const double h = grid_.step();
    if (grid_.periodic) {
        const double span = grid_.hi - grid_.lo;
        double t = std::fmod(x - grid_.lo, span);
        if (t < 0.0) t += span;
        const double pos = t / h;
        const std::size_t i = std::min(static_cast<std::size_t>(pos), grid_.count - 1);
        const double frac = pos - static_cast<double>(i);
        const std::size_t j = (i + 1) % grid_.count;
        return values_[i] * (1.0 - frac) + values_[j] * frac;
    }
    if (x <= grid_.lo) return values_.front();
    if (x >= grid_.hi) return values_.back();
    const double pos = (x - grid_.lo) / h;
    std::size_t i = std::min(static_cast<std::size_t>(pos), grid_.count - 2);
    const double frac = pos - static_cast<double>(i);
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

double DensityGrid::integral() const {
    const double h = grid_.step();
    double s = 0.0;
    if (grid_.periodic) {
        for (double v : values_) s += v;
        return s * h;
    }
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) s += 0.5 * (values_[i] + values_[i + 1]);
    return s * h;
}

void DensityGrid::normalize() {
    for (double& v : values_) v = std::max(v, 0.0);
    const double z = integral();
    if (!(z > 0.0)) throw std::runtime_error("DensityGrid: cannot normalize zero density");
    for (double& v : values_) v /= z;
}

BivariateDensityGrid::BivariateDensityGrid(Grid1D grid_r, Grid1D grid_phi,
                                           std::vector<double> values)
    : grid_r_(grid_r), grid_phi_(grid_phi), values_(std::move(values)) {
    if (values_.size() != grid_r_.count * grid_phi_.count)
        throw std::invalid_argument("BivariateDensityGrid: value count does not match grids");
}

double BivariateDensityGrid::value(double r, double phi) const {
    // r axis (non-periodic clamp)
    const double hr = grid_r_.step();
    double pr = (std::clamp(r, grid_r_.lo, grid_r_.hi) - grid_r_.lo) / hr;
    std::size_t ir = std::min(static_cast<std::size_t>(pr), grid_r_.count - 2);
    const double fr = std::clamp(pr - static_cast<double>(ir), 0.0, 1.0);

    // phi axis
    const double hp = grid_phi_.step();
    std::size_t ip, jp;
    double fp;
    if (grid_phi_.periodic) {
        const double span = grid_phi_.hi - grid_phi_.lo;
        double t = std::fmod(phi - grid_phi_.lo, span);
        if (t < 0.0) t += span;
        const double pp = t / hp;
        ip = std::min(static_cast<std::size_t>(pp), grid_phi_.count - 1);
        fp = pp - static_cast<double>(ip);
        jp = (ip + 1) % grid_phi_.count;
    } else {
        const double pp = (std::clamp(phi, grid_phi_.lo, grid_phi_.hi) - grid_phi_.lo) / hp;
        ip = std::min(static_cast<std::size_t>(pp), grid_phi_.count - 2);
        fp = std::clamp(pp - static_cast<double>(ip), 0.0, 1.0);
        jp = ip + 1;
    }

    const double v00 = at(ir, ip), v01 = at(ir, jp);
    const double v10 = at(ir + 1, ip), v11 = at(ir + 1, jp);
    return (1.0 - fr) * ((1.0 - fp) * v00 + fp * v01) + fr * ((1.0 - fp) * v10 + fp * v11);
}

double BivariateDensityGrid::integral() const {
    // trapezoid in r, rectangle (periodic) or trapezoid in phi
    const double hr = grid_r_.step();
    const double hp = grid_phi_.step();
    double total = 0.0;
    for (std::size_t ir = 0; ir < grid_r_.count; ++ir) {
        double row = 0.0;
        if (grid_phi_.periodic) {
            for (std::size_t ip = 0; ip < grid_phi_.count; ++ip) row += at(ir, ip);
        } else {
            for (std::size_t ip = 0; ip + 1 < grid_phi_.count; ++ip)
                row += 0.5 * (at(ir, ip) + at(ir, ip + 1));
        }
        row *= hp;
        const double w = (ir == 0 || ir + 1 == grid_r_.count) ? 0.5 : 1.0;
        total += w * row;
    }
    return total * hr;
}

void BivariateDensityGrid::normalize() {
    for (double& v : values_) v = std::max(v, 0.0);
    const double z = integral();
    if (!(z > 0.0))
        throw std::runtime_error("BivariateDensityGrid: cannot normalize zero density");
    for (double& v : values_) v /= z;
}

DensityGrid BivariateDensityGrid::marginal_r() const {
    const double hp = grid_phi_.step();
    std::vector<double> out(grid_r_.count, 0.0);
    for (std::size_t ir = 0; ir < grid_r_.count; ++ir) {
        double row = 0.0;
        if (grid_phi_.periodic) {
            for (std::size_t ip = 0; ip < grid_phi_.count; ++ip) row += at(ir, ip);
        } else {
            for (std::size_t ip = 0; ip + 1 < grid_phi_.count; ++ip)
                row += 0.5 * (at(ir, ip) + at(ir, ip + 1));
        }
        out[ir] = row * hp;
    }
    return DensityGrid(grid_r_, std::move(out));
}

}  // namespace segproc
