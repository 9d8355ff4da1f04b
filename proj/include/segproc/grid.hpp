#pragma once

#include <cstddef>
#include <vector>

namespace segproc {

// Evaluation grid on [lo, hi]. Non-periodic grids include both endpoints;
// periodic grids place points at lo + i*step with step = (hi-lo)/count, the
// right endpoint being identified with the left one.
struct Grid1D {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 100;
    bool periodic = false;

    double step() const {
        return periodic ? (hi - lo) / static_cast<double>(count)
                        : (hi - lo) / static_cast<double>(count - 1);
    }
    double point(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
};

// Tabulated nonnegative density over a Grid1D.
class DensityGrid {
public:
    DensityGrid() = default;
    DensityGrid(Grid1D grid, std::vector<double> values);

    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Linear interpolation; periodic grids wrap.
    double value(double x) const;

    // Trapezoid integral (rectangle sum for periodic grids).
    double integral() const;

    // Clip negatives to zero and rescale so the integral is 1.
    void normalize();

private:
    Grid1D grid_;
    std::vector<double> values_;
};

// Tabulated bivariate density, values_[ir * grid_phi.count + iphi].
class BivariateDensityGrid {
public:
    BivariateDensityGrid() = default;
    BivariateDensityGrid(Grid1D grid_r, Grid1D grid_phi, std::vector<double> values);

    const Grid1D& grid_r() const { return grid_r_; }
    const Grid1D& grid_phi() const { return grid_phi_; }
    const std::vector<double>& values() const { return values_; }

    double at(std::size_t ir, std::size_t iphi) const {
        return values_[ir * grid_phi_.count + iphi];
    }

    // Bilinear interpolation; the phi axis wraps when periodic.
    double value(double r, double phi) const;

    double integral() const;
    void normalize();

    // Trapezoid marginal over the phi axis.
    DensityGrid marginal_r() const;

private:
    Grid1D grid_r_;
    Grid1D grid_phi_;
    std::vector<double> values_;
};

}  // namespace segproc
