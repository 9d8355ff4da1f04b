#pragma once

#include <vector>

#include "segproc/grid.hpp"

namespace segproc {

// von Mises kernel concentration on the doubled-angle circle.
struct CircularKdeParams {
    double kappa = 0.0;  // <= 0 selects the plug-in rule at fit time
};

struct BetaKdeParams {
    double bandwidth = 0.0;  // <= 0 selects n^(-2/5) at fit time
    double support = 1.0;
};

// Taylor-style plug-in concentration for axial data (angles in [0, pi)).
double circular_plugin_kappa(const std::vector<double>& angles);

// Axial kernel density estimate: angle doubling, von Mises kernels,
// normalized on [0, pi). The grid must be periodic.
DensityGrid circular_kde(const std::vector<double>& angles, const CircularKdeParams& params,
                         const Grid1D& grid);

// Boundary-corrected beta kernel estimate (Chen) on [0, support].
DensityGrid beta_kde(const std::vector<double>& lengths, const BetaKdeParams& params,
                     const Grid1D& grid);

// Bivariate product kernel: beta in the length axis, von Mises in the
// direction axis; normalized over [0, support] x [0, pi).
BivariateDensityGrid product_kde(const std::vector<std::pair<double, double>>& samples,
                                 const BetaKdeParams& beta_params,
                                 const CircularKdeParams& circ_params, const Grid1D& grid_r,
                                 const Grid1D& grid_phi);

}  // namespace segproc
