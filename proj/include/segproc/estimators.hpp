#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "segproc/geometry.hpp"
#include "segproc/grid.hpp"
#include "segproc/kde.hpp"
#include "segproc/models.hpp"

namespace segproc {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Takacs-Fiksel estimation for the Gibbs directional model.
// ---------------------------------------------------------------------------

struct TfConfig {
    std::size_t j_mc = 10000;       // Monte Carlo test segments
    std::size_t grid_count = 100;   // direction grid on [0, pi)
    double a_lo = -10.0;
    double a_hi = 0.0;
    double tol = 1e-9;
    double kde_kappa = 30.0;  // calibrated default; <= 0: plug-in rule
    std::uint64_t seed = 1;
};

struct TfResult {
    double C = 0.0;
    double a = 0.0;
    double tau = 0.0;
    DensityGrid f_x_hat;  // observed (Palm) direction density
    DensityGrid g_hat;    // recovered reference direction density
    double residual_count = 0.0;          // score q = 1 at the solution
    double residual_intersections = 0.0;  // score q = N_x(u) at the solution
};

// beta(a, r, C, phi) = exp((e^a - 1) r^2 C J(phi)).
double beta_factor(double a, double r, double C, double phi, const DensityGrid& f_x);

// Solves the two Takacs-Fiksel equations (scores q = N_x(u) and q = 1) for
// (C, a) by nested bracketed solves, then tau by the integrated identity and
// g by the Palm inversion.
TfResult tf_fit(const Configuration& x, double r, const RectWindow& window,
                const TfConfig& config);

// Profiled intersection-equation residual a -> (a, residual) for diagnostics.
std::vector<std::pair<double, double>> tf_residual_curve(const Configuration& x, double r,
                                                         const RectWindow& window,
                                                         const TfConfig& config,
                                                         const std::vector<double>& a_values);

// ---------------------------------------------------------------------------
// Maximum likelihood estimation for the inhomogeneous length model.
// ---------------------------------------------------------------------------

struct MleConfig {
    std::size_t k = 6;                 // annulus classes
    int simpson_m = 100;               // panels per class integral
    std::size_t mc_segments = 1000000; // Monte Carlo segments in Y
    std::size_t f1_class_lo = 1;       // 1-based inclusive class range
    std::size_t f1_class_hi = 4;       //   averaged for the f1 recovery
    double phi_fixed = 0.0;
    double b_lo = -20.0;
    double b_hi = 20.0;
    double tol = 1e-9;
    double beta_bandwidth = 0.0;  // <= 0: n^(-2/5)
    double circ_kappa = 1.6;      // calibrated default; <= 0: plug-in rule
    double f1_bandwidth = 0.02;   // length bandwidth for the f1 recovery step only
    std::size_t grid_count = 100;
    std::uint64_t seed = 1;
};

struct MleResult {
    double b = 0.0;
    double tau_count = 0.0;  // primary estimate, from the n(x) equation
    double tau_dist = 0.0;   // diagnostic, from the D(x) equation
    std::vector<double> c_j;
    DensityGrid f1_hat;
    std::vector<BivariateDensityGrid> palm;       // per class, rotated marks
    std::vector<DensityGrid> observed_length;     // per class length KDE
    std::vector<std::size_t> class_counts;
};

// Class index (1-based) of a center norm: (j-1) Delta_f < ||y|| <= j Delta_f.
std::size_t mle_class_of(double center_norm, double e_a, std::size_t k);

// Per-class samples rotated so each center lies on the positive second-axis
// ray; directions transformed accordingly.
std::vector<std::vector<Segment>> mle_partition(const Configuration& x, const DiskWindow& w,
                                                std::size_t k);

// C_j(b) = 1 / int_0^{r_max(y_j)} f_X^(y_j)(r, phi_fixed) exp(-b d(u)) dr by
// composite Simpson with m panels.
double mle_C_of_b(const std::vector<BivariateDensityGrid>& palm, std::size_t j, double b,
                  const DiskWindow& w, const MleConfig& config);

// Full pipeline: partition, per-class product KDE, solve b, tau, f1 recovery.
MleResult mle_fit(const Configuration& x, const DiskWindow& window, const MleConfig& config);

}  // namespace segproc
