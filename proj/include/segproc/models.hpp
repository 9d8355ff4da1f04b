#pragma once

#include <functional>
#include <variant>

#include "segproc/geometry.hpp"
#include "segproc/grid.hpp"
#include "segproc/rng.hpp"

namespace segproc {

// Axial von Mises density on [0, pi):
//   g(phi) = exp(kappa cos 2(phi - mu)) / (pi I0(kappa)).
struct VonMisesAxial {
    double mu = 0.0;
    double kappa = 0.0;

    double pdf(double phi) const;
    double max_pdf() const;
};

// Beta(alpha, beta) density rescaled to support [0, L].
struct ScaledBeta {
    double alpha = 1.0;
    double beta = 1.0;
    double support = 1.0;

    double pdf(double r) const;
    bool bounded() const { return alpha >= 1.0 && beta >= 1.0; }
    double max_pdf() const;
};

using DirectionDensity = std::variant<VonMisesAxial, DensityGrid>;
using LengthDensity = std::variant<ScaledBeta, DensityGrid>;

double direction_pdf(const DirectionDensity& g, double phi);
double length_pdf(const LengthDensity& f, double r);

// Gibbs segment process with intersection inhibition and reference direction
// density g; fixed segment length r; centers in a rectangular window.
struct GibbsDirectionalModel {
    double tau = 1.0;
    double a = 0.0;  // <= 0
    double r = 0.1;
    DirectionDensity g;
    RectWindow window;
};

// Inhomogeneous Poisson segment process on a disk with reference length
// density f1 and distance weight exp(b d(u)); segments forced inside the disk.
struct InhomogLengthModel {
    double tau = 1.0;
    double b = 0.0;
    DiskWindow window;
    LengthDensity f1;
};

struct SufficientStats {
    std::size_t n = 0;   // segment count
    long intersections = 0;  // unordered intersecting pairs
    double distance_sum = 0.0;  // sum of d(u)
};

SufficientStats sufficient_stats(const Configuration& x, const DiskWindow& w);

// tau * g(phi_u) * exp(a * hit_count(u, x \ {u})); Lebesgue convention on
// B x [0, pi).
double conditional_intensity_gibbs(const Configuration& x, const Segment& u,
                                   const GibbsDirectionalModel& m);

// 0 when u or any segment of x exits the disk, else tau * f1(r_u) * exp(b d(u)).
double conditional_intensity_inhomog(const Configuration& x, const Segment& u,
                                     const InhomogLengthModel& m);

// Poisson expectation of exp(a N(u)) when the Poisson intensity mass over the
// set of segments hitting u is `intensity_mass`.
double interaction_factor(double a, double intensity_mass);

// J(phi) = int_0^pi |sin(phi - beta)| f_X(beta) d beta, exact for the
// piecewise-linear interpolant of the tabulated f_X.
double j_integral(double phi, const DensityGrid& f_x);

// Reference direction density recovered from the observed (Palm) density:
// g(phi) proportional to f_X(phi) / exp((e^a - 1) C r^2 J(phi)), renormalized.
DensityGrid reference_direction_from_palm(const DensityGrid& f_x, double C, double a, double tau,
                                          double r);

// Reference length density from a per-level Palm table:
// f1(r) proportional to f_X^(y)(r, phi_fixed) / exp(b d((y, r, phi_fixed))).
DensityGrid reference_length_from_palm(const BivariateDensityGrid& palm, double b,
                                       double phi_fixed, double center_norm,
                                       const DiskWindow& w, const Grid1D& grid_r);

// Description of the segment space Y entering GNZ integrals: how to draw a
// uniform test segment and the Lebesgue volume of Y.
struct SegmentSpace {
    std::function<Segment(Rng&)> sample;
    double volume = 0.0;
};

SegmentSpace gibbs_segment_space(const RectWindow& w, double fixed_length);
SegmentSpace inhomog_segment_space(const DiskWindow& w);

using TestFunction = std::function<double(const Segment&, const Configuration&)>;
using ConditionalIntensity = std::function<double(const Configuration&, const Segment&)>;

// GNZ innovation: sum_u q(u, x\u) minus the Monte Carlo estimate of
// int lambda*(x, u) q(u, x) du over j_mc uniform test segments.
struct GnzResidual {
    double value = 0.0;
    double mc_se = 0.0;  // Monte Carlo standard error of the integral term
};

GnzResidual gnz_residual(const Configuration& x, const TestFunction& q,
                         const ConditionalIntensity& lambda_star, const SegmentSpace& space,
                         std::size_t j_mc, Rng& rng);

}  // namespace segproc
