#pragma once

#include <functional>
#include <stdexcept>
#include <variant>

#include "segproc/geometry.hpp"
#include "segproc/rng.hpp"

namespace segproc {

// Modified Bessel function of the first kind, order 0. Series for small
// argument, asymptotic expansion above kappa = 15. Relative accuracy 1e-12
// on [0, 20].
double bessel_i0(double kappa);

// Modified Bessel function of the first kind, integer order n >= 0 (series).
double bessel_in(int n, double x);

// log I_n(x), stable for large x where I_n itself overflows.
double bessel_in_log(int n, double x);

// Composite Simpson rule with m panels (m even).
double simpson(const std::function<double(double)>& f, double a, double b, int m);

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bracketed scalar root: bisection refined with secant steps. Throws
// BracketError when f(lo) and f(hi) have the same sign.
double solve_scalar(const std::function<double(double)>& f, double lo, double hi,
                    double tol = 1e-10);

struct FixedLength {
    double r = 1.0;
};
struct UniformLength {
    double max = 1.0;
};
using LengthLaw = std::variant<FixedLength, UniformLength>;

double draw_length(const LengthLaw& law, Rng& rng);

Point2 uniform_point(const RectWindow& w, Rng& rng);
Point2 uniform_point(const DiskWindow& w, Rng& rng);

// Independent segments: centers uniform in the window, directions uniform on
// [0, pi), lengths per law.
Configuration uniform_segments(std::size_t n, const RectWindow& w, const LengthLaw& law, Rng& rng);
Configuration uniform_segments(std::size_t n, const DiskWindow& w, const LengthLaw& law, Rng& rng);

}  // namespace segproc
