#include "segproc/numerics.hpp"

#include <cmath>

namespace segproc {

double bessel_i0(double kappa) {
    if (kappa < 0.0) throw std::invalid_argument("bessel_i0: negative argument");
    if (kappa <= 15.0) {
        const double q = 0.25 * kappa * kappa;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum;
    }
    // Abramowitz-Stegun style asymptotic: I0(x) ~ e^x/sqrt(2 pi x) * sum a_k/x^k
    const double x = kappa;
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double num = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= num / (8.0 * x * k);
        sum += term;
    }
    return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
}

double bessel_in(int n, double x) {
    if (n < 0 || x < 0.0) throw std::invalid_argument("bessel_in: bad arguments");
    if (x > 500.0) {
        // large-argument asymptotic (the series below would overflow)
        const double mu = 4.0 * n * n;
        double sum = 1.0, term = 1.0;
        for (int k = 1; k <= 12; ++k) {
            const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
            term *= -num / (8.0 * x * k);
            sum += term;
        }
        return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
    }
    const double q = 0.25 * x * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= (0.5 * x) / static_cast<double>(k);
    double sum = term;
    for (int k = 1; k < 300; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

double bessel_in_log(int n, double x) {
    if (n < 0 || x < 0.0) throw std::invalid_argument("bessel_in_log: bad arguments");
    if (x <= 500.0) return std::log(bessel_in(n, x));
    const double mu = 4.0 * n * n;
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= -num / (8.0 * x * k);
        sum += term;
    }
    return x - 0.5 * std::log(2.0 * kPi * x) + std::log(sum);
}

double simpson(const std::function<double(double)>& f, double a, double b, int m) {
    if (m <= 0 || m % 2 != 0) throw std::invalid_argument("simpson: panel count must be even");
    if (!(a < b)) throw std::invalid_argument("simpson: need a < b");
    const double h = (b - a) / m;
    double sum = f(a) + f(b);
    for (int i = 1; i < m; ++i) sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return sum * h / 3.0;
}

double solve_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw BracketError("solve_scalar: no sign change in bracket");

    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int iter = 0; iter < 200; ++iter) {
        // secant candidate, fall back to bisection when it leaves the bracket
        double c = b - fb * (b - a) / (fb - fa);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const double fc = f(c);
        if (fc == 0.0 || b - a <= tol) return c;
        if (fa * fc < 0.0) {
            b = c;
            fb = fc;
        } else {
            a = c;
            fa = fc;
        }
        if (b - a <= tol) return 0.5 * (a + b);
    }
    return 0.5 * (a + b);
}

double draw_length(const LengthLaw& law, Rng& rng) {
    if (const auto* fixed = std::get_if<FixedLength>(&law)) return fixed->r;
    // (0, max]: zero-length segments are invalid
    return std::get<UniformLength>(law).max * (1.0 - rng.uniform());
}

Point2 uniform_point(const RectWindow& w, Rng& rng) {
    return Point2{w.lower_left.x + rng.uniform() * w.width,
                  w.lower_left.y + rng.uniform() * w.height};
}

Point2 uniform_point(const DiskWindow& w, Rng& rng) {
    const double rad = w.radius() * std::sqrt(rng.uniform());
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    return Point2{rad * std::cos(ang), rad * std::sin(ang)};
}

namespace {

template <typename Window>
Configuration uniform_segments_impl(std::size_t n, const Window& w, const LengthLaw& law,
                                    Rng& rng) {
    Configuration x;
    x.segments.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 c = uniform_point(w, rng);
        const double len = draw_length(law, rng);
        const double phi = rng.uniform(0.0, kPi);
        x.segments.emplace_back(c, len, phi);
    }
    return x;
}

}  // namespace

Configuration uniform_segments(std::size_t n, const RectWindow& w, const LengthLaw& law,
                               Rng& rng) {
    return uniform_segments_impl(n, w, law, rng);
}

Configuration uniform_segments(std::size_t n, const DiskWindow& w, const LengthLaw& law,
                               Rng& rng) {
    return uniform_segments_impl(n, w, law, rng);
}

}  // namespace segproc
