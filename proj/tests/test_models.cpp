#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "segproc/models.hpp"
#include "segproc/numerics.hpp"

using namespace segproc;

namespace {

DensityGrid uniform_direction_grid(std::size_t count = 200) {
    const Grid1D g{0.0, kPi, count, true};
    return DensityGrid(g, std::vector<double>(count, 1.0 / kPi));
}

Segment seg(double cx, double cy, double len, double phi) {
    return Segment{Point2{cx, cy}, len, phi};
}

}  // namespace

TEST_CASE("von Mises axial pdf integrates to 1 and peaks at mu") {
    const VonMisesAxial g{0.3, 1.0};
    const double integral =
        simpson([&](double p) { return g.pdf(p); }, 0.0, kPi, 2000);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.pdf(0.3) == doctest::Approx(g.max_pdf()).epsilon(1e-12));
    CHECK(g.pdf(0.3) > g.pdf(0.3 + 0.5));
    // kappa = 0 is the uniform law on [0, pi)
    const VonMisesAxial u{0.0, 0.0};
    CHECK(u.pdf(1.1) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("scaled beta pdf integrates to 1 on its support") {
    const ScaledBeta f{2.0, 4.0, 1.0};
    const double integral =
        simpson([&](double r) { return f.pdf(r); }, 0.0, 1.0, 2000);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(f.pdf(-0.1) == 0.0);
    CHECK(f.pdf(1.1) == 0.0);
    // Beta(2,4) mode at (a-1)/(a+b-2) = 1/4
    CHECK(f.pdf(0.25) == doctest::Approx(f.max_pdf()).epsilon(1e-9));
    // support scaling: density compresses by 1/L
    const ScaledBeta h{2.0, 4.0, 2.0};
    CHECK(h.pdf(0.5) == doctest::Approx(f.pdf(0.25) / 2.0).epsilon(1e-12));
}

TEST_CASE("J(phi) = 2/pi for the uniform direction density") {
    const DensityGrid fx = uniform_direction_grid();
    for (double phi : {0.0, 0.4, kPi / 2.0, 3.0}) {
        CHECK(j_integral(phi, fx) == doctest::Approx(2.0 / kPi).epsilon(1e-6));
    }
}

TEST_CASE("J(phi) for a point mass concentrates to |sin(phi - beta0)|") {
    // sharply concentrated tabulated density near beta0 = 1.0
    const std::size_t n = 2000;
    const Grid1D g{0.0, kPi, n, true};
    std::vector<double> v(n, 0.0);
    const VonMisesAxial vm{1.0, 400.0};
    for (std::size_t i = 0; i < n; ++i) v[i] = vm.pdf(g.point(i));
    DensityGrid fx(g, std::move(v));
    fx.normalize();
    CHECK(j_integral(2.0, fx) == doctest::Approx(std::sin(1.0)).epsilon(0.01));
}

TEST_CASE("interaction_factor equals exp((e^a - 1) mass)") {
    CHECK(interaction_factor(0.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(interaction_factor(-0.5, 2.0) ==
          doctest::Approx(std::exp((std::exp(-0.5) - 1.0) * 2.0)).epsilon(1e-12));
    CHECK(interaction_factor(-3.0, 0.7) ==
          doctest::Approx(std::exp((std::exp(-3.0) - 1.0) * 0.7)).epsilon(1e-12));
}

TEST_CASE("conditional_intensity_gibbs multiplies tau, g and the hit factor") {
    GibbsDirectionalModel m;
    m.tau = 1000.0;
    m.a = -0.5;
    m.r = 0.12;
    m.g = VonMisesAxial{0.0, 1.0};
    m.window = RectWindow{{0.0, 0.0}, 1.0, 1.0};

    Configuration x;
    const Segment u = seg(0.5, 0.5, 0.12, 0.0);
    CHECK(conditional_intensity_gibbs(x, u, m) ==
          doctest::Approx(1000.0 * direction_pdf(m.g, 0.0)).epsilon(1e-12));
    // one crossing segment scales by e^a
    x.segments.push_back(seg(0.5, 0.5, 0.12, kPi / 2.0));
    CHECK(conditional_intensity_gibbs(x, u, m) ==
          doctest::Approx(1000.0 * direction_pdf(m.g, 0.0) * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("conditional_intensity_inhomog spot value and containment zero") {
    InhomogLengthModel m;
    m.tau = 900.0;
    m.b = 3.0;
    m.window = DiskWindow{1.0};
    m.f1 = ScaledBeta{2.0, 4.0, 1.0};

    Configuration empty;
    // u centered at the origin, r = 0.5: d(u) = 0.25
    const Segment u = seg(0.0, 0.0, 0.5, 0.3);
    const double expected = 900.0 * length_pdf(m.f1, 0.5) * std::exp(3.0 * 0.25);
    CHECK(conditional_intensity_inhomog(empty, u, m) ==
          doctest::Approx(expected).epsilon(1e-12));
    // segment poking out of the disk has zero intensity
    const Segment out = seg(0.4, 0.0, 0.5, 0.0);
    CHECK(conditional_intensity_inhomog(empty, out, m) == 0.0);
}

TEST_CASE("sufficient_stats aggregates n, pairs and D") {
    const DiskWindow w{1.0};
    Configuration x;
    x.segments = {seg(0.0, 0.0, 0.4, 0.0), seg(0.0, 0.0, 0.4, kPi / 2.0),
                  seg(0.0, 0.3, 0.2, 0.0)};
    const SufficientStats s = sufficient_stats(x, w);
    CHECK(s.n == 3);
    CHECK(s.intersections == 1);
    const double d3 = std::sqrt(0.3 * 0.3 + 0.1 * 0.1);
    CHECK(s.distance_sum == doctest::Approx(0.2 + 0.2 + d3).epsilon(1e-12));
}

TEST_CASE("reference_direction_from_palm inverts the forward reweighting") {
    // forward: f_X(phi) proportional to g(phi) exp((e^a - 1) C r^2 J(phi));
    // build f_X from a known g and check the inversion recovers g
    const VonMisesAxial g_true{0.0, 1.0};
    const double a = -0.5, r = 0.12, C = 360.0, tau = 1000.0;
    const std::size_t n = 400;
    const Grid1D grid{0.0, kPi, n, true};

    std::vector<double> gv(n);
    for (std::size_t i = 0; i < n; ++i) gv[i] = g_true.pdf(grid.point(i));
    DensityGrid g_tab(grid, std::move(gv));
    g_tab.normalize();

    // fixed-point iteration for f_X
    DensityGrid fx = g_tab;
    for (int it = 0; it < 60; ++it) {
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double phi = grid.point(i);
            next[i] = g_tab.value(phi) *
                      std::exp((std::exp(a) - 1.0) * C * r * r * j_integral(phi, fx));
        }
        fx = DensityGrid(grid, std::move(next));
        fx.normalize();
    }

    const DensityGrid rec = reference_direction_from_palm(fx, C, a, tau, r);
    for (std::size_t i = 0; i < n; i += 7) {
        CHECK(rec.values()[i] ==
              doctest::Approx(g_tab.values()[i]).epsilon(5e-3));
    }
}

TEST_CASE("reference_length_from_palm inverts the distance weight") {
    const DiskWindow w{1.0};
    const ScaledBeta f1{2.0, 4.0, 1.0};
    const double b = 3.0, w_j = 0.1;
    const std::size_t n = 200;
    const Grid1D grid_r{0.0, 1.0, n, false};
    const Grid1D grid_phi{0.0, kPi, n, true};

    // palm slice at phi = 0: f1(r) e^{b d((0,w_j), r, 0)} tabulated, constant
    // in phi so the bivariate table is a product
    std::vector<double> vals(n * n);
    for (std::size_t ir = 0; ir < n; ++ir) {
        const double r = grid_r.point(ir);
        const Segment u(Point2{0.0, w_j}, std::max(r, 1e-9), 0.0);
        const double slice = f1.pdf(r) * std::exp(b * max_norm_distance(u, w));
        for (std::size_t ip = 0; ip < n; ++ip) vals[ir * n + ip] = slice;
    }
    BivariateDensityGrid palm(grid_r, grid_phi, std::move(vals));
    palm.normalize();

    const DensityGrid rec = reference_length_from_palm(palm, b, 0.0, w_j, w, grid_r);
    for (std::size_t i = 2; i < n; i += 9) {
        CHECK(rec.values()[i] == doctest::Approx(f1.pdf(grid_r.point(i))).epsilon(0.02));
    }
}

TEST_CASE("gnz_residual on an empty configuration is minus the MC integral") {
    InhomogLengthModel m;
    m.tau = 50.0;
    m.b = 0.0;
    m.window = DiskWindow{1.0};
    m.f1 = ScaledBeta{1.0, 1.0, 1.0};

    const SegmentSpace space = inhomog_segment_space(m.window);
    Rng rng(5);
    Configuration empty;
    const GnzResidual res = gnz_residual(
        empty, [](const Segment&, const Configuration&) { return 1.0; },
        [&](const Configuration& x, const Segment& u) {
            return conditional_intensity_inhomog(x, u, m);
        },
        space, 20000, rng);
    CHECK(res.value < 0.0);
    CHECK(res.mc_se > 0.0);

    // cross-check against an independent Monte Carlo of the same integral
    Rng rng2(77);
    double acc = 0.0;
    const int n_mc = 200000;
    for (int i = 0; i < n_mc; ++i) {
        const Segment u = space.sample(rng2);
        acc += conditional_intensity_inhomog(empty, u, m);
    }
    const double integral = space.volume * acc / n_mc;
    CHECK(res.value == doctest::Approx(-integral).epsilon(0.05));
}
