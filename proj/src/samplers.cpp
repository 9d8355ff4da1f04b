#include "segproc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "segproc/segment_index.hpp"

namespace segproc {

namespace {

double direction_max_pdf(const DirectionDensity& g) {
    if (const auto* vm = std::get_if<VonMisesAxial>(&g)) return vm->max_pdf();
    const auto& grid = std::get<DensityGrid>(g);
    return *std::max_element(grid.values().begin(), grid.values().end());
}

double length_max_pdf(const LengthDensity& f) {
    if (const auto* sb = std::get_if<ScaledBeta>(&f)) return sb->max_pdf();
    const auto& grid = std::get<DensityGrid>(f);
    return *std::max_element(grid.values().begin(), grid.values().end());
}

double sample_direction(const DirectionDensity& g, Rng& rng) {
    const double bound = direction_max_pdf(g);
    while (true) {
        const double phi = rng.uniform(0.0, kPi);
        if (rng.uniform() * bound <= direction_pdf(g, phi)) return phi;
    }
}

}  // namespace

Configuration sample_poisson_reference(const RectWindow& w, const LengthLaw& mark_law, Rng& rng) {
    const int n = rng.poisson(w.area());
    return uniform_segments(static_cast<std::size_t>(n), w, mark_law, rng);
}

Configuration sample_gibbs_poisson_reduction(const GibbsDirectionalModel& m, Rng& rng) {
    const int n = rng.poisson(m.tau * m.window.area());
    Configuration x;
    x.segments.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Point2 c = uniform_point(m.window, rng);
        const double phi = sample_direction(m.g, rng);
        x.segments.emplace_back(c, m.r, phi);
    }
    return x;
}

double gibbs_birth_ratio(const Configuration& x, const Segment& u,
                         const GibbsDirectionalModel& m) {
    const double vol = m.window.area() * kPi;
    return conditional_intensity_gibbs(x, u, m) * vol / static_cast<double>(x.size() + 1);
}

GibbsSample sample_gibbs(const GibbsDirectionalModel& m, const ChainConfig& chain) {
    if (m.a > 0.0) throw std::invalid_argument("sample_gibbs: requires a <= 0");
    const double psum = chain.p_birth + chain.p_death + chain.p_move;
    if (!(std::abs(psum - 1.0) < 1e-9) || chain.p_birth < 0.0 || chain.p_death < 0.0 ||
        chain.p_move < 0.0)
        throw std::invalid_argument("sample_gibbs: proposal probabilities must sum to 1");

    Rng rng(chain.seed);
    const double vol = m.window.area() * kPi;
    const double sigma_c =
        chain.move_center_sigma > 0.0 ? chain.move_center_sigma : 0.5 * m.r;
    const double sigma_d = chain.move_direction_sigma;

    SegmentIndex index(m.window, m.r, /*periodic=*/true);
    {
        const Configuration init = sample_gibbs_poisson_reduction(m, rng);
        for (const Segment& s : init.segments) index.insert(s);
    }
    long n_total = 0;
    for (std::size_t i = 0; i < index.size(); ++i)
        n_total += index.hits(index.segment(i), i);
    n_total /= 2;

    GibbsSample out;
    auto& diag = out.diagnostics;
    diag.trace.push_back({0, index.size(), n_total});

    auto cond_intensity = [&](const Segment& u, int hits) {
        return m.tau * direction_pdf(m.g, u.direction) * std::exp(m.a * hits);
    };

    for (std::size_t step = 1; step <= chain.total_steps; ++step) {
        const double roll = rng.uniform();
        if (roll < chain.p_birth) {
            ++diag.births_proposed;
            const Segment u(uniform_point(m.window, rng), m.r, rng.uniform(0.0, kPi));
            const int h = index.hits(u);
            const double alpha =
                cond_intensity(u, h) * vol / static_cast<double>(index.size() + 1);
            if (rng.uniform() < alpha) {
                index.insert(u);
                n_total += h;
                ++diag.births_accepted;
            }
        } else if (roll < chain.p_birth + chain.p_death) {
            ++diag.deaths_proposed;
            if (index.size() > 0) {
                const std::size_t id = rng.index(index.size());
                const Segment u = index.segment(id);
                const int h = index.hits(u, id);
                const double alpha =
                    static_cast<double>(index.size()) / (cond_intensity(u, h) * vol);
                if (rng.uniform() < alpha) {
                    index.remove(id);
                    n_total -= h;
                    ++diag.deaths_accepted;
                }
            }
        } else {
            ++diag.moves_proposed;
            if (index.size() > 0) {
                const std::size_t id = rng.index(index.size());
                const Segment u = index.segment(id);
                const Point2 c = wrap_into(Point2{u.center.x + sigma_c * rng.normal(),
                                                  u.center.y + sigma_c * rng.normal()},
                                           m.window);
                const double phi = canonical_direction(u.direction + sigma_d * rng.normal());
                {
                    const Segment v(c, m.r, phi);
                    const int h_old = index.hits(u, id);
                    const int h_new = index.hits(v, id);
                    const double alpha =
                        (direction_pdf(m.g, v.direction) * std::exp(m.a * h_new)) /
                        (direction_pdf(m.g, u.direction) * std::exp(m.a * h_old));
                    if (rng.uniform() < alpha) {
                        index.replace(id, v);
                        n_total += h_new - h_old;
                        ++diag.moves_accepted;
                    }
                }
            }
        }
        if (step % 1000 == 0) diag.trace.push_back({step, index.size(), n_total});
    }

    out.configuration.segments = index.segments();
    return out;
}

InhomogSampler::InhomogSampler(const InhomogLengthModel& model, std::uint64_t mc_seed,
                               std::size_t mc_points)
    : model_(model) {
    const double pdf_bound = length_max_pdf(model_.f1);
    if (!std::isfinite(pdf_bound))
        throw std::invalid_argument("InhomogSampler: unbounded reference length density");
    // d(u) <= 1/2 on contained segments
    bound_ = pdf_bound * std::exp(std::max(model_.b, 0.0) * 0.5);

    const double e_a = model_.window.diameter;
    const double vol = kPi * kPi * e_a * e_a * e_a / 4.0;
    Rng rng(mc_seed);
    double acc = 0.0;
    for (std::size_t i = 0; i < mc_points; ++i) {
        const Segment u(uniform_point(model_.window, rng), e_a * (1.0 - rng.uniform()),
                        rng.uniform(0.0, kPi));
        if (!contained_in_disk(u, model_.window)) continue;
        acc += length_pdf(model_.f1, u.length) *
               std::exp(model_.b * max_norm_distance(u, model_.window));
    }
    total_mass_ = model_.tau * vol * acc / static_cast<double>(mc_points);
}

Configuration InhomogSampler::sample(Rng& rng) const {
    const double e_a = model_.window.diameter;
    const int n = rng.poisson(total_mass_);
    Configuration x;
    x.segments.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        while (true) {
            const Segment u(uniform_point(model_.window, rng), e_a * (1.0 - rng.uniform()),
                            rng.uniform(0.0, kPi));
            if (!contained_in_disk(u, model_.window)) continue;
            const double w = length_pdf(model_.f1, u.length) *
                             std::exp(model_.b * max_norm_distance(u, model_.window));
            if (rng.uniform() * bound_ <= w) {
                x.segments.push_back(u);
                break;
            }
        }
    }
    return x;
}

Configuration sample_inhomog(const InhomogLengthModel& m, Rng& rng) {
    InhomogSampler sampler(m, rng.next_u64());
    return sampler.sample(rng);
}

}  // namespace segproc
