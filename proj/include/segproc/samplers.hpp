#pragma once

#include <cstdint>
#include <vector>

#include "segproc/geometry.hpp"
#include "segproc/models.hpp"
#include "segproc/numerics.hpp"
#include "segproc/rng.hpp"

namespace segproc {

struct ChainConfig {
    std::size_t total_steps = 200000;
    std::size_t burn_in = 50000;
    double p_birth = 1.0 / 3.0;
    double p_death = 1.0 / 3.0;
    double p_move = 1.0 / 3.0;
    double move_center_sigma = 0.0;     // <= 0: r/2
    double move_direction_sigma = 0.2;  // wrapped-Gaussian, radians
    std::uint64_t seed = 1;
};

struct ChainTracePoint {
    std::size_t step = 0;
    std::size_t n = 0;
    long intersections = 0;
};

struct ChainDiagnostics {
    std::size_t births_proposed = 0, births_accepted = 0;
    std::size_t deaths_proposed = 0, deaths_accepted = 0;
    std::size_t moves_proposed = 0, moves_accepted = 0;
    std::vector<ChainTracePoint> trace;  // every 1000 steps
};

struct GibbsSample {
    Configuration configuration;
    ChainDiagnostics diagnostics;
};

// Poisson process with the unit reference intensity measure dy (1/pi) dphi
// (total mass = window area); marks drawn independently.
Configuration sample_poisson_reference(const RectWindow& w, const LengthLaw& mark_law, Rng& rng);

// Exact draw at a = 0: Poisson(tau |B|) segments, directions from g.
Configuration sample_gibbs_poisson_reduction(const GibbsDirectionalModel& m, Rng& rng);

// Birth acceptance ratio of the chain: lambda*(x, u) vol(Y) / (n(x) + 1) with
// vol(Y) = pi |B| the Lebesgue mass of B x [0, pi).
double gibbs_birth_ratio(const Configuration& x, const Segment& u,
                         const GibbsDirectionalModel& m);

// Birth-death-move Metropolis-Hastings targeting the Gibbs density.
GibbsSample sample_gibbs(const GibbsDirectionalModel& m, const ChainConfig& chain);

// Exact sampler for the inhomogeneous length model. The total intensity mass
// is estimated by Monte Carlo once at construction and cached; points are
// drawn by rejection from the dominating constant.
class InhomogSampler {
public:
    InhomogSampler(const InhomogLengthModel& model, std::uint64_t mc_seed,
                   std::size_t mc_points = 1000000);

    Configuration sample(Rng& rng) const;
    double total_mass() const { return total_mass_; }

private:
    InhomogLengthModel model_;
    double total_mass_ = 0.0;
    double bound_ = 0.0;  // sup of f1(r) exp(b d(u)) over contained segments
};

Configuration sample_inhomog(const InhomogLengthModel& m, Rng& rng);

}  // namespace segproc
