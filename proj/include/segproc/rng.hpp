#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace segproc {

// Counter-based generator (splitmix64 stream). Identical seed gives an
// identical stream; child streams derived from (seed, index) can be handed
// to replication workers in any order without changing their draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    // Independent stream for replication `index`.
    Rng child(std::uint64_t index) const {
        Rng r(0);
        r.key_ = mix(key_ ^ mix(index + 0x632be59bd9b4e019ull));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal, polar Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Poisson count by counting unit-exponential arrivals in [0, mean].
    int poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        int n = 0;
        double acc = 0.0;
        while (true) {
            acc += -std::log(1.0 - uniform());
            if (acc > mean) return n;
            ++n;
        }
    }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace segproc
