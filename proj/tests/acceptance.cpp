// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Pass --quick for a reduced CI preset with widened tolerances.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <mutex>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "segproc/estimators.hpp"
#include "segproc/geometry.hpp"
#include "segproc/grid.hpp"
#include "segproc/harness.hpp"
#include "segproc/models.hpp"
#include "segproc/numerics.hpp"
#include "segproc/rng.hpp"
#include "segproc/samplers.hpp"

namespace fs = std::filesystem;
using namespace segproc;

namespace {

bool g_quick = false;
int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s: criterion %d — %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::size_t worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : hw;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("segproc-accept-" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

double summary_mean(const StudyResult& r, const std::string& name) {
    for (const auto& s : r.summary)
        if (s.name == name) return s.mean;
    throw std::runtime_error("summary entry missing: " + name);
}

double summary_cv(const StudyResult& r, const std::string& name) {
    for (const auto& s : r.summary)
        if (s.name == name) return s.cv;
    throw std::runtime_error("summary entry missing: " + name);
}

const EnvelopeTable& envelope(const StudyResult& r, const std::string& name) {
    for (const auto& e : r.envelopes)
        if (e.name == name) return e;
    throw std::runtime_error("envelope missing: " + name);
}

std::size_t envelope_coverage(const EnvelopeTable& e) {
    std::size_t covered = 0;
    for (std::size_t i = 0; i < e.truth.size(); ++i)
        if (e.lower[i] <= e.truth[i] && e.truth[i] <= e.upper[i]) ++covered;
    return covered;
}

StudySpec gibbs_spec(double a, std::size_t reps, std::uint64_t seed, const std::string& out) {
    StudySpec spec;
    spec.model = ModelKind::GibbsDirectional;
    spec.a = a;
    spec.replications = reps;
    spec.seed = seed;
    spec.jobs = worker_count();
    spec.out_dir = out;
    spec.write_replications = false;
    return spec;
}

StudySpec inhomog_spec(std::size_t reps, std::uint64_t seed, const std::string& out) {
    StudySpec spec;
    spec.model = ModelKind::InhomogLength;
    spec.tau = 900.0;
    spec.replications = reps;
    spec.seed = seed;
    spec.jobs = worker_count();
    spec.out_dir = out;
    spec.write_replications = false;
    return spec;
}

// Criteria 1 and 2: Gibbs directional study parameter recovery.
StudyResult check_gibbs_table(int criterion, double a, double a_tol, double widen) {
    const std::size_t reps = g_quick ? 20 : 100;
    TempDir dir("gibbs-a" + std::to_string(criterion));
    const StudyResult r = run_study(gibbs_spec(a, reps, 20260826, dir.path.string()));
    const double a_hat = summary_mean(r, "a");
    const double tau_hat = summary_mean(r, "tau");
    const double cv_a = summary_cv(r, "a");
    const double cv_tau = summary_cv(r, "tau");
    const double ta = a_tol * widen;
    const double tt = 60.0 * widen;
    const bool ok_a = std::abs(a_hat - a) <= ta;
    const bool ok_tau = std::abs(tau_hat - 1000.0) <= tt;
    const bool ok_cv = widen > 1.0 || (cv_a >= 0.07 && cv_a <= 0.30 && cv_tau >= 0.07 &&
                                       cv_tau <= 0.30);
    std::ostringstream d;
    d << "K=" << reps << " mean a=" << a_hat << " tau=" << tau_hat << " cv_a=" << cv_a
      << " cv_tau=" << cv_tau << " tol a=" << ta << " tau=" << tt;
    report(criterion, "Gibbs directional study, a=" + std::to_string(a), ok_a && ok_tau && ok_cv,
           d.str());
    return r;
}

// Criterion 3: inhomogeneous length study parameter recovery.
StudyResult check_inhomog_table(double widen) {
    const std::size_t reps = g_quick ? 12 : 60;
    TempDir dir("inhomog");
    const StudyResult r = run_study(inhomog_spec(reps, 20260826, dir.path.string()));
    const double b_hat = summary_mean(r, "b");
    const double tau_hat = summary_mean(r, "tau");
    const double tb = 0.25 * widen;
    const double trel = 0.12 * widen;
    const bool ok = std::abs(b_hat - 3.0) <= tb && std::abs(tau_hat - 900.0) <= trel * 900.0;
    std::ostringstream d;
    d << "K=" << reps << " mean b=" << b_hat << " tau=" << tau_hat << " tol b=" << tb
      << " tau rel=" << trel;
    report(3, "inhomogeneous length study, b=3", ok, d.str());
    return r;
}

// Criterion 4: Monte Carlo of E exp(a N(u)) for a Poisson process against the
// closed form exp((e^a - 1) mu), mu = tau r^2 (2/pi) on the unit torus.
void check_interaction_oracle() {
    const std::size_t reals = g_quick ? 20000 : 100000;
    const double rel_tol = g_quick ? 0.03 : 0.01;
    const RectWindow w{{0.0, 0.0}, 1.0, 1.0};
    const double tau = 109.0;
    const double r = 0.12;
    const Segment u({0.5, 0.5}, r, 0.3);
    const double mu = tau * r * r * (2.0 / kPi);
    bool ok = true;
    std::ostringstream d;
    d << "mu=" << mu;
    for (double a : {-0.5, -3.0}) {
        const std::size_t workers = worker_count();
        std::vector<std::future<double>> parts;
        const Rng root(777);
        const std::size_t per = (reals + workers - 1) / workers;
        for (std::size_t wi = 0; wi < workers; ++wi) {
            parts.push_back(std::async(std::launch::async, [&, wi]() {
                Rng rng = root.child(wi);
                double sum = 0.0;
                const std::size_t lo = wi * per;
                const std::size_t hi = std::min(reals, lo + per);
                for (std::size_t i = lo; i < hi; ++i) {
                    const int n = rng.poisson(tau);
                    const Configuration x =
                        uniform_segments(static_cast<std::size_t>(n), w, FixedLength{r}, rng);
                    sum += std::exp(a * hit_count_torus(u, x, w));
                }
                return sum;
            }));
        }
        double total = 0.0;
        for (auto& p : parts) total += p.get();
        const double mc = total / static_cast<double>(reals);
        const double exact = interaction_factor(a, mu);
        const double closed = std::exp((std::exp(a) - 1.0) * mu);
        const double rel = std::abs(mc - closed) / closed;
        d << " a=" << a << ": mc=" << mc << " closed=" << closed << " rel=" << rel;
        ok = ok && rel <= rel_tol && std::abs(exact - closed) <= 1e-12 * closed;
    }
    report(4, "Poisson interaction-factor oracle", ok, d.str());
}

// Criterion 5: mean GNZ residual over replications, z = mean / (sd / sqrt(K)).
void check_gnz() {
    const std::size_t reps = g_quick ? 24 : 100;
    const std::size_t j_mc = 20000;
    const std::size_t workers = worker_count();

    StudySpec gspec = gibbs_spec(-0.5, reps, 11, "");
    const GibbsDirectionalModel gm = gibbs_model_from(gspec);
    StudySpec ispec = inhomog_spec(reps, 12, "");
    const InhomogLengthModel im = inhomog_model_from(ispec);
    const InhomogSampler isampler(im, 4242);

    struct Case {
        std::string label;
        std::vector<double> residuals;
    };
    std::vector<Case> cases = {{"gibbs q=1", {}},
                               {"gibbs q=hits", {}},
                               {"inhomog q=1", {}},
                               {"inhomog q=hits", {}}};
    for (auto& c : cases) c.residuals.resize(reps);

    std::vector<std::future<void>> tasks;
    std::atomic<std::size_t> next{0};
    for (std::size_t wi = 0; wi < workers; ++wi) {
        tasks.push_back(std::async(std::launch::async, [&]() {
            for (std::size_t i = next.fetch_add(1); i < reps; i = next.fetch_add(1)) {
                ChainConfig chain = gspec.chain;
                chain.seed = Rng(501).child(i).next_u64();
                const Configuration gx = sample_gibbs(gm, chain).configuration;
                Rng r1 = Rng(601).child(i);
                Rng r2 = Rng(602).child(i);
                cases[0].residuals[i] = residual_check(gx, gspec, ScoreKind::Unit, j_mc, r1).residual;
                cases[1].residuals[i] = residual_check(gx, gspec, ScoreKind::Hits, j_mc, r2).residual;
                Rng rs = Rng(603).child(i);
                const Configuration ix = isampler.sample(rs);
                Rng r3 = Rng(604).child(i);
                Rng r4 = Rng(605).child(i);
                cases[2].residuals[i] = residual_check(ix, ispec, ScoreKind::Unit, j_mc, r3).residual;
                cases[3].residuals[i] = residual_check(ix, ispec, ScoreKind::Hits, j_mc, r4).residual;
            }
        }));
    }
    for (auto& t : tasks) t.get();

    bool ok = true;
    std::ostringstream d;
    d << "K=" << reps;
    for (const auto& c : cases) {
        double mean = 0.0;
        for (double v : c.residuals) mean += v;
        mean /= static_cast<double>(reps);
        double var = 0.0;
        for (double v : c.residuals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(reps - 1);
        const double z = mean / std::sqrt(var / static_cast<double>(reps));
        d << " [" << c.label << " z=" << z << "]";
        ok = ok && std::abs(z) < 3.0;
    }
    report(5, "GNZ identity, both models and scores", ok, d.str());
}

// Criterion 6: a = 0 chain reduction to the exact Poisson sampler.
void check_poisson_reduction() {
    const std::size_t draws = g_quick ? 60 : 200;
    StudySpec spec = gibbs_spec(0.0, 1, 0, "");
    spec.tau = 120.0;
    if (g_quick) {
        spec.chain.total_steps = 40000;
        spec.chain.burn_in = 10000;
    }
    const GibbsDirectionalModel m = gibbs_model_from(spec);
    const double expected_count = spec.tau * spec.window.area();

    const std::size_t workers = worker_count();
    std::vector<double> chain_counts(draws, 0.0);
    constexpr int kBins = 8;
    std::vector<long> chain_bins(kBins, 0), exact_bins(kBins, 0);
    std::mutex bins_mutex;

    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> tasks;
    for (std::size_t wi = 0; wi < workers; ++wi) {
        tasks.push_back(std::async(std::launch::async, [&]() {
            std::vector<long> local_chain(kBins, 0), local_exact(kBins, 0);
            for (std::size_t i = next.fetch_add(1); i < draws; i = next.fetch_add(1)) {
                ChainConfig chain = spec.chain;
                chain.seed = Rng(901).child(i).next_u64();
                const Configuration cx = sample_gibbs(m, chain).configuration;
                chain_counts[i] = static_cast<double>(cx.size());
                for (const Segment& s : cx.segments)
                    ++local_chain[std::min<int>(kBins - 1,
                                                static_cast<int>(s.direction / kPi * kBins))];
                Rng er = Rng(902).child(i);
                const Configuration ex = sample_gibbs_poisson_reduction(m, er);
                for (const Segment& s : ex.segments)
                    ++local_exact[std::min<int>(kBins - 1,
                                                static_cast<int>(s.direction / kPi * kBins))];
            }
            std::lock_guard<std::mutex> lock(bins_mutex);
            for (int b = 0; b < kBins; ++b) {
                chain_bins[b] += local_chain[b];
                exact_bins[b] += local_exact[b];
            }
        }));
    }
    for (auto& t : tasks) t.get();

    double mean = 0.0;
    for (double c : chain_counts) mean += c;
    mean /= static_cast<double>(draws);
    const double se = std::sqrt(expected_count / static_cast<double>(draws));
    const bool ok_count = std::abs(mean - expected_count) <= 3.0 * se;

    // Two-sample chi-square on pooled direction bins, df = kBins - 1,
    // critical value at the 1% level.
    double n1 = 0.0, n2 = 0.0;
    for (int b = 0; b < kBins; ++b) {
        n1 += static_cast<double>(chain_bins[b]);
        n2 += static_cast<double>(exact_bins[b]);
    }
    double chi2 = 0.0;
    for (int b = 0; b < kBins; ++b) {
        const double tot = static_cast<double>(chain_bins[b] + exact_bins[b]);
        if (tot == 0.0) continue;
        const double e1 = tot * n1 / (n1 + n2);
        const double e2 = tot * n2 / (n1 + n2);
        chi2 += (chain_bins[b] - e1) * (chain_bins[b] - e1) / e1 +
                (exact_bins[b] - e2) * (exact_bins[b] - e2) / e2;
    }
    const double crit = 18.475;  // chi-square(7), 1% upper tail
    const bool ok_dir = chi2 < crit;
    std::ostringstream d;
    d << "draws=" << draws << " count mean=" << mean << " target=" << expected_count
      << " 3se=" << 3.0 * se << " chi2=" << chi2 << " crit=" << crit;
    report(6, "a=0 chain reduction to exact Poisson sampler", ok_count && ok_dir, d.str());
}

// Criterion 7: analytic spot values.
void check_analytic_spots() {
    bool ok = true;
    std::ostringstream d;

    const Grid1D grid{0.0, kPi, 200, true};
    const DensityGrid uniform(grid, std::vector<double>(grid.count, 1.0 / kPi));
    double j_err = 0.0;
    for (double phi : {0.0, 0.7, 1.5, 2.9})
        j_err = std::max(j_err, std::abs(j_integral(phi, uniform) - 2.0 / kPi));
    ok = ok && j_err <= 1e-6;
    d << "J err=" << j_err;

    const VonMisesAxial vm{0.4, 1.3};
    const double vm_int = simpson([&](double p) { return vm.pdf(p); }, 0.0, kPi, 2000);
    const ScaledBeta sb{2.0, 4.0, 1.0};
    const double sb_int = simpson([&](double r) { return sb.pdf(r); }, 0.0, 1.0, 2000);
    ok = ok && std::abs(vm_int - 1.0) <= 1e-8 && std::abs(sb_int - 1.0) <= 1e-8;
    d << " vm_int-1=" << vm_int - 1.0 << " sb_int-1=" << sb_int - 1.0;

    const auto f = [](double t) { return std::exp(t) * std::cos(3.0 * t); };
    const double exact = simpson(f, 0.0, 2.0, 40000);
    const double e1 = std::abs(simpson(f, 0.0, 2.0, 16) - exact);
    const double e2 = std::abs(simpson(f, 0.0, 2.0, 32) - exact);
    const double order = std::log2(e1 / e2);
    ok = ok && order >= 3.9;
    d << " simpson order=" << order;

    const double i0_err = std::abs(bessel_i0(1.0) - 1.2660658777520084);
    ok = ok && i0_err <= 1e-9;
    d << " I0(1) err=" << i0_err;

    report(7, "analytic spot values", ok, d.str());
}

// Criterion 8: envelope coverage of the true reference densities.
void check_envelopes(const StudyResult& gibbs, const StudyResult& inhomog) {
    const EnvelopeTable& g_env = envelope(gibbs, "g");
    const EnvelopeTable& f1_env = envelope(inhomog, "f1");
    const std::size_t g_cov = envelope_coverage(g_env);
    const std::size_t f1_cov = envelope_coverage(f1_env);
    const std::size_t g_need =
        g_quick ? g_env.truth.size() * 70 / 100 : g_env.truth.size() * 85 / 100;
    const std::size_t f1_need =
        g_quick ? f1_env.truth.size() * 60 / 100 : f1_env.truth.size() * 80 / 100;
    const bool ok = g_cov >= g_need && f1_cov >= f1_need;
    std::ostringstream d;
    d << "g coverage " << g_cov << "/" << g_env.truth.size() << " (need " << g_need << "), f1 "
      << f1_cov << "/" << f1_env.truth.size() << " (need " << f1_need << ")";
    report(8, "reference-density envelope coverage", ok, d.str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_outputs(const fs::path& a, const fs::path& b, std::string& detail) {
    std::vector<std::string> names = {"summary.csv"};
    for (const auto& entry : fs::directory_iterator(a)) {
        const std::string n = entry.path().filename().string();
        if (n.rfind("envelope_", 0) == 0) names.push_back(n);
    }
    std::sort(names.begin(), names.end());
    for (const auto& n : names) {
        if (!fs::exists(b / n)) {
            detail = n + " missing";
            return false;
        }
        if (slurp(a / n) != slurp(b / n)) {
            detail = n + " differs";
            return false;
        }
    }
    detail = std::to_string(names.size()) + " files byte-identical";
    return true;
}

// Criterion 9: byte-identical study outputs for a fixed spec and seed,
// including jobs > 1.
void check_determinism() {
    TempDir d1("det1"), d2("det2"), d3("det3");
    StudySpec spec = gibbs_spec(-0.5, 4, 31415, d1.path.string());
    spec.chain.total_steps = 20000;
    spec.chain.burn_in = 5000;
    spec.tf.j_mc = 2000;
    spec.jobs = 1;
    run_study(spec);
    spec.out_dir = d2.path.string();
    run_study(spec);
    spec.out_dir = d3.path.string();
    spec.jobs = 3;
    run_study(spec);
    std::string det12, det13;
    const bool ok12 = same_outputs(d1.path, d2.path, det12);
    const bool ok13 = same_outputs(d1.path, d3.path, det13);
    report(9, "byte-identical study outputs (repeat and jobs>1)", ok12 && ok13,
           "repeat: " + det12 + "; jobs=3: " + det13);
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") g_quick = true;

    const double widen = g_quick ? 3.0 : 1.0;
    try {
        const StudyResult gibbs_half = check_gibbs_table(1, -0.5, 0.03, widen);
        check_gibbs_table(2, -3.0, 0.15, widen);
        const StudyResult inhomog = check_inhomog_table(widen);
        check_interaction_oracle();
        check_gnz();
        check_poisson_reduction();
        check_analytic_spots();
        check_envelopes(gibbs_half, inhomog);
        check_determinism();
    } catch (const std::exception& e) {
        std::printf("FAIL: unexpected exception (%s)\n", e.what());
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
