#include "segproc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

namespace segproc {

namespace fs = std::filesystem;

GibbsDirectionalModel gibbs_model_from(const StudySpec& spec) {
    GibbsDirectionalModel m;
    m.tau = spec.tau;
    m.a = spec.a;
    m.r = spec.r;
    m.g = VonMisesAxial{spec.mu, spec.kappa};
    m.window = spec.window;
    return m;
}

InhomogLengthModel inhomog_model_from(const StudySpec& spec) {
    InhomogLengthModel m;
    m.tau = spec.tau;
    m.b = spec.b;
    m.window = spec.disk;
    m.f1 = ScaledBeta{spec.alpha, spec.beta, spec.disk.diameter};
    return m;
}

StudySpec spec_from_config(const ConfigView& cfg) {
    static const std::set<std::string> known = {
        "model",          "tau",          "a",
        "r",              "kappa",        "mu",
        "window_width",   "window_height", "b",
        "alpha",          "beta",         "e_a",
        "replications",   "seed",         "jobs",
        "write_replications",             "grid_n",
        "chain_steps",    "chain_burnin", "chain_p_birth",
        "chain_p_death",  "chain_p_move", "chain_move_sigma",
        "chain_dir_sigma",
        "tf_j",           "tf_a_lo",      "tf_a_hi",
        "tf_kde_kappa",
        "mle_k",          "mle_simpson_m", "mle_mc",
        "mle_f1_class_lo", "mle_f1_class_hi", "mle_phi_fixed",
        "mle_b_lo",       "mle_b_hi",     "mle_beta_bandwidth",
        "mle_circ_kappa", "mle_f1_bandwidth",
    };
    for (const auto& key : cfg.keys())
        if (!known.count(key)) throw std::runtime_error("unknown config key: " + key);

    StudySpec spec;
    const std::string model = cfg.get("model", std::string("gibbs-directional"));
    if (model == "gibbs-directional") {
        spec.model = ModelKind::GibbsDirectional;
        spec.tau = cfg.get("tau", 1000.0);
    } else if (model == "inhomog-length") {
        spec.model = ModelKind::InhomogLength;
        spec.tau = cfg.get("tau", 900.0);
        spec.replications = 60;
    } else {
        throw std::runtime_error("unknown model: " + model);
    }

    spec.a = cfg.get("a", spec.a);
    spec.r = cfg.get("r", spec.r);
    spec.kappa = cfg.get("kappa", spec.kappa);
    spec.mu = cfg.get("mu", spec.mu);
    spec.window.width = cfg.get("window_width", spec.window.width);
    spec.window.height = cfg.get("window_height", spec.window.height);
    spec.b = cfg.get("b", spec.b);
    spec.alpha = cfg.get("alpha", spec.alpha);
    spec.beta = cfg.get("beta", spec.beta);
    spec.disk.diameter = cfg.get("e_a", spec.disk.diameter);

    spec.replications = cfg.get("replications", spec.replications);
    spec.seed = cfg.get("seed", spec.seed);
    spec.jobs = cfg.get("jobs", spec.jobs);
    spec.write_replications = cfg.get("write_replications", std::size_t{1}) != 0;

    const auto grid_n = cfg.get("grid_n", std::size_t{100});
    spec.tf.grid_count = grid_n;
    spec.mle.grid_count = grid_n;

    spec.chain.total_steps = cfg.get("chain_steps", spec.chain.total_steps);
    spec.chain.burn_in = cfg.get("chain_burnin", spec.chain.burn_in);
    spec.chain.p_birth = cfg.get("chain_p_birth", spec.chain.p_birth);
    spec.chain.p_death = cfg.get("chain_p_death", spec.chain.p_death);
    spec.chain.p_move = cfg.get("chain_p_move", spec.chain.p_move);
    spec.chain.move_center_sigma = cfg.get("chain_move_sigma", spec.chain.move_center_sigma);
    spec.chain.move_direction_sigma = cfg.get("chain_dir_sigma", spec.chain.move_direction_sigma);

    spec.tf.j_mc = cfg.get("tf_j", spec.tf.j_mc);
    spec.tf.a_lo = cfg.get("tf_a_lo", spec.tf.a_lo);
    spec.tf.a_hi = cfg.get("tf_a_hi", spec.tf.a_hi);
    spec.tf.kde_kappa = cfg.get("tf_kde_kappa", spec.tf.kde_kappa);

    spec.mle.k = cfg.get("mle_k", spec.mle.k);
    spec.mle.simpson_m = static_cast<int>(cfg.get("mle_simpson_m",
                                                  static_cast<std::size_t>(spec.mle.simpson_m)));
    spec.mle.mc_segments = cfg.get("mle_mc", spec.mle.mc_segments);
    spec.mle.f1_class_lo = cfg.get("mle_f1_class_lo", spec.mle.f1_class_lo);
    spec.mle.f1_class_hi = cfg.get("mle_f1_class_hi", spec.mle.f1_class_hi);
    spec.mle.phi_fixed = cfg.get("mle_phi_fixed", spec.mle.phi_fixed);
    spec.mle.b_lo = cfg.get("mle_b_lo", spec.mle.b_lo);
    spec.mle.b_hi = cfg.get("mle_b_hi", spec.mle.b_hi);
    spec.mle.beta_bandwidth = cfg.get("mle_beta_bandwidth", spec.mle.beta_bandwidth);
    spec.mle.circ_kappa = cfg.get("mle_circ_kappa", spec.mle.circ_kappa);
    spec.mle.f1_bandwidth = cfg.get("mle_f1_bandwidth", spec.mle.f1_bandwidth);
    return spec;
}

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile_type7: empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto i = static_cast<std::size_t>(h);
    if (i + 1 >= values.size()) return values.back();
    return values[i] + (h - static_cast<double>(i)) * (values[i + 1] - values[i]);
}

namespace {

struct ReplicationOutcome {
    bool ok = false;
    std::string error;
    std::vector<double> scalars;                   // model-dependent order
    std::vector<std::vector<double>> curves;       // per envelope, grid values
};

ScalarSummary summarize(const std::string& name, double true_value,
                        const std::vector<double>& values) {
    ScalarSummary s;
    s.name = name;
    s.true_value = true_value;
    const double n = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.cv = s.mean != 0.0 ? s.sd / std::abs(s.mean) : 0.0;
    return s;
}

EnvelopeTable make_envelope(const std::string& name, const Grid1D& grid,
                            const std::vector<std::vector<double>>& curves,
                            const std::function<double(double)>& truth) {
    EnvelopeTable t;
    t.name = name;
    t.grid = grid;
    t.mean.resize(grid.count);
    t.lower.resize(grid.count);
    t.upper.resize(grid.count);
    t.truth.resize(grid.count);
    std::vector<double> column(curves.size());
    for (std::size_t i = 0; i < grid.count; ++i) {
        double m = 0.0;
        for (std::size_t rep = 0; rep < curves.size(); ++rep) {
            column[rep] = curves[rep][i];
            m += curves[rep][i];
        }
        t.mean[i] = m / static_cast<double>(curves.size());
        t.lower[i] = quantile_type7(column, 0.05);
        t.upper[i] = quantile_type7(column, 0.95);
        t.truth[i] = truth(grid.point(i));
    }
    return t;
}

void write_envelope_csv(const std::string& path, const EnvelopeTable& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "x,mean,lower,upper,true\n";
    for (std::size_t i = 0; i < t.grid.count; ++i)
        out << format_double(t.grid.point(i)) << ',' << format_double(t.mean[i]) << ','
            << format_double(t.lower[i]) << ',' << format_double(t.upper[i]) << ','
            << format_double(t.truth[i]) << '\n';
}

void write_summary_csv(const std::string& path, const std::vector<ScalarSummary>& summary) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "parameter,true,mean,sd,cv\n";
    for (const auto& s : summary)
        out << s.name << ',' << format_double(s.true_value) << ',' << format_double(s.mean)
            << ',' << format_double(s.sd) << ',' << format_double(s.cv) << '\n';
}

void write_chain_trace(const std::string& path, const ChainDiagnostics& diag) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "step,n,intersections\n";
    for (const auto& p : diag.trace)
        out << p.step << ',' << p.n << ',' << p.intersections << '\n';
}

std::string rep_dir(const StudySpec& spec, std::size_t i) {
    return spec.out_dir + "/replication_" + std::to_string(i);
}

ReplicationOutcome run_gibbs_replication(const StudySpec& spec, std::size_t i,
                                         const GibbsDirectionalModel& model) {
    ReplicationOutcome out;
    Rng rep_rng = Rng(spec.seed).child(i);

    ChainConfig chain = spec.chain;
    chain.seed = rep_rng.next_u64();
    const GibbsSample sample = sample_gibbs(model, chain);

    TfConfig tf = spec.tf;
    tf.seed = rep_rng.next_u64();
    const TfResult fit = tf_fit(sample.configuration, spec.r, spec.window, tf);

    out.scalars = {fit.a, fit.tau, fit.C};
    out.curves = {fit.f_x_hat.values(), fit.g_hat.values()};
    out.ok = true;

    if (spec.write_replications) {
        const std::string dir = rep_dir(spec, i);
        fs::create_directories(dir);
        write_configuration_csv(dir + "/realization.csv", sample.configuration);
        write_chain_trace(dir + "/trace.csv", sample.diagnostics);
        write_density_csv(dir + "/fx.csv", fit.f_x_hat);
        write_density_csv(dir + "/g.csv", fit.g_hat);
        const auto& d = sample.diagnostics;
        write_kv_csv(dir + "/fit.csv",
                     {{"a_hat", format_double(fit.a)},
                      {"tau_hat", format_double(fit.tau)},
                      {"C_hat", format_double(fit.C)},
                      {"residual_count", format_double(fit.residual_count)},
                      {"residual_intersections", format_double(fit.residual_intersections)},
                      {"n", std::to_string(sample.configuration.size())},
                      {"chain_seed", std::to_string(chain.seed)},
                      {"birth_accept_rate",
                       format_double(d.births_proposed
                                         ? static_cast<double>(d.births_accepted) /
                                               static_cast<double>(d.births_proposed)
                                         : 0.0)},
                      {"death_accept_rate",
                       format_double(d.deaths_proposed
                                         ? static_cast<double>(d.deaths_accepted) /
                                               static_cast<double>(d.deaths_proposed)
                                         : 0.0)},
                      {"move_accept_rate",
                       format_double(d.moves_proposed
                                         ? static_cast<double>(d.moves_accepted) /
                                               static_cast<double>(d.moves_proposed)
                                         : 0.0)}});
    }
    return out;
}

ReplicationOutcome run_inhomog_replication(const StudySpec& spec, std::size_t i,
                                           const InhomogSampler& sampler) {
    ReplicationOutcome out;
    Rng rep_rng = Rng(spec.seed).child(i);

    Rng sim_rng = rep_rng.child(1);
    const Configuration x = sampler.sample(sim_rng);

    MleConfig mle = spec.mle;
    mle.seed = rep_rng.next_u64();
    const MleResult fit = mle_fit(x, spec.disk, mle);

    out.scalars = {fit.b, fit.tau_count, fit.tau_dist};
    out.curves.push_back(fit.f1_hat.values());
    for (const auto& obs : fit.observed_length) out.curves.push_back(obs.values());
    out.ok = true;

    if (spec.write_replications) {
        const std::string dir = rep_dir(spec, i);
        fs::create_directories(dir);
        write_configuration_csv(dir + "/realization.csv", x);
        write_density_csv(dir + "/f1.csv", fit.f1_hat);
        for (std::size_t j = 0; j < fit.observed_length.size(); ++j)
            write_density_csv(dir + "/observed_length_class_" + std::to_string(j + 1) + ".csv",
                              fit.observed_length[j]);
        std::vector<std::pair<std::string, std::string>> kv = {
            {"b_hat", format_double(fit.b)},
            {"tau_hat", format_double(fit.tau_count)},
            {"tau_hat_dist", format_double(fit.tau_dist)},
            {"n", std::to_string(x.size())}};
        for (std::size_t j = 0; j < fit.c_j.size(); ++j)
            kv.emplace_back("C_" + std::to_string(j + 1), format_double(fit.c_j[j]));
        for (std::size_t j = 0; j < fit.class_counts.size(); ++j)
            kv.emplace_back("m_" + std::to_string(j + 1), std::to_string(fit.class_counts[j]));
        write_kv_csv(dir + "/fit.csv", kv);
    }
    return out;
}

}  // namespace

StudyResult run_study(const StudySpec& spec) {
    if (spec.replications < 1) throw std::invalid_argument("run_study: need K >= 1");
    if (spec.out_dir.empty()) throw std::invalid_argument("run_study: output directory not set");
    fs::create_directories(spec.out_dir);

    const bool gibbs = spec.model == ModelKind::GibbsDirectional;
    const GibbsDirectionalModel gibbs_model = gibbs_model_from(spec);
    const InhomogLengthModel inhomog_model = inhomog_model_from(spec);
    std::optional<InhomogSampler> sampler;
    if (!gibbs)
        sampler.emplace(inhomog_model, Rng(spec.seed).child(0x5eed).next_u64(),
                        spec.mle.mc_segments);

    std::vector<ReplicationOutcome> outcomes(spec.replications);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= spec.replications) return;
            try {
                outcomes[i] = gibbs ? run_gibbs_replication(spec, i, gibbs_model)
                                    : run_inhomog_replication(spec, i, *sampler);
            } catch (const std::exception& e) {
                outcomes[i].ok = false;
                outcomes[i].error = e.what();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    StudyResult result;
    result.attempted = spec.replications;
    std::vector<const ReplicationOutcome*> good;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].ok) {
            good.push_back(&outcomes[i]);
        } else {
            ++result.failed;
            result.failure_messages.push_back("replication " + std::to_string(i) + ": " +
                                              outcomes[i].error);
        }
    }
    if (!result.failure_messages.empty()) {
        std::ofstream out(spec.out_dir + "/failures.txt");
        for (const auto& msg : result.failure_messages) out << msg << '\n';
    }
    if (result.failed * 10 > spec.replications)
        throw std::runtime_error("run_study: more than 10% of replications failed (" +
                                 std::to_string(result.failed) + "/" +
                                 std::to_string(spec.replications) + ")");
    if (good.empty()) throw std::runtime_error("run_study: no successful replications");

    auto scalar_column = [&](std::size_t idx) {
        std::vector<double> v;
        v.reserve(good.size());
        for (const auto* o : good) v.push_back(o->scalars[idx]);
        return v;
    };
    auto curve_set = [&](std::size_t idx) {
        std::vector<std::vector<double>> v;
        v.reserve(good.size());
        for (const auto* o : good) v.push_back(o->curves[idx]);
        return v;
    };

    if (gibbs) {
        result.summary.push_back(summarize("a", spec.a, scalar_column(0)));
        result.summary.push_back(summarize("tau", spec.tau, scalar_column(1)));
        result.summary.push_back(summarize("C", 0.0, scalar_column(2)));
        const VonMisesAxial true_g{spec.mu, spec.kappa};
        const Grid1D grid{0.0, kPi, spec.tf.grid_count, true};
        auto truth = [&true_g](double phi) { return true_g.pdf(phi); };
        result.envelopes.push_back(make_envelope("fx", grid, curve_set(0), truth));
        result.envelopes.push_back(make_envelope("g", grid, curve_set(1), truth));
    } else {
        result.summary.push_back(summarize("b", spec.b, scalar_column(0)));
        result.summary.push_back(summarize("tau", spec.tau, scalar_column(1)));
        result.summary.push_back(summarize("tau_dist", spec.tau, scalar_column(2)));
        const ScaledBeta true_f1{spec.alpha, spec.beta, spec.disk.diameter};
        const Grid1D grid{0.0, spec.disk.diameter, spec.mle.grid_count, false};
        auto truth = [&true_f1](double r) { return true_f1.pdf(r); };
        result.envelopes.push_back(make_envelope("f1", grid, curve_set(0), truth));
        for (std::size_t j = 1; j <= spec.mle.k; ++j)
            result.envelopes.push_back(make_envelope("class_" + std::to_string(j) + "_length",
                                                     grid, curve_set(j), truth));
    }

    write_summary_csv(spec.out_dir + "/summary.csv", result.summary);
    for (const auto& env : result.envelopes)
        write_envelope_csv(spec.out_dir + "/envelope_" + env.name + ".csv", env);
    return result;
}

ResidualReport residual_check(const Configuration& data, const StudySpec& spec, ScoreKind score,
                              std::size_t j_mc, Rng& rng) {
    const bool gibbs = spec.model == ModelKind::GibbsDirectional;
    TestFunction q;
    if (score == ScoreKind::Unit)
        q = [](const Segment&, const Configuration&) { return 1.0; };
    else if (gibbs)
        q = [w = spec.window](const Segment& u, const Configuration& x) {
            return static_cast<double>(hit_count_torus(u, x, w));
        };
    else
        q = [](const Segment& u, const Configuration& x) {
            return static_cast<double>(hit_count(u, x));
        };

    SegmentSpace space;
    ConditionalIntensity lambda;
    if (gibbs) {
        const GibbsDirectionalModel model = gibbs_model_from(spec);
        space = gibbs_segment_space(spec.window, spec.r);
        lambda = [model](const Configuration& x, const Segment& u) {
            return conditional_intensity_gibbs(x, u, model);
        };
    } else {
        const InhomogLengthModel model = inhomog_model_from(spec);
        space = inhomog_segment_space(spec.disk);
        bool all_inside = true;
        for (const Segment& v : data.segments)
            if (!contained_in_disk(v, model.window)) all_inside = false;
        lambda = [model, all_inside](const Configuration&, const Segment& u) {
            if (!all_inside || !contained_in_disk(u, model.window)) return 0.0;
            return model.tau * length_pdf(model.f1, u.length) *
                   std::exp(model.b * max_norm_distance(u, model.window));
        };
    }

    const GnzResidual res = gnz_residual(data, q, lambda, space, j_mc, rng);
    ResidualReport report;
    report.residual = res.value;
    report.mc_se = res.mc_se;
    report.z = res.mc_se > 0.0 ? res.value / res.mc_se : 0.0;
    return report;
}

}  // namespace segproc
