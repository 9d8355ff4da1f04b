// Command line front end: simulate realizations, fit either model, run the
// replication studies, and check GNZ residuals.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "segproc/harness.hpp"

namespace {

using segproc::StudySpec;

struct CommonOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t jobs = 0;
    bool quick = false;
};

void add_common(CLI::App& app, CommonOpts& opts, bool with_jobs) {
    app.add_option("--config", opts.config, "key = value config file");
    app.add_option("--out", opts.out, "output directory")->required();
    app.add_option("--seed", opts.seed, "master seed override")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    if (with_jobs) app.add_option("--jobs", opts.jobs, "worker threads");
    app.add_flag("--quick", opts.quick, "small preset for smoke tests");
}

StudySpec load_spec(const CommonOpts& opts) {
    std::map<std::string, std::string> kv;
    if (!opts.config.empty()) kv = segproc::read_config_file(opts.config);
    StudySpec spec = segproc::spec_from_config(segproc::ConfigView(kv));
    if (opts.seed_set) spec.seed = opts.seed;
    if (opts.jobs > 0) spec.jobs = opts.jobs;
    spec.out_dir = opts.out;
    if (opts.quick) {
        spec.replications = std::min<std::size_t>(spec.replications, 4);
        spec.chain.total_steps = std::min<std::size_t>(spec.chain.total_steps, 20000);
        spec.chain.burn_in = std::min<std::size_t>(spec.chain.burn_in, 5000);
        spec.tf.j_mc = std::min<std::size_t>(spec.tf.j_mc, 2000);
        spec.mle.mc_segments = std::min<std::size_t>(spec.mle.mc_segments, 100000);
    }
    return spec;
}

segproc::Configuration simulate_one(const StudySpec& spec) {
    segproc::Rng rng = segproc::Rng(spec.seed).child(0);
    if (spec.model == segproc::ModelKind::GibbsDirectional) {
        segproc::ChainConfig chain = spec.chain;
        chain.seed = rng.next_u64();
        return segproc::sample_gibbs(segproc::gibbs_model_from(spec), chain).configuration;
    }
    segproc::Rng sim = rng.child(1);
    segproc::InhomogSampler sampler(segproc::inhomog_model_from(spec), rng.next_u64(),
                                    spec.mle.mc_segments);
    return sampler.sample(sim);
}

int cmd_simulate(const CommonOpts& opts) {
    const StudySpec spec = load_spec(opts);
    std::filesystem::create_directories(spec.out_dir);
    const segproc::Configuration x = simulate_one(spec);
    segproc::write_configuration_csv(spec.out_dir + "/realization.csv", x);
    std::cout << "wrote " << spec.out_dir << "/realization.csv (" << x.size() << " segments)\n";
    return 0;
}

int cmd_fit_tf(const CommonOpts& opts, const std::string& input) {
    const StudySpec spec = load_spec(opts);
    std::filesystem::create_directories(spec.out_dir);
    const segproc::Configuration x = segproc::read_configuration_csv(input);
    segproc::TfConfig tf = spec.tf;
    tf.seed = segproc::Rng(spec.seed).next_u64();
    const segproc::TfResult fit = segproc::tf_fit(x, spec.r, spec.window, tf);
    segproc::write_kv_csv(spec.out_dir + "/fit.csv",
                          {{"a_hat", segproc::format_double(fit.a)},
                           {"tau_hat", segproc::format_double(fit.tau)},
                           {"C_hat", segproc::format_double(fit.C)}});
    segproc::write_density_csv(spec.out_dir + "/fx.csv", fit.f_x_hat);
    segproc::write_density_csv(spec.out_dir + "/g.csv", fit.g_hat);
    std::cout << "a_hat=" << fit.a << " tau_hat=" << fit.tau << " C_hat=" << fit.C << '\n';
    return 0;
}

int cmd_fit_mle(const CommonOpts& opts, const std::string& input) {
    const StudySpec spec = load_spec(opts);
    std::filesystem::create_directories(spec.out_dir);
    const segproc::Configuration x = segproc::read_configuration_csv(input);
    segproc::MleConfig mle = spec.mle;
    mle.seed = segproc::Rng(spec.seed).next_u64();
    const segproc::MleResult fit = segproc::mle_fit(x, spec.disk, mle);
    segproc::write_kv_csv(spec.out_dir + "/fit.csv",
                          {{"b_hat", segproc::format_double(fit.b)},
                           {"tau_hat", segproc::format_double(fit.tau_count)},
                           {"tau_hat_dist", segproc::format_double(fit.tau_dist)}});
    segproc::write_density_csv(spec.out_dir + "/f1.csv", fit.f1_hat);
    std::cout << "b_hat=" << fit.b << " tau_hat=" << fit.tau_count << '\n';
    return 0;
}

int cmd_study(const CommonOpts& opts) {
    const StudySpec spec = load_spec(opts);
    const segproc::StudyResult result = segproc::run_study(spec);
    for (const auto& s : result.summary)
        std::cout << s.name << ": mean=" << s.mean << " sd=" << s.sd << " cv=" << s.cv << '\n';
    if (result.failed > 0)
        std::cout << result.failed << "/" << result.attempted
                  << " replications failed; see failures.txt\n";
    std::cout << "outputs in " << spec.out_dir << '\n';
    return 0;
}

int cmd_residuals(const CommonOpts& opts, const std::string& input, std::size_t j_mc) {
    const StudySpec spec = load_spec(opts);
    std::filesystem::create_directories(spec.out_dir);
    const segproc::Configuration x = segproc::read_configuration_csv(input);
    segproc::Rng rng = segproc::Rng(spec.seed).child(7);
    const auto unit = segproc::residual_check(x, spec, segproc::ScoreKind::Unit, j_mc, rng);
    const auto hits = segproc::residual_check(x, spec, segproc::ScoreKind::Hits, j_mc, rng);
    segproc::write_kv_csv(spec.out_dir + "/residuals.csv",
                          {{"unit_residual", segproc::format_double(unit.residual)},
                           {"unit_se", segproc::format_double(unit.mc_se)},
                           {"unit_z", segproc::format_double(unit.z)},
                           {"hits_residual", segproc::format_double(hits.residual)},
                           {"hits_se", segproc::format_double(hits.mc_se)},
                           {"hits_z", segproc::format_double(hits.z)}});
    std::cout << "unit score: z=" << unit.z << "\nhits score: z=" << hits.z << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar segment process simulation and estimation"};
    app.require_subcommand(1);

    CommonOpts sim_opts, tf_opts, mle_opts, study_opts, res_opts;
    std::string tf_input, mle_input, res_input;
    std::size_t res_j = 20000;

    CLI::App* sim = app.add_subcommand("simulate", "draw one realization");
    add_common(*sim, sim_opts, false);

    CLI::App* tf = app.add_subcommand("fit-tf", "Takacs-Fiksel fit of the directional model");
    add_common(*tf, tf_opts, false);
    tf->add_option("--input", tf_input, "realization CSV")->required();

    CLI::App* mle = app.add_subcommand("fit-mle", "likelihood fit of the length model");
    add_common(*mle, mle_opts, false);
    mle->add_option("--input", mle_input, "realization CSV")->required();

    CLI::App* study = app.add_subcommand("study", "replicated simulate-and-fit study");
    add_common(*study, study_opts, true);

    CLI::App* res = app.add_subcommand("residuals", "GNZ residual diagnostics");
    add_common(*res, res_opts, false);
    res->add_option("--input", res_input, "realization CSV")->required();
    res->add_option("--mc", res_j, "Monte Carlo test segments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (tf->parsed()) return cmd_fit_tf(tf_opts, tf_input);
        if (mle->parsed()) return cmd_fit_mle(mle_opts, mle_input);
        if (study->parsed()) return cmd_study(study_opts);
        if (res->parsed()) return cmd_residuals(res_opts, res_input, res_j);
    } catch (const std::exception& e) {
        nlohmann::json err = {{"error", e.what()}};
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 0;
}
