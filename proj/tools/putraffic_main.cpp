// Command-line front end: closed-form bounds, path simulation, single-shot
// estimation, Monte Carlo sweeps and the verification suites.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "putraffic/bounds.hpp"
#include "putraffic/estimators.hpp"
#include "putraffic/rng.hpp"
#include "putraffic/sample_io.hpp"
#include "putraffic/simulate.hpp"
#include "putraffic/sweep.hpp"
#include "putraffic/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;

struct ParamFlags {
    std::optional<double> u;
    std::optional<double> lambda_f;
    std::optional<double> lambda_n;

    void attach(CLI::App* cmd) {
        cmd->add_option("--u", u, "duty cycle in (0,1)");
        cmd->add_option("--lambda-f", lambda_f, "mean departure rate (1/s)");
        cmd->add_option("--lambda-n", lambda_n, "mean arrival rate (1/s)");
    }

    putraffic::TrafficParams resolve() const {
        int given = int(u.has_value()) + int(lambda_f.has_value()) + int(lambda_n.has_value());
        if (given != 2)
            throw std::invalid_argument(
                "exactly two of --u, --lambda-f, --lambda-n must be given");
        if (u && lambda_f) return putraffic::TrafficParams::from_duty_and_departure(*u, *lambda_f);
        if (u && lambda_n) return putraffic::TrafficParams::from_duty_and_arrival(*u, *lambda_n);
        return putraffic::TrafficParams::from_rates(*lambda_f, *lambda_n);
    }
};

void print_bounds(const putraffic::TrafficParams& params, double duration, std::size_t n,
                  const putraffic::SensingModel& model) {
    using namespace putraffic;
    SamplingPlan plan = SamplingPlan::uniform(duration, n);
    double t_c = plan.gaps().front();

    std::printf("parameters: u=%.9g lambda_f=%.9g lambda_n=%.9g T=%.9g N=%zu t_c=%.9g\n",
                params.u(), params.lambda_f(), params.lambda_n(), duration, n, t_c);
    if (!model.is_perfect())
        std::printf("sensing:    p_f=%.9g p_m=%.9g\n", model.p_f, model.p_m);

    auto [v_u, v_lf] = cr_bounds_joint_uf(params, t_c, n);
    auto v_ln = cr_bounds_joint_un(params, t_c, n).second;
    std::printf("%-26s %14.9g  (rms %.9g)\n", "cr_u_joint", v_u.value, std::sqrt(v_u.value));
    std::printf("%-26s %14.9g  (rms %.9g)\n", "cr_lf_joint", v_lf.value, std::sqrt(v_lf.value));
    std::printf("%-26s %14.9g  (rms %.9g)\n", "cr_ln_joint", v_ln.value, std::sqrt(v_ln.value));

    double ku = cr_bound_u_known_lf(params, t_c, n);
    double klf = cr_bound_lf_known_u(params, t_c, n);
    std::printf("%-26s %14.9g  (rms %.9g)\n", "cr_u_known_lf", ku, std::sqrt(ku));
    std::printf("%-26s %14.9g  (rms %.9g)\n", "cr_lf_known_u", klf, std::sqrt(klf));

    for (const auto& b : cr_asymptotes(params, duration))
        std::printf("%-26s %14.9g  (rms %.9g)\n", bound_kind_name(b.kind), b.value,
                    std::sqrt(b.value));

    auto mse = mse_avg(params, plan, model);
    auto mse_limit = mse_avg_uniform_limit(params, duration);
    std::printf("%-26s %14.9g  (rms %.9g)\n", bound_kind_name(mse.kind), mse.value,
                std::sqrt(mse.value));
    std::printf("%-26s %14.9g  (rms %.9g)\n", bound_kind_name(mse_limit.kind), mse_limit.value,
                std::sqrt(mse_limit.value));
}

void print_report(const putraffic::EstimateReport& report) {
    std::printf("estimator        %s\n", putraffic::estimator_name(report.estimator_id));
    std::printf("u_hat            %.9g\n", report.u_hat);
    if (report.lambda_f_hat) std::printf("lambda_f_hat     %.9g\n", *report.lambda_f_hat);
    if (report.lambda_n_hat) std::printf("lambda_n_hat     %.9g\n", *report.lambda_n_hat);
    if (report.loglik_at_opt) std::printf("loglik_at_opt    %.9g\n", *report.loglik_at_opt);
    std::printf("converged        %s\n", report.converged ? "yes" : "no");
    std::printf("boundary_hit     %s\n", report.boundary_hit ? "yes" : "no");
    std::printf("iterations       %ld\n", report.iterations);
}

int run(int argc, char** argv) {
    CLI::App app{"primary-user traffic parameter estimation"};
    app.require_subcommand(1);

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the closed-form bounds");
    ParamFlags bounds_params;
    bounds_params.attach(bounds_cmd);
    double duration = 0.0;
    std::size_t samples = 0;
    double pf = 0.0, pm = 0.0;
    bounds_cmd->add_option("--duration", duration, "observation window T (s)")->required();
    bounds_cmd->add_option("--samples", samples, "sample count N")->required();
    bounds_cmd->add_option("--pf", pf, "false-alarm probability");
    bounds_cmd->add_option("--pm", pm, "mis-detection probability");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "draw one sampled path");
    ParamFlags sim_params;
    sim_params.attach(sim_cmd);
    double sim_duration = 0.0;
    std::size_t sim_samples = 0;
    std::uint64_t sim_seed = 1;
    double sim_pf = 0.0, sim_pm = 0.0;
    std::string sim_out = "-";
    sim_cmd->add_option("--duration", sim_duration, "observation window T (s)")->required();
    sim_cmd->add_option("--samples", sim_samples, "sample count N")->required();
    sim_cmd->add_option("--seed", sim_seed, "rng seed");
    sim_cmd->add_option("--pf", sim_pf, "false-alarm probability");
    sim_cmd->add_option("--pm", sim_pm, "mis-detection probability");
    sim_cmd->add_option("--out", sim_out, "output file ('-' for stdout)");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "run one estimator on a sample file");
    std::string est_in;
    std::string est_name = "ml-joint-uf";
    double est_pf = 0.0, est_pm = 0.0;
    std::optional<double> est_known_lf, est_known_u;
    est_cmd->add_option("--in", est_in, "sample file")->required();
    est_cmd->add_option("--estimator", est_name,
                        "avg | ml-joint-uf | ml-joint-un | ml-known-lf | ml-known-u");
    est_cmd->add_option("--pf", est_pf, "false-alarm probability");
    est_cmd->add_option("--pm", est_pm, "mis-detection probability");
    est_cmd->add_option("--lambda-f", est_known_lf, "known lambda_f (ml-known-lf)");
    est_cmd->add_option("--u", est_known_u, "known duty cycle (ml-known-u)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a Monte Carlo sweep from a config file");
    std::string sweep_config_path;
    std::string sweep_out = "-";
    std::optional<long> sweep_trials;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::size_t> sweep_cap;
    sweep_cmd->add_option("--config", sweep_config_path, "JSON sweep config")->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV output file ('-' for stdout)");
    sweep_cmd->add_option("--trials", sweep_trials, "override the config trial count");
    sweep_cmd->add_option("--seed", sweep_seed, "override the config master seed");
    sweep_cmd->add_option("--max-noisy-ml-n", sweep_cap,
                          "largest N for noisy-likelihood ML cells");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the enumeration and identity suites");
    std::size_t verify_max_n = 10;
    std::uint64_t verify_seed = 20120901;
    verify_cmd->add_option("--max-n", verify_max_n, "enumeration size cap");
    verify_cmd->add_option("--seed", verify_seed, "rng seed for the random grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (bounds_cmd->parsed()) {
            print_bounds(bounds_params.resolve(), duration, samples,
                         putraffic::SensingModel(pf, pm));
            return kExitOk;
        }

        if (sim_cmd->parsed()) {
            using namespace putraffic;
            TrafficParams params = sim_params.resolve();
            SamplingPlan plan = SamplingPlan::uniform(sim_duration, sim_samples);
            SampleVector path = generate_samples(params, plan, derive_stream_seed(sim_seed, 0));
            SensingModel model(sim_pf, sim_pm);
            if (!model.is_perfect())
                path = apply_sensing_errors(path, model, derive_stream_seed(sim_seed, 1));
            if (sim_out == "-") {
                write_samples(path, std::cout);
            } else {
                write_samples_file(path, sim_out);
            }
            return kExitOk;
        }

        if (est_cmd->parsed()) {
            using namespace putraffic;
            auto id = parse_estimator_name(est_name);
            if (!id) throw std::invalid_argument("unknown estimator: " + est_name);
            SampleVector samples_in = read_samples_file(est_in);
            SensingModel model(est_pf, est_pm);
            EstimateReport report;
            switch (*id) {
                case EstimatorId::avg:
                    report = estimate_avg(samples_in, model);
                    break;
                case EstimatorId::ml_joint_uf:
                    report = estimate_ml_joint_uf(samples_in, model);
                    break;
                case EstimatorId::ml_joint_un:
                    report = estimate_ml_joint_un(samples_in, model);
                    break;
                case EstimatorId::ml_u_known_lf:
                    if (!est_known_lf)
                        throw std::invalid_argument("ml-known-lf needs --lambda-f");
                    report = estimate_ml_u_known_lf(samples_in, *est_known_lf, model);
                    break;
                case EstimatorId::ml_lf_known_u:
                    if (!est_known_u) throw std::invalid_argument("ml-known-u needs --u");
                    report = estimate_ml_lf_known_u(samples_in, *est_known_u, model);
                    break;
            }
            print_report(report);
            return kExitOk;
        }

        if (sweep_cmd->parsed()) {
            using namespace putraffic;
            SweepConfig config = load_sweep_config(sweep_config_path);
            if (sweep_trials) config.trials = *sweep_trials;
            if (sweep_seed) config.master_seed = *sweep_seed;
            if (sweep_cap) config.max_noisy_ml_n = *sweep_cap;
            auto rows = run_sweep(config);
            if (sweep_out == "-") {
                write_sweep_csv(rows, std::cout);
            } else {
                std::ofstream out(sweep_out, std::ios::binary);
                if (!out) throw std::invalid_argument("cannot open output file: " + sweep_out);
                write_sweep_csv(rows, out);
            }
            return kExitOk;
        }

        if (verify_cmd->parsed()) {
            auto results = putraffic::run_all_verifications(verify_max_n, verify_seed);
            bool all_pass = true;
            for (const auto& r : results) {
                std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                            r.detail.c_str());
                all_pass = all_pass && r.pass;
            }
            return all_pass ? kExitOk : kExitVerification;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitVerification;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
