#include "putraffic/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "putraffic/bounds.hpp"
#include "putraffic/rng.hpp"
#include "putraffic/simulate.hpp"

namespace putraffic {

namespace {

std::size_t thread_budget() {
    if (const char* env = std::getenv("PUTRAFFIC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, count) across the thread budget. Work is split by
// index, so any per-index output slots are filled identically regardless of
// the thread count.
void parallel_for(long count, const std::function<void(long)>& fn) {
    std::size_t threads = std::min<std::size_t>(thread_budget(), static_cast<std::size_t>(count));
    if (threads <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (long i = static_cast<long>(t); i < count; i += static_cast<long>(threads)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

bool is_ml(EstimatorId id) { return id != EstimatorId::avg; }

struct TrialErrors {
    double err_u = std::nan("");
    double err_lf = std::nan("");
    double err_ln = std::nan("");
    bool boundary = false;
};

std::optional<double> rms_of(const std::vector<TrialErrors>& trials, double TrialErrors::*field) {
    double acc = 0.0;
    long used = 0;
    for (const auto& t : trials) {
        double e = t.*field;
        if (std::isnan(e)) continue;
        acc += e * e;
        ++used;
    }
    if (used == 0) return std::nullopt;
    return std::sqrt(acc / static_cast<double>(used));
}

TrafficParams resolve_params(const SweepConfig& config, double axis_value) {
    double u = config.u.value_or(0.0);
    double lf = config.lambda_f.value_or(0.0);
    switch (config.axis) {
        case SweepAxis::n:
            if (config.u && config.lambda_f)
                return TrafficParams::from_duty_and_departure(u, lf);
            if (config.u && config.lambda_n)
                return TrafficParams::from_duty_and_arrival(u, *config.lambda_n);
            return TrafficParams::from_rates(lf, *config.lambda_n);
        case SweepAxis::u:
            return TrafficParams::from_duty_and_departure(axis_value, lf);
        case SweepAxis::lambda_f:
            return TrafficParams::from_duty_and_departure(u, axis_value);
    }
    throw std::logic_error("unreachable");
}

std::uint64_t trial_stream(std::uint64_t master, std::size_t axis_i, std::size_t sensing_i,
                           long trial, int purpose) {
    std::uint64_t id = (static_cast<std::uint64_t>(axis_i) << 44) ^
                       (static_cast<std::uint64_t>(sensing_i) << 36) ^
                       (static_cast<std::uint64_t>(trial) << 1) ^
                       static_cast<std::uint64_t>(purpose);
    return derive_stream_seed(master, id);
}

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

void append_cell(std::string& out, const std::optional<double>& v) {
    out += ',';
    if (v) append_number(out, *v);
}

}  // namespace

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::n: return "n";
        case SweepAxis::u: return "u";
        case SweepAxis::lambda_f: return "lambda_f";
    }
    return "unknown";
}

void validate_sweep_config(const SweepConfig& config) {
    auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
    if (config.axis_values.empty()) fail("sweep axis must be non-empty");
    for (std::size_t i = 0; i + 1 < config.axis_values.size(); ++i)
        if (!(config.axis_values[i] < config.axis_values[i + 1]))
            fail("sweep axis values must be strictly increasing");
    if (!(config.t_total > 0.0)) fail("t_total must be positive");
    if (config.trials < 0) fail("trials must be at least 1");
    if (config.sensing.empty()) fail("at least one sensing model is required");
    if (config.estimators.empty()) fail("at least one estimator is required");

    int fixed = int(config.u.has_value()) + int(config.lambda_f.has_value()) +
                int(config.lambda_n.has_value());
    switch (config.axis) {
        case SweepAxis::n:
            if (fixed != 2) fail("an N sweep needs exactly two fixed traffic parameters");
            for (double v : config.axis_values)
                if (v < 2.0 || v != std::floor(v)) fail("sample counts must be integers >= 2");
            break;
        case SweepAxis::u:
            if (config.u || !config.lambda_f || config.lambda_n)
                fail("a u sweep fixes lambda_f only");
            if (!config.n_samples) fail("a u sweep needs n_samples");
            break;
        case SweepAxis::lambda_f:
            if (!config.u || config.lambda_f || config.lambda_n)
                fail("a lambda_f sweep fixes u only");
            if (!config.n_samples) fail("a lambda_f sweep needs n_samples");
            break;
    }
    for (double v : config.axis_values) {
        if (config.axis == SweepAxis::u && !(v > 0.0 && v < 1.0))
            fail("swept duty cycles must lie in (0, 1)");
        if (config.axis == SweepAxis::lambda_f && !(v > 0.0)) fail("swept rates must be positive");
    }
}

std::vector<SweepResultRow> run_sweep(const SweepConfig& config) {
    validate_sweep_config(config);

    long trials = config.trials;
    if (trials == 0) {
        bool any_ml = std::any_of(config.estimators.begin(), config.estimators.end(), is_ml);
        trials = any_ml ? 2000 : 100000;
    }

    std::vector<SweepResultRow> rows;
    for (std::size_t ai = 0; ai < config.axis_values.size(); ++ai) {
        const double axis_value = config.axis_values[ai];
        const TrafficParams params = resolve_params(config, axis_value);
        const std::size_t n = config.axis == SweepAxis::n
                                  ? static_cast<std::size_t>(axis_value)
                                  : *config.n_samples;
        const SamplingPlan plan = SamplingPlan::uniform(config.t_total, n);
        const double t_c = plan.gaps().front();

        const auto joint = cr_bounds_joint_uf(params, t_c, n);
        const double crb_u_joint = joint.first.value;
        const double crb_lf_joint = joint.second.value;
        const double crb_u_known = cr_bound_u_known_lf(params, t_c, n);
        const double crb_lf_known = cr_bound_lf_known_u(params, t_c, n);
        const auto limits = cr_asymptotes(params, config.t_total);
        const double crb_u_lim_joint = limits[0].value;
        const double crb_u_lim_known = limits[3].value;

        for (std::size_t si = 0; si < config.sensing.size(); ++si) {
            const SensingModel& model = config.sensing[si];
            const double mse_closed = mse_avg(params, plan, model).value;

            // One pass over trials fills per-estimator slots; estimators see
            // the same sample paths so comparisons are paired.
            std::vector<std::vector<TrialErrors>> slots(
                config.estimators.size(), std::vector<TrialErrors>(trials));
            std::vector<bool> active(config.estimators.size(), true);
            for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
                bool noisy_ml = is_ml(config.estimators[ei]) && !model.is_perfect();
                if (noisy_ml && n > config.max_noisy_ml_n) active[ei] = false;
            }

            parallel_for(trials, [&](long trial) {
                SampleVector clean = generate_samples(
                    params, plan, trial_stream(config.master_seed, ai, si, trial, 0));
                SampleVector observed = apply_sensing_errors(
                    clean, model, trial_stream(config.master_seed, ai, si, trial, 1));
                for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
                    if (!active[ei]) continue;
                    TrialErrors& slot = slots[ei][trial];
                    switch (config.estimators[ei]) {
                        case EstimatorId::avg: {
                            EstimateReport r = estimate_avg(observed, model);
                            slot.err_u = avg_estimate_raw(observed, model) - params.u();
                            slot.boundary = r.boundary_hit;
                            break;
                        }
                        case EstimatorId::ml_joint_uf: {
                            EstimateReport r = estimate_ml_joint_uf(observed, model);
                            slot.err_u = r.u_hat - params.u();
                            slot.err_lf = *r.lambda_f_hat - params.lambda_f();
                            slot.err_ln = *r.lambda_n_hat - params.lambda_n();
                            slot.boundary = r.boundary_hit;
                            break;
                        }
                        case EstimatorId::ml_joint_un: {
                            EstimateReport r = estimate_ml_joint_un(observed, model);
                            slot.err_u = r.u_hat - params.u();
                            slot.err_lf = *r.lambda_f_hat - params.lambda_f();
                            slot.err_ln = *r.lambda_n_hat - params.lambda_n();
                            slot.boundary = r.boundary_hit;
                            break;
                        }
                        case EstimatorId::ml_u_known_lf: {
                            EstimateReport r =
                                estimate_ml_u_known_lf(observed, params.lambda_f(), model);
                            slot.err_u = r.u_hat - params.u();
                            slot.boundary = r.boundary_hit;
                            break;
                        }
                        case EstimatorId::ml_lf_known_u: {
                            EstimateReport r = estimate_ml_lf_known_u(observed, params.u(), model);
                            slot.err_lf = *r.lambda_f_hat - params.lambda_f();
                            slot.boundary = r.boundary_hit;
                            break;
                        }
                    }
                }
            });

            for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
                const EstimatorId est = config.estimators[ei];
                SweepResultRow row;
                row.axis_name = sweep_axis_name(config.axis);
                row.axis_value = axis_value;
                row.estimator = est;
                row.pf = model.p_f;
                row.pm = model.p_m;
                if (active[ei]) {
                    const auto& slot = slots[ei];
                    row.rms_u = rms_of(slot, &TrialErrors::err_u);
                    row.rms_lf = rms_of(slot, &TrialErrors::err_lf);
                    row.rms_ln = rms_of(slot, &TrialErrors::err_ln);
                    row.trials_used = trials;
                    long hits = 0;
                    for (const auto& t : slot) hits += t.boundary ? 1 : 0;
                    row.boundary_fraction =
                        static_cast<double>(hits) / static_cast<double>(trials);
                }
                // Bound columns matching what each estimator targets.
                switch (est) {
                    case EstimatorId::avg:
                        row.crb_u = std::sqrt(crb_u_joint);
                        row.crb_u_limit = std::sqrt(crb_u_lim_joint);
                        row.mse_avg_closed_form = std::sqrt(mse_closed);
                        break;
                    case EstimatorId::ml_joint_uf:
                    case EstimatorId::ml_joint_un:
                        row.crb_u = std::sqrt(crb_u_joint);
                        row.crb_lf = std::sqrt(crb_lf_joint);
                        row.crb_u_limit = std::sqrt(crb_u_lim_joint);
                        break;
                    case EstimatorId::ml_u_known_lf:
                        row.crb_u = std::sqrt(crb_u_known);
                        row.crb_u_limit = std::sqrt(crb_u_lim_known);
                        break;
                    case EstimatorId::ml_lf_known_u:
                        row.crb_lf = std::sqrt(crb_lf_known);
                        break;
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }

    SweepConfig config;
    try {
        if (j.contains("fixed")) {
            const auto& f = j.at("fixed");
            if (f.contains("u")) config.u = f.at("u").get<double>();
            if (f.contains("lambda_f")) config.lambda_f = f.at("lambda_f").get<double>();
            if (f.contains("lambda_n")) config.lambda_n = f.at("lambda_n").get<double>();
        }
        const auto& axis = j.at("axis");
        std::string axis_name = axis.at("name").get<std::string>();
        if (axis_name == "n")
            config.axis = SweepAxis::n;
        else if (axis_name == "u")
            config.axis = SweepAxis::u;
        else if (axis_name == "lambda_f")
            config.axis = SweepAxis::lambda_f;
        else
            throw std::invalid_argument("unknown axis: " + axis_name);
        config.axis_values = axis.at("values").get<std::vector<double>>();

        config.t_total = j.at("t_total").get<double>();
        if (j.contains("n_samples")) config.n_samples = j.at("n_samples").get<std::size_t>();

        for (const auto& s : j.at("sensing")) {
            if (!s.is_array() || s.size() != 2)
                throw std::invalid_argument("sensing entries must be [p_f, p_m] pairs");
            config.sensing.emplace_back(s[0].get<double>(), s[1].get<double>());
        }
        for (const auto& e : j.at("estimators")) {
            auto id = parse_estimator_name(e.get<std::string>());
            if (!id) throw std::invalid_argument("unknown estimator: " + e.get<std::string>());
            config.estimators.push_back(*id);
        }
        if (j.contains("trials")) config.trials = j.at("trials").get<long>();
        if (j.contains("master_seed")) config.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("max_noisy_ml_n"))
            config.max_noisy_ml_n = j.at("max_noisy_ml_n").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config field error: " + std::string(e.what()));
    }
    validate_sweep_config(config);
    return config;
}

void write_sweep_csv(const std::vector<SweepResultRow>& rows, std::ostream& out) {
    out << sweep_csv_string(rows);
}

std::string sweep_csv_string(const std::vector<SweepResultRow>& rows) {
    std::string out =
        "axis_name,axis_value,estimator,pf,pm,rms_u,rms_lf,rms_ln,crb_u,crb_lf,"
        "crb_u_limit,mse_avg_closed_form,trials,boundary_fraction\n";
    for (const auto& r : rows) {
        out += r.axis_name;
        out += ',';
        append_number(out, r.axis_value);
        out += ',';
        out += estimator_name(r.estimator);
        out += ',';
        append_number(out, r.pf);
        out += ',';
        append_number(out, r.pm);
        append_cell(out, r.rms_u);
        append_cell(out, r.rms_lf);
        append_cell(out, r.rms_ln);
        append_cell(out, r.crb_u);
        append_cell(out, r.crb_lf);
        append_cell(out, r.crb_u_limit);
        append_cell(out, r.mse_avg_closed_form);
        out += ',';
        append_number(out, static_cast<double>(r.trials_used));
        out += ',';
        append_number(out, r.boundary_fraction);
        out += '\n';
    }
    return out;
}

}  // namespace putraffic
