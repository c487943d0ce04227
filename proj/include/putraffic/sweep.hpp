#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "putraffic/estimators.hpp"
#include "putraffic/types.hpp"

namespace putraffic {

enum class SweepAxis { n, u, lambda_f };

const char* sweep_axis_name(SweepAxis axis);

// One Monte Carlo sweep: a single axis (sample count, duty cycle or
// departure rate), the fixed parameters needed to complete the triple, a
// list of sensing models and a list of estimators. Every trial's random
// streams are derived from master_seed and the trial's indices, so results
// do not depend on scheduling.
struct SweepConfig {
    std::optional<double> u;
    std::optional<double> lambda_f;
    std::optional<double> lambda_n;

    SweepAxis axis = SweepAxis::n;
    std::vector<double> axis_values;

    double t_total = 0.0;
    std::optional<std::size_t> n_samples;  // required unless axis == n

    std::vector<SensingModel> sensing;
    std::vector<EstimatorId> estimators;

    long trials = 0;  // 0 = default (2000 with ML estimators, 100000 otherwise)
    std::uint64_t master_seed = 1;

    // Noisy-likelihood ML cells above this N are skipped (reported empty).
    std::size_t max_noisy_ml_n = 2000;
};

struct SweepResultRow {
    std::string axis_name;
    double axis_value = 0.0;
    EstimatorId estimator = EstimatorId::avg;
    double pf = 0.0;
    double pm = 0.0;
    std::optional<double> rms_u;
    std::optional<double> rms_lf;
    std::optional<double> rms_ln;
    std::optional<double> crb_u;
    std::optional<double> crb_lf;
    std::optional<double> crb_u_limit;
    std::optional<double> mse_avg_closed_form;
    long trials_used = 0;
    double boundary_fraction = 0.0;
};

// Validates the config; throws std::invalid_argument on bad input.
void validate_sweep_config(const SweepConfig& config);

// Runs the sweep. Trials run in parallel when PUTRAFFIC_THREADS (or the
// hardware) allows; output is identical for a fixed master_seed regardless
// of the thread count.
std::vector<SweepResultRow> run_sweep(const SweepConfig& config);

// JSON config file, schema documented in the README.
SweepConfig load_sweep_config(const std::string& path);

// Fixed column order, header row, 9 significant digits.
void write_sweep_csv(const std::vector<SweepResultRow>& rows, std::ostream& out);
std::string sweep_csv_string(const std::vector<SweepResultRow>& rows);

}  // namespace putraffic
