#pragma once

#include <optional>
#include <string>

#include "putraffic/types.hpp"

namespace putraffic {

enum class EstimatorId {
    avg,
    ml_joint_uf,
    ml_joint_un,
    ml_u_known_lf,
    ml_lf_known_u,
};

const char* estimator_name(EstimatorId id);
std::optional<EstimatorId> parse_estimator_name(const std::string& name);

// Search box for the numerical estimators. u is clamped away from {0, 1};
// rates beyond ~N/T are unidentifiable at the sampling resolution.
struct ParamBox {
    double u_min = 1e-4;
    double u_max = 1.0 - 1e-4;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

ParamBox default_param_box(const SamplingPlan& plan);

struct EstimateReport {
    EstimatorId estimator_id = EstimatorId::avg;
    double u_hat = 0.0;
    std::optional<double> lambda_f_hat;
    std::optional<double> lambda_n_hat;
    std::optional<double> loglik_at_opt;
    bool converged = false;
    bool boundary_hit = false;
    long iterations = 0;
};

// Bias-corrected sample mean before clamping to the box. Can fall outside
// [0, 1] for small N under sensing errors; the closed-form MSE analysis
// applies to this statistic.
double avg_estimate_raw(const SampleVector& samples, const SensingModel& model);

// The averaging estimator: raw value clamped to the box with boundary_hit
// set when clamping occurred. Produces no rate estimates.
EstimateReport estimate_avg(const SampleVector& samples, const SensingModel& model);

// Joint ML over (u, lambda_f): coarse grid seed, then simplex refinement in
// (logit u, log lambda) coordinates. Perfect sensing uses the clean
// likelihood, otherwise the forward-recursion likelihood.
EstimateReport estimate_ml_joint_uf(const SampleVector& samples, const SensingModel& model);

// Same maximum in (u, lambda_n) coordinates.
EstimateReport estimate_ml_joint_un(const SampleVector& samples, const SensingModel& model);

// 1-D ML of u with lambda_f known a priori.
EstimateReport estimate_ml_u_known_lf(const SampleVector& samples, double lambda_f,
                                      const SensingModel& model);

// 1-D ML of lambda_f with u known a priori.
EstimateReport estimate_ml_lf_known_u(const SampleVector& samples, double u,
                                      const SensingModel& model);

// Stationarity diagnostics at a parameter point, for uniform sampling.
// lambda_residual is the per-transition defect of the departure-rate
// stationarity condition; u_residual is the scaled symbolic derivative of
// the clean log-likelihood in u (the printed closed form for the u condition
// has a suspect prefix term, so the derivative is evaluated directly).
struct MlResiduals {
    double lambda_residual = 0.0;
    double u_residual = 0.0;
};

MlResiduals ml_residuals(const TransitionCounts& counts, const TrafficParams& params, double t_c);

}  // namespace putraffic
