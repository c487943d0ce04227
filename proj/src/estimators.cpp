#include "putraffic/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "optimize.hpp"
#include "putraffic/likelihood.hpp"
#include "putraffic/markov.hpp"

namespace putraffic {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

constexpr double kFtol = 1e-9;
constexpr int kGridPerDim = 16;
constexpr int kGrid1D = 64;
constexpr int kMaxNmEvals = 300;

enum class FreePair { u_lf, u_ln };

TrafficParams make_params(FreePair mode, double u, double rate) {
    return mode == FreePair::u_lf ? TrafficParams::from_duty_and_departure(u, rate)
                                  : TrafficParams::from_duty_and_arrival(u, rate);
}

// Likelihood evaluator shared by all ML estimators. Uniform perfect-sensing
// data collapses to the transition counts, making each evaluation O(1).
class MlObjective {
public:
    MlObjective(const SampleVector& samples, const SensingModel& model)
        : samples_(samples), model_(model) {
        if (model_.is_perfect() && samples_.plan.is_uniform() && samples_.size() >= 2) {
            counts_ = count_transitions(samples_);
            t_c_ = samples_.plan.gaps().front();
        }
    }

    double operator()(const TrafficParams& params) const {
        if (!model_.is_perfect()) return loglik_noisy_forward(samples_, params, model_).value;
        if (t_c_ > 0.0) return loglik_clean(counts_, params, t_c_).value;
        return loglik_clean_general(samples_, params).value;
    }

private:
    const SampleVector& samples_;
    SensingModel model_;
    TransitionCounts counts_{};
    double t_c_ = 0.0;
};

bool snap_to_edge(double& x, double lo, double hi) {
    double eps = 1e-7 * (hi - lo);
    if (x - lo < eps) {
        x = lo;
        return true;
    }
    if (hi - x < eps) {
        x = hi;
        return true;
    }
    return false;
}

EstimateReport finish_report(EstimatorId id, FreePair mode, double u, double rate,
                             const MlObjective& objective, long evaluations, bool converged,
                             bool boundary) {
    TrafficParams params = make_params(mode, u, rate);
    EstimateReport report;
    report.estimator_id = id;
    report.u_hat = params.u();
    report.lambda_f_hat = params.lambda_f();
    report.lambda_n_hat = params.lambda_n();
    report.loglik_at_opt = objective(params);
    report.converged = converged;
    report.boundary_hit = boundary;
    report.iterations = evaluations;
    return report;
}

EstimateReport run_ml_joint(const SampleVector& samples, const SensingModel& model,
                            FreePair mode) {
    if (samples.size() < 2) throw std::domain_error("ML estimation needs at least two samples");
    const ParamBox box = default_param_box(samples.plan);
    const MlObjective objective(samples, model);

    const std::array<double, 2> lo{logit(box.u_min), std::log(box.lambda_min)};
    const std::array<double, 2> hi{logit(box.u_max), std::log(box.lambda_max)};
    auto fn = [&](double x, double y) {
        return objective(make_params(mode, sigmoid(x), std::exp(y)));
    };
    auto res = detail::BoxMaximizer2D(fn, lo, hi).run(kGridPerDim, kFtol, kMaxNmEvals);

    bool boundary = snap_to_edge(res.x[0], lo[0], hi[0]);
    boundary = snap_to_edge(res.x[1], lo[1], hi[1]) || boundary;
    return finish_report(mode == FreePair::u_lf ? EstimatorId::ml_joint_uf
                                                : EstimatorId::ml_joint_un,
                         mode, sigmoid(res.x[0]), std::exp(res.x[1]), objective,
                         res.evaluations, res.converged, boundary);
}

}  // namespace

const char* estimator_name(EstimatorId id) {
    switch (id) {
        case EstimatorId::avg: return "avg";
        case EstimatorId::ml_joint_uf: return "ml-joint-uf";
        case EstimatorId::ml_joint_un: return "ml-joint-un";
        case EstimatorId::ml_u_known_lf: return "ml-known-lf";
        case EstimatorId::ml_lf_known_u: return "ml-known-u";
    }
    return "unknown";
}

std::optional<EstimatorId> parse_estimator_name(const std::string& name) {
    if (name == "avg") return EstimatorId::avg;
    if (name == "ml-joint-uf" || name == "ml-joint-f") return EstimatorId::ml_joint_uf;
    if (name == "ml-joint-un" || name == "ml-joint-n") return EstimatorId::ml_joint_un;
    if (name == "ml-known-lf") return EstimatorId::ml_u_known_lf;
    if (name == "ml-known-u") return EstimatorId::ml_lf_known_u;
    return std::nullopt;
}

ParamBox default_param_box(const SamplingPlan& plan) {
    ParamBox box;
    box.lambda_min = 1e-6 / plan.t_total();
    box.lambda_max = 10.0 * static_cast<double>(plan.n_samples() - 1) / plan.t_total();
    return box;
}

double avg_estimate_raw(const SampleVector& samples, const SensingModel& model) {
    double total = 0.0;
    for (std::uint8_t b : samples.bits) total += b;
    double mean = total / static_cast<double>(samples.size());
    return (mean - model.p_f) / (1.0 - model.p_f - model.p_m);
}

EstimateReport estimate_avg(const SampleVector& samples, const SensingModel& model) {
    const ParamBox box = default_param_box(samples.plan);
    double raw = avg_estimate_raw(samples, model);

    EstimateReport report;
    report.estimator_id = EstimatorId::avg;
    report.u_hat = std::min(std::max(raw, box.u_min), box.u_max);
    report.boundary_hit = report.u_hat != raw;
    report.converged = true;
    return report;
}

EstimateReport estimate_ml_joint_uf(const SampleVector& samples, const SensingModel& model) {
    return run_ml_joint(samples, model, FreePair::u_lf);
}

EstimateReport estimate_ml_joint_un(const SampleVector& samples, const SensingModel& model) {
    return run_ml_joint(samples, model, FreePair::u_ln);
}

EstimateReport estimate_ml_u_known_lf(const SampleVector& samples, double lambda_f,
                                      const SensingModel& model) {
    if (samples.size() < 2) throw std::domain_error("ML estimation needs at least two samples");
    if (!(lambda_f > 0.0) || !std::isfinite(lambda_f))
        throw std::domain_error("known lambda_f must be positive");
    const ParamBox box = default_param_box(samples.plan);
    const MlObjective objective(samples, model);

    double lo = logit(box.u_min);
    double hi = logit(box.u_max);
    auto fn = [&](double x) {
        return objective(TrafficParams::from_duty_and_departure(sigmoid(x), lambda_f));
    };
    auto res = detail::maximize_on_interval(fn, lo, hi, kGrid1D, 1e-10 * (hi - lo));

    bool boundary = snap_to_edge(res.x, lo, hi);
    return finish_report(EstimatorId::ml_u_known_lf, FreePair::u_lf, sigmoid(res.x), lambda_f,
                         objective, res.evaluations, res.converged, boundary);
}

EstimateReport estimate_ml_lf_known_u(const SampleVector& samples, double u,
                                      const SensingModel& model) {
    if (samples.size() < 2) throw std::domain_error("ML estimation needs at least two samples");
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("known duty cycle must lie in (0, 1)");
    const ParamBox box = default_param_box(samples.plan);
    const MlObjective objective(samples, model);

    double lo = std::log(box.lambda_min);
    double hi = std::log(box.lambda_max);
    auto fn = [&](double y) {
        return objective(TrafficParams::from_duty_and_departure(u, std::exp(y)));
    };
    auto res = detail::maximize_on_interval(fn, lo, hi, kGrid1D, 1e-10 * (hi - lo));

    bool boundary = snap_to_edge(res.x, lo, hi);
    return finish_report(EstimatorId::ml_lf_known_u, FreePair::u_lf, u, std::exp(res.x),
                         objective, res.evaluations, res.converged, boundary);
}

MlResiduals ml_residuals(const TransitionCounts& counts, const TrafficParams& params,
                         double t_c) {
    TransitionMatrix m = transition_matrix(params, t_c);
    const double u = params.u();
    const double lf = params.lambda_f();
    const double gamma_lt = std::exp(-params.kernel_rate() * t_c) * lf * t_c;
    const double n_transitions = static_cast<double>(counts.total());
    const double n_samples = n_transitions + 1.0;

    MlResiduals r;
    r.lambda_residual = (static_cast<double>(counts.n1 + counts.n2) -
                         static_cast<double>(counts.n0) * m.p01 / m.p00 -
                         static_cast<double>(counts.n3) * m.p10 / m.p11) /
                        n_transitions;

    double d00 = (gamma_lt - m.p01) / u;
    double d11 = m.p10 / (1.0 - u) + (1.0 - u) * gamma_lt / (u * u);
    double dlog = (static_cast<double>(counts.z1) - u) / (u * (1.0 - u)) +
                  static_cast<double>(counts.n0) * d00 / m.p00 -
                  static_cast<double>(counts.n1) * d00 / m.p01 -
                  static_cast<double>(counts.n2) * d11 / m.p10 +
                  static_cast<double>(counts.n3) * d11 / m.p11;
    r.u_residual = u * (1.0 - u) * dlog / n_samples;
    return r;
}

}  // namespace putraffic
