#include "putraffic/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "putraffic/markov.hpp"

namespace putraffic {

namespace {

struct Kernel {
    double gamma;  // exp(-lambda_f * t_c / u)
    double p00, p01, p10, p11;
};

Kernel kernel_at(const TrafficParams& params, double t_c) {
    if (!(t_c > 0.0)) throw std::domain_error("inter-sample time must be positive");
    Kernel k;
    k.gamma = std::exp(-params.kernel_rate() * t_c);
    if (k.gamma >= 1.0)
        throw std::domain_error("gap is numerically zero relative to the traffic rates");
    TransitionMatrix m = transition_matrix(params, t_c);
    k.p00 = m.p00;
    k.p01 = m.p01;
    k.p10 = m.p10;
    k.p11 = m.p11;
    return k;
}

double sq(double x) { return x * x; }

// Sensing contribution to the N-sample averaging MSE, times N.
double sensing_numerator(const TrafficParams& params, const SensingModel& model) {
    double u = params.u();
    double d = 1.0 - model.p_f - model.p_m;
    return (u * model.p_m * (1.0 - model.p_m) + (1.0 - u) * model.p_f * (1.0 - model.p_f)) /
           (d * d);
}

// Sum over ordered sample pairs (a < b) of the correlation decay product
// across the gaps separating them.
double pair_correlation_sum(const TrafficParams& params, const SamplingPlan& plan) {
    const std::size_t n = plan.n_samples();
    if (n < 2) return 0.0;
    double rate = params.kernel_rate();
    if (plan.is_uniform()) {
        // sum_{i=1}^{N-1} (N-i) Gamma^i = N*Gamma/(1-Gamma) - Gamma*(1-Gamma^N)/(1-Gamma)^2
        double x = rate * plan.gaps().front();
        double gamma = std::exp(-x);
        if (gamma == 0.0) return 0.0;
        double om = -std::expm1(-x);                                  // 1 - Gamma
        double om_n = -std::expm1(-x * static_cast<double>(n));       // 1 - Gamma^N
        return static_cast<double>(n) * gamma / om - gamma * om_n / (om * om);
    }
    double total = 0.0;
    for (std::size_t a = 0; a + 1 < n; ++a) {
        double prod = 1.0;
        for (std::size_t b = a; b + 1 < n; ++b) {
            prod *= std::exp(-rate * plan.gaps()[b]);
            if (prod < 1e-300) break;
            total += prod;
        }
    }
    return total;
}

}  // namespace

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::cr_u_joint: return "cr_u_joint";
        case BoundKind::cr_lf_joint: return "cr_lf_joint";
        case BoundKind::cr_ln_joint: return "cr_ln_joint";
        case BoundKind::cr_u_joint_limit: return "cr_u_joint_limit";
        case BoundKind::cr_lf_limit: return "cr_lf_limit";
        case BoundKind::cr_ln_limit: return "cr_ln_limit";
        case BoundKind::cr_u_known_lf_limit: return "cr_u_known_lf_limit";
        case BoundKind::mse_avg: return "mse_avg";
        case BoundKind::mse_avg_uniform: return "mse_avg_uniform";
        case BoundKind::mse_avg_uniform_limit: return "mse_avg_uniform_limit";
    }
    return "unknown";
}

FisherInfo fisher_matrix(const TrafficParams& params, double t_c, std::size_t n) {
    if (n < 2) throw std::domain_error("Fisher information needs at least two samples");
    Kernel k = kernel_at(params, t_c);
    const double u = params.u();
    const double lf = params.lambda_f();
    const double g = k.gamma;
    const double nd = static_cast<double>(n);
    const double trip = k.p01 * k.p00 * k.p11;

    FisherInfo info;
    info.n = n;
    info.t_c = t_c;
    info.i11 = (g * g * lf * t_c * (nd - 1.0)) *
                   (lf * t_c * (1.0 - u) * (1.0 + g) + 2.0 * u * (2.0 * u - 1.0) * (1.0 - g)) /
                   (u * u * trip) -
               ((nd - 1.0) * g * g - nd * g + u * k.p10 * ((3.0 * nd - 2.0) * g - nd)) /
                   (u * (1.0 - u) * k.p00 * k.p11);
    info.i12 = -(nd - 1.0) * g * g * t_c *
               (t_c * lf * (1.0 - u) * (1.0 + g) + k.p01 * (2.0 * u - 1.0)) / (u * trip);
    info.i22 = (nd - 1.0) * g * g * t_c * t_c * (1.0 - u) * (1.0 + g) / trip;
    return info;
}

double fisher_determinant(const TrafficParams& params, double t_c, std::size_t n) {
    if (n < 2) throw std::domain_error("Fisher information needs at least two samples");
    Kernel k = kernel_at(params, t_c);
    double nd = static_cast<double>(n);
    return sq(k.gamma * t_c) * (nd - 1.0) * (2.0 * k.gamma + nd * (1.0 - k.gamma)) /
           (params.u() * k.p01 * k.p00 * k.p11);
}

FisherInfo fisher_by_enumeration(const TrafficParams& params, double t_c, std::size_t n) {
    if (n < 2) throw std::domain_error("Fisher information needs at least two samples");
    if (n > kFisherEnumerationCap)
        throw std::length_error("fisher_by_enumeration is capped at N=8; use fisher_matrix");
    const long double u0 = params.u();
    const long double l0 = params.lambda_f();
    if (static_cast<double>(u0 * (1.0L + 2e-5L)) >= 1.0)
        throw std::domain_error("duty cycle too close to 1 for the finite-difference stencil");

    auto loglik = [t_c](const TransitionCounts& c, long double u, long double lf) {
        long double g = expl(-lf * static_cast<long double>(t_c) / u);
        long double p00 = (1.0L - u) + u * g;
        long double p01 = 1.0L - p00;
        long double p11 = u + (1.0L - u) * g;
        long double p10 = 1.0L - p11;
        long double ll = c.z1 ? logl(u) : logl(1.0L - u);
        if (c.n0) ll += c.n0 * logl(p00);
        if (c.n1) ll += c.n1 * logl(p01);
        if (c.n2) ll += c.n2 * logl(p10);
        if (c.n3) ll += c.n3 * logl(p11);
        return ll;
    };

    const long double hu = 1e-5L * u0;
    const long double hl = 1e-5L * l0;
    long double i11 = 0.0L, i12 = 0.0L, i22 = 0.0L;
    SamplingPlan plan = SamplingPlan::uniform(t_c * static_cast<double>(n - 1), n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::uint8_t> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((mask >> i) & 1);
        TransitionCounts c = count_transitions(SampleVector(std::move(bits), plan));

        long double weight = expl(loglik(c, u0, l0));
        long double f0 = loglik(c, u0, l0);
        long double d2u = (loglik(c, u0 + hu, l0) - 2.0L * f0 + loglik(c, u0 - hu, l0)) / (hu * hu);
        long double d2l = (loglik(c, u0, l0 + hl) - 2.0L * f0 + loglik(c, u0, l0 - hl)) / (hl * hl);
        long double dul = (loglik(c, u0 + hu, l0 + hl) - loglik(c, u0 + hu, l0 - hl) -
                           loglik(c, u0 - hu, l0 + hl) + loglik(c, u0 - hu, l0 - hl)) /
                          (4.0L * hu * hl);
        i11 -= weight * d2u;
        i12 -= weight * dul;
        i22 -= weight * d2l;
    }

    FisherInfo info;
    info.n = n;
    info.t_c = t_c;
    info.i11 = static_cast<double>(i11);
    info.i12 = static_cast<double>(i12);
    info.i22 = static_cast<double>(i22);
    return info;
}

std::pair<BoundReport, BoundReport> cr_bounds_joint_uf(const TrafficParams& params, double t_c,
                                                       std::size_t n) {
    if (n < 2) throw std::domain_error("CR bounds need at least two samples");
    Kernel k = kernel_at(params, t_c);
    double det = fisher_determinant(params, t_c, n);
    if (!(det > 0.0) || !std::isfinite(det))
        throw std::domain_error("Fisher information is numerically singular");

    const double u = params.u();
    const double lf = params.lambda_f();
    const double g = k.gamma;
    const double nd = static_cast<double>(n);
    const double denom = 2.0 * g + nd * (1.0 - g);

    double v_u = u * (1.0 - u) * (1.0 + g) / (nd * (1.0 - g) + 2.0 * g);
    double v_lf =
        lf * (lf * t_c * (1.0 - u) * (1.0 + g) + 2.0 * u * (2.0 * u - 1.0) * (1.0 - g)) /
            (u * t_c * denom) -
        k.p01 * (u * k.p10 * ((3.0 * nd - 2.0) * g - nd) + (nd - 1.0) * g * g - g * nd) /
            (sq(g * t_c) * (1.0 - u) * (nd - 1.0) * denom);
    return {{v_u, BoundKind::cr_u_joint}, {v_lf, BoundKind::cr_lf_joint}};
}

std::pair<BoundReport, BoundReport> cr_bounds_joint_un(const TrafficParams& params, double t_c,
                                                       std::size_t n) {
    if (n < 2) throw std::domain_error("CR bounds need at least two samples");
    Kernel k = kernel_at(params, t_c);
    double det = fisher_determinant(params, t_c, n);
    if (!(det > 0.0) || !std::isfinite(det))
        throw std::domain_error("Fisher information is numerically singular");

    const double u = params.u();
    const double ln = params.lambda_n();
    const double g = k.gamma;
    const double nd = static_cast<double>(n);
    const double denom = 2.0 * g + nd * (1.0 - g);

    double v_u = u * (1.0 - u) * (1.0 + g) / (nd * (1.0 - g) + 2.0 * g);
    double v_ln =
        ln * (ln * t_c * u * (1.0 + g) + 2.0 * (1.0 - u) * (1.0 - 2.0 * u) * (1.0 - g)) /
            ((1.0 - u) * t_c * denom) -
        k.p10 * (u * k.p10 * ((3.0 * nd - 2.0) * g - nd) + (nd - 1.0) * g * g - g * nd) /
            (sq(g * t_c) * u * (nd - 1.0) * denom);
    return {{v_u, BoundKind::cr_u_joint}, {v_ln, BoundKind::cr_ln_joint}};
}

double cr_bound_u_known_lf(const TrafficParams& params, double t_c, std::size_t n) {
    FisherInfo info = fisher_matrix(params, t_c, n);
    if (!(info.i11 > 0.0)) throw std::domain_error("degenerate information for u");
    return 1.0 / info.i11;
}

double cr_bound_lf_known_u(const TrafficParams& params, double t_c, std::size_t n) {
    FisherInfo info = fisher_matrix(params, t_c, n);
    if (!(info.i22 > 0.0)) throw std::domain_error("degenerate information for lambda_f");
    return 1.0 / info.i22;
}

std::vector<BoundReport> cr_asymptotes(const TrafficParams& params, double t_total) {
    if (!(t_total > 0.0)) throw std::domain_error("observation window must be positive");
    const double u = params.u();
    const double lf = params.lambda_f();
    const double ln = params.lambda_n();
    const double t = t_total;

    std::vector<BoundReport> out;
    out.push_back({u * (1.0 - u) / (1.0 + t * lf / (2.0 * u)), BoundKind::cr_u_joint_limit});
    out.push_back({lf * (u + t * lf) / (t * (1.0 - u) * (2.0 * u + t * lf)),
                   BoundKind::cr_lf_limit});
    out.push_back({ln * ((1.0 - u) + t * ln) / (t * u * (2.0 * (1.0 - u) + t * ln)),
                   BoundKind::cr_ln_limit});
    out.push_back({u * (1.0 - u) / (1.0 + t * lf / u), BoundKind::cr_u_known_lf_limit});
    return out;
}

BoundReport mse_avg(const TrafficParams& params, const SamplingPlan& plan,
                    const SensingModel& model) {
    const double u = params.u();
    const double nd = static_cast<double>(plan.n_samples());
    double corr = pair_correlation_sum(params, plan);
    double value = 2.0 * u * (1.0 - u) / (nd * nd) * corr + u * (1.0 - u) / nd +
                   sensing_numerator(params, model) / nd;
    return {value, plan.is_uniform() ? BoundKind::mse_avg_uniform : BoundKind::mse_avg};
}

BoundReport mse_avg_uniform_limit(const TrafficParams& params, double t_total) {
    if (!(t_total > 0.0)) throw std::domain_error("observation window must be positive");
    const double u = params.u();
    const double eta = t_total * params.lambda_f() / u;
    double shape;
    if (eta < 1e-4) {
        // series of (exp(-eta) + eta - 1)/eta^2, avoids the cancellation
        shape = 0.5 - eta / 6.0 + eta * eta / 24.0 - eta * eta * eta / 120.0 +
                eta * eta * eta * eta / 720.0 - eta * eta * eta * eta * eta / 5040.0;
    } else {
        shape = (std::exp(-eta) + eta - 1.0) / (eta * eta);
    }
    return {2.0 * u * (1.0 - u) * shape, BoundKind::mse_avg_uniform_limit};
}

BoundReport mse_avg_recursive_check(const TrafficParams& params, const SamplingPlan& plan,
                                    const SensingModel& model) {
    const std::size_t n = plan.n_samples();
    if (n < 2) throw std::domain_error("the recursive MSE route needs at least two samples");
    const double u = params.u();
    const double rate = params.kernel_rate();
    const double d = 1.0 - model.p_f - model.p_m;
    const double sensing_c = sensing_numerator(params, model);
    const double theta2_num =
        (model.p_f * (1.0 - model.p_f) + u * (1.0 - 2.0 * model.p_f) * d) / (d * d);

    // base case, two samples
    double gamma1 = std::exp(-rate * plan.gaps()[0]);
    double v = u * (1.0 - u) * gamma1 / 2.0 + u * (1.0 - u) / 2.0 + sensing_c / 2.0;
    // rho_m: correlation sum between each earlier sample and sample m
    double rho = gamma1;
    for (std::size_t m = 2; m < n; ++m) {
        double md = static_cast<double>(m);
        double md1 = md + 1.0;
        double gamma_m = std::exp(-rate * plan.gaps()[m - 1]);
        rho = gamma_m * (1.0 + rho);
        double theta1 = 2.0 * md * u * u / (md1 * md1) + 2.0 * u * (1.0 - u) / (md1 * md1) * rho;
        double theta2 = theta2_num / (md1 * md1);
        v = md * md * v / (md1 * md1) + theta1 + theta2 -
            (2.0 * md + 1.0) * u * u / (md1 * md1);
    }
    return {v, plan.is_uniform() ? BoundKind::mse_avg_uniform : BoundKind::mse_avg};
}

}  // namespace putraffic
