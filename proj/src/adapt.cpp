#include "shus/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shus {

void validate_scheme(const UpdateScheme& s) {
    std::visit([](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Shus>) {
            if (!(v.gamma > 0.0))
                throw std::invalid_argument("Shus: gamma must be positive");
        } else if constexpr (std::is_same_v<T, WlDeterministic>) {
            if (!(v.gamma_star > 0.0))
                throw std::invalid_argument("WlDeterministic: gamma_star must be positive");
            if (!(v.alpha > 0.5 && v.alpha <= 1.0))
                throw std::invalid_argument("WlDeterministic: alpha must be in (1/2, 1]");
            if (v.linear && !(v.gamma_star < 1.0))
                throw std::invalid_argument("WlDeterministic: linear form needs the "
                                            "first stepsize gamma_star < 1");
        } else if constexpr (std::is_same_v<T, ShusAlpha>) {
            if (!(v.gamma > 0.0))
                throw std::invalid_argument("ShusAlpha: gamma must be positive");
            if (!(v.alpha > 0.5 && v.alpha < 1.0))
                throw std::invalid_argument("ShusAlpha: alpha must be in (1/2, 1)");
        } else {
            if (!(v.gamma > 0.0))
                throw std::invalid_argument("PartialBias: gamma must be positive");
            if (!(v.exponent >= 0.0 && v.exponent <= 1.0))
                throw std::invalid_argument("PartialBias: exponent must be in [0, 1]");
        }
    }, s);
}

double scheme_bias_exponent(const UpdateScheme& s) {
    if (const auto* pb = std::get_if<PartialBias>(&s)) return pb->exponent;
    return 1.0;
}

double gamma_alpha(double gamma, double alpha) {
    return std::pow(1.0 - alpha, -alpha / (1.0 - alpha)) * gamma;
}

double LogOccupation::sum_exp() const {
    double s = 0.0;
    for (double v : nu) s += std::exp(v);
    return s;
}

double LogOccupation::log_norm() const {
    double mx = nu[0];
    for (double v : nu) mx = std::max(mx, v);
    double s = 0.0;
    for (double v : nu) s += std::exp(v - mx);
    return mx + std::log(s);
}

double LogOccupation::log_total() const {
    return static_cast<double>(renorm_count) * std::log(renorm_threshold) + log_norm();
}

double LogOccupation::log1p_total() const {
    const double lnM = std::log(renorm_threshold);
    const double shrink = std::pow(renorm_threshold, -static_cast<double>(renorm_count));
    return std::log(shrink + sum_exp()) + static_cast<double>(renorm_count) * lnM;
}

double LogOccupation::log_theta(int stratum) const {
    return nu[stratum - 1] - log_norm();
}

std::vector<double> LogOccupation::log_theta() const {
    const double ln = log_norm();
    std::vector<double> out(nu.size());
    for (size_t i = 0; i < nu.size(); ++i) out[i] = nu[i] - ln;
    return out;
}

std::vector<double> LogOccupation::theta() const {
    auto out = log_theta();
    for (double& v : out) v = std::exp(v);
    return out;
}

LogOccupation make_log_occupation(const UpdateScheme& s, int strata,
                                  double renorm_threshold) {
    if (strata < 1)
        throw std::invalid_argument("make_log_occupation: need at least one stratum");
    if (!(renorm_threshold > 1.0))
        throw std::invalid_argument("make_log_occupation: threshold must exceed 1");
    validate_scheme(s);
    LogOccupation occ;
    occ.nu.assign(strata, -std::log(static_cast<double>(strata)));
    occ.renorm_threshold = renorm_threshold;
    occ.scheme = s;
    return occ;
}

LogOccupation make_log_occupation_from(const UpdateScheme& s,
                                       std::span<const double> tau,
                                       double renorm_threshold) {
    auto occ = make_log_occupation(s, static_cast<int>(tau.size()), renorm_threshold);
    for (size_t i = 0; i < tau.size(); ++i) {
        if (!(tau[i] > 0.0))
            throw std::invalid_argument("make_log_occupation_from: weights must be positive");
        occ.nu[i] = std::log(tau[i]);
    }
    return occ;
}

namespace {

void check_hit(const LogOccupation& occ, int hit) {
    if (hit < 1 || hit > occ.strata())
        throw std::invalid_argument("weight update: hit stratum out of range");
}

// Subtract ln M for as long as the in-scale total has reached M. A single
// update multiplies one weight by (1 + stepsize), so one pass is the common
// case; the loop guards huge early stepsizes.
void renormalize(LogOccupation& occ) {
    const double lnM = std::log(occ.renorm_threshold);
    while (occ.sum_exp() >= occ.renorm_threshold) {
        for (double& v : occ.nu) v -= lnM;
        ++occ.renorm_count;
    }
}

} // namespace

double shus_update(LogOccupation& occ, int hit) {
    check_hit(occ, hit);
    const auto& p = std::get<Shus>(occ.scheme);
    const double expo = -occ.log_total();
    const double t = p.gamma * std::exp(expo);  // gamma_{n+1} = gamma / S_n
    occ.nu[hit - 1] += std::log1p(t);
    renormalize(occ);
    return t;
}

double shus_alpha_update(LogOccupation& occ, int hit) {
    check_hit(occ, hit);
    const auto& p = std::get<ShusAlpha>(occ.scheme);
    const double expo = p.alpha / (1.0 - p.alpha);
    const double t = gamma_alpha(p.gamma, p.alpha)
                   / std::pow(occ.log1p_total(), expo);
    occ.nu[hit - 1] += std::log1p(t);
    renormalize(occ);
    return t;
}

double partial_bias_update(LogOccupation& occ, int hit) {
    check_hit(occ, hit);
    const auto& p = std::get<PartialBias>(occ.scheme);
    // tau'(hit) = tau(hit) + gamma theta(hit)^a
    //           = tau(hit) (1 + gamma theta(hit)^{a-1} / S).
    // Written so that a = 1 evaluates exactly the same expression as
    // shus_update: (a-1) * log_theta is then a hard zero.
    const double expo = (p.exponent - 1.0) * occ.log_theta(hit) - occ.log_total();
    const double t = p.gamma * std::exp(expo);
    occ.nu[hit - 1] += std::log1p(t);
    renormalize(occ);
    return t;
}

double wl_nonlinear_update(LogOccupation& occ, int hit, double stepsize) {
    check_hit(occ, hit);
    if (stepsize < 0.0 || std::isnan(stepsize))
        throw std::invalid_argument("wl_nonlinear_update: negative stepsize");
    occ.nu[hit - 1] += std::log1p(stepsize);
    renormalize(occ);
    return stepsize;
}

void wl_linear_update(std::vector<double>& theta, int hit, double stepsize) {
    if (hit < 1 || hit > static_cast<int>(theta.size()))
        throw std::invalid_argument("wl_linear_update: hit stratum out of range");
    if (stepsize < 0.0 || std::isnan(stepsize))
        throw std::invalid_argument("wl_linear_update: negative stepsize");
    const double th = theta[hit - 1];
    for (size_t i = 0; i < theta.size(); ++i) {
        const double ind = (static_cast<int>(i) == hit - 1) ? 1.0 : 0.0;
        theta[i] += stepsize * theta[i] * (ind - th);
        if (!(theta[i] > 0.0 && theta[i] <= 1.0))
            throw std::runtime_error("wl_linear_update: weight left (0, 1]; "
                                     "stepsize too large");
    }
}

double current_stepsize(const LogOccupation& occ, long n) {
    return std::visit([&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Shus>) {
            return v.gamma * std::exp(-occ.log_total());
        } else if constexpr (std::is_same_v<T, WlDeterministic>) {
            if (n < 1)
                throw std::invalid_argument("current_stepsize: step index must be >= 1");
            return v.gamma_star / std::pow(static_cast<double>(n), v.alpha);
        } else if constexpr (std::is_same_v<T, ShusAlpha>) {
            return gamma_alpha(v.gamma, v.alpha)
                 / std::pow(occ.log1p_total(), v.alpha / (1.0 - v.alpha));
        } else {
            throw std::logic_error("current_stepsize: the partial-bias increment "
                                   "depends on the hit stratum");
        }
    }, occ.scheme);
}

double apply_update(LogOccupation& occ, int hit, long n) {
    return std::visit([&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Shus>) {
            (void)v;
            return shus_update(occ, hit);
        } else if constexpr (std::is_same_v<T, WlDeterministic>) {
            const double s = v.gamma_star / std::pow(static_cast<double>(n), v.alpha);
            if (v.linear) {
                auto th = occ.theta();
                wl_linear_update(th, hit, s);
                for (size_t i = 0; i < th.size(); ++i) occ.nu[i] = std::log(th[i]);
                return s;
            }
            return wl_nonlinear_update(occ, hit, s);
        } else if constexpr (std::is_same_v<T, ShusAlpha>) {
            return shus_alpha_update(occ, hit);
        } else {
            return partial_bias_update(occ, hit);
        }
    }, occ.scheme);
}

SaDecomposition sa_residual(std::span<const double> theta, int hit, double stepsize) {
    if (hit < 1 || hit > static_cast<int>(theta.size()))
        throw std::invalid_argument("sa_residual: hit stratum out of range");
    if (stepsize < 0.0 || std::isnan(stepsize))
        throw std::invalid_argument("sa_residual: negative stepsize");
    const double th = theta[hit - 1];
    SaDecomposition out;
    out.h.resize(theta.size());
    out.lambda.resize(theta.size());
    for (size_t i = 0; i < theta.size(); ++i) {
        const double ind = (static_cast<int>(i) == hit - 1) ? 1.0 : 0.0;
        out.h[i] = theta[i] * (ind - th);
        out.lambda[i] = stepsize * theta[i] * th * (th - ind) / (1.0 + stepsize * th);
    }
    return out;
}

} // namespace shus
