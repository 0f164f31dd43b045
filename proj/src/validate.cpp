#include "shus/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "shus/oracle.hpp"
#include "shus/rng.hpp"

namespace shus {

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, int d, double floor_mass) {
    std::vector<double> th(d);
    double s = 0.0;
    for (auto& v : th) { v = floor_mass + uniform_open_closed(rng); s += v; }
    for (auto& v : th) v /= s;
    return th;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

} // namespace

CheckResult check_sa_identity(long triples, std::uint64_t seed, double threshold) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (long t = 0; t < triples; ++t) {
        const int d = 2 + static_cast<int>(rng() % 31);
        const auto th = random_simplex(rng, d, 0.0);
        const int hit = 1 + static_cast<int>(rng() % d);
        // log-uniform stepsizes across the scales the schemes produce
        const double s = std::exp(std::log(1e-8)
                                  + uniform_open_closed(rng) * std::log(2.0 / 1e-8));
        const auto dec = sa_residual(th, hit, s);
        const double denom = 1.0 + s * th[hit - 1];
        for (int i = 0; i < d; ++i) {
            const double ind = (i == hit - 1) ? 1.0 : 0.0;
            const double direct = th[i] * (1.0 + s * ind) / denom;
            const double split = th[i] + s * dec.h[i] + s * dec.lambda[i];
            worst = std::max(worst, std::abs(split - direct) / direct);
        }
    }
    return {"sa-identity", worst < threshold, worst, threshold,
            "max rel mismatch " + fmt(worst) + " over "
                + std::to_string(triples) + " triples"};
}

CheckResult check_stepsize_bounds(const SamplerSetup& setup, long steps,
                                  std::uint64_t seed, double slack) {
    const auto* p = std::get_if<Shus>(&setup.scheme);
    if (!p)
        throw std::invalid_argument("check_stepsize_bounds: needs the Shus scheme");
    Sampler sampler(setup, seed);
    const double g1 = p->gamma;  // S_0 = 1 for the uniform start
    const double th_min0 = 1.0 / setup.model.strata;
    double worst = 0.0;
    for (long n = 0; n < steps; ++n) {
        const double g = sampler.step().stepsize;  // gamma_{n+1}
        const double nd = static_cast<double>(n);
        const double lo = g1 / (1.0 + nd * g1);
        const double hi = g1 / std::sqrt(1.0 + 2.0 * nd * g1 * th_min0);
        if (g < lo) worst = std::max(worst, (lo - g) / lo);
        if (g > hi) worst = std::max(worst, (g - hi) / hi);
    }
    return {"stepsize-bounds", worst <= slack, worst, slack,
            "worst relative excursion " + fmt(worst) + " over "
                + std::to_string(steps) + " steps"};
}

CheckResult check_m_invariance(const SamplerSetup& setup, long steps,
                               std::uint64_t seed, double m_alt,
                               double threshold) {
    SamplerSetup alt = setup;
    alt.renorm_threshold = m_alt;
    Sampler a(setup, seed), b(alt, seed);
    double worst = 0.0;
    for (long n = 0; n < steps; ++n) {
        a.step();
        b.step();
        const auto la = a.occupation().log_theta();
        const auto lb = b.occupation().log_theta();
        for (size_t i = 0; i < la.size(); ++i) {
            const double rel = std::abs(la[i] - lb[i])
                             / std::max(1.0, std::abs(lb[i]));
            worst = std::max(worst, rel);
        }
    }
    return {"m-invariance", worst < threshold, worst, threshold,
            "max scaled ln theta gap " + fmt(worst) + " between M="
                + fmt(setup.renorm_threshold) + " and M=" + fmt(m_alt)};
}

CheckResult check_partial_bias_matches_plain(int strata, double gamma,
                                             long steps, std::uint64_t seed) {
    auto plain = make_log_occupation(Shus{gamma}, strata);
    auto partial = make_log_occupation(PartialBias{gamma, 1.0}, strata);
    std::mt19937_64 rng(seed);
    long mismatches = 0;
    for (long n = 0; n < steps; ++n) {
        const int hit = 1 + static_cast<int>(rng() % strata);
        shus_update(plain, hit);
        partial_bias_update(partial, hit);
        if (plain.renorm_count != partial.renorm_count
            || std::memcmp(plain.nu.data(), partial.nu.data(),
                           plain.nu.size() * sizeof(double)) != 0)
            ++mismatches;
    }
    return {"partial-bias-a1-bitmatch", mismatches == 0,
            static_cast<double>(mismatches), 0.0,
            std::to_string(mismatches) + " of " + std::to_string(steps)
                + " steps differ bitwise"};
}

CheckResult check_additive_multiplicative(const SamplerSetup& setup, long steps,
                                          std::uint64_t seed, double threshold) {
    const auto* p = std::get_if<Shus>(&setup.scheme);
    if (!p)
        throw std::invalid_argument("check_additive_multiplicative: needs Shus");
    Sampler sampler(setup, seed);
    const int d = setup.model.strata;
    std::vector<double> tau(d, 1.0 / d);  // additive shadow in linear scale
    double worst = 0.0;
    for (long n = 0; n < steps; ++n) {
        // theta before the update feeds the additive increment
        const auto theta_before = sampler.occupation().theta();
        const int hit = sampler.step().stratum;
        tau[hit - 1] += p->gamma * theta_before[hit - 1];
        double s = 0.0;
        for (double v : tau) s += v;
        const auto theta_mult = sampler.occupation().theta();
        for (int i = 0; i < d; ++i) {
            const double add = tau[i] / s;
            worst = std::max(worst, std::abs(add - theta_mult[i]) / theta_mult[i]);
        }
    }
    return {"additive-multiplicative", worst < threshold, worst, threshold,
            "max rel theta gap " + fmt(worst) + " over "
                + std::to_string(steps) + " steps"};
}

CheckResult check_mean_field_root(std::span<const double> theta_star,
                                  double threshold) {
    const auto h = mean_field(theta_star, theta_star);
    double worst = 0.0;
    for (double v : h) worst = std::max(worst, std::abs(v));
    return {"mean-field-root", worst <= threshold, worst, threshold,
            "sup |h(theta*)| = " + fmt(worst)};
}

CheckResult check_lyapunov_descent(std::span<const double> theta_star,
                                   long samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int d = static_cast<int>(theta_star.size());
    double worst = -std::numeric_limits<double>::infinity();
    for (long s = 0; s < samples; ++s) {
        const auto th = random_simplex(rng, d, 0.0);
        const auto h = mean_field(theta_star, th);
        const auto g = lyapunov_gradient(theta_star, th);
        double ip = 0.0;
        for (int i = 0; i < d; ++i) ip += g[i] * h[i];
        worst = std::max(worst, ip);
    }
    return {"lyapunov-descent", worst < 0.0, worst, 0.0,
            "largest <grad V, h> = " + fmt(worst) + " over "
                + std::to_string(samples) + " draws"};
}

CheckResult check_lyapunov_gradient_fd(std::span<const double> theta_star,
                                       long samples, std::uint64_t seed,
                                       double fd_step, double threshold) {
    std::mt19937_64 rng(seed);
    const int d = static_cast<int>(theta_star.size());
    double worst = 0.0;
    for (long s = 0; s < samples; ++s) {
        // keep components away from 0 so the finite difference is well posed
        auto th = random_simplex(rng, d, 0.05);
        const auto g = lyapunov_gradient(theta_star, th);
        for (int i = 0; i < d; ++i) {
            auto hi = th, lo = th;
            hi[i] += fd_step;
            lo[i] -= fd_step;
            const double fd = (lyapunov_value(theta_star, hi)
                               - lyapunov_value(theta_star, lo)) / (2.0 * fd_step);
            worst = std::max(worst, std::abs(fd - g[i]) / std::abs(g[i]));
        }
    }
    return {"lyapunov-gradient-fd", worst < threshold, worst, threshold,
            "max rel gradient mismatch " + fmt(worst)};
}

CheckResult check_biased_masses_uniform(std::span<const double> theta_star,
                                        double threshold) {
    const auto m = biased_stratum_masses(theta_star, theta_star);
    const double u = 1.0 / static_cast<double>(theta_star.size());
    double worst = 0.0;
    for (double v : m) worst = std::max(worst, std::abs(v - u));
    return {"biased-masses-uniform", worst <= threshold, worst, threshold,
            "sup |mass - 1/d| = " + fmt(worst)};
}

std::vector<CheckResult> run_validation_suite(const SamplerSetup& setup,
                                              std::span<const double> theta_star,
                                              std::uint64_t seed) {
    validate_setup(setup);
    std::vector<CheckResult> out;
    out.push_back(check_sa_identity(100000, derive_seed(seed, 101)));

    SamplerSetup plain = setup;
    plain.scheme = Shus{1.0};
    out.push_back(check_stepsize_bounds(plain, 100000, derive_seed(seed, 102)));
    out.push_back(check_additive_multiplicative(plain, 100000,
                                                derive_seed(seed, 103)));

    SamplerSetup slowed = setup;
    slowed.scheme = ShusAlpha{1.0, 0.6};
    slowed.renorm_threshold = 1e10;
    out.push_back(check_m_invariance(slowed, 100000, derive_seed(seed, 104), 1e6));

    out.push_back(check_partial_bias_matches_plain(setup.model.strata, 1.0,
                                                   100000, derive_seed(seed, 105)));
    out.push_back(check_mean_field_root(theta_star));
    out.push_back(check_lyapunov_descent(theta_star, 10000, derive_seed(seed, 106)));
    out.push_back(check_lyapunov_gradient_fd(theta_star, 100, derive_seed(seed, 107)));
    out.push_back(check_biased_masses_uniform(theta_star));
    return out;
}

} // namespace shus
