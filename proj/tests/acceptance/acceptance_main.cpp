// End-to-end acceptance gate. Twelve checks, each printing one PASS/FAIL
// line; exit status is the number of failures. Thresholds and run sizes are
// pinned here on purpose: they are the contract, not tuning knobs.
//
// Heavy statistical checks (6-9) size their replica counts so that sampling
// noise stays far from the thresholds; see the per-check notes. Check 6 pins
// an exit-time band this kernel does not reach at the pinned proposal scale
// (its note explains the mechanism) and is expected to fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "shus/diagnostics.hpp"
#include "shus/oracle.hpp"
#include "shus/rng.hpp"
#include "shus/validate.hpp"

namespace {

constexpr std::uint64_t kSeed = 20260815ULL;

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void begin(int id) {
    (void)id;
    g_t0 = std::chrono::steady_clock::now();
}

void report(int id, const char* name, bool pass, const std::string& detail) {
    const double secs = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - g_t0).count();
    std::printf("[%s] %02d %s: %s [%.1fs]\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

shus::SamplerSetup base12(double beta, shus::UpdateScheme scheme) {
    shus::SamplerSetup s;
    s.model = {beta, 12};
    s.proposal = {0.2};
    s.scheme = scheme;
    return s;
}

// 1: one multiplicative update equals the mean-term + remainder split
// exactly, over random weights, hit strata, and stepsizes.
void c01_sa_identity() {
    begin(1);
    const auto r = shus::check_sa_identity(100000, shus::derive_seed(kSeed, 1),
                                           1e-12);
    report(1, "sa-identity", r.pass, r.detail + " (< 1e-12)");
}

// 2: pathwise stepsize bounds hold at every step of a long run.
void c02_stepsize_bounds() {
    begin(2);
    const auto r = shus::check_stepsize_bounds(base12(1.0, shus::Shus{1.0}),
                                               1000000,
                                               shus::derive_seed(kSeed, 2));
    report(2, "stepsize-bounds", r.pass, r.detail + " (excursion <= 1e-12)");
}

// 3: n gamma_n approaches the number of strata.
void c03_stepsize_limit() {
    begin(3);
    shus::Sampler sampler(base12(1.0, shus::Shus{1.0}),
                          shus::derive_seed(kSeed, 3));
    const long n = 1000000;
    double g = 0.0;
    for (long k = 0; k < n; ++k) g = sampler.step().stepsize;
    const double dev = std::abs(static_cast<double>(n) * g / 12.0 - 1.0);
    report(3, "stepsize-limit", dev < 0.05,
           "|n gamma_n / d - 1| = " + num(dev) + " at n=1e6 (< 0.05)");
}

// 4: the slowed-down stepsize approaches its closed-form limit
// gamma(alpha)^{1-alpha} d^alpha (1-alpha)^alpha / n^alpha.
void c04_slowed_stepsize_limit() {
    begin(4);
    const double alpha = 0.6;
    shus::Sampler sampler(base12(1.0, shus::ShusAlpha{1.0, alpha}),
                          shus::derive_seed(kSeed, 4));
    const long n = 1000000;
    double g = 0.0;
    for (long k = 0; k < n; ++k) g = sampler.step().stepsize;
    const double limit = std::pow(shus::gamma_alpha(1.0, alpha), 1.0 - alpha)
                       * std::pow(12.0, alpha) * std::pow(1.0 - alpha, alpha);
    const double dev = std::abs(std::pow(static_cast<double>(n), alpha) * g
                                / limit - 1.0);
    report(4, "slowed-stepsize-limit", dev < 0.10,
           "|n^a gamma_n / limit - 1| = " + num(dev) + " at n=1e6 (< 0.10)");
}

// 5: the learned weights converge to the quadrature reference.
void c05_weight_convergence() {
    begin(5);
    const auto setup = base12(1.0, shus::Shus{1.0});
    const auto ref = shus::reference_weights(setup.model);
    shus::Sampler sampler(setup, shus::derive_seed(kSeed, 5));
    for (long k = 0; k < 10000000; ++k) sampler.step();
    const auto lt = sampler.occupation().log_theta();
    double worst = 0.0;
    for (int i = 0; i < 12; ++i)
        worst = std::max(worst, std::abs(lt[i] - ref.log_theta[i]));
    report(5, "weight-convergence", worst < 0.05,
           "max |ln theta - ln theta*| = " + num(worst)
               + " after 1e7 steps (< 0.05)");
}

// 6: mean exit times from the starting well at d=6 with the proposal scale
// equal to the stratum width (sigma=0.4). The band encodes the exponential
// barrier law, which holds for local proposals. At sigma=0.4 it is out of
// reach: a single accepted 3-4 sigma move carries the chain from the
// flattened left region straight into the right basin, and because the two
// wells have equal depth that hop costs no energy, so exit times grow far
// slower than exponentially in beta. Route tracing shows most replicas never
// touch the saddle region |x1| < 0.2 at all, and an independent transcription
// of the update rule gives the same means, so the configuration is pinned
// and the check is expected to fail. The companion fit in the detail line
// (same strata, sigma=0.1) shows the band is reached once proposals are
// local enough that the chain must walk through the barrier.
void c06_exit_exponential() {
    begin(6);
    const std::vector<double> betas{5.0, 6.0, 7.0, 8.0};
    auto fit_at = [&](double sigma, int seed_base) {
        std::vector<double> means;
        for (size_t b = 0; b < betas.size(); ++b) {
            shus::SamplerSetup s;
            s.model = {betas[b], 6};
            s.proposal = {sigma};
            s.scheme = shus::Shus{1.0};
            const auto est = shus::mean_exit_time(
                s, 200, shus::derive_seed(kSeed, seed_base + static_cast<int>(b)),
                10000000);
            means.push_back(est.mean);
        }
        return shus::fit_exponential_in_beta(betas, means);
    };
    const auto coarse = fit_at(0.4, 600);
    const auto fine = fit_at(0.1, 640);
    const bool pass = coarse.slope > 1.05 && coarse.slope < 1.45;
    report(6, "exit-exponential", pass,
           "rate = " + num(coarse.slope) + ", prefactor = "
               + num(coarse.prefactor)
               + " (rate in [1.05, 1.45]); sigma=0.1 companion rate = "
               + num(fine.slope));
}

// 7: a larger gamma shrinks the exit-time prefactor without changing the
// rate; the picture is C proportional to 1/sqrt(gamma), so C(4)/C(1) should
// sit near 0.5. K=4000 per point keeps the ratio's standard error near 10%.
void c07_gamma_prefactor() {
    begin(7);
    const std::vector<double> betas{5.0, 6.0, 7.0};
    double pref[2] = {0.0, 0.0};
    const double gammas[2] = {1.0, 4.0};
    for (int g = 0; g < 2; ++g) {
        std::vector<double> means;
        for (size_t b = 0; b < betas.size(); ++b) {
            const auto est = shus::mean_exit_time(
                base12(betas[b], shus::Shus{gammas[g]}), 4000,
                shus::derive_seed(kSeed, 700 + 10 * g + static_cast<int>(b)),
                10000000);
            means.push_back(est.mean);
        }
        pref[g] = shus::fit_exponential_in_beta(betas, means).prefactor;
    }
    const double ratio = pref[1] / pref[0];
    const bool pass = ratio > 0.35 && ratio < 0.70;
    report(7, "gamma-prefactor", pass,
           "C(gamma=4)/C(gamma=1) = " + num(ratio) + " (in [0.35, 0.70])");
}

// 8: under the slowed-down schedule the exit time grows only polynomially,
// with exponent near 1/(1-alpha) = 2.5 at alpha = 0.6. Same operating point
// as check 6 so the exponential-vs-polynomial contrast is like for like.
void c08_exit_power_law() {
    begin(8);
    const std::vector<double> betas{5.0, 7.0, 9.0, 11.0};
    std::vector<double> means;
    for (size_t b = 0; b < betas.size(); ++b) {
        const auto est = shus::mean_exit_time(
            base12(betas[b], shus::ShusAlpha{1.0, 0.6}), 200,
            shus::derive_seed(kSeed, 800 + static_cast<int>(b)), 10000000);
        means.push_back(est.mean);
    }
    const auto f = shus::fit_power_law(betas, means);
    const bool pass = f.slope > 2.0 && f.slope < 3.0;
    report(8, "exit-power-law", pass,
           "exponent = " + num(f.slope) + " (in [2.0, 3.0])");
}

// 9: across-replica statistics of ln theta_n decay at the predicted rates:
// variance like n^{-alpha} for the slowed-down scheme, systematic error like
// n^{-1} for the plain one. Fit windows sit inside the asymptotic regime
// (late enough that theta has locked on, early enough that the replica
// average still resolves the decaying signal at K=1000).
void c09_decay_rates() {
    begin(9);
    const long n_max = 1000000;
    const auto checkpoints = shus::log_spaced_steps(100, n_max, 8);

    auto window_fit = [&](const std::vector<double>& ns,
                          const std::vector<double>& vals, long lo, long hi) {
        std::vector<double> xs, ys;
        for (size_t i = 0; i < ns.size(); ++i)
            if (ns[i] >= static_cast<double>(lo) && ns[i] <= static_cast<double>(hi)) {
                xs.push_back(ns[i]);
                ys.push_back(vals[i]);
            }
        return shus::fit_power_law(xs, ys);
    };

    // slowed-down scheme: median across strata of the variance exponent
    const auto setup_a = base12(1.0, shus::ShusAlpha{1.0, 0.6});
    const auto reps_a = shus::run_weight_replicas(setup_a, 1000, checkpoints,
                                                  shus::derive_seed(kSeed, 91));
    const auto ref = shus::reference_weights(setup_a.model);
    const auto stats_a = shus::weight_statistics(reps_a, checkpoints,
                                                 ref.log_theta);
    std::vector<double> ns(checkpoints.begin(), checkpoints.end());
    std::vector<double> exps;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> v;
        for (size_t c = 0; c < ns.size(); ++c) v.push_back(stats_a.variance[c][i]);
        exps.push_back(-window_fit(ns, v, 10000, n_max).slope);
    }
    std::sort(exps.begin(), exps.end());
    const double var_exp = exps[exps.size() / 2];
    const bool pass_a = std::abs(var_exp - 0.6) < 0.15;

    // plain scheme: decay of the systematic error of the replica mean
    const auto setup_b = base12(1.0, shus::Shus{1.0});
    const auto reps_b = shus::run_weight_replicas(setup_b, 1000, checkpoints,
                                                  shus::derive_seed(kSeed, 92));
    const auto stats_b = shus::weight_statistics(reps_b, checkpoints,
                                                 ref.log_theta);
    std::vector<double> bias(stats_b.bias_norm.begin(), stats_b.bias_norm.end());
    const double bias_exp = -window_fit(ns, bias, 1000, 100000).slope;
    const bool pass_b = std::abs(bias_exp - 1.0) < 0.15;

    report(9, "decay-rates", pass_a && pass_b,
           "variance exponent = " + num(var_exp) + " (0.6 +- 0.15), "
               + "bias exponent = " + num(bias_exp) + " (1.0 +- 0.15)");
}

// 10: the weight trajectory does not depend on the renormalization threshold.
void c10_renorm_invariance() {
    begin(10);
    auto setup = base12(10.0, shus::ShusAlpha{1.0, 0.6});
    setup.renorm_threshold = 1e10;
    const auto r = shus::check_m_invariance(setup, 100000,
                                            shus::derive_seed(kSeed, 10), 1e6);
    report(10, "renorm-invariance", r.pass, r.detail + " (< 1e-9)");
}

// 11: mean-field oracles around the quadrature reference: exact root,
// strict Lyapunov descent, gradient matching a finite difference, uniform
// biased occupancy at the fixed point.
void c11_oracles() {
    begin(11);
    const auto ref = shus::reference_weights({1.0, 12});
    const auto r1 = shus::check_mean_field_root(ref.theta);
    const auto r2 = shus::check_lyapunov_descent(ref.theta, 10000,
                                                 shus::derive_seed(kSeed, 111));
    const auto r3 = shus::check_lyapunov_gradient_fd(ref.theta, 200,
                                                     shus::derive_seed(kSeed, 112));
    const auto r4 = shus::check_biased_masses_uniform(ref.theta);
    const bool pass = r1.pass && r2.pass && r3.pass && r4.pass;
    report(11, "mean-field-oracles", pass,
           "root " + num(r1.measured) + ", descent " + num(r2.measured)
               + ", fd " + num(r3.measured) + ", masses " + num(r4.measured));
}

// 12: the partial-bias update at exponent 1 is the plain update, bit for bit.
void c12_partial_bias_bitmatch() {
    begin(12);
    const auto r = shus::check_partial_bias_matches_plain(
        12, 1.0, 100000, shus::derive_seed(kSeed, 12));
    report(12, "partial-bias-bitmatch", r.pass, r.detail);
}

} // namespace

int main() {
    c01_sa_identity();
    c02_stepsize_bounds();
    c03_stepsize_limit();
    c04_slowed_stepsize_limit();
    c05_weight_convergence();
    c06_exit_exponential();
    c07_gamma_prefactor();
    c08_exit_power_law();
    c09_decay_rates();
    c10_renorm_invariance();
    c11_oracles();
    c12_partial_bias_bitmatch();
    std::printf("%s: %d of 12 criteria failed\n",
                g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures;
}
