#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shus/sampler.hpp"

// Self-checks of the update rules and oracles against quantities that must
// hold exactly (up to floating point) on every sample path. Each check
// returns a measured worst case so callers can pick their own thresholds;
// the pass flag uses the documented default.

namespace shus {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // worst-case figure the threshold applies to
    double threshold = 0.0;
    std::string detail;
};

// Multiplicative update vs mean-term + remainder split, on random
// (theta, hit, stepsize) triples. Measured: max relative mismatch.
CheckResult check_sa_identity(long triples, std::uint64_t seed,
                              double threshold = 1e-12);

// Pathwise stepsize bounds gamma_1/(1+n gamma_1) <= gamma_{n+1} <=
// gamma_1/sqrt(1+2 n gamma_1 min_i theta_0(i)) along one run. Measured: the
// worst relative excursion outside the bounds (0 when inside everywhere).
CheckResult check_stepsize_bounds(const SamplerSetup& setup, long steps,
                                  std::uint64_t seed, double slack = 1e-12);

// Two runs differing only in the renormalization threshold M; same seed.
// Measured: max over steps and strata of |ln theta difference| scaled by
// max(1, |ln theta|).
CheckResult check_m_invariance(const SamplerSetup& setup, long steps,
                               std::uint64_t seed, double m_alt,
                               double threshold = 1e-9);

// Identical weight trajectories (bitwise) from the partial-bias update at
// exponent 1 and the plain update, over random hit sequences.
CheckResult check_partial_bias_matches_plain(int strata, double gamma,
                                             long steps, std::uint64_t seed);

// Log-scale multiplicative run against a linear-space additive shadow
// tau + gamma * theta(hit). Measured: max relative theta mismatch.
CheckResult check_additive_multiplicative(const SamplerSetup& setup, long steps,
                                          std::uint64_t seed,
                                          double threshold = 1e-9);

// mean_field(theta*) = 0 (sup norm).
CheckResult check_mean_field_root(std::span<const double> theta_star,
                                  double threshold = 1e-15);

// <grad V, h> < 0 on random interior weight vectors. Measured: the largest
// (least negative) inner product found.
CheckResult check_lyapunov_descent(std::span<const double> theta_star,
                                   long samples, std::uint64_t seed);

// Closed-form Lyapunov gradient against a central finite difference.
CheckResult check_lyapunov_gradient_fd(std::span<const double> theta_star,
                                       long samples, std::uint64_t seed,
                                       double fd_step = 1e-5,
                                       double threshold = 1e-6);

// biased_stratum_masses(theta*, theta*) is uniform (sup-norm distance to 1/d).
CheckResult check_biased_masses_uniform(std::span<const double> theta_star,
                                        double threshold = 1e-15);

// The whole suite at quick, CLI-friendly sizes. `theta_star` should come
// from reference_weights for the model being validated.
std::vector<CheckResult> run_validation_suite(const SamplerSetup& setup,
                                              std::span<const double> theta_star,
                                              std::uint64_t seed);

} // namespace shus
