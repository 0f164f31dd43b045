#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shus/sampler.hpp"

// Measurement drivers and estimators: first-exit times over replicas,
// exponential / power-law fits of the mean exit time against beta,
// cross-replica weight statistics, stepsize traces, visit histograms.

namespace shus {

struct ExitResult {
    long iterations = 0;  // first step index n >= 1 with x1 > threshold
    bool censored = false;
};

// Run an adaptive chain from `start` until its first coordinate exceeds
// `threshold`, or until `cap` steps (then censored = true, iterations = cap).
// Optionally accumulates the post-decision stratum visit counts up to and
// including the exit step into `histogram` (resized to d).
ExitResult first_exit_time(const SamplerSetup& setup, std::uint64_t seed,
                           long cap = 1000000000L, Point start = {-1.0, 0.0},
                           double threshold = 1.0,
                           std::vector<long>* histogram = nullptr);

struct ExitTimeEstimate {
    double beta = 0.0;
    double mean = 0.0;       // over uncensored replicas
    double std_error = 0.0;  // sample std / sqrt(#uncensored)
    long censored = 0;
    long replicas = 0;
    std::vector<ExitResult> samples;  // one per replica, in replica order
};

// K independent replicas with seeds derive_seed(seed, r), r = 0..K-1, fanned
// out over `threads` workers. Results are keyed by replica index, so the
// estimate is identical whatever the worker count. Throws
// std::invalid_argument on K < 1 and std::runtime_error if every replica
// was censored.
ExitTimeEstimate mean_exit_time(const SamplerSetup& setup, long replicas,
                                std::uint64_t seed, long cap = 1000000000L,
                                int threads = 1);

struct FitResult {
    double slope = 0.0;      // exponent
    double prefactor = 0.0;  // exp(intercept)
    double residual = 0.0;   // rms residual of ln(value) against the fit
    int points = 0;
};

// Least squares of ln(values) against the abscissa: values ~ C exp(mu x).
// Needs >= 3 points, positive values, non-degenerate abscissa spread.
FitResult fit_exponential_in_beta(std::span<const double> betas,
                                  std::span<const double> values);

// Least squares of ln(values) against ln(abscissa): values ~ C x^mu.
// Abscissa must additionally be positive.
FitResult fit_power_law(std::span<const double> betas,
                        std::span<const double> values);

struct WeightStatistics {
    std::vector<long> checkpoints;              // step counts n
    std::vector<std::vector<double>> mean;      // [checkpoint][stratum], of ln theta
    std::vector<std::vector<double>> variance;  // unbiased, across replicas
    std::vector<double> bias_norm;              // ||mean ./ ln theta* - 1||_2
};

// Cross-replica statistics of ln theta_n(i): `log_theta` is indexed
// [replica][checkpoint][stratum]. Requires >= 2 replicas, consistent shapes,
// and ln theta*(i) != 0 for every stratum.
WeightStatistics weight_statistics(
    const std::vector<std::vector<std::vector<double>>>& log_theta,
    std::span<const long> checkpoints,
    std::span<const double> log_theta_star);

// Runs K replicas of `setup` for n_max steps each and records ln theta at the
// given checkpoint step counts (strictly increasing, last <= n_max). Fanned
// out like mean_exit_time; output is [replica][checkpoint][stratum].
std::vector<std::vector<std::vector<double>>> run_weight_replicas(
    const SamplerSetup& setup, long replicas, std::span<const long> checkpoints,
    std::uint64_t seed, int threads = 1);

// Log-spaced step counts, about `per_decade` of them per decade of n, from
// `lo` to `hi` inclusive, strictly increasing.
std::vector<long> log_spaced_steps(long lo, long hi, int per_decade);

struct TracePoint {
    long n = 0;
    double stepsize = 0.0;    // gamma_n actually applied at step n
    double normalized = 0.0;  // n gamma_n / d, or its slowed-down analogue
};

// Single run of `n_max` steps recording the applied stepsize at log-spaced
// steps. The normalization is chosen so the trace tends to 1: n gamma_n / d
// for Shus/PartialBias, n^alpha gamma_n / gamma_star for the deterministic
// schedule, and n^alpha gamma_n / (gamma(alpha)^{1-alpha} d^alpha
// (1-alpha)^alpha) for ShusAlpha.
std::vector<TracePoint> stepsize_trace(const SamplerSetup& setup, long n_max,
                                       std::uint64_t seed, int per_decade = 16);

struct StratumHistogram {
    std::vector<long> counts;
    int significantly_visited = 0;  // strata with counts >= fraction * max
};

// Counts are taken as given (e.g. from first_exit_time); a stratum counts as
// significantly visited when it holds at least `fraction` of the largest
// count. Throws on empty counts, negative entries, or fraction outside (0, 1].
StratumHistogram stratum_histogram(std::span<const long> counts,
                                   double fraction = 0.05);

} // namespace shus
