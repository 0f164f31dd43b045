#pragma once

#include <span>
#include <variant>
#include <vector>

// Adaptive weight updates. All schemes keep the unnormalized stratum weights
// tau(i) in log scale from the start: nu(i) = ln tau(i) - r * ln M, where r
// counts how many times the total has been renormalized by M. This makes the
// weights usable at any beta (tau grows without bound) with a single code
// path, and the invariant
//     S_n = M^r * sum_i exp(nu(i))
// holds exactly after every update.

namespace shus {

// tau_{n+1}(i) = tau_n(i) (1 + gamma_{n+1} 1{i hit}), gamma_{n+1} = gamma/S_n.
// Equivalent to the additive form tau + gamma * theta(hit).
struct Shus {
    double gamma = 1.0;
};

// Wang-Landau with the deterministic stepsize gamma_star / n^alpha; `linear`
// selects the update acting on normalized weights directly.
struct WlDeterministic {
    double gamma_star = 1.0;
    double alpha = 0.8;    // in (1/2, 1]
    bool linear = false;   // linear form needs gamma_star < 1
};

// Slowed-down variant: stepsize gamma(alpha) / [ln(1 + S_n)]^{alpha/(1-alpha)}
// with gamma(alpha) = (1-alpha)^{-alpha/(1-alpha)} gamma, tuned so that
// n^alpha gamma_n converges to gamma(alpha)^{1-alpha} d^alpha (1-alpha)^alpha.
struct ShusAlpha {
    double gamma = 1.0;
    double alpha = 0.6;    // in (1/2, 1)
};

// Penalize only a fraction of the log weight in the sampler and grow weights
// as tau + gamma * theta(hit)^a. a = 1 reproduces Shus bit for bit.
struct PartialBias {
    double gamma = 1.0;
    double exponent = 1.0; // a in [0, 1]
};

using UpdateScheme = std::variant<Shus, WlDeterministic, ShusAlpha, PartialBias>;

// Throws std::invalid_argument on out-of-range parameters. The linear WL
// update requires a first stepsize below 1 (gamma_star < 1), otherwise the
// non-hit weights can be driven to zero or below.
void validate_scheme(const UpdateScheme& s);

// Exponent a the kernel should use with this scheme: PartialBias's a, 1 else.
double scheme_bias_exponent(const UpdateScheme& s);

// gamma(alpha) = (1-alpha)^{-alpha/(1-alpha)} * gamma.
double gamma_alpha(double gamma, double alpha);

struct LogOccupation {
    std::vector<double> nu;        // ln tau(i) - renorm_count * ln M
    long renorm_count = 0;         // r
    double renorm_threshold = 1e10;  // M
    UpdateScheme scheme{Shus{}};

    int strata() const { return static_cast<int>(nu.size()); }
    double sum_exp() const;    // sum_i exp(nu(i)), plain sum as in the update rules
    double log_norm() const;   // ln sum_i exp(nu(i)), max-shifted
    double log_total() const;  // ln S = renorm_count * ln M + log_norm()
    // ln(1 + S) evaluated as ln(M^{-r} + sum exp nu) + r ln M, the exact
    // decomposition used by the slowed-down stepsize.
    double log1p_total() const;
    double log_theta(int stratum) const;  // nu(i) - log_norm(), 1-based
    std::vector<double> log_theta() const;
    std::vector<double> theta() const;
};

// Uniform start tau_0 = (1/d, ..., 1/d), so S_0 = 1.
LogOccupation make_log_occupation(const UpdateScheme& s, int strata,
                                  double renorm_threshold = 1e10);

// Start from explicit positive unnormalized weights (tests, restarts).
LogOccupation make_log_occupation_from(const UpdateScheme& s,
                                       std::span<const double> tau,
                                       double renorm_threshold = 1e10);

// Stepsize gamma_n for update number n (n >= 1), evaluated on the occupation
// state after n - 1 updates. Shus and ShusAlpha read the state and ignore n;
// WlDeterministic returns gamma_star / n^alpha. PartialBias has no
// predictable stepsize (it depends on which stratum gets hit); asking for it
// throws std::logic_error.
double current_stepsize(const LogOccupation& occ, long n);

// Each *_update applies one hit to stratum `hit` (1-based), renormalizes if
// the in-scale total reached M, and returns the multiplier argument actually
// applied: nu(hit) grew by log1p(return value).
double shus_update(LogOccupation& occ, int hit);
double shus_alpha_update(LogOccupation& occ, int hit);
double partial_bias_update(LogOccupation& occ, int hit);

// Wang-Landau nonlinear form with an externally supplied stepsize (>= 0;
// 0 is the identity). Throws std::invalid_argument on a negative stepsize.
double wl_nonlinear_update(LogOccupation& occ, int hit, double stepsize);

// Wang-Landau linear form on normalized weights:
//   theta'(i) = theta(i) + stepsize * theta(i) * (1{i hit} - theta(hit)).
// Preserves the total; throws std::runtime_error if a weight would leave
// (0, 1), which cannot happen for stepsize < 1.
void wl_linear_update(std::vector<double>& theta, int hit, double stepsize);

// Dispatch on occ.scheme; `n` is the 1-based number of this update (only the
// deterministic schedule uses it). Returns the applied multiplier argument
// (for the linear WL form, the stepsize itself).
double apply_update(LogOccupation& occ, int hit, long n);

// One-step stochastic-approximation split of the normalized weights:
//   theta'(i) = theta(i) + s H(i) + s Lambda(i)
// with H(i) = theta(i)(1{i hit} - theta(hit)) mean-zero under the biased
// chain and |Lambda(i)| <= s. Inputs are the normalized weights before the
// update and the stepsize s.
struct SaDecomposition {
    std::vector<double> h;
    std::vector<double> lambda;
};
SaDecomposition sa_residual(std::span<const double> theta, int hit, double stepsize);

} // namespace shus
