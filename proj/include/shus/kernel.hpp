#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "shus/model.hpp"

// Metropolis-Hastings kernel targeting the stratum-reweighted density
// pi_theta: an isotropic Gaussian random walk proposal, accepted with the
// usual ratio where each stratum's density is divided by theta(stratum)^a
// (a = 1 for the fully biased chain). Weights enter only through differences
// of their logs, so callers pass unnormalized log weights directly.

namespace shus {

struct ProposalConfig {
    double sigma = 0.2;  // isotropic step scale; defaults to 2R/d upstream
};

// Throws std::invalid_argument on sigma <= 0.
void validate_proposal(const ProposalConfig& c);

struct ChainState {
    Point position{-1.0, 0.0};
    long step_count = 0;
    std::mt19937_64 rng;
};

ChainState make_chain_state(Point start, std::uint64_t seed);

// Gaussian displacement of the current position; consumes exactly one
// Box-Muller pair (two uniforms). The candidate may leave the strip; the
// acceptance step deals with that.
Point propose(ChainState& s, const ProposalConfig& c);

// ln of the acceptance ratio for from -> to:
//   [-beta U(to)] - [-beta U(from)] + a * (lw[I(from)] - lw[I(to)])
// -infinity when `to` is outside the strip. Exactly antisymmetric under
// swapping from/to (both are differences). `log_weights` holds one entry per
// stratum; any common shift cancels. Throws std::domain_error if `from` is
// outside the strip, std::invalid_argument on a size mismatch.
double log_acceptance(const TargetModel& m, std::span<const double> log_weights,
                      double bias_exponent, Point from, Point to);

struct StepResult {
    bool accepted = false;
    int stratum = 0;  // stratum of the post-decision position, 1-based
};

// One MH step: propose, accept with probability exp(min(0, log_acceptance)),
// advance step_count. Consumes exactly three uniforms whatever the outcome,
// so the stream layout is independent of the path taken. The position never
// leaves the strip (out-of-strip candidates have acceptance -infinity).
StepResult mh_step(ChainState& s, const TargetModel& m,
                   std::span<const double> log_weights, double bias_exponent,
                   const ProposalConfig& c);

} // namespace shus
