#pragma once

#include <cstdint>

#include "shus/adapt.hpp"
#include "shus/kernel.hpp"
#include "shus/model.hpp"

// The adaptive chain: alternate one MH step against the current weights with
// one weight update at the post-decision stratum.

namespace shus {

struct SamplerSetup {
    TargetModel model;
    ProposalConfig proposal;
    UpdateScheme scheme{Shus{}};
    double renorm_threshold = 1e10;  // M
};

void validate_setup(const SamplerSetup& s);

struct StepInfo {
    bool accepted = false;
    int stratum = 0;       // post-decision stratum, 1-based
    double stepsize = 0.0; // multiplier argument applied to that stratum
};

class Sampler {
public:
    // Starts at (-1, 0) by default (inside the left well) with uniform
    // weights tau_0 = (1/d, ..., 1/d).
    Sampler(const SamplerSetup& setup, std::uint64_t seed,
            Point start = {-1.0, 0.0});

    StepInfo step();

    long steps() const { return n_; }
    const ChainState& chain() const { return chain_; }
    const LogOccupation& occupation() const { return occ_; }
    double bias_exponent() const { return bias_exponent_; }

private:
    SamplerSetup setup_;
    ChainState chain_;
    LogOccupation occ_;
    double bias_exponent_ = 1.0;
    long n_ = 0;
};

} // namespace shus
