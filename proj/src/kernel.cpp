#include "shus/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shus/rng.hpp"

namespace shus {

void validate_proposal(const ProposalConfig& c) {
    if (!(c.sigma > 0.0))
        throw std::invalid_argument("ProposalConfig: sigma must be positive");
}

ChainState make_chain_state(Point start, std::uint64_t seed) {
    ChainState s;
    s.position = start;
    s.step_count = 0;
    s.rng.seed(seed);
    return s;
}

Point propose(ChainState& s, const ProposalConfig& c) {
    double z1, z2;
    normal_pair(s.rng, z1, z2);
    return {s.position.x1 + c.sigma * z1, s.position.x2 + c.sigma * z2};
}

double log_acceptance(const TargetModel& m, std::span<const double> log_weights,
                      double bias_exponent, Point from, Point to) {
    if (static_cast<int>(log_weights.size()) != m.strata)
        throw std::invalid_argument("log_acceptance: weight count != strata");
    const int i_from = stratum_index(m, from.x1);  // throws if `from` is outside
    if (std::abs(to.x1) > m.half_width)
        return -std::numeric_limits<double>::infinity();
    const int i_to = stratum_index(m, to.x1);
    const double dlp = -m.beta * potential_energy(to)
                     - (-m.beta * potential_energy(from));
    const double dlw = log_weights[i_from - 1] - log_weights[i_to - 1];
    return dlp + bias_exponent * dlw;
}

StepResult mh_step(ChainState& s, const TargetModel& m,
                   std::span<const double> log_weights, double bias_exponent,
                   const ProposalConfig& c) {
    const Point candidate = propose(s, c);
    const double la = log_acceptance(m, log_weights, bias_exponent,
                                     s.position, candidate);
    // Always draw the decision uniform, even for a -infinity ratio: three
    // uniforms per step, unconditionally.
    const double u = uniform_open_closed(s.rng);
    StepResult r;
    if (std::log(u) <= la) {
        s.position = candidate;
        r.accepted = true;
    }
    ++s.step_count;
    r.stratum = stratum_index(m, s.position.x1);
    return r;
}

} // namespace shus
