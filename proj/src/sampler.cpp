#include "shus/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace shus {

void validate_setup(const SamplerSetup& s) {
    validate_model(s.model);
    validate_proposal(s.proposal);
    validate_scheme(s.scheme);
    if (!(s.renorm_threshold > 1.0))
        throw std::invalid_argument("SamplerSetup: renorm threshold must exceed 1");
}

Sampler::Sampler(const SamplerSetup& setup, std::uint64_t seed, Point start)
    : setup_(setup),
      chain_(make_chain_state(start, seed)),
      occ_(make_log_occupation(setup.scheme, setup.model.strata,
                               setup.renorm_threshold)),
      bias_exponent_(scheme_bias_exponent(setup.scheme)) {
    validate_setup(setup_);
    if (std::abs(start.x1) > setup_.model.half_width)
        throw std::domain_error("Sampler: start position outside the strip");
}

StepInfo Sampler::step() {
    const StepResult r = mh_step(chain_, setup_.model, occ_.nu, bias_exponent_,
                                 setup_.proposal);
    const double t = apply_update(occ_, r.stratum, n_ + 1);
    ++n_;
    return {r.accepted, r.stratum, t};
}

} // namespace shus
