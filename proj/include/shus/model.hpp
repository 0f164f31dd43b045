#pragma once

#include <vector>

// Target model: a two-well 2D potential restricted to the strip
// [-R, R] x (-inf, inf), tempered by beta, with the first coordinate split
// into d equal-width strata. Strata are numbered 1..d everywhere in the
// public interface (matching the output files); implementations subtract 1
// only when subscripting vectors.

namespace shus {

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

// Two deep wells near (+-1, 0), two shallower features along x1 = 0, and a
// quartic confinement. Exactly symmetric under x1 -> -x1, including in
// floating point: the two deep-well terms swap under mirroring, so they are
// summed as a pair (addition commutes exactly).
double potential_energy(Point p);

struct TargetModel {
    double beta = 1.0;
    int strata = 12;           // d
    double half_width = 1.2;   // R, the strip is [-R, R] in x1
};

// Throws std::invalid_argument on beta <= 0, strata < 1, half_width <= 0.
void validate_model(const TargetModel& m);

// Stratum boundaries a_1 = -R < a_2 < ... < a_{d+1} = R.
std::vector<double> stratum_edges(const TargetModel& m);

// Index of the stratum containing x1, in 1..d. The right edge x1 = R maps to
// stratum d. Throws std::domain_error for |x1| > R.
int stratum_index(const TargetModel& m, double x1);

// log pi up to the (never computed) normalization: -beta * U inside the
// strip, -infinity outside.
double log_target_density(const TargetModel& m, Point p);

struct ReferenceWeights {
    std::vector<double> theta;      // theta*(i), positive, sums to 1
    std::vector<double> log_theta;  // ln theta*(i)
    double max_rel_error = 0.0;     // stratum-wise |theta_r - theta_{r/2}| / theta_r
    int resolution = 0;
    double x2_lo = 0.0;
    double x2_hi = 0.0;
};

// Per-stratum masses of the target, by composite Simpson quadrature on each
// stratum times [x2_lo, x2_hi]. `resolution` counts nodes across the full
// x1 range and across x2; each stratum gets at least 21 x1 nodes. The error
// estimate compares against a half-resolution pass; throws std::runtime_error
// if it exceeds `tolerance`, std::invalid_argument on bad arguments.
ReferenceWeights reference_weights(const TargetModel& m,
                                   int resolution = 2001,
                                   double x2_lo = -3.0,
                                   double x2_hi = 4.5,
                                   double tolerance = 1e-6);

} // namespace shus
