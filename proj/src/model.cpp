#include "shus/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace shus {

double potential_energy(Point p) {
    const double x1 = p.x1;
    const double x2 = p.x2;
    const double x1sq = x1 * x1;
    const double ga = std::exp(-x1sq - (x2 - 1.0 / 3.0) * (x2 - 1.0 / 3.0));
    const double gb = std::exp(-x1sq - (x2 - 5.0 / 3.0) * (x2 - 5.0 / 3.0));
    // The deep wells swap under x1 -> -x1; summing them as a pair keeps the
    // mirror symmetry exact in floating point.
    const double wells = std::exp(-(x1 - 1.0) * (x1 - 1.0) - x2 * x2)
                       + std::exp(-(x1 + 1.0) * (x1 + 1.0) - x2 * x2);
    const double q1 = x1sq * x1sq;
    const double t2 = (x2 - 1.0 / 3.0) * (x2 - 1.0 / 3.0);
    const double q2 = t2 * t2;
    return 3.0 * ga - 3.0 * gb - 5.0 * wells + 0.2 * q1 + 0.2 * q2;
}

void validate_model(const TargetModel& m) {
    if (!(m.beta > 0.0))
        throw std::invalid_argument("TargetModel: beta must be positive");
    if (m.strata < 1)
        throw std::invalid_argument("TargetModel: need at least one stratum");
    if (!(m.half_width > 0.0))
        throw std::invalid_argument("TargetModel: half_width must be positive");
}

std::vector<double> stratum_edges(const TargetModel& m) {
    const double R = m.half_width;
    const int d = m.strata;
    std::vector<double> edges(d + 1);
    for (int l = 0; l <= d; ++l)
        edges[l] = -R + 2.0 * R * static_cast<double>(l) / static_cast<double>(d);
    edges[0] = -R;
    edges[d] = R;
    return edges;
}

int stratum_index(const TargetModel& m, double x1) {
    const double R = m.half_width;
    if (std::abs(x1) > R || std::isnan(x1))
        throw std::domain_error("stratum_index: x1 = " + std::to_string(x1)
                                + " outside [-R, R]");
    int idx = static_cast<int>(std::floor((x1 + R) / (2.0 * R) * m.strata)) + 1;
    if (idx < 1) idx = 1;
    if (idx > m.strata) idx = m.strata;  // right edge belongs to the last stratum
    return idx;
}

double log_target_density(const TargetModel& m, Point p) {
    if (std::abs(p.x1) > m.half_width)
        return -std::numeric_limits<double>::infinity();
    return -m.beta * potential_energy(p);
}

namespace {

// Composite Simpson weights on n nodes (n odd, >= 3), step h.
std::vector<double> simpson_weights(int n, double h) {
    std::vector<double> w(n, 0.0);
    w[0] = w[n - 1] = h / 3.0;
    for (int i = 1; i < n - 1; ++i)
        w[i] = (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    return w;
}

int make_odd(int n) { return (n % 2 == 0) ? n + 1 : n; }

// Unnormalized stratum masses at the given per-stratum x1 node count. The
// integrand is shifted by u_ref so that exp() stays in range for large beta.
std::vector<double> stratum_masses(const TargetModel& m, int m1, int m2,
                                   double x2_lo, double x2_hi, double u_ref) {
    const auto edges = stratum_edges(m);
    std::vector<double> x2(m2), w2(m2);
    {
        const double h2 = (x2_hi - x2_lo) / (m2 - 1);
        w2 = simpson_weights(m2, h2);
        for (int j = 0; j < m2; ++j) x2[j] = x2_lo + h2 * j;
    }
    std::vector<double> mass(m.strata, 0.0);
    for (int l = 0; l < m.strata; ++l) {
        const double a = edges[l], b = edges[l + 1];
        const double h1 = (b - a) / (m1 - 1);
        const auto w1 = simpson_weights(m1, h1);
        long double acc = 0.0L;
        for (int i = 0; i < m1; ++i) {
            const double x1 = a + h1 * i;
            long double row = 0.0L;
            for (int j = 0; j < m2; ++j) {
                const double u = potential_energy({x1, x2[j]});
                row += w2[j] * std::exp(-m.beta * (u - u_ref));
            }
            acc += w1[i] * row;
        }
        mass[l] = static_cast<double>(acc);
    }
    return mass;
}

} // namespace

ReferenceWeights reference_weights(const TargetModel& m, int resolution,
                                   double x2_lo, double x2_hi, double tolerance) {
    validate_model(m);
    if (resolution < 3)
        throw std::invalid_argument("reference_weights: resolution must be >= 3");
    if (!(x2_hi > x2_lo))
        throw std::invalid_argument("reference_weights: empty x2 range");
    if (!(tolerance > 0.0))
        throw std::invalid_argument("reference_weights: tolerance must be positive");

    const int m1 = make_odd(std::max((resolution - 1) / m.strata + 1, 21));
    const int m2 = make_odd(resolution);

    // Shift the exponent by a coarse-grid minimum of U so the quadrature is
    // well scaled at any beta; the shift cancels in the normalization.
    double u_ref = potential_energy({0.0, 0.0});
    for (int i = 0; i <= 48; ++i)
        for (int j = 0; j <= 48; ++j) {
            const double u = potential_energy(
                {-m.half_width + 2.0 * m.half_width * i / 48.0,
                 x2_lo + (x2_hi - x2_lo) * j / 48.0});
            if (u < u_ref) u_ref = u;
        }

    const auto fine = stratum_masses(m, m1, m2, x2_lo, x2_hi, u_ref);
    const auto coarse = stratum_masses(m, make_odd(std::max(m1 / 2, 11)),
                                       make_odd(std::max(m2 / 2, 11)),
                                       x2_lo, x2_hi, u_ref);

    ReferenceWeights out;
    out.resolution = resolution;
    out.x2_lo = x2_lo;
    out.x2_hi = x2_hi;

    long double total = 0.0L;
    for (double v : fine) {
        if (!(v > 0.0))
            throw std::runtime_error("reference_weights: nonpositive stratum mass; "
                                     "widen the x2 range or lower beta");
        total += v;
    }
    long double total_coarse = 0.0L;
    for (double v : coarse) total_coarse += v;

    out.theta.resize(m.strata);
    out.log_theta.resize(m.strata);
    for (int i = 0; i < m.strata; ++i) {
        out.theta[i] = static_cast<double>(fine[i] / total);
        out.log_theta[i] = std::log(out.theta[i]);
        const double ci = static_cast<double>(coarse[i] / total_coarse);
        const double rel = std::abs(out.theta[i] - ci) / out.theta[i];
        if (rel > out.max_rel_error) out.max_rel_error = rel;
    }
    if (out.max_rel_error > tolerance)
        throw std::runtime_error("reference_weights: quadrature error estimate "
                                 + std::to_string(out.max_rel_error)
                                 + " exceeds tolerance; raise the resolution");
    return out;
}

} // namespace shus
