#pragma once

#include <span>
#include <vector>

// Closed-form quantities of the limiting dynamics, used as ground truth in
// tests and the validation suite. `theta_star` is the vector of true stratum
// masses, `theta` a current weight vector; both must be strictly positive
// and sum to 1 (checked to a loose 1e-6, since callers often pass quadrature
// output or renormalized iterates).

namespace shus {

// Mean drift of the normalized weights under the theta-biased chain:
//   h(theta)(i) = (theta_star(i) - theta(i)) / sum_j theta_star(j)/theta(j).
// Vanishes exactly at theta = theta_star.
std::vector<double> mean_field(std::span<const double> theta_star,
                               std::span<const double> theta);

// V(theta) = -sum_i theta_star(i) ln(theta(i)/theta_star(i)), a nonnegative
// Lyapunov functional of the mean-field flow, zero only at theta_star.
double lyapunov_value(std::span<const double> theta_star,
                      std::span<const double> theta);

// dV/dtheta(i) = -theta_star(i)/theta(i).
std::vector<double> lyapunov_gradient(std::span<const double> theta_star,
                                      std::span<const double> theta);

// Stratum masses of the theta-biased density:
//   m(i) = (theta_star(i)/theta(i)) / sum_j theta_star(j)/theta(j).
// Uniform (1/d each) exactly at theta = theta_star.
std::vector<double> biased_stratum_masses(std::span<const double> theta_star,
                                          std::span<const double> theta);

// Importance-weight correction for ergodic averages along the adaptive
// chain: (d/n) sum_k theta_prev_at_visited[k] * f_values[k], where
// theta_prev_at_visited[k] is the pre-step weight of the stratum the chain
// sat in after step k, and f_values[k] the observable there. Converges to
// the target-measure average of f. Throws on mismatched lengths, empty
// input, d < 1, or weights outside (0, 1].
double unbiasing_average(std::span<const double> theta_prev_at_visited,
                         std::span<const double> f_values, int strata);

// Streaming form of the same correction, for long runs.
struct UnbiasingAccumulator {
    int strata = 0;
    long count = 0;
    double weighted_sum = 0.0;

    explicit UnbiasingAccumulator(int d) : strata(d) {}
    void add(double theta_prev_at_visited, double f_value) {
        weighted_sum += theta_prev_at_visited * f_value;
        ++count;
    }
    double value() const;
};

} // namespace shus
