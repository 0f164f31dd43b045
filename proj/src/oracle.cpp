#include "shus/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace shus {

namespace {

void check_weights(std::span<const double> theta_star,
                   std::span<const double> theta) {
    if (theta_star.size() != theta.size() || theta.empty())
        throw std::invalid_argument("oracle: weight vectors must match and be nonempty");
    double s1 = 0.0, s2 = 0.0;
    for (size_t i = 0; i < theta.size(); ++i) {
        if (!(theta_star[i] > 0.0) || !(theta[i] > 0.0))
            throw std::invalid_argument("oracle: weights must be strictly positive");
        s1 += theta_star[i];
        s2 += theta[i];
    }
    // loose enough to admit finite-difference probes of the gradient
    if (std::abs(s1 - 1.0) > 1e-4 || std::abs(s2 - 1.0) > 1e-4)
        throw std::invalid_argument("oracle: weights must sum to 1");
}

double ratio_sum(std::span<const double> theta_star, std::span<const double> theta) {
    double z = 0.0;
    for (size_t i = 0; i < theta.size(); ++i) z += theta_star[i] / theta[i];
    return z;
}

} // namespace

std::vector<double> mean_field(std::span<const double> theta_star,
                               std::span<const double> theta) {
    check_weights(theta_star, theta);
    const double z = ratio_sum(theta_star, theta);
    std::vector<double> h(theta.size());
    for (size_t i = 0; i < theta.size(); ++i)
        h[i] = (theta_star[i] - theta[i]) / z;
    return h;
}

double lyapunov_value(std::span<const double> theta_star,
                      std::span<const double> theta) {
    check_weights(theta_star, theta);
    double v = 0.0;
    for (size_t i = 0; i < theta.size(); ++i)
        v -= theta_star[i] * std::log(theta[i] / theta_star[i]);
    return v;
}

std::vector<double> lyapunov_gradient(std::span<const double> theta_star,
                                      std::span<const double> theta) {
    check_weights(theta_star, theta);
    std::vector<double> g(theta.size());
    for (size_t i = 0; i < theta.size(); ++i)
        g[i] = -theta_star[i] / theta[i];
    return g;
}

std::vector<double> biased_stratum_masses(std::span<const double> theta_star,
                                          std::span<const double> theta) {
    check_weights(theta_star, theta);
    const double z = ratio_sum(theta_star, theta);
    std::vector<double> m(theta.size());
    for (size_t i = 0; i < theta.size(); ++i)
        m[i] = (theta_star[i] / theta[i]) / z;
    return m;
}

double unbiasing_average(std::span<const double> theta_prev_at_visited,
                         std::span<const double> f_values, int strata) {
    if (theta_prev_at_visited.size() != f_values.size())
        throw std::invalid_argument("unbiasing_average: weight and observable "
                                    "sequences differ in length");
    if (theta_prev_at_visited.empty())
        throw std::invalid_argument("unbiasing_average: empty trajectory");
    if (strata < 1)
        throw std::invalid_argument("unbiasing_average: need at least one stratum");
    UnbiasingAccumulator acc(strata);
    for (size_t k = 0; k < f_values.size(); ++k) {
        const double th = theta_prev_at_visited[k];
        if (!(th > 0.0 && th <= 1.0))
            throw std::invalid_argument("unbiasing_average: weight outside (0, 1]");
        acc.add(th, f_values[k]);
    }
    return acc.value();
}

double UnbiasingAccumulator::value() const {
    if (count == 0)
        throw std::logic_error("UnbiasingAccumulator: no samples");
    return static_cast<double>(strata) * weighted_sum / static_cast<double>(count);
}

} // namespace shus
