#include "shus/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "shus/rng.hpp"

namespace shus {

namespace {

// Static fan-out of `count` independent jobs over `threads` workers. Job i
// writes only slot i of its output, so the result does not depend on the
// worker count.
template <typename Fn>
void parallel_jobs(long count, int threads, Fn&& job) {
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) job(i);
        return;
    }
    const int t = static_cast<int>(std::min<long>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            for (long i = w; i < count; i += t) job(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

ExitResult first_exit_time(const SamplerSetup& setup, std::uint64_t seed,
                           long cap, Point start, double threshold,
                           std::vector<long>* histogram) {
    if (cap < 1)
        throw std::invalid_argument("first_exit_time: cap must be >= 1");
    Sampler sampler(setup, seed, start);
    if (histogram)
        histogram->assign(setup.model.strata, 0);
    for (long n = 1; n <= cap; ++n) {
        const StepInfo info = sampler.step();
        if (histogram)
            ++(*histogram)[info.stratum - 1];
        if (sampler.chain().position.x1 > threshold)
            return {n, false};
    }
    return {cap, true};
}

ExitTimeEstimate mean_exit_time(const SamplerSetup& setup, long replicas,
                                std::uint64_t seed, long cap, int threads) {
    if (replicas < 1)
        throw std::invalid_argument("mean_exit_time: need at least one replica");
    ExitTimeEstimate est;
    est.beta = setup.model.beta;
    est.replicas = replicas;
    est.samples.resize(replicas);
    parallel_jobs(replicas, threads, [&](long r) {
        est.samples[r] = first_exit_time(setup, derive_seed(seed, r), cap);
    });

    double sum = 0.0;
    long used = 0;
    for (const auto& s : est.samples) {
        if (s.censored) { ++est.censored; continue; }
        sum += static_cast<double>(s.iterations);
        ++used;
    }
    if (used == 0)
        throw std::runtime_error("mean_exit_time: every replica hit the cap; "
                                 "raise the cap or lower beta");
    est.mean = sum / static_cast<double>(used);
    double ss = 0.0;
    for (const auto& s : est.samples)
        if (!s.censored) {
            const double dlt = static_cast<double>(s.iterations) - est.mean;
            ss += dlt * dlt;
        }
    est.std_error = used > 1
        ? std::sqrt(ss / static_cast<double>(used - 1) / static_cast<double>(used))
        : 0.0;
    return est;
}

namespace {

FitResult line_fit(std::span<const double> x, std::span<const double> logy) {
    const int n = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) { mx += x[i]; my += logy[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (logy[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("fit: abscissa has no spread");
    FitResult f;
    f.points = n;
    f.slope = sxy / sxx;
    const double intercept = my - f.slope * mx;
    f.prefactor = std::exp(intercept);
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = logy[i] - (intercept + f.slope * x[i]);
        rss += r * r;
    }
    f.residual = std::sqrt(rss / n);
    return f;
}

std::vector<double> checked_log(std::span<const double> v, const char* what) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0))
            throw std::invalid_argument(std::string("fit: ") + what
                                        + " must be positive");
        out[i] = std::log(v[i]);
    }
    return out;
}

} // namespace

FitResult fit_exponential_in_beta(std::span<const double> betas,
                                  std::span<const double> values) {
    if (betas.size() != values.size() || betas.size() < 3)
        throw std::invalid_argument("fit: need >= 3 matching points");
    const auto ly = checked_log(values, "values");
    return line_fit(betas, ly);
}

FitResult fit_power_law(std::span<const double> betas,
                        std::span<const double> values) {
    if (betas.size() != values.size() || betas.size() < 3)
        throw std::invalid_argument("fit: need >= 3 matching points");
    const auto lx = checked_log(betas, "abscissa");
    const auto ly = checked_log(values, "values");
    return line_fit(lx, ly);
}

WeightStatistics weight_statistics(
    const std::vector<std::vector<std::vector<double>>>& log_theta,
    std::span<const long> checkpoints,
    std::span<const double> log_theta_star) {
    const size_t K = log_theta.size();
    if (K < 2)
        throw std::invalid_argument("weight_statistics: need >= 2 replicas");
    const size_t C = checkpoints.size();
    const size_t d = log_theta_star.size();
    for (const auto& rep : log_theta) {
        if (rep.size() != C)
            throw std::invalid_argument("weight_statistics: checkpoint count mismatch");
        for (const auto& v : rep)
            if (v.size() != d)
                throw std::invalid_argument("weight_statistics: stratum count mismatch");
    }
    for (double l : log_theta_star)
        if (l == 0.0 || std::isnan(l))
            throw std::invalid_argument("weight_statistics: ln theta* must be nonzero");

    WeightStatistics out;
    out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    out.mean.assign(C, std::vector<double>(d, 0.0));
    out.variance.assign(C, std::vector<double>(d, 0.0));
    out.bias_norm.assign(C, 0.0);
    for (size_t c = 0; c < C; ++c) {
        for (size_t i = 0; i < d; ++i) {
            double m = 0.0;
            for (size_t k = 0; k < K; ++k) m += log_theta[k][c][i];
            m /= static_cast<double>(K);
            double ss = 0.0;
            for (size_t k = 0; k < K; ++k) {
                const double dv = log_theta[k][c][i] - m;
                ss += dv * dv;
            }
            out.mean[c][i] = m;
            out.variance[c][i] = ss / static_cast<double>(K - 1);
            const double rel = m / log_theta_star[i] - 1.0;
            out.bias_norm[c] += rel * rel;
        }
        out.bias_norm[c] = std::sqrt(out.bias_norm[c]);
    }
    return out;
}

std::vector<std::vector<std::vector<double>>> run_weight_replicas(
    const SamplerSetup& setup, long replicas, std::span<const long> checkpoints,
    std::uint64_t seed, int threads) {
    if (replicas < 1)
        throw std::invalid_argument("run_weight_replicas: need >= 1 replica");
    if (checkpoints.empty())
        throw std::invalid_argument("run_weight_replicas: no checkpoints");
    for (size_t c = 0; c + 1 < checkpoints.size(); ++c)
        if (checkpoints[c] >= checkpoints[c + 1])
            throw std::invalid_argument("run_weight_replicas: checkpoints must increase");
    if (checkpoints.front() < 1)
        throw std::invalid_argument("run_weight_replicas: checkpoints start at 1");

    std::vector<std::vector<std::vector<double>>> out(
        replicas, std::vector<std::vector<double>>(checkpoints.size()));
    parallel_jobs(replicas, threads, [&](long r) {
        Sampler sampler(setup, derive_seed(seed, r));
        size_t next = 0;
        while (next < checkpoints.size()) {
            sampler.step();
            if (sampler.steps() == checkpoints[next]) {
                out[r][next] = sampler.occupation().log_theta();
                ++next;
            }
        }
    });
    return out;
}

std::vector<long> log_spaced_steps(long lo, long hi, int per_decade) {
    if (lo < 1 || hi < lo || per_decade < 1)
        throw std::invalid_argument("log_spaced_steps: bad range");
    std::vector<long> out;
    const double step = 1.0 / per_decade;
    for (double e = std::log10(static_cast<double>(lo));; e += step) {
        long n = static_cast<long>(std::llround(std::pow(10.0, e)));
        n = std::clamp(n, lo, hi);
        if (out.empty() || n > out.back()) out.push_back(n);
        if (n >= hi) break;
    }
    if (out.back() != hi) out.push_back(hi);
    return out;
}

std::vector<TracePoint> stepsize_trace(const SamplerSetup& setup, long n_max,
                                       std::uint64_t seed, int per_decade) {
    if (n_max < 1)
        throw std::invalid_argument("stepsize_trace: n_max must be >= 1");
    validate_setup(setup);
    const auto marks = log_spaced_steps(1, n_max, per_decade);
    const int d = setup.model.strata;

    // Normalizer chosen per scheme so that the trace tends to 1.
    auto normalized = [&](long n, double g) -> double {
        return std::visit([&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            const double nd = static_cast<double>(n);
            if constexpr (std::is_same_v<T, WlDeterministic>) {
                return std::pow(nd, v.alpha) * g / v.gamma_star;
            } else if constexpr (std::is_same_v<T, ShusAlpha>) {
                const double limit = std::pow(gamma_alpha(v.gamma, v.alpha), 1.0 - v.alpha)
                                   * std::pow(static_cast<double>(d), v.alpha)
                                   * std::pow(1.0 - v.alpha, v.alpha);
                return std::pow(nd, v.alpha) * g / limit;
            } else {
                return nd * g / static_cast<double>(d);
            }
        }, setup.scheme);
    };

    Sampler sampler(setup, seed);
    std::vector<TracePoint> trace;
    trace.reserve(marks.size());
    size_t next = 0;
    while (next < marks.size()) {
        const StepInfo info = sampler.step();
        if (sampler.steps() == marks[next]) {
            const long n = sampler.steps();
            trace.push_back({n, info.stepsize, normalized(n, info.stepsize)});
            ++next;
        }
    }
    return trace;
}

StratumHistogram stratum_histogram(std::span<const long> counts, double fraction) {
    if (counts.empty())
        throw std::invalid_argument("stratum_histogram: empty counts");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("stratum_histogram: fraction outside (0, 1]");
    StratumHistogram h;
    h.counts.assign(counts.begin(), counts.end());
    long mx = 0;
    for (long c : counts) {
        if (c < 0)
            throw std::invalid_argument("stratum_histogram: negative count");
        mx = std::max(mx, c);
    }
    if (mx > 0)
        for (long c : counts)
            if (static_cast<double>(c) >= fraction * static_cast<double>(mx))
                ++h.significantly_visited;
    return h;
}

} // namespace shus
