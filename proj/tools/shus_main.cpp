// Command-line driver: trajectory dumps, exit-time scans over beta,
// cross-replica weight statistics, quadrature reference weights, and the
// self-check suite. Every output file embeds the resolved configuration so a
// run can be reproduced from the file alone.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shus/diagnostics.hpp"
#include "shus/rng.hpp"
#include "shus/validate.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Options {
    double beta = 1.0;
    std::vector<double> beta_grid{5.0, 6.0, 7.0, 8.0};
    int strata = 12;
    double sigma = -1.0;  // resolved to 2R/d when not set
    std::string scheme = "shus";
    double gamma = 1.0;
    double gamma_star = 1.0;
    double alpha = 0.6;
    bool wl_linear = false;
    double bias_exponent = 1.0;
    double renorm_threshold = 1e10;
    std::uint64_t seed = 1;
    long steps = 1000000;
    long stride = 100;
    long replicas = 200;
    long censor_cap = 1000000000L;
    int threads = 1;
    int resolution = 2001;
    double x2_lo = -3.0;
    double x2_hi = 4.5;
    double quad_tolerance = 1e-6;
    double occupancy_fraction = 0.05;
    int per_decade = 16;
    long fit_lo = 0;  // 0: last decade of the run
    long fit_hi = 0;
    std::string output_dir = ".";
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

shus::UpdateScheme make_scheme(const Options& o) {
    if (o.scheme == "shus") return shus::Shus{o.gamma};
    if (o.scheme == "wl")
        return shus::WlDeterministic{o.gamma_star, o.alpha, o.wl_linear};
    if (o.scheme == "shus-alpha") return shus::ShusAlpha{o.gamma, o.alpha};
    if (o.scheme == "partial-bias")
        return shus::PartialBias{o.gamma, o.bias_exponent};
    throw CLI::ValidationError("--scheme must be one of shus, wl, shus-alpha, "
                               "partial-bias");
}

shus::SamplerSetup make_setup(const Options& o, double beta) {
    shus::SamplerSetup s;
    s.model = {beta, o.strata};
    s.proposal = {o.sigma};
    s.scheme = make_scheme(o);
    s.renorm_threshold = o.renorm_threshold;
    shus::validate_setup(s);
    return s;
}

// Resolved key/value pairs, written verbatim into every output.
std::vector<std::pair<std::string, std::string>> resolved_config(
    const Options& o, const std::string& command) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("command", command);
    kv.emplace_back("scheme", o.scheme);
    if (command == "exit-times") {
        std::string grid;
        for (double b : o.beta_grid) grid += (grid.empty() ? "" : ",") + fmt(b);
        kv.emplace_back("beta-grid", grid);
    } else {
        kv.emplace_back("beta", fmt(o.beta));
    }
    kv.emplace_back("strata", std::to_string(o.strata));
    kv.emplace_back("sigma", fmt(o.sigma));
    if (o.scheme == "wl") {
        kv.emplace_back("gamma-star", fmt(o.gamma_star));
        kv.emplace_back("alpha", fmt(o.alpha));
        kv.emplace_back("wl-linear", o.wl_linear ? "true" : "false");
    } else {
        kv.emplace_back("gamma", fmt(o.gamma));
        if (o.scheme == "shus-alpha") kv.emplace_back("alpha", fmt(o.alpha));
        if (o.scheme == "partial-bias")
            kv.emplace_back("bias-exponent", fmt(o.bias_exponent));
    }
    kv.emplace_back("renorm-threshold", fmt(o.renorm_threshold));
    kv.emplace_back("seed", std::to_string(o.seed));
    if (command == "trajectory" || command == "weight-stats") {
        kv.emplace_back("steps", std::to_string(o.steps));
    }
    if (command == "trajectory") kv.emplace_back("stride", std::to_string(o.stride));
    // execution details (threads, output-dir) are left out: results do not
    // depend on them, and the files should be byte-identical when rerun
    if (command == "exit-times" || command == "weight-stats")
        kv.emplace_back("replicas", std::to_string(o.replicas));
    if (command == "exit-times") {
        kv.emplace_back("censor-cap", std::to_string(o.censor_cap));
        kv.emplace_back("occupancy-fraction", fmt(o.occupancy_fraction));
    }
    if (command == "weight-stats") {
        kv.emplace_back("checkpoints-per-decade", std::to_string(o.per_decade));
        kv.emplace_back("fit-lo", std::to_string(o.fit_lo));
        kv.emplace_back("fit-hi", std::to_string(o.fit_hi));
    }
    if (command == "reference" || command == "weight-stats" || command == "validate") {
        kv.emplace_back("resolution", std::to_string(o.resolution));
        kv.emplace_back("x2-lo", fmt(o.x2_lo));
        kv.emplace_back("x2-hi", fmt(o.x2_hi));
        kv.emplace_back("quad-tolerance", fmt(o.quad_tolerance));
    }
    return kv;
}

std::ofstream open_output(const Options& o, const std::string& name,
                          const std::vector<std::pair<std::string, std::string>>& kv) {
    std::filesystem::create_directories(o.output_dir);
    const auto path = std::filesystem::path(o.output_dir) / name;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : kv) out << "# " << k << " = " << v << "\n";
    return out;
}

json config_json(const std::vector<std::pair<std::string, std::string>>& kv) {
    json j = json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

void write_json(const Options& o, const std::string& name, const json& j) {
    std::filesystem::create_directories(o.output_dir);
    const auto path = std::filesystem::path(o.output_dir) / name;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

int cmd_reference(const Options& o) {
    const auto kv = resolved_config(o, "reference");
    const auto rw = shus::reference_weights({o.beta, o.strata}, o.resolution,
                                            o.x2_lo, o.x2_hi, o.quad_tolerance);
    auto out = open_output(o, "reference.csv", kv);
    out << "stratum_index,theta_star,ln_theta_star\n";
    for (int i = 0; i < o.strata; ++i)
        out << (i + 1) << ',' << fmt(rw.theta[i]) << ',' << fmt(rw.log_theta[i])
            << "\n";
    std::printf("reference: %d strata, quadrature error estimate %.3g\n",
                o.strata, rw.max_rel_error);
    return 0;
}

int cmd_trajectory(const Options& o) {
    const auto kv = resolved_config(o, "trajectory");
    const auto setup = make_setup(o, o.beta);
    shus::Sampler sampler(setup, o.seed);

    auto traj = open_output(o, "trajectory.csv", kv);
    traj << "n,x1,x2,stratum,ln_theta_hit,stepsize\n";
    auto wtrace = open_output(o, "weight_trace.csv", kv);
    wtrace << "n,stratum,ln_theta,stepsize,r_n\n";

    const auto marks = shus::log_spaced_steps(1, o.steps, o.per_decade);
    size_t next = 0;
    long accepted = 0;
    for (long n = 1; n <= o.steps; ++n) {
        const auto info = sampler.step();
        if (info.accepted) ++accepted;
        if (n % o.stride == 0 || n == 1 || n == o.steps) {
            const auto& p = sampler.chain().position;
            traj << n << ',' << fmt(p.x1) << ',' << fmt(p.x2) << ','
                 << info.stratum << ','
                 << fmt(sampler.occupation().log_theta(info.stratum)) << ','
                 << fmt(info.stepsize) << "\n";
        }
        if (next < marks.size() && n == marks[next]) {
            const auto lt = sampler.occupation().log_theta();
            for (int i = 0; i < o.strata; ++i)
                wtrace << n << ',' << (i + 1) << ',' << fmt(lt[i]) << ','
                       << fmt(info.stepsize) << ','
                       << sampler.occupation().renorm_count << "\n";
            ++next;
        }
    }
    std::printf("trajectory: %ld steps, acceptance rate %.3f\n", o.steps,
                static_cast<double>(accepted) / static_cast<double>(o.steps));
    return 0;
}

int cmd_exit_times(const Options& o) {
    const auto kv = resolved_config(o, "exit-times");
    if (o.beta_grid.empty())
        throw CLI::ValidationError("--beta-grid must not be empty");

    auto out = open_output(o, "exit_times.csv", kv);
    out << "beta,replica,exit_iter,censored\n";
    std::vector<double> betas, means;
    json estimates = json::array();
    for (double beta : o.beta_grid) {
        const auto setup = make_setup(o, beta);
        const auto est = shus::mean_exit_time(setup, o.replicas, o.seed,
                                              o.censor_cap, o.threads);
        for (long r = 0; r < est.replicas; ++r)
            out << fmt(beta) << ',' << r << ',' << est.samples[r].iterations
                << ',' << (est.samples[r].censored ? 1 : 0) << "\n";
        // one extra replica with visit counting, to see how much of the
        // stratification the chain actually used before leaving
        std::vector<long> counts;
        shus::first_exit_time(setup, shus::derive_seed(o.seed, o.replicas),
                              o.censor_cap, {-1.0, 0.0}, 1.0, &counts);
        const auto hist = shus::stratum_histogram(counts, o.occupancy_fraction);
        betas.push_back(beta);
        means.push_back(est.mean);
        estimates.push_back({{"beta", beta},
                             {"mean", est.mean},
                             {"std_error", est.std_error},
                             {"censored", est.censored},
                             {"replicas", est.replicas},
                             {"visited_strata", hist.significantly_visited}});
        std::printf("beta %.6g: mean exit %.6g +- %.3g (%ld censored, "
                    "%d strata visited)\n", beta, est.mean, est.std_error,
                    est.censored, hist.significantly_visited);
    }

    json fits = json::array();
    auto fits_csv = open_output(o, "fits.csv", kv);
    fits_csv << "param,slope,prefactor,residual\n";
    const std::string param = o.scheme == "wl"
        ? "gamma_star=" + fmt(o.gamma_star)
        : "gamma=" + fmt(o.gamma);
    if (betas.size() >= 3) {
        const auto f = shus::fit_exponential_in_beta(betas, means);
        fits.push_back({{"kind", "exponential_in_beta"},
                        {"param", param},
                        {"slope", f.slope},
                        {"prefactor", f.prefactor},
                        {"residual", f.residual},
                        {"points", f.points}});
        fits_csv << param << ',' << fmt(f.slope) << ',' << fmt(f.prefactor)
                 << ',' << fmt(f.residual) << "\n";
        std::printf("exponential fit: slope %.4f, prefactor %.4g\n", f.slope,
                    f.prefactor);
        if (o.scheme == "shus-alpha") {
            const auto p = shus::fit_power_law(betas, means);
            fits.push_back({{"kind", "power_law"},
                            {"param", "alpha=" + fmt(o.alpha)},
                            {"slope", p.slope},
                            {"prefactor", p.prefactor},
                            {"residual", p.residual},
                            {"points", p.points}});
            fits_csv << "alpha=" << fmt(o.alpha) << ',' << fmt(p.slope) << ','
                     << fmt(p.prefactor) << ',' << fmt(p.residual) << "\n";
            std::printf("power-law fit: exponent %.4f (1/(1-alpha) = %.4f)\n",
                        p.slope, 1.0 / (1.0 - o.alpha));
        }
    }
    write_json(o, "fits.json", {{"config", config_json(kv)},
                                {"estimates", estimates},
                                {"fits", fits}});
    return 0;
}

int cmd_weight_stats(const Options& o) {
    const auto kv = resolved_config(o, "weight-stats");
    const auto setup = make_setup(o, o.beta);
    const auto rw = shus::reference_weights(setup.model, o.resolution, o.x2_lo,
                                            o.x2_hi, o.quad_tolerance);
    const auto checkpoints = shus::log_spaced_steps(
        std::max<long>(10, o.steps / 100000), o.steps, o.per_decade);
    const auto reps = shus::run_weight_replicas(setup, o.replicas, checkpoints,
                                                o.seed, o.threads);
    const auto stats = shus::weight_statistics(reps, checkpoints, rw.log_theta);

    auto out = open_output(o, "weight_stats.csv", kv);
    out << "n,stratum,mean,variance,bias\n";
    for (size_t c = 0; c < stats.checkpoints.size(); ++c)
        for (int i = 0; i < o.strata; ++i)
            out << stats.checkpoints[c] << ',' << (i + 1) << ','
                << fmt(stats.mean[c][i]) << ',' << fmt(stats.variance[c][i])
                << ',' << fmt(stats.bias_norm[c]) << "\n";

    // decay fits over [fit_lo, fit_hi], defaulting to the last decade
    const long lo = o.fit_lo > 0 ? o.fit_lo : std::max<long>(1, o.steps / 10);
    const long hi = o.fit_hi > 0 ? o.fit_hi : o.steps;
    std::vector<double> ns, bias;
    std::vector<std::vector<double>> vars(o.strata);
    for (size_t c = 0; c < stats.checkpoints.size(); ++c) {
        const long n = stats.checkpoints[c];
        if (n < lo || n > hi) continue;
        ns.push_back(static_cast<double>(n));
        bias.push_back(stats.bias_norm[c]);
        for (int i = 0; i < o.strata; ++i)
            vars[i].push_back(stats.variance[c][i]);
    }
    json fits = json::object();
    fits["window"] = {lo, hi};
    if (ns.size() >= 3) {
        std::vector<double> exps;
        json per_stratum = json::array();
        for (int i = 0; i < o.strata; ++i) {
            const auto f = shus::fit_power_law(ns, vars[i]);
            exps.push_back(-f.slope);
            per_stratum.push_back({{"stratum", i + 1},
                                   {"exponent", -f.slope},
                                   {"residual", f.residual}});
        }
        std::sort(exps.begin(), exps.end());
        const double median = exps[exps.size() / 2];
        fits["variance_exponents"] = per_stratum;
        fits["median_variance_exponent"] = median;
        bool bias_ok = true;
        for (double b : bias) bias_ok = bias_ok && b > 0.0;
        if (bias_ok) {
            const auto fb = shus::fit_power_law(ns, bias);
            fits["bias_exponent"] = -fb.slope;
            fits["bias_residual"] = fb.residual;
            std::printf("decay fits: median variance exponent %.3f, bias "
                        "exponent %.3f\n", median, -fb.slope);
        } else {
            std::printf("decay fits: median variance exponent %.3f\n", median);
        }
    }
    write_json(o, "decay_fits.json", {{"config", config_json(kv)},
                                      {"fits", fits}});
    return 0;
}

int cmd_validate(const Options& o) {
    const auto kv = resolved_config(o, "validate");
    const auto setup = make_setup(o, o.beta);
    const auto rw = shus::reference_weights(setup.model, o.resolution, o.x2_lo,
                                            o.x2_hi, o.quad_tolerance);
    const auto results = shus::run_validation_suite(setup, rw.theta, o.seed);
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        checks.push_back({{"name", r.name},
                          {"pass", r.pass},
                          {"measured", r.measured},
                          {"threshold", r.threshold},
                          {"detail", r.detail}});
        std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
    }
    write_json(o, "validate_report.json", {{"config", config_json(kv)},
                                           {"checks", checks},
                                           {"all_pass", all}});
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive stratified sampling experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    Options o;
    app.add_option("--beta", o.beta, "inverse temperature")->capture_default_str();
    app.add_option("--beta-grid", o.beta_grid,
                   "comma-separated beta values for exit-time scans")
        ->delimiter(',')->capture_default_str();
    app.add_option("--strata,-d", o.strata, "number of strata")
        ->capture_default_str();
    app.add_option("--sigma", o.sigma, "proposal scale (default 2R/d)");
    app.add_option("--scheme", o.scheme,
                   "weight update: shus, wl, shus-alpha, partial-bias")
        ->capture_default_str();
    app.add_option("--gamma", o.gamma, "adaptive stepsize scale")
        ->capture_default_str();
    app.add_option("--gamma-star", o.gamma_star, "deterministic stepsize scale")
        ->capture_default_str();
    app.add_option("--alpha", o.alpha, "stepsize decay exponent")
        ->capture_default_str();
    app.add_flag("--wl-linear", o.wl_linear, "linear Wang-Landau update");
    app.add_option("--bias-exponent,-a", o.bias_exponent,
                   "fraction of the weight used in the acceptance bias")
        ->capture_default_str();
    app.add_option("--renorm-threshold,-M", o.renorm_threshold,
                   "renormalize when the weight total reaches this")
        ->capture_default_str();
    app.add_option("--seed", o.seed, "master seed")->capture_default_str();
    app.add_option("--steps", o.steps, "chain length")->capture_default_str();
    app.add_option("--stride", o.stride, "trajectory row stride")
        ->capture_default_str();
    app.add_option("--replicas,-K", o.replicas, "independent replicas")
        ->capture_default_str();
    app.add_option("--censor-cap", o.censor_cap, "exit-time censoring cap")
        ->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads for replicas")
        ->capture_default_str();
    app.add_option("--resolution", o.resolution, "quadrature nodes per axis")
        ->capture_default_str();
    app.add_option("--x2-lo", o.x2_lo, "quadrature lower x2 bound")
        ->capture_default_str();
    app.add_option("--x2-hi", o.x2_hi, "quadrature upper x2 bound")
        ->capture_default_str();
    app.add_option("--quad-tolerance", o.quad_tolerance,
                   "quadrature error tolerance")->capture_default_str();
    app.add_option("--occupancy-fraction", o.occupancy_fraction,
                   "fraction of the peak count that marks a stratum visited")
        ->capture_default_str();
    app.add_option("--checkpoints-per-decade", o.per_decade,
                   "weight checkpoints per decade of n")->capture_default_str();
    app.add_option("--fit-lo", o.fit_lo, "decay-fit window start (steps)")
        ->capture_default_str();
    app.add_option("--fit-hi", o.fit_hi, "decay-fit window end (steps)")
        ->capture_default_str();
    app.add_option("--output-dir", o.output_dir, "output directory")
        ->envname("SHUS_OUTPUT_DIR")->capture_default_str();

    auto* c_traj = app.add_subcommand("trajectory", "single adaptive run");
    auto* c_exit = app.add_subcommand("exit-times",
                                      "replicated exit times over a beta grid");
    auto* c_stats = app.add_subcommand("weight-stats",
                                       "cross-replica weight statistics");
    auto* c_ref = app.add_subcommand("reference", "quadrature stratum weights");
    auto* c_val = app.add_subcommand("validate", "run the self-check suite");
    for (auto* c : {c_traj, c_exit, c_stats, c_ref, c_val}) c->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (o.sigma <= 0.0) o.sigma = 2.4 / static_cast<double>(o.strata);
        if (c_ref->parsed()) return cmd_reference(o);
        if (c_traj->parsed()) return cmd_trajectory(o);
        if (c_exit->parsed()) return cmd_exit_times(o);
        if (c_stats->parsed()) return cmd_weight_stats(o);
        if (c_val->parsed()) return cmd_validate(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
