// Python bindings. Thin wrappers only; all logic lives in the library. The
// bulk `run` method exists so a million-step chain does not pay a python
// call per step.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shus/diagnostics.hpp"
#include "shus/oracle.hpp"
#include "shus/rng.hpp"
#include "shus/validate.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

PYBIND11_MODULE(shus, m) {
    m.doc() = "adaptive stratified sampling on a two-well potential";

    py::class_<shus::Point>(m, "Point")
        .def(py::init<double, double>(), "x1"_a = 0.0, "x2"_a = 0.0)
        .def_readwrite("x1", &shus::Point::x1)
        .def_readwrite("x2", &shus::Point::x2)
        .def("__repr__", [](const shus::Point& p) {
            return "Point(" + std::to_string(p.x1) + ", " + std::to_string(p.x2) + ")";
        });

    py::class_<shus::TargetModel>(m, "TargetModel")
        .def(py::init<double, int, double>(), "beta"_a = 1.0, "strata"_a = 12,
             "half_width"_a = 1.2)
        .def_readwrite("beta", &shus::TargetModel::beta)
        .def_readwrite("strata", &shus::TargetModel::strata)
        .def_readwrite("half_width", &shus::TargetModel::half_width);

    m.def("potential_energy", &shus::potential_energy, "p"_a,
          "two-well potential evaluated at a point");
    m.def("potential_energy",
          [](double x1, double x2) { return shus::potential_energy({x1, x2}); },
          "x1"_a, "x2"_a);
    m.def("stratum_index", &shus::stratum_index, "model"_a, "x1"_a,
          "1-based stratum of a first coordinate inside the strip");
    m.def("stratum_edges", &shus::stratum_edges, "model"_a);
    m.def("log_target_density", &shus::log_target_density, "model"_a, "p"_a,
          "unnormalized log density; -inf outside the strip");

    py::class_<shus::ReferenceWeights>(m, "ReferenceWeights")
        .def_readonly("theta", &shus::ReferenceWeights::theta)
        .def_readonly("log_theta", &shus::ReferenceWeights::log_theta)
        .def_readonly("max_rel_error", &shus::ReferenceWeights::max_rel_error);
    m.def("reference_weights", &shus::reference_weights, "model"_a,
          "resolution"_a = 2001, "x2_lo"_a = -3.0, "x2_hi"_a = 4.5,
          "tolerance"_a = 1e-6, "stratum weights by quadrature");

    py::class_<shus::ProposalConfig>(m, "ProposalConfig")
        .def(py::init<double>(), "sigma"_a = 0.2)
        .def_readwrite("sigma", &shus::ProposalConfig::sigma);

    py::class_<shus::Shus>(m, "Shus")
        .def(py::init<double>(), "gamma"_a = 1.0)
        .def_readwrite("gamma", &shus::Shus::gamma);
    py::class_<shus::WlDeterministic>(m, "WlDeterministic")
        .def(py::init<double, double, bool>(), "gamma_star"_a = 1.0,
             "alpha"_a = 0.8, "linear"_a = false)
        .def_readwrite("gamma_star", &shus::WlDeterministic::gamma_star)
        .def_readwrite("alpha", &shus::WlDeterministic::alpha)
        .def_readwrite("linear", &shus::WlDeterministic::linear);
    py::class_<shus::ShusAlpha>(m, "ShusAlpha")
        .def(py::init<double, double>(), "gamma"_a = 1.0, "alpha"_a = 0.6)
        .def_readwrite("gamma", &shus::ShusAlpha::gamma)
        .def_readwrite("alpha", &shus::ShusAlpha::alpha);
    py::class_<shus::PartialBias>(m, "PartialBias")
        .def(py::init<double, double>(), "gamma"_a = 1.0, "exponent"_a = 1.0)
        .def_readwrite("gamma", &shus::PartialBias::gamma)
        .def_readwrite("exponent", &shus::PartialBias::exponent);

    m.def("gamma_alpha", &shus::gamma_alpha, "gamma"_a, "alpha"_a);
    m.def("derive_seed", &shus::derive_seed, "master"_a, "index"_a);

    py::class_<shus::SamplerSetup>(m, "SamplerSetup")
        .def(py::init([](const shus::TargetModel& model,
                         const shus::ProposalConfig& proposal,
                         const shus::UpdateScheme& scheme,
                         double renorm_threshold) {
                 return shus::SamplerSetup{model, proposal, scheme,
                                           renorm_threshold};
             }),
             "model"_a = shus::TargetModel{},
             "proposal"_a = shus::ProposalConfig{},
             "scheme"_a = shus::UpdateScheme{shus::Shus{}},
             "renorm_threshold"_a = 1e10)
        .def_readwrite("model", &shus::SamplerSetup::model)
        .def_readwrite("proposal", &shus::SamplerSetup::proposal)
        .def_readwrite("scheme", &shus::SamplerSetup::scheme)
        .def_readwrite("renorm_threshold", &shus::SamplerSetup::renorm_threshold);

    py::class_<shus::StepInfo>(m, "StepInfo")
        .def_readonly("accepted", &shus::StepInfo::accepted)
        .def_readonly("stratum", &shus::StepInfo::stratum)
        .def_readonly("stepsize", &shus::StepInfo::stepsize);

    py::class_<shus::Sampler>(m, "Sampler")
        .def(py::init<const shus::SamplerSetup&, std::uint64_t, shus::Point>(),
             "setup"_a, "seed"_a, "start"_a = shus::Point{-1.0, 0.0})
        .def("step", &shus::Sampler::step)
        .def("run",
             [](shus::Sampler& s, long n) {
                 long accepted = 0;
                 for (long k = 0; k < n; ++k)
                     if (s.step().accepted) ++accepted;
                 return accepted;
             },
             "n"_a, "advance n steps, returning how many moves were accepted")
        .def_property_readonly("steps", &shus::Sampler::steps)
        .def_property_readonly("position",
             [](const shus::Sampler& s) { return s.chain().position; })
        .def_property_readonly("log_theta",
             [](const shus::Sampler& s) { return s.occupation().log_theta(); })
        .def_property_readonly("theta",
             [](const shus::Sampler& s) { return s.occupation().theta(); })
        .def_property_readonly("log_total",
             [](const shus::Sampler& s) { return s.occupation().log_total(); })
        .def_property_readonly("renorm_count",
             [](const shus::Sampler& s) { return s.occupation().renorm_count; });

    py::class_<shus::ExitResult>(m, "ExitResult")
        .def_readonly("iterations", &shus::ExitResult::iterations)
        .def_readonly("censored", &shus::ExitResult::censored);
    m.def("first_exit_time",
          [](const shus::SamplerSetup& setup, std::uint64_t seed, long cap,
             shus::Point start, double threshold) {
              return shus::first_exit_time(setup, seed, cap, start, threshold);
          },
          "setup"_a, "seed"_a, "cap"_a = 1000000000L,
          "start"_a = shus::Point{-1.0, 0.0}, "threshold"_a = 1.0);

    py::class_<shus::ExitTimeEstimate>(m, "ExitTimeEstimate")
        .def_readonly("beta", &shus::ExitTimeEstimate::beta)
        .def_readonly("mean", &shus::ExitTimeEstimate::mean)
        .def_readonly("std_error", &shus::ExitTimeEstimate::std_error)
        .def_readonly("censored", &shus::ExitTimeEstimate::censored)
        .def_readonly("replicas", &shus::ExitTimeEstimate::replicas)
        .def_readonly("samples", &shus::ExitTimeEstimate::samples);
    m.def("mean_exit_time", &shus::mean_exit_time, "setup"_a, "replicas"_a,
          "seed"_a, "cap"_a = 1000000000L, "threads"_a = 1);

    py::class_<shus::FitResult>(m, "FitResult")
        .def_readonly("slope", &shus::FitResult::slope)
        .def_readonly("prefactor", &shus::FitResult::prefactor)
        .def_readonly("residual", &shus::FitResult::residual)
        .def_readonly("points", &shus::FitResult::points);
    m.def("fit_exponential_in_beta",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return shus::fit_exponential_in_beta(x, y);
          }, "betas"_a, "values"_a);
    m.def("fit_power_law",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return shus::fit_power_law(x, y);
          }, "abscissa"_a, "values"_a);

    m.def("log_spaced_steps", &shus::log_spaced_steps, "lo"_a, "hi"_a,
          "per_decade"_a);

    m.def("mean_field",
          [](const std::vector<double>& s, const std::vector<double>& t) {
              return shus::mean_field(s, t);
          }, "theta_star"_a, "theta"_a);
    m.def("lyapunov_value",
          [](const std::vector<double>& s, const std::vector<double>& t) {
              return shus::lyapunov_value(s, t);
          }, "theta_star"_a, "theta"_a);
    m.def("lyapunov_gradient",
          [](const std::vector<double>& s, const std::vector<double>& t) {
              return shus::lyapunov_gradient(s, t);
          }, "theta_star"_a, "theta"_a);
    m.def("biased_stratum_masses",
          [](const std::vector<double>& s, const std::vector<double>& t) {
              return shus::biased_stratum_masses(s, t);
          }, "theta_star"_a, "theta"_a);
    m.def("unbiasing_average",
          [](const std::vector<double>& th, const std::vector<double>& f, int d) {
              return shus::unbiasing_average(th, f, d);
          }, "theta_prev_at_visited"_a, "f_values"_a, "strata"_a);

    py::class_<shus::SaDecomposition>(m, "SaDecomposition")
        .def_readonly("h", &shus::SaDecomposition::h)
        .def_readonly("lambda_", &shus::SaDecomposition::lambda);
    m.def("sa_residual",
          [](const std::vector<double>& theta, int hit, double stepsize) {
              return shus::sa_residual(theta, hit, stepsize);
          }, "theta"_a, "hit"_a, "stepsize"_a);

    py::class_<shus::CheckResult>(m, "CheckResult")
        .def_readonly("name", &shus::CheckResult::name)
        .def_readonly("passed", &shus::CheckResult::pass)
        .def_readonly("measured", &shus::CheckResult::measured)
        .def_readonly("threshold", &shus::CheckResult::threshold)
        .def_readonly("detail", &shus::CheckResult::detail);
    m.def("run_validation_suite",
          [](const shus::SamplerSetup& setup, const std::vector<double>& star,
             std::uint64_t seed) {
              return shus::run_validation_suite(setup, star, seed);
          }, "setup"_a, "theta_star"_a, "seed"_a);
}
