// Python bindings for the core solvers. Profiles and channel states cross
// the boundary as plain lists of floats.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xlpc/efficiency.hpp"
#include "xlpc/equilibria.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/harness.hpp"
#include "xlpc/queue_oracle.hpp"
#include "xlpc/repeated.hpp"

namespace py = pybind11;
using namespace xlpc;

namespace {

ChannelState channel_of(const std::vector<double>& gains) { return ChannelState{gains}; }

py::dict equilibrium_dict(const StaticEquilibrium& eq) {
  py::dict d;
  d["kind"] = to_string(eq.kind);
  d["powers"] = eq.profile.powers;
  d["sinrs"] = eq.sinrs;
  d["utilities"] = eq.utilities;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-efficient power control games with finite-buffer queues.";
  m.attr("__version__") = kVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](py::kwargs kw) {
        SystemParams p = defaults();
        for (auto item : kw) {
          set_param(p, py::str(item.first).cast<std::string>(),
                    py::str(item.second).cast<std::string>());
        }
        return p;
      }))
      .def_readwrite("n_users", &SystemParams::n_users)
      .def_readwrite("noise_var", &SystemParams::noise_var)
      .def_readwrite("p_max", &SystemParams::p_max)
      .def_readwrite("b_fixed", &SystemParams::b_fixed)
      .def_readwrite("arrival_q", &SystemParams::arrival_q)
      .def_readwrite("buffer_k", &SystemParams::buffer_k)
      .def_readwrite("rate_r", &SystemParams::rate_r)
      .def_readwrite("bandwidth_r0", &SystemParams::bandwidth_r0)
      .def_readwrite("spreading_l", &SystemParams::spreading_l)
      .def_readwrite("nu_min", &SystemParams::nu_min)
      .def_readwrite("nu_max", &SystemParams::nu_max)
      .def_readwrite("fading_mean", &SystemParams::fading_mean)
      .def_property_readonly("c", &SystemParams::efficiency_c)
      .def("validate", &SystemParams::validate)
      .def("__repr__", [](const SystemParams& p) { return params_to_text(p); });

  m.def("goodman_mode", &goodman_mode, py::arg("params"));

  m.def("ee_crosslayer", &ee_crosslayer, py::arg("params"), py::arg("gamma"), py::arg("power"));
  m.def("ee_fixedcost", &ee_fixedcost, py::arg("params"), py::arg("gamma"), py::arg("power"));
  m.def("ee_goodman", &ee_goodman, py::arg("params"), py::arg("gamma"), py::arg("power"));
  m.def(
      "loss_probability",
      [](const SystemParams& p, double gamma) {
        return queue_stats(EfficiencyCurve::from(p), p, gamma).phi;
      },
      py::arg("params"), py::arg("gamma"));

  m.def(
      "sample_channel",
      [](const SystemParams& p, std::uint64_t seed) { return sample_channel(p, seed).gains_sq; },
      py::arg("params"), py::arg("seed"));
  m.def(
      "optimal_sinr", [](const SystemParams& p, double ratio) { return optimal_sinr(p, ratio); },
      py::arg("params"), py::arg("gain_over_interference"));
  m.def(
      "solve_ne",
      [](const SystemParams& p, const std::vector<double>& gains) {
        return equilibrium_dict(solve_ne(p, channel_of(gains)));
      },
      py::arg("params"), py::arg("gains"));
  m.def(
      "solve_op",
      [](const SystemParams& p, std::uint64_t seed, std::size_t draws) {
        const auto op = solve_op(p, seed, draws);
        py::dict d;
        d["alpha"] = op.alpha;
        d["common_sinr"] = op.common_sinr;
        d["expected_sum_utility"] = op.expected_sum_utility;
        d["unimodal"] = op.unimodal;
        return d;
      },
      py::arg("params"), py::arg("seed") = 1, py::arg("draws") = 2000);
  m.def(
      "folk_thresholds",
      [](const SystemParams& p, const std::vector<double>& gains, std::uint64_t seed,
         std::size_t draws) {
        const auto op = solve_op(p, seed, draws);
        const auto fc = folk_constants(p, channel_of(gains), op);
        py::dict d;
        try {
          d["t_min"] = t_min(fc);
        } catch (const InfeasibleError&) {
          d["t_min"] = py::none();
        }
        try {
          d["lambda_max"] = lambda_max(fc);
        } catch (const InfeasibleError&) {
          d["lambda_max"] = py::none();
        }
        return d;
      },
      py::arg("params"), py::arg("gains"), py::arg("seed") = 1, py::arg("draws") = 2000);

  m.def(
      "simulate_queue",
      [](double f, double q, int k, std::uint64_t slots, std::uint64_t seed) {
        const auto r = simulate_queue(f, q, k, slots, seed);
        py::dict d;
        d["full_fraction"] = r.full_fraction;
        d["dropped_fraction"] = r.dropped_fraction;
        d["delivered_rate"] = r.delivered_rate;
        d["occupancy"] = r.occupancy;
        return d;
      },
      py::arg("f"), py::arg("q"), py::arg("k"), py::arg("slots"), py::arg("seed") = 1);

  m.def(
      "run_scenario",
      [](const std::string& name, std::uint64_t seed, std::size_t draws,
         const std::vector<std::string>& overrides) {
        auto spec = make_spec(parse_scenario(name));
        spec.seed = seed;
        spec.draws = draws;
        for (const auto& o : overrides) apply_override(spec, o);
        py::gil_scoped_release release;
        return run_scenario_csv(spec);
      },
      py::arg("scenario"), py::arg("seed") = 1, py::arg("draws") = 10000,
      py::arg("overrides") = std::vector<std::string>{},
      "Run a scenario and return its CSV text.");
  m.def("scenarios", [] {
    std::vector<std::string> out;
    for (auto s : all_scenarios()) out.push_back(to_string(s));
    return out;
  });
}
