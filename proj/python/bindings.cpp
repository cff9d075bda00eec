#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bankucb/bank_ucb.hpp"
#include "bankucb/batch_schedule.hpp"
#include "bankucb/knn.hpp"
#include "bankucb/runner.hpp"
#include "bankucb/version.hpp"

namespace py = pybind11;
using namespace bankucb;

namespace {

std::optional<std::size_t> adaptive_k_py(const std::vector<double>& sorted_distances,
                                         double lipschitz, Round t_prev) {
  return adaptive_k(std::span<const double>(sorted_distances), lipschitz, t_prev);
}

py::dict summarize(const ExperimentResult& r) {
  py::dict out;
  out["horizon"] = r.horizon;
  out["grid"] = r.grid.endpoints;
  py::dict finals;
  for (const auto& [alg, runs] : r.runs) {
    std::vector<double> values;
    for (const auto& run : runs) values.push_back(run.trace.final_regret());
    finals[py::str(alg)] = values;
  }
  out["final_regret"] = finals;
  return out;
}

}  // namespace

PYBIND11_MODULE(_bankucb, m) {
  m.doc() = "Batched k-nearest-neighbor UCB for nonparametric contextual bandits";
  m.attr("__version__") = kVersion;

  py::register_exception<InfeasibleGrid>(m, "InfeasibleGrid", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BatchViolation>(m, "BatchViolation", PyExc_RuntimeError);

  py::class_<BatchGrid>(m, "BatchGrid")
      .def_readonly("endpoints", &BatchGrid::endpoints)
      .def_readonly("gamma", &BatchGrid::gamma)
      .def_readonly("scale", &BatchGrid::scale)
      .def("num_batches", &BatchGrid::num_batches)
      .def("horizon", &BatchGrid::horizon)
      .def("batch_of", &BatchGrid::batch_of);

  m.def("grid_gamma", &grid_gamma, py::arg("alpha"), py::arg("dim"));
  m.def("make_grid", &make_grid, py::arg("horizon"), py::arg("num_batches"), py::arg("alpha"),
        py::arg("dim"));
  m.def("adaptive_k", &adaptive_k_py, py::arg("sorted_distances"), py::arg("lipschitz"),
        py::arg("t_prev"),
        "Largest k with L * d_k <= sqrt(ln(t_prev) / k), or None.");
  m.def(
      "noise_bound",
      [](std::size_t k, double sigma, int num_arms, int dim, Round t_prev) {
        return noise_bound(k, BankUcbConfig{1.0, sigma, num_arms, dim, 0}, t_prev);
      },
      py::arg("k"), py::arg("sigma"), py::arg("num_arms"), py::arg("dim"), py::arg("t_prev"));

  py::class_<BankUcbPolicy>(m, "BankUcbPolicy")
      .def(py::init([](const BatchGrid& grid, double lipschitz, double sigma, int num_arms,
                       int dim, std::uint64_t tie_seed) {
             return BankUcbPolicy(BankUcbConfig{lipschitz, sigma, num_arms, dim, tie_seed}, grid);
           }),
           py::arg("grid"), py::arg("lipschitz") = 1.0, py::arg("sigma") = 0.5,
           py::arg("num_arms") = 2, py::arg("dim") = 2, py::arg("tie_seed") = 0)
      .def("select_action",
           [](BankUcbPolicy& p, const std::vector<double>& x) { return p.select_action(Context(x)); })
      .def("record",
           [](BankUcbPolicy& p, const std::vector<double>& x, ArmId arm, double reward, Round t) {
             p.record(Sample{Context(x), arm, reward, t});
           })
      .def("commit_batch", &BankUcbPolicy::commit_batch)
      .def("ucb",
           [](const BankUcbPolicy& p, const std::vector<double>& x, ArmId arm) {
             const auto v = p.ucb(Context(x), arm);
             return v.is_infinite() ? std::numeric_limits<double>::infinity() : v.value();
           })
      .def_property_readonly("batch_index", &BankUcbPolicy::batch_index)
      .def_property_readonly("round", &BankUcbPolicy::round)
      .def_property_readonly("finished", &BankUcbPolicy::finished);

  m.def(
      "run_experiment",
      [](const std::string& config_json, int workers) {
        const auto cfg = parse_config_text(config_json);
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(cfg, workers);
        }
        return summarize(result);
      },
      py::arg("config_json"), py::arg("workers") = 0,
      "Runs an experiment from a JSON config and returns horizon, grid and final regrets.");
  m.def(
      "run_and_write",
      [](const std::string& config_json, int workers) {
        const auto cfg = parse_config_text(config_json);
        py::gil_scoped_release release;
        write_results(run_experiment(cfg, workers));
      },
      py::arg("config_json"), py::arg("workers") = 0,
      "Runs an experiment and writes its outputs to experiment.output_dir.");
}
