#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"
#include "rechepim/reversal_distance.hpp"

namespace py = pybind11;
using namespace rechepim;

namespace {

std::vector<int> genes_of(std::span<const int> g) { return {g.begin(), g.end()}; }

py::dict params_dict(const EngineParams& p) {
  py::dict d;
  if (auto* ga = std::get_if<GaParams>(&p)) {
    d["crossover"] = ga->crossover_prob;
    d["mutation"] = ga->mutation_prob;
    d["selection"] = ga->selection_pct;
    d["replacement"] = ga->replacement_pct;
  } else if (auto* de = std::get_if<DeParams>(&p)) {
    d["pc"] = de->crossover_prob;
    d["fm"] = de->mutation_factor;
  }
  return d;
}

RunResult run_builtin(const std::string& model, const std::vector<int>& pi, std::uint64_t seed, int max_it,
                      std::size_t population, bool deterministic) {
  const ModelSpec spec = builtin_model(model);
  ModelConfig c = spec.config;
  c.max_it = max_it;
  c.population_per_island = population;
  py::gil_scoped_release release;
  return run_model(c, UnsignedPermutation(pi), seed,
                   deterministic ? ExecutionMode::Deterministic : ExecutionMode::Asynchronous);
}

}  // namespace

PYBIND11_MODULE(_rechepim, m) {
  m.doc() = "Island models for the unsigned reversal distance problem";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResourceGuardError>(m, "ResourceGuardError", PyExc_ValueError);

  m.def(
      "apply_reversal",
      [](const std::vector<int>& sigma, std::size_t j, std::size_t k) {
        return genes_of(apply_reversal(SignedPermutation(sigma), j, k).genes());
      },
      py::arg("sigma"), py::arg("j"), py::arg("k"), "Signed reversal of positions j..k (1-based).");

  m.def(
      "random_unsigned_permutation",
      [](std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        return genes_of(random_unsigned_permutation(n, rng).genes());
      },
      py::arg("n"), py::arg("seed") = 0);

  m.def(
      "decode_real_vector",
      [](const std::vector<double>& v, const std::vector<int>& pi, std::uint64_t seed) {
        Rng rng(seed);
        return genes_of(decode_real_vector(RealVector{v}, UnsignedPermutation(pi), rng).genes());
      },
      py::arg("v"), py::arg("pi"), py::arg("seed") = 0);

  py::class_<BreakpointGraphSummary>(m, "BreakpointSummary")
      .def_readonly("cycles", &BreakpointGraphSummary::cycles)
      .def_readonly("hurdles", &BreakpointGraphSummary::hurdles)
      .def_readonly("super_hurdles", &BreakpointGraphSummary::super_hurdles)
      .def_readonly("fortress", &BreakpointGraphSummary::fortress)
      .def_readonly("distance", &BreakpointGraphSummary::distance);

  m.def(
      "analyze_breakpoint_graph",
      [](const std::vector<int>& sigma) { return analyze_breakpoint_graph(SignedPermutation(sigma)); },
      py::arg("sigma"));
  m.def(
      "signed_reversal_distance",
      [](const std::vector<int>& sigma) { return signed_reversal_distance(SignedPermutation(sigma)); },
      py::arg("sigma"));
  m.def(
      "brute_force_srd", [](const std::vector<int>& sigma) { return brute_force_srd(SignedPermutation(sigma)); },
      py::arg("sigma"));
  m.def(
      "brute_force_urd", [](const std::vector<int>& pi) { return brute_force_urd(UnsignedPermutation(pi)); },
      py::arg("pi"));

  m.def("builtin_model_ids", &builtin_model_ids);
  m.def(
      "load_builtin_params",
      [](const std::string& id) {
        const BuiltinParams b = load_builtin_params(id);
        py::dict d;
        d["GA"] = params_dict(b.engine_params[0]);
        d["GAD"] = params_dict(b.engine_params[1]);
        d["DE"] = params_dict(b.engine_params[2]);
        d["IN"] = b.migration.individuals;
        d["EMI"] = static_cast<int>(b.migration.emigration);
        d["EP"] = static_cast<int>(b.migration.policy);
        d["IMI"] = static_cast<int>(b.migration.immigration);
        d["MI"] = b.migration.interval_pct;
        d["RF"] = b.reconfiguration_pct ? py::object(py::int_(*b.reconfiguration_pct)) : py::object(py::none());
        return d;
      },
      py::arg("model"));
  m.def("event_generations", &event_generations, py::arg("pct"), py::arg("max_it"));

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("best_fitness", &RunResult::best_fitness)
      .def_property_readonly("best_individual",
                             [](const RunResult& r) { return genes_of(r.best_individual.genes()); })
      .def_readonly("final_population_best", &RunResult::final_population_best)
      .def_property_readonly("initial_layout",
                             [](const RunResult& r) {
                               std::vector<std::string> out;
                               for (auto k : r.initial_layout) out.emplace_back(to_string(k));
                               return out;
                             })
      .def_property_readonly("final_layout",
                             [](const RunResult& r) {
                               std::vector<std::string> out;
                               for (auto k : r.final_layout) out.emplace_back(to_string(k));
                               return out;
                             })
      .def_property_readonly("timeline",
                             [](const RunResult& r) {
                               std::vector<std::tuple<int, int, std::string, std::string>> out;
                               for (const auto& e : r.timeline) {
                                 out.emplace_back(e.event_index, e.island_id, std::string(to_string(e.old_engine)),
                                                  std::string(to_string(e.new_engine)));
                               }
                               return out;
                             })
      .def_readonly("generations", &RunResult::generations)
      .def_readonly("migration_events", &RunResult::migration_events)
      .def_readonly("island_history", &RunResult::island_history);

  m.def("run_model", &run_builtin, py::arg("model"), py::arg("pi"), py::arg("seed") = 1, py::arg("max_it") = 20,
        py::arg("population") = 20, py::arg("deterministic") = true,
        "Runs a builtin model on one permutation.");

  m.def(
      "friedman_test",
      [](const std::vector<std::vector<double>>& values, const std::vector<std::string>& algorithms) {
        const auto r = friedman_test(RankMatrix{algorithms, values});
        py::dict d;
        d["statistic"] = r.statistic;
        d["p_value"] = r.p_value;
        d["mean_ranks"] = r.mean_ranks;
        d["control"] = algorithms[r.control];
        std::vector<std::string> tied;
        for (auto i : r.tied_controls) tied.push_back(algorithms[i]);
        d["tied_controls"] = tied;
        return d;
      },
      py::arg("values"), py::arg("algorithms"), "values[block][algorithm]; lower is better.");

  m.def(
      "holm_posthoc",
      [](const std::vector<std::pair<std::string, double>>& comparisons, double alpha) {
        std::vector<HolmComparison> in;
        for (const auto& [name, p] : comparisons) in.push_back({name, p});
        std::vector<py::dict> out;
        for (const auto& row : holm_posthoc(in, alpha)) {
          py::dict d;
          d["i"] = row.i;
          d["algorithm"] = row.algorithm;
          d["p_value"] = row.p_value;
          d["threshold"] = row.threshold;
          d["rejected"] = row.rejected;
          out.push_back(d);
        }
        return out;
      },
      py::arg("comparisons"), py::arg("alpha") = 0.05);

  m.def("gen_dataset", &gen_dataset, py::arg("n"), py::arg("count"), py::arg("seed"), py::arg("path"));
  m.def(
      "run_experiment",
      [](const std::string& config) {
        const ExperimentPlan plan = load_plan(config);
        py::gil_scoped_release release;
        const auto s = run_experiment(plan);
        return std::make_pair(s.executed, s.skipped);
      },
      py::arg("config"), "Runs a config file; returns (executed, skipped).");
  m.def(
      "aggregate_means",
      [](const std::string& results) {
        std::vector<std::tuple<std::string, std::size_t, double>> out;
        for (const auto& x : aggregate_means(load_results(results))) out.emplace_back(x.model, x.n, x.mean);
        return out;
      },
      py::arg("results"));
}
