// rechepim command-line tool.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"
#include "rechepim/reversal_distance.hpp"

using namespace rechepim;

namespace {

struct Global {
  std::optional<std::uint64_t> seed;
  std::string config;
  bool deterministic = false;
  std::optional<std::size_t> threads;
};

// Writes to path, or stdout when path is empty or "-".
template <typename F>
void emit(const std::string& path, F write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write(out);
}

int cmd_gen(const Global& g, std::size_t n, std::size_t count, const std::string& out) {
  gen_dataset(n, count, g.seed.value_or(1), out);
  std::cerr << "wrote " << count << " permutations of size " << n << " to " << out << '\n';
  return 0;
}

struct RunArgs {
  std::string dataset, output, timeline;
  std::vector<std::string> models;
  std::optional<std::size_t> runs;
  std::optional<int> max_it;
  std::optional<std::size_t> population;
  bool async = false;
};

int cmd_run(const Global& g, const RunArgs& a) {
  ExperimentPlan plan;
  if (!g.config.empty()) plan = load_plan(g.config);
  if (!a.dataset.empty()) plan.dataset = a.dataset;
  if (!a.output.empty()) plan.output = a.output;
  if (!a.timeline.empty()) plan.timeline = a.timeline;
  if (!a.models.empty()) {
    plan.models.clear();
    for (const auto& m : a.models) plan.models.push_back(builtin_model(m));
  }
  if (a.runs) plan.runs = *a.runs;
  if (a.max_it) plan.max_it = a.max_it;
  if (a.population) plan.population = a.population;
  if (g.seed) plan.seed = *g.seed;
  if (g.threads) plan.threads = *g.threads;
  if (a.async) plan.mode = ExecutionMode::Asynchronous;
  if (g.deterministic) plan.mode = ExecutionMode::Deterministic;
  const auto s = run_experiment(plan);
  std::cerr << "executed " << s.executed << " cells, skipped " << s.skipped << " already present\n";
  return 0;
}

int cmd_stats(const std::string& results, double alpha, const std::string& out) {
  const auto reports = compute_stats(load_results(results), alpha);
  for (const auto& rep : reports) {
    std::cout << "L=" << rep.n << " blocks=" << rep.matrix.blocks() << " Friedman chi2=" << std::setprecision(6)
              << rep.friedman.statistic << " p=" << rep.friedman.p_value
              << " control=" << rep.matrix.algorithms[rep.friedman.control];
    if (rep.friedman.tied_controls.size() > 1) std::cout << " (tied)";
    std::cout << '\n';
    for (std::size_t j = 0; j < rep.matrix.algorithm_count(); ++j) {
      std::cout << "  " << rep.matrix.algorithms[j] << " mean rank " << rep.friedman.mean_ranks[j] << '\n';
    }
  }
  emit(out, [&](std::ostream& os) { write_holm_csv(reports, os); });
  return 0;
}

int cmd_aggregate(const std::string& results, const std::string& timeline, const std::string& means,
                  const std::string& radar, const std::string& distribution) {
  const auto m = aggregate_means(load_results(results));
  emit(means, [&](std::ostream& os) { write_means_csv(m, os); });
  if (!radar.empty()) emit(radar, [&](std::ostream& os) { write_radar_csv(m, os); });
  if (!timeline.empty()) {
    std::ifstream in(timeline);
    if (!in) throw IoError("cannot read '" + timeline + "'");
    const auto d = final_distribution(read_timeline(in));
    emit(distribution, [&](std::ostream& os) { write_distribution_csv(d, os); });
  }
  return 0;
}

int cmd_oracle(const std::string& urd, const std::string& srd, const std::string& dataset) {
  if (!urd.empty()) {
    const auto pi = parse_unsigned(urd);
    std::cout << brute_force_urd(pi) << '\n';
  }
  if (!srd.empty()) {
    const auto sigma = parse_signed(srd);
    const auto s = analyze_breakpoint_graph(sigma);
    std::cout << brute_force_srd(sigma) << " (cycles " << s.cycles << ", hurdles " << s.hurdles
              << (s.fortress ? ", fortress" : "") << ")\n";
  }
  if (!dataset.empty()) {
    const Dataset d = load_dataset(dataset);
    for (std::size_t i = 0; i < d.permutations.size(); ++i) {
      std::cout << i << ',' << brute_force_urd(d.permutations[i]) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconfigurable heterogeneous island models for unsigned reversal distance"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Root seed");
  app.add_option("--config", g.config, "Experiment config file")->check(CLI::ExistingFile);
  app.add_flag("--deterministic", g.deterministic, "Round-robin single-threaded islands");
  app.add_option("--threads", g.threads, "Experiment cells run in parallel")->check(CLI::PositiveNumber);

  std::size_t n = 0, count = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a dataset of random unsigned permutations");
  gen->add_option("--n", n, "Permutation size")->required()->check(CLI::PositiveNumber);
  gen->add_option("--count", count, "Number of permutations")->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output file")->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run an experiment plan (resumable)");
  run->add_option("--dataset", ra.dataset);
  run->add_option("--output", ra.output);
  run->add_option("--timeline", ra.timeline);
  run->add_option("--models", ra.models, "Builtin model ids")->delimiter(',');
  run->add_option("--runs", ra.runs);
  run->add_option("--max-it", ra.max_it);
  run->add_option("--population", ra.population, "Population per island");
  run->add_flag("--async", ra.async, "One thread per island");

  std::string results, holm_out;
  double alpha = 0.05;
  auto* stats = app.add_subcommand("stats", "Friedman test and Holm post-hoc table");
  stats->add_option("--results", results)->required()->check(CLI::ExistingFile);
  stats->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
  stats->add_option("--out", holm_out, "Holm CSV (default stdout)");

  std::string agg_results, agg_timeline, means_out, radar_out, dist_out;
  auto* agg = app.add_subcommand("aggregate", "Per-model means, radar data and engine distribution");
  agg->add_option("--results", agg_results)->required()->check(CLI::ExistingFile);
  agg->add_option("--timeline", agg_timeline)->check(CLI::ExistingFile);
  agg->add_option("--means", means_out, "Means CSV (default stdout)");
  agg->add_option("--radar", radar_out);
  agg->add_option("--distribution", dist_out);

  std::string urd, srd, oracle_dataset;
  auto* oracle = app.add_subcommand("oracle", "Brute-force reversal distances");
  oracle->add_option("--urd", urd, "Unsigned permutation, n <= 7");
  oracle->add_option("--srd", srd, "Signed permutation, n <= 8");
  oracle->add_option("--dataset", oracle_dataset, "URD of every line of a dataset");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(g, n, count, gen_out);
    if (*run) return cmd_run(g, ra);
    if (*stats) return cmd_stats(results, alpha, holm_out);
    if (*agg) return cmd_aggregate(agg_results, agg_timeline, means_out, radar_out, dist_out);
    if (*oracle) {
      if (urd.empty() && srd.empty() && oracle_dataset.empty()) throw ContractViolation("oracle needs --urd, --srd or --dataset");
      return cmd_oracle(urd, srd, oracle_dataset);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
