#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"
#include "rechepim/reversal_distance.hpp"

using namespace rechepim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rechepim-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentPlan parse(const std::string& text) {
  std::istringstream in(text);
  return parse_plan(in);
}

}  // namespace

TEST_CASE("builtin parameter tables") {
  CHECK(builtin_model_ids().size() == 16);
  const auto ga = load_builtin_params("HoPIM-GA-Tr12A");
  CHECK(std::get<GaParams>(ga.engine_params[0]) == GaParams{0.98, 0.015, 92, 70});
  CHECK(ga.migration == MigrationParams{9, Emigration::Best, EmigrationPolicy::Remove, Immigration::Worst, 30});
  CHECK_FALSE(ga.reconfiguration_pct);

  const auto he = load_builtin_params("HePIM-Tr12A");
  CHECK(he.migration == MigrationParams{3, Emigration::Best, EmigrationPolicy::Remove, Immigration::Similar, 10});
  CHECK(load_builtin_params("RecHePIM-Tr12A").reconfiguration_pct == 14);
  CHECK(load_builtin_params("RecHePIM-Tr12A").migration == he.migration);

  const auto rg = load_builtin_params("RecHePIM-gbmm12A");
  CHECK(rg.migration == MigrationParams{6, Emigration::Random, EmigrationPolicy::Clone, Immigration::Similar, 14});
  CHECK(rg.reconfiguration_pct == 24);
  CHECK(std::get<DeParams>(rg.engine_params[2]) == DeParams{0.78, 0.01});

  CHECK(std::get<GaParams>(load_builtin_params("SEQ-GAD").engine_params[1]) == GaParams{0.92, 0.01, 98, 90});
  CHECK(std::get<DeParams>(load_builtin_params("SEQ-DE").engine_params[2]) == DeParams{0.74, 0.01});
  CHECK(std::get<DeParams>(load_builtin_params("HoPIM-DE-Tr12A").engine_params[2]) == DeParams{0.72, 0.014});
  CHECK(load_builtin_params("HoPIM-PSO-gbmm12A").migration ==
        MigrationParams{5, Emigration::Random, EmigrationPolicy::Remove, Immigration::Random, 22});
  CHECK_THROWS_AS(load_builtin_params("HoPIM-SSA-Tr12A"), ConfigError);

  for (const auto& id : builtin_model_ids()) {
    ExperimentPlan plan;
    CHECK_NOTHROW(resolve_model(builtin_model(id), plan, 20));
  }
  ExperimentPlan plan;
  CHECK(resolve_model(builtin_model("SEQ-GA"), plan, 20).population_per_island == 240);
  CHECK(resolve_model(builtin_model("HePIM-Tr12A"), plan, 20).max_it == 20);
}

TEST_CASE("dataset generation") {
  TempDir dir;
  gen_dataset(5, 3, 1, dir / "a.txt");
  gen_dataset(5, 3, 1, dir / "b.txt");
  CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));
  const auto d = load_dataset(dir / "a.txt");
  CHECK(d.n == 5);
  CHECK(d.permutations.size() == 3);
  const auto big = generate_dataset(100, 100, 7);
  CHECK(big.permutations.size() == 100);
  CHECK(big.permutations[0].size() == 100);
  CHECK_THROWS_AS(generate_dataset(0, 1, 1), ContractViolation);
  CHECK_THROWS_AS(gen_dataset(3, 1, 1, dir / "missing/dir/x.txt"), IoError);

  std::istringstream bad("1 2 3\n1 2\n");
  try {
    read_dataset(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("config parsing") {
  const auto plan = parse(R"(
# desk run
[plan]
dataset = d.txt
runs = 2
models = SEQ-DE, mine
max_it = 12
population = 8
seed = 5
mode = async

[model mine]
base = HePIM-Tr12A
in = 2
imi = 1
rf = 20
kind = RecHePIM
ga.crossover = 0.5
de.fm = 2
)");
  CHECK(plan.runs == 2);
  CHECK(plan.seed == 5);
  CHECK(plan.mode == ExecutionMode::Asynchronous);
  REQUIRE(plan.models.size() == 2);
  const auto& mine = plan.models[1].config;
  CHECK(mine.name == "mine");
  CHECK(mine.kind == ModelKind::RecHePIM);
  CHECK(mine.migration.individuals == 2);
  CHECK(mine.migration.immigration == Immigration::Worst);
  CHECK(mine.reconfiguration_pct == 20);
  CHECK(std::get<GaParams>(mine.engine_params[0]).crossover_prob == 0.5);
  CHECK(std::get<DeParams>(mine.engine_params[2]).mutation_factor == doctest::Approx(0.02));
  CHECK_NOTHROW(resolve_model(plan.models[1], plan, 10));

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("[plan]\ndataset = d\nmodels = SEQ-GA\ncolour = red\n") == 4);
  CHECK(line_of("[plan]\ndataset = d\nmodels = mine\n[model mine]\nbase = SEQ-GA\nbogus = 1\n") == 6);
  CHECK(line_of("[plan]\ndataset = d\nmodels = Nope\n") == 3);
  CHECK(line_of("[plan]\ndataset = d\nruns = x\nmodels = SEQ-GA\n") == 3);
  CHECK(line_of("[plan]\ndataset = d\nmodels = SEQ-GA\n[model orphan]\nbase = SEQ-GA\n") == 4);
  CHECK(line_of("[plan]\ndataset = d\nmodels = SEQ-GA\n[model x]\nemi = 7\n") != 0);
  CHECK(line_of("[plan]\nmodels = SEQ-GA\n") != 0);
  CHECK(line_of("dataset = d\n") == 1);
}

TEST_CASE("results parsing") {
  std::istringstream ok(std::string(kResultsHeader) + "\nA,7,0,0,3,7,0\nA,7,0,1,5,7,12\n");
  const auto r = read_results(ok);
  REQUIRE(r.size() == 2);
  CHECK(r[1].wall_ms == 12);
  CHECK(format_record(r[0]) == "A,7,0,0,3,7,0");
  std::istringstream bad(std::string(kResultsHeader) + "\nA,7,0,0,3,7,0\nA,7,0,x,3,7,0\n");
  try {
    read_results(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream short_row("A,7,0\n");
  CHECK_THROWS_AS(read_results(short_row), ParseError);
}

TEST_CASE("aggregation") {
  std::vector<ResultRecord> one{{"A", 7, 0, 0, 4, 7, 0}};
  auto m = aggregate_means(one);
  REQUIRE(m.size() == 1);
  CHECK(m[0].mean == 4.0);

  std::vector<ResultRecord> two{{"A", 7, 0, 0, 4, 7, 0}, {"A", 7, 0, 1, 6, 7, 0}};
  CHECK(permutation_averages(two)["A"][7][0] == 5.0);

  std::vector<ResultRecord> many;
  Rng rng(1);
  for (const char* model : {"A", "B", "C"}) {
    for (std::size_t n : {20, 30}) {
      for (std::size_t p = 0; p < 5; ++p) {
        for (std::size_t run = 0; run < 3; ++run) {
          many.push_back({model, n, p, run, static_cast<int>(rng.below(20)), 10, 0});
        }
      }
    }
  }
  std::ostringstream a, b;
  write_means_csv(aggregate_means(many), a);
  write_radar_csv(aggregate_means(many), a);
  rng.shuffle(std::span<ResultRecord>(many));
  write_means_csv(aggregate_means(many), b);
  write_radar_csv(aggregate_means(many), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("model,n20,n30") != std::string::npos);

  const auto reports = compute_stats(many, 0.05);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].matrix.blocks() == 5);
  std::ostringstream holm;
  write_holm_csv(reports, holm);
  CHECK(holm.str().rfind(std::string(kHolmHeader), 0) == 0);
}

TEST_CASE("final engine distribution") {
  std::vector<TimelineRow> rows;
  auto add = [&](std::size_t run, int idx, int island, EngineKind old_k, EngineKind new_k) {
    rows.push_back({"R", 7, 0, run, {idx, island, old_k, new_k}});
  };
  for (std::size_t run = 0; run < 3; ++run) {
    for (int i = 1; i <= 4; ++i) add(run, 0, i, EngineKind::GA, kAllEngines[i - 1]);
  }
  add(0, 1, 4, EngineKind::PSO, EngineKind::DE);
  add(1, 1, 4, EngineKind::PSO, EngineKind::DE);
  add(1, 2, 2, EngineKind::GAD, EngineKind::DE);
  const auto d = final_distribution(rows);
  REQUIRE(d.size() == 1);
  CHECK(d[0].runs == 3);
  double sum = 0;
  for (double p : d[0].percent) sum += p;
  CHECK(std::abs(sum - 100.0) < 0.01);
  CHECK(d[0].percent[2] == doctest::Approx(100.0 * 6 / 12));
  CHECK(d[0].percent[3] == doctest::Approx(100.0 * 1 / 12));
}

TEST_CASE("experiment cardinality, bound, resume and determinism") {
  TempDir dir;
  gen_dataset(6, 3, 4, dir / "d.txt");
  std::ofstream(dir / "plan.cfg") << "[plan]\ndataset = d.txt\nruns = 2\noutput = r.csv\ntimeline = t.csv\n"
                                     "models = SEQ-DE, RecHePIM-Tr12A\npopulation = 6\n";
  const auto plan = load_plan(dir / "plan.cfg");
  const auto s = run_experiment(plan);
  CHECK(s.executed == 12);
  const auto records = load_results(dir / "r.csv");
  CHECK(records.size() == 12);

  const auto data = load_dataset(dir / "d.txt");
  for (const auto& r : records) CHECK(r.best_fitness >= brute_force_urd(data.permutations[r.perm_id]));

  const std::string first = slurp(dir / "r.csv");
  const auto again = run_experiment(plan);
  CHECK(again.executed == 0);
  CHECK(again.skipped == 12);
  CHECK(slurp(dir / "r.csv") == first);

  // Drop the last record plus a torn line, then resume.
  const auto cut = first.find_last_of('\n', first.size() - 2);
  std::ofstream(dir / "r.csv", std::ios::binary | std::ios::trunc) << first.substr(0, cut + 1) << "RecHePIM-Tr";
  const auto resumed = run_experiment(plan);
  CHECK(resumed.executed == 1);
  CHECK(slurp(dir / "r.csv") == first);

  std::ifstream tin(dir / "t.csv");
  const auto timeline = read_timeline(tin);
  CHECK(timeline.size() == 6 * (12 + 7));
  const auto dist = final_distribution(timeline);
  REQUIRE(dist.size() == 1);
  CHECK(dist[0].runs == 6);

  auto threaded = plan;
  threaded.output = dir / "r2.csv";
  threaded.timeline.clear();
  threaded.threads = 3;
  run_experiment(threaded);
  CHECK(slurp(dir / "r2.csv") == first);
}

TEST_CASE("identity permutations score zero") {
  TempDir dir;
  std::ofstream(dir / "d.txt") << "1 2 3 4 5\n1 2 3 4 5\n";
  ExperimentPlan plan;
  plan.dataset = dir / "d.txt";
  plan.output = dir / "r.csv";
  plan.runs = 2;
  plan.population = 5;
  plan.models = {builtin_model("HoPIM-GA-Tr12A"), builtin_model("SEQ-PSO")};
  plan.models[0].config.migration.individuals = 5;
  run_experiment(plan);
  for (const auto& r : load_results(dir / "r.csv")) CHECK(r.best_fitness == 0);
}

TEST_CASE("config inline comments") {
  const auto plan = parse("[plan]\ndataset = d.txt  ; data\nruns = 3 # three\nmodels = SEQ-GA, mine ; two\n"
                          "[model mine]\nbase = HePIM-Tr12A\t# tree\nin = 2\n");
  CHECK(plan.dataset == "d.txt");
  CHECK(plan.runs == 3);
  REQUIRE(plan.models.size() == 2);
  CHECK(plan.models[1].config.migration.individuals == 2);
}
