// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "rechepim/archipelago.hpp"
#include "rechepim/harness.hpp"
#include "rechepim/reversal_distance.hpp"
#include "rechepim/stats.hpp"

using namespace rechepim;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and protocol sizes.
constexpr int kRandomSrdCases = 1000;
constexpr int kUrdInstances = 50;
constexpr double kOptimalityRate = 0.95;
constexpr std::size_t kDeskN = 30;
constexpr std::size_t kDeskPermutations = 20;
constexpr std::size_t kDeskRuns = 5;
constexpr std::size_t kDeskPopulation = 20;
constexpr std::uint64_t kSeed = 20240601;
constexpr int kPropertyIterations = 10000;
constexpr double kStatsTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("rechepim-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SignedPermutation random_signed(std::size_t n, Rng& rng) {
  return sign_vector_to_signed(random_sign_vector(n, rng), random_unsigned_permutation(n, rng));
}

// 1 ---------------------------------------------------------------------------

Outcome srd_equivalence() {
  Outcome o;
  std::size_t exhaustive = 0, mismatches = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const SignedDistanceTable bfs(n);
    const auto independent = oracle::distance_table(n, true);
    for (const auto& g : oracle::all_signed(n)) {
      const SignedPermutation s(g);
      const int d = signed_reversal_distance(s);
      mismatches += d != bfs.distance(s) || d != independent.at(oracle::pack(g));
      ++exhaustive;
    }
  }
  Rng rng(derive_seed(kSeed, {1}));
  std::size_t sampled = 0;
  for (std::size_t n : {7, 8}) {
    const SignedDistanceTable bfs(n);
    for (int i = 0; i < kRandomSrdCases; ++i) {
      const auto s = random_signed(n, rng);
      mismatches += signed_reversal_distance(s) != bfs.distance(s);
      ++sampled;
    }
  }
  // Direct searches from the sample itself, without the table.
  std::size_t direct = 0;
  for (std::size_t n : {6, 7}) {
    for (int i = 0; i < 20; ++i) {
      const auto s = random_signed(n, rng);
      mismatches += signed_reversal_distance(s) != brute_force_srd(s);
      ++direct;
    }
  }
  const auto s8 = random_signed(8, rng);
  mismatches += signed_reversal_distance(s8) != brute_force_srd(s8);
  ++direct;

  o.pass = exhaustive == 46080 + 3840 + 384 + 48 + 8 + 2 && mismatches == 0;
  o.detail = std::to_string(exhaustive) + " exhaustive (n<=6), " + std::to_string(sampled) +
             " random (n=7,8), " + std::to_string(direct) + " direct searches, " + std::to_string(mismatches) +
             " mismatches";
  return o;
}

// 2 ---------------------------------------------------------------------------

Outcome urd_bound_and_optimality() {
  Outcome o;
  const Dataset data = generate_dataset(7, kUrdInstances, derive_seed(kSeed, {2}));
  std::vector<int> urd;
  for (const auto& pi : data.permutations) urd.push_back(brute_force_urd(pi));

  ExperimentPlan plan;
  std::size_t violations = 0, runs = 0;
  for (const auto& id : builtin_model_ids()) {
    const ModelConfig c = resolve_model(builtin_model(id), plan, 7);
    for (std::size_t p = 0; p < data.permutations.size(); ++p) {
      const auto r = run_model(c, data.permutations[p], cell_seed(kSeed, id, 7, p, 0));
      violations += r.best_fitness < urd[p];
      ++runs;
    }
  }
  std::ostringstream detail;
  detail << runs << " model runs, " << violations << " below the oracle";
  o.pass = violations == 0;
  for (const char* id : {"SEQ-DE", "SEQ-GA"}) {
    ModelConfig c = builtin_model(id).config;
    c.max_it = 200;
    c.population_per_island = 50;
    std::size_t optimal = 0;
    for (std::size_t p = 0; p < data.permutations.size(); ++p) {
      const auto r = run_model(c, data.permutations[p], cell_seed(kSeed, id, 7, p, 1));
      violations += r.best_fitness < urd[p];
      optimal += r.best_fitness == urd[p];
    }
    const double rate = static_cast<double>(optimal) / static_cast<double>(data.permutations.size());
    o.pass = o.pass && rate >= kOptimalityRate;
    detail << "; " << id << " optimal on " << optimal << "/" << data.permutations.size();
  }
  o.pass = o.pass && violations == 0;
  o.detail = detail.str();
  return o;
}

// 3, 4, 5 ---------------------------------------------------------------------

struct DeskRun {
  std::map<std::string, double> means;
  std::vector<StatsReport> homogeneous_stats;
  std::map<std::string, std::size_t> events_per_run;  // all runs must agree
  bool events_consistent = true;
};

DeskRun desk_experiment(const fs::path& dir) {
  const std::string dataset = (dir / "desk.txt").string();
  gen_dataset(kDeskN, kDeskPermutations, kSeed, dataset);
  ExperimentPlan plan;
  plan.dataset = dataset;
  plan.output = (dir / "desk.csv").string();
  plan.timeline = (dir / "desk-timeline.csv").string();
  plan.runs = kDeskRuns;
  plan.population = kDeskPopulation;
  plan.seed = kSeed;
  for (const char* id : {"HoPIM-GA-Tr12A", "HoPIM-GAD-Tr12A", "HoPIM-DE-Tr12A", "HoPIM-PSO-Tr12A", "HePIM-Tr12A",
                         "RecHePIM-Tr12A", "RecHePIM-gbmm12A"}) {
    plan.models.push_back(builtin_model(id));
  }
  run_experiment(plan);

  DeskRun d;
  const auto records = load_results(plan.output);
  for (const auto& m : aggregate_means(records)) d.means[m.model] = m.mean;
  std::vector<ResultRecord> homogeneous;
  for (const auto& r : records) {
    if (r.model.starts_with("HoPIM-")) homogeneous.push_back(r);
  }
  d.homogeneous_stats = compute_stats(homogeneous, 0.05);

  std::ifstream in(plan.timeline);
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::size_t> counts;
  for (const auto& row : read_timeline(in)) {
    auto& c = counts[{row.model, row.perm_id, row.run}];
    if (row.event.event_index > 0) ++c;
  }
  for (const auto& [key, c] : counts) {
    const auto& model = std::get<0>(key);
    auto [it, inserted] = d.events_per_run.emplace(model, c);
    if (!inserted && it->second != c) d.events_consistent = false;
  }
  if (counts.size() != 2 * kDeskPermutations * kDeskRuns) d.events_consistent = false;
  return d;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed << x;
  return os.str();
}

Outcome directional_ordering(const DeskRun& d) {
  const double de = d.means.at("HoPIM-DE-Tr12A"), ga = d.means.at("HoPIM-GA-Tr12A"),
               pso = d.means.at("HoPIM-PSO-Tr12A");
  const auto& rep = d.homogeneous_stats.at(0);
  const std::string control = rep.matrix.algorithms[rep.friedman.control];
  bool de_control = false;
  for (auto i : rep.friedman.tied_controls) de_control = de_control || rep.matrix.algorithms[i] == "HoPIM-DE-Tr12A";
  Outcome o;
  o.pass = de <= ga && de <= pso && de_control && rep.matrix.blocks() == kDeskPermutations;
  o.detail = "mean DE " + fmt(de) + ", GA " + fmt(ga) + ", PSO " + fmt(pso) + "; Friedman control " + control +
             " (chi2 " + fmt(rep.friedman.statistic) + ", p " + std::to_string(rep.friedman.p_value) + ", " +
             std::to_string(rep.matrix.blocks()) + " blocks)";
  return o;
}

Outcome reconfiguration_benefit(const DeskRun& d) {
  const double rec = d.means.at("RecHePIM-Tr12A"), he = d.means.at("HePIM-Tr12A");
  return {rec <= he, "mean RecHePIM-Tr " + fmt(rec) + ", HePIM-Tr " + fmt(he) + " over " +
                         std::to_string(kDeskPermutations * kDeskRuns) + " cells"};
}

Outcome reconfiguration_cycles(const DeskRun& d) {
  Outcome o;
  o.pass = d.events_consistent && d.events_per_run.at("RecHePIM-Tr12A") == 7 &&
           d.events_per_run.at("RecHePIM-gbmm12A") == 4;
  // Same counts for other budgets and in asynchronous mode.
  const Dataset extra = generate_dataset(12, 2, kSeed);
  std::size_t checked = 0;
  for (int max_it : {7, 12, 50, 100}) {
    for (const char* id : {"RecHePIM-Tr12A", "RecHePIM-gbmm12A"}) {
      ModelConfig c = builtin_model(id).config;
      c.max_it = max_it;
      c.population_per_island = 8;
      const std::size_t expected = c.reconfiguration_pct == 14 ? 7 : 4;
      for (ExecutionMode mode : {ExecutionMode::Deterministic, ExecutionMode::Asynchronous}) {
        const auto r = run_model(c, extra.permutations[0], kSeed + max_it, mode);
        o.pass = o.pass && r.timeline.size() == expected;
        ++checked;
      }
    }
  }
  o.detail = "RF 14%: " + std::to_string(d.events_per_run.at("RecHePIM-Tr12A")) + " events/run, RF 24%: " +
             std::to_string(d.events_per_run.at("RecHePIM-gbmm12A")) + " events/run over " +
             std::to_string(2 * kDeskPermutations * kDeskRuns) + " desk runs, plus " + std::to_string(checked) +
             " runs at other budgets";
  return o;
}

// 6 ---------------------------------------------------------------------------

Outcome migration_properties() {
  Rng rng(derive_seed(kSeed, {6}));
  std::size_t violations = 0;
  const std::array<EngineParams, 4> params{GaParams{}, GaParams{}, DeParams{}, PsoParams{}};

  for (int it = 0; it < kPropertyIterations; ++it) {
    // gbmm pairing over random scores with frequent ties.
    std::vector<ScoredIsland> scored;
    for (int id = 1; id <= 12; ++id) {
      scored.push_back({id, {static_cast<double>(rng.below(5)), static_cast<double>(rng.below(3))}});
    }
    rng.shuffle(std::span<ScoredIsland>(scored));
    const auto r = rank_gbmm(scored);
    std::vector<int> seen(13, 0);
    for (auto [a, b] : r.pairs) {
      ++seen[a];
      ++seen[b];
      const auto ca = r.classes[a - 1], cb = r.classes[b - 1];
      const bool good_bad = (ca == IslandClass::Good && cb == IslandClass::Bad) ||
                            (ca == IslandClass::Bad && cb == IslandClass::Good);
      const bool medium = ca == IslandClass::Medium && cb == IslandClass::Medium;
      violations += !(good_bad || medium);
    }
    violations += r.pairs.size() != 6;
    for (int id = 1; id <= 12; ++id) violations += seen[id] != 1;
    std::map<IslandClass, int> per_class;
    for (auto c : r.classes) ++per_class[c];
    violations += per_class[IslandClass::Good] != 4 || per_class[IslandClass::Medium] != 4 ||
                  per_class[IslandClass::Bad] != 4;

    // One migration event and one reconfiguration on a small random archipelago.
    const std::size_t n = 3 + rng.below(6);
    const std::size_t pop = 4 + rng.below(4);
    const auto pi = random_unsigned_permutation(n, rng);
    const bool gbmm = rng.bernoulli(0.5);
    const std::size_t count = gbmm ? 12 : 2 + rng.below(11);
    std::vector<Island> islands;
    std::vector<EngineKind> before;
    for (std::size_t i = 1; i <= count; ++i) {
      const EngineKind k = kAllEngines[rng.below(4)];
      before.push_back(k);
      islands.emplace_back(static_cast<int>(i), k, params[static_cast<std::size_t>(k)], pop, pi,
                           Rng(rng.next()), 10);
    }
    MigrationParams m{rng.below(pop + 1), static_cast<Emigration>(1 + rng.below(3)),
                      static_cast<EmigrationPolicy>(1 + rng.below(2)), static_cast<Immigration>(1 + rng.below(3)),
                      10};
    migration_event(islands, build_topology(gbmm ? TopologyKind::DynamicCompleteGraph : TopologyKind::StaticTree, count),
                    m, pi);
    std::size_t total = 0;
    for (const auto& isl : islands) {
      total += isl.population().size();
      violations += isl.population().size() != pop;
    }
    violations += total != count * pop;

    const auto ev = reconfiguration_event(islands, params, pi, 1);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (islands[i].engine_kind() != before[i]) {
        ++changed;
        violations += static_cast<int>(i + 1) != ev.island_id;
      }
    }
    violations += changed != (ev.old_engine != ev.new_engine ? 1u : 0u);
    for (const auto& isl : islands) violations += isl.population().size() != pop;
  }
  return {violations == 0, std::to_string(kPropertyIterations) + " iterations, " + std::to_string(violations) +
                               " violations"};
}

// 7 ---------------------------------------------------------------------------

Outcome statistics_correctness() {
  Outcome o;
  const RankMatrix m{{"A", "B", "C"}, {{1, 2, 3}, {2, 3, 4}, {0, 5, 9}, {1, 2, 4}}};
  const auto f = friedman_test(m);
  const double expected = oracle::friedman_from_ranks(
      {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  const auto holm2 = holm_posthoc({{"B", 0.001}, {"C", 0.2}}, 0.05);
  const auto holm1 = holm_posthoc({{"B", 0.04}}, 0.05);
  const auto table = holm_against_control(m, f, 0.05);

  o.pass = std::abs(f.statistic - 8.0) <= kStatsTolerance && std::abs(expected - 8.0) <= kStatsTolerance &&
           f.mean_ranks[0] == 1.0 && m.algorithms[f.control] == "A";
  o.pass = o.pass && holm2[0].rejected && !holm2[1].rejected && holm1[0].rejected;
  o.pass = o.pass && std::abs(holm2[0].threshold - 0.025) <= kStatsTolerance &&
           std::abs(holm2[1].threshold - 0.05) <= kStatsTolerance;
  o.pass = o.pass && table.size() == 2 && table[0].threshold == 0.025 && table[1].threshold == 0.05;
  const auto flat = friedman_test(RankMatrix{{"A", "B", "C"}, {{1, 1, 1}, {2, 2, 2}}});
  o.pass = o.pass && flat.statistic == 0.0 && flat.p_value == 1.0;
  o.detail = "chi2 " + std::to_string(f.statistic) + " (expected 8), Holm thresholds {" +
             std::to_string(table[0].threshold) + ", " + std::to_string(table[1].threshold) + "}";
  return o;
}

// 8 ---------------------------------------------------------------------------

Outcome determinism(const fs::path& dir) {
  auto pipeline = [&](const std::string& tag) {
    const fs::path sub = dir / tag;
    fs::create_directories(sub);
    std::ofstream(sub / "plan.cfg") << "[plan]\ndataset = d.txt\nruns = 2\noutput = r.csv\ntimeline = t.csv\n"
                                       "models = HoPIM-DE-Tr12A, HePIM-gbmm12A, RecHePIM-Tr12A, SEQ-PSO, custom\n"
                                       "population = 8\n\n[model custom]\nbase = RecHePIM-gbmm12A\nin = 2\nrf = 20\n";
#ifdef RECHEPIM_CLI
    const std::string cli = RECHEPIM_CLI;
    const std::string quiet = " 2>/dev/null";
    const std::string gen = cli + " --seed 3 gen --n 11 --count 4 --out " + (sub / "d.txt").string() + quiet;
    const std::string run = cli + " --config " + (sub / "plan.cfg").string() +
                            " --deterministic --threads 1 --seed 42 run" + quiet;
    if (std::system(gen.c_str()) != 0 || std::system(run.c_str()) != 0) return std::string("<cli failed>");
#else
    gen_dataset(11, 4, 3, (sub / "d.txt").string());
    auto plan = load_plan((sub / "plan.cfg").string());
    plan.seed = 42;
    run_experiment(plan);
#endif
    return slurp(sub / "r.csv") + "\n--\n" + slurp(sub / "t.csv");
  };
  const std::string a = pipeline("first"), b = pipeline("second");
  const bool ok = a == b && a.find("<cli failed>") == std::string::npos && a.size() > 100;
  return {ok, std::to_string(a.size()) + " bytes of results and timeline, " + (a == b ? "identical" : "different")};
}

// 9 ---------------------------------------------------------------------------

Outcome reduction() {
  std::size_t compared = 0, mismatches = 0;
  Rng rng(derive_seed(kSeed, {9}));
  for (EngineKind k : kAllEngines) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto pi = random_unsigned_permutation(10 + rng.below(20), rng);
      const std::uint64_t seed = rng.next();
      ModelConfig c = builtin_model("HoPIM-" + std::string(to_string(k)) + "-Tr12A").config;
      c.layout = {k};
      c.migration.individuals = 0;
      c.max_it = 25;
      c.population_per_island = 12;
      const auto r = run_model(c, pi, seed);
      Rng engine_rng(island_seed(seed, 1));
      const auto trace = run_engine(k, c.params_for(k), pi, 12, 25, engine_rng);
      mismatches += r.island_history.at(0) != trace.best_history;
      mismatches += r.final_population_best != trace.best_history.back();
      ++compared;
    }
  }
  return {mismatches == 0, std::to_string(compared) + " trajectories compared, " + std::to_string(mismatches) +
                               " mismatches"};
}

void report(int id, const char* name, const std::function<Outcome()>& check, bool& all) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << " ["
            << fmt(secs) << " s]" << std::endl;
  all = all && o.pass;
}

}  // namespace

int main() {
  const fs::path dir = scratch_dir();
  bool all = true;
  report(1, "SRD oracle equivalence", srd_equivalence, all);
  report(2, "URD bound and optimality", urd_bound_and_optimality, all);
  std::optional<DeskRun> desk;
  std::string desk_error;
  try {
    desk = desk_experiment(dir);
  } catch (const std::exception& e) {
    desk_error = e.what();
  }
  auto with_desk = [&](Outcome (*f)(const DeskRun&)) {
    return [&, f]() -> Outcome {
      if (!desk) return {false, "desk experiment failed: " + desk_error};
      return f(*desk);
    };
  };
  report(3, "directional ordering", with_desk(directional_ordering), all);
  report(4, "reconfiguration benefit", with_desk(reconfiguration_benefit), all);
  report(5, "reconfiguration cycle counts", with_desk(reconfiguration_cycles), all);
  report(6, "migration and ranking invariants", migration_properties, all);
  report(7, "statistics correctness", statistics_correctness, all);
  report(8, "determinism", [&] { return determinism(dir); }, all);
  report(9, "single-island reduction", reduction, all);
  fs::remove_all(dir);
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
