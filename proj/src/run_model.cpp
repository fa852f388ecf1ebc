// Model configuration, event schedules, and the two execution modes of an
// island model: a round-robin deterministic mode and an asynchronous mode with
// one thread per island.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "rechepim/archipelago.hpp"
#include "rechepim/errors.hpp"

namespace rechepim {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::HoPIM: return "HoPIM";
    case ModelKind::HePIM: return "HePIM";
    case ModelKind::RecHePIM: return "RecHePIM";
  }
  return "?";
}

std::string_view to_string(TopologyKind kind) noexcept {
  return kind == TopologyKind::StaticTree ? "tree" : "gbmm";
}

void ModelConfig::validate() const {
  const std::string where = "model '" + name + "': ";
  if (layout.empty()) throw ConfigError(where + "needs at least one island");
  if (max_it < 1) throw ConfigError(where + "max_it must be positive");
  if (population_per_island < 1) throw ConfigError(where + "population must be positive");
  migration.validate();
  if (migration.individuals > population_per_island) {
    throw ConfigError(where + "IN exceeds the island population");
  }
  if (topology == TopologyKind::DynamicCompleteGraph && islands() != 12 && migration.individuals > 0) {
    throw ConfigError(where + "gbmm migration needs exactly 12 islands");
  }
  if (!tree_edges.empty()) {
    if (topology != TopologyKind::StaticTree) throw ConfigError(where + "tree edges given for a non-tree topology");
    tree_from_edges(islands(), tree_edges);
  }

  for (EngineKind k : kAllEngines) check_params_for(k, params_for(k));
  const bool uses_de = std::find(layout.begin(), layout.end(), EngineKind::DE) != layout.end() ||
                       kind == ModelKind::RecHePIM;
  if (uses_de && population_per_island < 4) throw ConfigError(where + "DE islands need a population of at least 4");

  switch (kind) {
    case ModelKind::HoPIM:
      if (std::any_of(layout.begin(), layout.end(), [&](EngineKind k) { return k != layout.front(); })) {
        throw ConfigError(where + "a homogeneous model runs one engine on every island");
      }
      break;
    case ModelKind::HePIM:
    case ModelKind::RecHePIM: {
      if (islands() % 4 != 0) throw ConfigError(where + "heterogeneous models need a multiple of 4 islands");
      for (EngineKind k : kAllEngines) {
        if (static_cast<std::size_t>(std::count(layout.begin(), layout.end(), k)) != islands() / 4) {
          throw ConfigError(where + "heterogeneous layout must give each engine the same number of islands");
        }
      }
      break;
    }
  }
  if (kind == ModelKind::RecHePIM) {
    if (!reconfiguration_pct) throw ConfigError(where + "RecHePIM needs RF");
    if (*reconfiguration_pct <= 0 || *reconfiguration_pct > 100) throw ConfigError(where + "RF must lie in (0,100]");
    if (islands() < 2) throw ConfigError(where + "reconfiguration needs at least two islands");
  } else if (reconfiguration_pct) {
    throw ConfigError(where + "RF is only meaningful for RecHePIM");
  }
}

std::size_t default_population_per_island(std::size_t n, std::size_t islands) {
  const double total = 24.0 * static_cast<double>(n) * std::log2(static_cast<double>(n));
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::floor(total / static_cast<double>(islands))));
}

std::vector<EngineKind> round_robin_layout(std::size_t islands) {
  std::vector<EngineKind> out(islands);
  for (std::size_t i = 0; i < islands; ++i) out[i] = kAllEngines[i % 4];
  return out;
}

std::vector<int> event_generations(int pct, int max_it) {
  if (pct <= 0 || pct > 100) throw ContractViolation("event interval must lie in (0,100]");
  std::vector<int> out;
  for (long long k = 1; k * pct <= 100; ++k) {
    out.push_back(static_cast<int>((k * pct * max_it + 99) / 100));
  }
  return out;
}

std::uint64_t island_seed(std::uint64_t seed, int island_id) {
  return derive_seed(seed, {static_cast<std::uint64_t>(island_id)});
}

namespace {

Topology topology_of(const ModelConfig& config) {
  if (!config.tree_edges.empty()) return tree_from_edges(config.islands(), config.tree_edges);
  return build_topology(config.topology, config.islands());
}

std::vector<Island> make_islands(const ModelConfig& config, const UnsignedPermutation& pi, std::uint64_t seed) {
  std::vector<Island> islands;
  islands.reserve(config.islands());
  for (std::size_t i = 0; i < config.islands(); ++i) {
    const int id = static_cast<int>(i + 1);
    const EngineKind k = config.layout[i];
    islands.emplace_back(id, k, config.params_for(k), config.population_per_island, pi, Rng(island_seed(seed, id)),
                         config.max_it);
  }
  return islands;
}

// Counts how many events of a schedule fire after generation g.
int events_at(const std::vector<int>& schedule, int g) {
  return static_cast<int>(std::count(schedule.begin(), schedule.end(), g));
}

RunResult collect(const ModelConfig& config, const UnsignedPermutation& pi, std::vector<Island>& islands,
                  std::vector<ReconfigurationEvent> timeline, int migrations) {
  RunResult r;
  r.initial_layout = config.layout;
  r.generations = config.max_it;
  r.migration_events = migrations;
  std::sort(timeline.begin(), timeline.end(),
            [](const auto& a, const auto& b) { return a.event_index < b.event_index; });
  r.timeline = std::move(timeline);
  const Island* best = &islands.front();
  r.final_population_best = islands.front().population_best();
  for (const auto& isl : islands) {
    r.final_layout.push_back(isl.engine_kind());
    r.island_history.push_back(isl.history());
    r.total_individuals += isl.population().size();
    r.final_population_best = std::min(r.final_population_best, isl.population_best());
    if (isl.best_so_far() < best->best_so_far()) best = &isl;
  }
  r.best_fitness = best->best_so_far();
  r.best_individual = sign_vector_to_signed(best->best_signs(), pi);
  return r;
}

RunResult run_deterministic(const ModelConfig& config, const UnsignedPermutation& pi, std::uint64_t seed) {
  const Topology topology = topology_of(config);
  std::vector<Island> islands = make_islands(config, pi, seed);
  const auto migrations = event_generations(config.migration.interval_pct, config.max_it);
  const auto reconfigurations = config.kind == ModelKind::RecHePIM
                                    ? event_generations(*config.reconfiguration_pct, config.max_it)
                                    : std::vector<int>{};

  std::vector<ReconfigurationEvent> timeline;
  int migration_count = 0;
  for (int g = 1; g <= config.max_it; ++g) {
    for (auto& isl : islands) isl.step(pi);
    for (int e = events_at(migrations, g); e > 0; --e) {
      migration_event(islands, topology, config.migration, pi);
      ++migration_count;
    }
    for (int e = events_at(reconfigurations, g); e > 0; --e) {
      timeline.push_back(
          reconfiguration_event(islands, config.engine_params, pi, static_cast<int>(timeline.size()) + 1));
    }
  }
  return collect(config, pi, islands, std::move(timeline), migration_count);
}

// ---------------------------------------------------------------------------
// Asynchronous mode
//
// Islands exchange immutable snapshots through per-island mailboxes and never
// wait for each other. A passive coordinator keeps the latest published score
// of every island; it fixes the gbmm pairing of each migration round on first
// request, and issues one reconfiguration command per cycle once every island
// has published its score for that cycle.
// ---------------------------------------------------------------------------

struct ImmigrantBatch {
  EngineKind source_kind;
  std::shared_ptr<const Population> individuals;
};

struct ReconfigureCommand {
  int event_index;
  EngineKind kind;
};

class Mailbox {
 public:
  void post(ImmigrantBatch batch) {
    std::lock_guard lock(mutex_);
    batches_.push_back(std::move(batch));
  }

  void post(ReconfigureCommand cmd) {
    std::lock_guard lock(mutex_);
    commands_.push_back(cmd);
    has_commands_.store(true, std::memory_order_release);
  }

  std::vector<ImmigrantBatch> take_batches() {
    std::lock_guard lock(mutex_);
    return std::exchange(batches_, {});
  }

  std::vector<ReconfigureCommand> take_commands() {
    if (!has_commands_.load(std::memory_order_acquire)) return {};
    std::lock_guard lock(mutex_);
    has_commands_.store(false, std::memory_order_relaxed);
    return std::exchange(commands_, {});
  }

 private:
  std::mutex mutex_;
  std::vector<ImmigrantBatch> batches_;
  std::vector<ReconfigureCommand> commands_;
  std::atomic<bool> has_commands_{false};
};

class Coordinator {
 public:
  Coordinator(std::size_t islands, std::vector<Mailbox>& mailboxes)
      : latest_(islands), mailboxes_(mailboxes) {
    for (std::size_t i = 0; i < islands; ++i) latest_[i] = {static_cast<int>(i + 1), {}};
  }

  void publish(const ScoredIsland& s) {
    std::lock_guard lock(mutex_);
    latest_[s.id - 1] = s;
  }

  /// Partner of island id in migration round `round`.
  int gbmm_partner(int round, const ScoredIsland& self) {
    std::lock_guard lock(mutex_);
    latest_[self.id - 1] = self;
    auto it = pairings_.find(round);
    if (it == pairings_.end()) it = pairings_.emplace(round, rank_gbmm(latest_).pairs).first;
    for (auto [a, b] : it->second) {
      if (a == self.id) return b;
      if (b == self.id) return a;
    }
    throw ContractViolation("gbmm pairing is not a perfect matching");
  }

  void report_cycle(int cycle, const ScoredIsland& self, EngineKind kind) {
    std::lock_guard lock(mutex_);
    latest_[self.id - 1] = self;
    auto& reports = cycles_[cycle];
    reports.push_back({self, kind});
    if (reports.size() < latest_.size()) return;

    std::sort(reports.begin(), reports.end(),
              [](const Report& a, const Report& b) { return ranks_before(a.scored, b.scored); });
    const Report& best = reports.front();
    const Report& worst = reports.back();
    if (best.kind == worst.kind) {
      no_ops_.push_back({cycle, worst.scored.id, worst.kind, worst.kind});
    } else {
      mailboxes_[worst.scored.id - 1].post(ReconfigureCommand{cycle, best.kind});
    }
  }

  std::vector<ReconfigurationEvent> no_ops() {
    std::lock_guard lock(mutex_);
    return no_ops_;
  }

 private:
  struct Report {
    ScoredIsland scored;
    EngineKind kind;
  };

  std::mutex mutex_;
  std::vector<ScoredIsland> latest_;
  std::map<int, std::vector<IslandPair>> pairings_;
  std::map<int, std::vector<Report>> cycles_;
  std::vector<ReconfigurationEvent> no_ops_;
  std::vector<Mailbox>& mailboxes_;
};

RunResult run_asynchronous(const ModelConfig& config, const UnsignedPermutation& pi, std::uint64_t seed) {
  const Topology topology = topology_of(config);
  std::vector<Island> islands = make_islands(config, pi, seed);
  const auto migrations = event_generations(config.migration.interval_pct, config.max_it);
  const auto reconfigurations = config.kind == ModelKind::RecHePIM
                                    ? event_generations(*config.reconfiguration_pct, config.max_it)
                                    : std::vector<int>{};
  const MigrationParams& mp = config.migration;
  const bool migrate = mp.individuals > 0 && islands.size() > 1;

  std::vector<Mailbox> mailboxes(islands.size());
  Coordinator coordinator(islands.size(), mailboxes);
  std::vector<std::vector<ReconfigurationEvent>> applied(islands.size());
  std::atomic<int> migration_rounds{0};

  auto apply_commands = [&](Island& isl) {
    for (const auto& cmd : mailboxes[isl.id() - 1].take_commands()) {
      applied[isl.id() - 1].push_back({cmd.event_index, isl.id(), isl.engine_kind(), cmd.kind});
      isl.reconfigure(cmd.kind, config.params_for(cmd.kind), pi);
    }
  };
  auto drain_batches = [&](Island& isl) {
    for (auto& b : mailboxes[isl.id() - 1].take_batches()) {
      isl.immigrate(*b.individuals, b.source_kind, mp.immigration, pi);
    }
  };

  auto island_main = [&](Island& isl) {
    std::size_t next_migration = 0;
    std::size_t next_cycle = 0;
    for (int g = 1; g <= config.max_it; ++g) {
      apply_commands(isl);
      isl.step(pi);
      const ScoredIsland self{isl.id(), isl.score()};
      coordinator.publish(self);

      for (; next_migration < migrations.size() && migrations[next_migration] == g; ++next_migration) {
        if (!migrate) continue;
        const int round = static_cast<int>(next_migration) + 1;
        std::vector<int> targets = topology.kind == TopologyKind::StaticTree
                                       ? topology.neighbors(isl.id())
                                       : std::vector<int>{coordinator.gbmm_partner(round, {isl.id(), isl.score()})};
        std::vector<std::size_t> removed;
        for (int t : targets) {
          const auto slots = isl.choose_emigrants(mp);
          mailboxes[t - 1].post(ImmigrantBatch{isl.engine_kind(),
                                               std::make_shared<const Population>(isl.copy_slots(slots))});
          for (std::size_t s : slots) {
            if (std::find(removed.begin(), removed.end(), s) == removed.end()) removed.push_back(s);
          }
        }
        if (mp.policy == EmigrationPolicy::Remove) isl.refill(removed, pi);
        drain_batches(isl);
        if (isl.id() == 1) migration_rounds.fetch_add(1, std::memory_order_relaxed);
      }
      for (; next_cycle < reconfigurations.size() && reconfigurations[next_cycle] == g; ++next_cycle) {
        coordinator.report_cycle(static_cast<int>(next_cycle) + 1, {isl.id(), isl.score()}, isl.engine_kind());
      }
    }
    apply_commands(isl);
    drain_batches(isl);
  };

  {
    std::vector<std::jthread> workers;
    workers.reserve(islands.size());
    for (auto& isl : islands) workers.emplace_back([&island_main, &isl] { island_main(isl); });
  }

  // Messages that arrived after an island finished.
  for (auto& isl : islands) {
    apply_commands(isl);
    drain_batches(isl);
  }

  std::vector<ReconfigurationEvent> timeline = coordinator.no_ops();
  for (auto& events : applied) timeline.insert(timeline.end(), events.begin(), events.end());
  const int rounds = migrate ? migration_rounds.load() : static_cast<int>(migrations.size());
  return collect(config, pi, islands, std::move(timeline), rounds);
}

}  // namespace

RunResult run_model(const ModelConfig& config, const UnsignedPermutation& pi, std::uint64_t seed,
                    ExecutionMode mode) {
  config.validate();
  return mode == ExecutionMode::Deterministic ? run_deterministic(config, pi, seed)
                                              : run_asynchronous(config, pi, seed);
}

EngineTrace run_engine(EngineKind kind, const EngineParams& params, const UnsignedPermutation& pi,
                       std::size_t population, int max_it, Rng& rng) {
  auto engine = make_engine(kind, params, max_it);
  Population pop = random_population(representation_of(kind), population, pi, rng);
  engine->attach(pop);
  auto best = [&] {
    int b = pop.front().fitness.value();
    for (const auto& ind : pop) b = std::min(b, *ind.fitness);
    return b;
  };
  EngineTrace trace;
  trace.best_history.push_back(best());
  for (int g = 0; g < max_it; ++g) {
    engine->step(pop, pi, rng);
    trace.best_history.push_back(best());
  }
  for (const auto& ind : pop) trace.final_fitness.push_back(*ind.fitness);
  return trace;
}

}  // namespace rechepim
