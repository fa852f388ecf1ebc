#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rechepim/engines.hpp"
#include "rechepim/permutation.hpp"
#include "rechepim/rng.hpp"

namespace rechepim {

// Numeric values follow the codes used in the tuned parameter tables.
enum class Emigration { Best = 1, Worst = 2, Random = 3 };
enum class EmigrationPolicy { Clone = 1, Remove = 2 };
enum class Immigration { Worst = 1, Random = 2, Similar = 3 };

struct MigrationParams {
  std::size_t individuals = 0;  ///< IN
  Emigration emigration = Emigration::Best;
  EmigrationPolicy policy = EmigrationPolicy::Clone;
  Immigration immigration = Immigration::Worst;
  int interval_pct = 100;  ///< MI, percentage of max_it

  void validate() const;
  friend bool operator==(const MigrationParams&, const MigrationParams&) = default;
};

Emigration emigration_from_code(int code);
EmigrationPolicy policy_from_code(int code);
Immigration immigration_from_code(int code);

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

enum class TopologyKind { StaticTree, DynamicCompleteGraph };

using IslandPair = std::pair<int, int>;  // 1-based island ids, first < second

struct Topology {
  TopologyKind kind = TopologyKind::StaticTree;
  std::size_t islands = 12;
  /// StaticTree only; empty for the complete graph, whose pairs are chosen per event.
  std::vector<IslandPair> edges;

  std::vector<int> neighbors(int island) const;
};

/// Heap-indexed binary tree (i -- 2i, i -- 2i+1) or the complete-graph marker.
Topology build_topology(TopologyKind kind, std::size_t islands = 12);

/// Tree with explicit wiring; must be connected and acyclic on 1..islands.
Topology tree_from_edges(std::size_t islands, std::vector<IslandPair> edges);

// ---------------------------------------------------------------------------
// Island quality and gbmm ranking
// ---------------------------------------------------------------------------

/// Fitness mean and (population) variance of an island.
struct IslandScore {
  double mean = 0.0;
  double variance = 0.0;
};

IslandScore island_score(const Population& pop);

struct ScoredIsland {
  int id = 0;
  IslandScore score;
};

/// Lower mean first; equal means prefer the larger variance; then lower id.
bool ranks_before(const ScoredIsland& a, const ScoredIsland& b) noexcept;

enum class IslandClass { Good, Medium, Bad };

struct GbmmRanking {
  std::vector<int> order;                 ///< island ids, best first
  std::vector<IslandClass> classes;       ///< indexed by island id - 1
  std::vector<IslandPair> pairs;          ///< Good-Bad rank-aligned, then Medium-Medium
};

/// Requires exactly 12 islands: 4 Good, 4 Medium, 4 Bad, six exchange pairs.
GbmmRanking rank_gbmm(std::span<const ScoredIsland> islands);

// ---------------------------------------------------------------------------
// Migration primitives
// ---------------------------------------------------------------------------

/// Slots chosen for emigration, in selection order.
std::vector<std::size_t> choose_emigrant_slots(const Population& pop, Emigration rule, std::size_t count, Rng& rng);

/// Replaces the given slots with fresh random individuals (EP = Remove).
void refill_slots(Population& pop, std::span<const std::size_t> slots, const UnsignedPermutation& pi, Rng& rng);

/// Selects emigrant copies; under Remove the source slots are refilled.
Population select_emigrants(Population& pop, Emigration rule, std::size_t count, EmigrationPolicy policy,
                            const UnsignedPermutation& pi, Rng& rng);

/// Writes immigrants into pop per rule and returns the overwritten slots.
std::vector<std::size_t> integrate_immigrants(Population& pop, const Population& immigrants, Immigration rule,
                                              Rng& rng);

// ---------------------------------------------------------------------------
// Islands
// ---------------------------------------------------------------------------

class Island {
 public:
  Island(int id, EngineKind kind, const EngineParams& params, std::size_t population, const UnsignedPermutation& pi,
         Rng rng, int max_it);

  int id() const noexcept { return id_; }
  EngineKind engine_kind() const noexcept { return engine_->kind(); }
  const Population& population() const noexcept { return population_; }
  Rng& rng() noexcept { return rng_; }
  int generation() const noexcept { return generation_; }

  IslandScore score() const { return island_score(population_); }
  int population_best() const;
  int best_so_far() const noexcept { return best_fitness_; }
  const SignVector& best_signs() const noexcept { return best_signs_; }
  const std::vector<int>& history() const noexcept { return history_; }

  void step(const UnsignedPermutation& pi);

  /// Emigrant copies; Remove refills the chosen slots locally.
  Population emigrate(const MigrationParams& m, const UnsignedPermutation& pi);
  std::vector<std::size_t> choose_emigrants(const MigrationParams& m);
  Population copy_slots(std::span<const std::size_t> slots) const;
  void refill(std::span<const std::size_t> slots, const UnsignedPermutation& pi);

  /// Converts a batch coming from another engine family and integrates it.
  void immigrate(Population batch, EngineKind source, Immigration rule, const UnsignedPermutation& pi);

  void reconfigure(EngineKind kind, const EngineParams& params, const UnsignedPermutation& pi);

 private:
  void observe();

  int id_;
  int max_it_;
  std::unique_ptr<Engine> engine_;
  Population population_;
  Rng rng_;
  int generation_ = 0;
  int best_fitness_;
  SignVector best_signs_;
  std::vector<int> history_;
};

/// One exchange among all islands. Every send reads the pre-event populations.
/// Tree: each island sends to every neighbour. Complete graph: gbmm pairs only.
void migration_event(std::vector<Island>& islands, const Topology& topology, const MigrationParams& params,
                     const UnsignedPermutation& pi);

struct ReconfigurationEvent {
  int event_index = 0;  ///< 1-based
  int island_id = 0;
  EngineKind old_engine = EngineKind::GA;
  EngineKind new_engine = EngineKind::GA;
};

/// The worst-scoring island adopts the engine of the best-scoring one.
ReconfigurationEvent reconfiguration_event(std::vector<Island>& islands,
                                           const std::array<EngineParams, 4>& tuned_params,
                                           const UnsignedPermutation& pi, int event_index);

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

enum class ModelKind { HoPIM, HePIM, RecHePIM };

std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(TopologyKind kind) noexcept;

struct ModelConfig {
  std::string name;
  ModelKind kind = ModelKind::HoPIM;
  TopologyKind topology = TopologyKind::StaticTree;
  MigrationParams migration;
  std::optional<int> reconfiguration_pct;  ///< RF, RecHePIM only
  int max_it = 1;
  std::size_t population_per_island = 4;
  std::vector<EngineKind> layout;  ///< initial engine per island; size = island count
  std::array<EngineParams, 4> engine_params{GaParams{}, GaParams{}, DeParams{}, PsoParams{}};
  std::vector<IslandPair> tree_edges;  ///< optional wiring override

  std::size_t islands() const noexcept { return layout.size(); }
  const EngineParams& params_for(EngineKind kind) const { return engine_params[static_cast<std::size_t>(kind)]; }
  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// max(4, floor(24 n log2(n) / islands)).
std::size_t default_population_per_island(std::size_t n, std::size_t islands = 12);

/// Round-robin GA, GAD, DE, PSO by island id.
std::vector<EngineKind> round_robin_layout(std::size_t islands);

/// Generations (1-based, after which the event fires) for an interval given in
/// percent of max_it: ceil(k * pct * max_it / 100) for k = 1 .. floor(100 / pct).
std::vector<int> event_generations(int pct, int max_it);

enum class ExecutionMode { Deterministic, Asynchronous };

struct RunResult {
  int best_fitness = 0;  ///< best-so-far over the whole run
  SignedPermutation best_individual = SignedPermutation::identity(1);
  int final_population_best = 0;
  std::vector<EngineKind> initial_layout;
  std::vector<EngineKind> final_layout;
  std::vector<ReconfigurationEvent> timeline;
  int generations = 0;
  int migration_events = 0;
  /// island_history[i][g]: best fitness in island i+1 after generation g (g = 0 .. max_it).
  std::vector<std::vector<int>> island_history;
  std::size_t total_individuals = 0;
};

/// Island i (1-based) draws from derive_seed(seed, {i}).
std::uint64_t island_seed(std::uint64_t seed, int island_id);

RunResult run_model(const ModelConfig& config, const UnsignedPermutation& pi, std::uint64_t seed,
                    ExecutionMode mode = ExecutionMode::Deterministic);

/// Bare sequential engine run, used as the reference for island-model reductions.
struct EngineTrace {
  std::vector<int> best_history;  ///< best population fitness after each generation, 0 .. max_it
  std::vector<int> final_fitness;
};

EngineTrace run_engine(EngineKind kind, const EngineParams& params, const UnsignedPermutation& pi,
                       std::size_t population, int max_it, Rng& rng);

}  // namespace rechepim
