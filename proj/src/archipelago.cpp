#include "rechepim/archipelago.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rechepim/errors.hpp"

namespace rechepim {

void MigrationParams::validate() const {
  if (interval_pct <= 0 || interval_pct > 100) throw ConfigError("MI must lie in (0,100]");
}

Emigration emigration_from_code(int code) {
  if (code < 1 || code > 3) throw ConfigError("EMI must be 1 (best), 2 (worst) or 3 (random)");
  return static_cast<Emigration>(code);
}

EmigrationPolicy policy_from_code(int code) {
  if (code < 1 || code > 2) throw ConfigError("EP must be 1 (clone) or 2 (remove)");
  return static_cast<EmigrationPolicy>(code);
}

Immigration immigration_from_code(int code) {
  if (code < 1 || code > 3) throw ConfigError("IMI must be 1 (worst), 2 (random) or 3 (similar)");
  return static_cast<Immigration>(code);
}

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

std::vector<int> Topology::neighbors(int island) const {
  std::vector<int> out;
  for (auto [a, b] : edges) {
    if (a == island) out.push_back(b);
    if (b == island) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Topology build_topology(TopologyKind kind, std::size_t islands) {
  if (islands == 0) throw ContractViolation("topology needs at least one island");
  Topology t;
  t.kind = kind;
  t.islands = islands;
  if (kind == TopologyKind::StaticTree) {
    for (std::size_t i = 1; 2 * i <= islands; ++i) {
      t.edges.emplace_back(static_cast<int>(i), static_cast<int>(2 * i));
      if (2 * i + 1 <= islands) t.edges.emplace_back(static_cast<int>(i), static_cast<int>(2 * i + 1));
    }
  }
  return t;
}

Topology tree_from_edges(std::size_t islands, std::vector<IslandPair> edges) {
  if (islands == 0) throw ConfigError("topology needs at least one island");
  if (edges.size() != islands - 1) throw ConfigError("a tree on m islands needs exactly m-1 edges");
  std::vector<int> parent(islands + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto& [a, b] : edges) {
    if (a < 1 || b < 1 || a > static_cast<int>(islands) || b > static_cast<int>(islands) || a == b) {
      throw ConfigError("tree edge references an invalid island");
    }
    if (a > b) std::swap(a, b);
    const int ra = find(a), rb = find(b);
    if (ra == rb) throw ConfigError("tree edges contain a cycle");
    parent[ra] = rb;
  }
  Topology t;
  t.kind = TopologyKind::StaticTree;
  t.islands = islands;
  t.edges = std::move(edges);
  return t;
}

// ---------------------------------------------------------------------------
// Scores and ranking
// ---------------------------------------------------------------------------

IslandScore island_score(const Population& pop) {
  if (pop.empty()) throw ContractViolation("island score needs a non-empty population");
  double sum = 0.0;
  for (const auto& ind : pop) sum += ind.fitness.value();
  const double mean = sum / static_cast<double>(pop.size());
  double sq = 0.0;
  for (const auto& ind : pop) {
    const double d = *ind.fitness - mean;
    sq += d * d;
  }
  return {mean, sq / static_cast<double>(pop.size())};
}

bool ranks_before(const ScoredIsland& a, const ScoredIsland& b) noexcept {
  if (a.score.mean != b.score.mean) return a.score.mean < b.score.mean;
  if (a.score.variance != b.score.variance) return a.score.variance > b.score.variance;
  return a.id < b.id;
}

GbmmRanking rank_gbmm(std::span<const ScoredIsland> islands) {
  if (islands.size() != 12) throw ContractViolation("gbmm ranking needs exactly 12 islands");
  std::vector<ScoredIsland> sorted(islands.begin(), islands.end());
  std::sort(sorted.begin(), sorted.end(), ranks_before);

  GbmmRanking r;
  r.classes.assign(12, IslandClass::Medium);
  for (std::size_t i = 0; i < 12; ++i) {
    const int id = sorted[i].id;
    if (id < 1 || id > 12) throw ContractViolation("island ids must be 1..12");
    r.order.push_back(id);
    r.classes[id - 1] = i < 4 ? IslandClass::Good : (i < 8 ? IslandClass::Medium : IslandClass::Bad);
  }
  auto pair = [](int a, int b) { return IslandPair{std::min(a, b), std::max(a, b)}; };
  for (std::size_t i = 0; i < 4; ++i) r.pairs.push_back(pair(r.order[i], r.order[8 + i]));
  r.pairs.push_back(pair(r.order[4], r.order[5]));
  r.pairs.push_back(pair(r.order[6], r.order[7]));
  return r;
}

// ---------------------------------------------------------------------------
// Migration primitives
// ---------------------------------------------------------------------------

std::vector<std::size_t> choose_emigrant_slots(const Population& pop, Emigration rule, std::size_t count, Rng& rng) {
  if (count > pop.size()) throw ContractViolation("cannot emigrate more individuals than the population holds");
  if (count == 0) return {};
  std::vector<std::size_t> slots;
  switch (rule) {
    case Emigration::Best: {
      const auto order = rank_by_fitness(pop);
      slots.assign(order.begin(), order.begin() + count);
      break;
    }
    case Emigration::Worst: {
      const auto order = rank_by_fitness(pop);
      slots.assign(order.rbegin(), order.rbegin() + count);
      break;
    }
    case Emigration::Random: {
      std::vector<std::size_t> all(pop.size());
      std::iota(all.begin(), all.end(), 0);
      for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng.below(all.size() - i)]);
      slots.assign(all.begin(), all.begin() + count);
      break;
    }
  }
  return slots;
}

void refill_slots(Population& pop, std::span<const std::size_t> slots, const UnsignedPermutation& pi, Rng& rng) {
  for (std::size_t slot : slots) {
    pop.at(slot) = random_individual(pop[slot].representation(), pi, rng);
  }
}

Population select_emigrants(Population& pop, Emigration rule, std::size_t count, EmigrationPolicy policy,
                            const UnsignedPermutation& pi, Rng& rng) {
  const auto slots = choose_emigrant_slots(pop, rule, count, rng);
  Population emigrants;
  emigrants.reserve(slots.size());
  for (std::size_t s : slots) emigrants.push_back(pop[s]);
  if (policy == EmigrationPolicy::Remove) refill_slots(pop, slots, pi, rng);
  return emigrants;
}

std::vector<std::size_t> integrate_immigrants(Population& pop, const Population& immigrants, Immigration rule,
                                              Rng& rng) {
  if (immigrants.size() > pop.size()) throw ContractViolation("more immigrants than residents");
  std::vector<std::size_t> replaced;
  if (immigrants.empty()) return replaced;
  const std::size_t size = pop.size();
  const auto order = rank_by_fitness(pop);

  switch (rule) {
    case Immigration::Worst:
      for (std::size_t i = 0; i < immigrants.size(); ++i) replaced.push_back(order[size - 1 - i]);
      break;
    case Immigration::Random: {
      std::vector<std::size_t> all(size);
      std::iota(all.begin(), all.end(), 0);
      for (std::size_t i = 0; i < immigrants.size(); ++i) {
        std::swap(all[i], all[i + rng.below(size - i)]);
        replaced.push_back(all[i]);
      }
      break;
    }
    case Immigration::Similar: {
      const double median = size % 2 == 1
                                ? *pop[order[size / 2]].fitness
                                : 0.5 * (*pop[order[size / 2 - 1]].fitness + *pop[order[size / 2]].fitness);
      const std::size_t best_half = std::max<std::size_t>(1, size / 2);
      std::vector<std::size_t> halves[2] = {{order.begin(), order.begin() + best_half},
                                            {order.begin() + best_half, order.end()}};
      for (const auto& imm : immigrants) {
        const int side = imm.fitness.value() <= median ? 0 : 1;
        auto& pool = halves[side].empty() ? halves[1 - side] : halves[side];
        const std::size_t pick = rng.below(pool.size());
        replaced.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      break;
    }
  }
  for (std::size_t i = 0; i < immigrants.size(); ++i) pop[replaced[i]] = immigrants[i];
  return replaced;
}

// ---------------------------------------------------------------------------
// Island
// ---------------------------------------------------------------------------

Island::Island(int id, EngineKind kind, const EngineParams& params, std::size_t population,
               const UnsignedPermutation& pi, Rng rng, int max_it)
    : id_(id), max_it_(max_it), engine_(make_engine(kind, params, max_it)), rng_(std::move(rng)) {
  if (population == 0) throw ContractViolation("island population must be positive");
  population_ = random_population(representation_of(kind), population, pi, rng_);
  engine_->attach(population_);
  best_fitness_ = population_best();
  best_signs_ = population_[rank_by_fitness(population_).front()].realized;
  history_.push_back(best_fitness_);
}

int Island::population_best() const {
  int best = population_.front().fitness.value();
  for (const auto& ind : population_) best = std::min(best, *ind.fitness);
  return best;
}

void Island::observe() {
  const std::size_t best = rank_by_fitness(population_).front();
  if (*population_[best].fitness < best_fitness_) {
    best_fitness_ = *population_[best].fitness;
    best_signs_ = population_[best].realized;
  }
}

void Island::step(const UnsignedPermutation& pi) {
  engine_->step(population_, pi, rng_);
  ++generation_;
  observe();
  history_.push_back(population_best());
}

std::vector<std::size_t> Island::choose_emigrants(const MigrationParams& m) {
  return choose_emigrant_slots(population_, m.emigration, m.individuals, rng_);
}

Population Island::copy_slots(std::span<const std::size_t> slots) const {
  Population out;
  out.reserve(slots.size());
  for (std::size_t s : slots) out.push_back(population_.at(s));
  return out;
}

void Island::refill(std::span<const std::size_t> slots, const UnsignedPermutation& pi) {
  refill_slots(population_, slots, pi, rng_);
  for (std::size_t s : slots) engine_->slot_replaced(population_, s);
  observe();
}

Population Island::emigrate(const MigrationParams& m, const UnsignedPermutation& pi) {
  const auto slots = choose_emigrants(m);
  Population out = copy_slots(slots);
  if (m.policy == EmigrationPolicy::Remove) refill(slots, pi);
  return out;
}

void Island::immigrate(Population batch, EngineKind source, Immigration rule, const UnsignedPermutation& pi) {
  if (batch.empty()) return;
  batch = convert_population(std::move(batch), source, engine_->kind(), pi, rng_);
  const auto slots = integrate_immigrants(population_, batch, rule, rng_);
  for (std::size_t s : slots) engine_->slot_replaced(population_, s);
  observe();
}

void Island::reconfigure(EngineKind kind, const EngineParams& params, const UnsignedPermutation& pi) {
  const EngineKind old = engine_->kind();
  if (old == kind) return;
  population_ = convert_population(std::move(population_), old, kind, pi, rng_);
  engine_ = make_engine(kind, params, max_it_);
  engine_->attach(population_);
  observe();
}

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

void migration_event(std::vector<Island>& islands, const Topology& topology, const MigrationParams& params,
                     const UnsignedPermutation& pi) {
  if (params.individuals == 0 || islands.size() < 2) return;

  std::vector<std::vector<int>> targets(islands.size());
  if (topology.kind == TopologyKind::StaticTree) {
    for (const auto& isl : islands) targets[isl.id() - 1] = topology.neighbors(isl.id());
  } else {
    std::vector<ScoredIsland> scored;
    for (const auto& isl : islands) scored.push_back({isl.id(), isl.score()});
    for (auto [a, b] : rank_gbmm(scored).pairs) {
      targets[a - 1].push_back(b);
      targets[b - 1].push_back(a);
    }
  }

  struct Batch {
    int target;
    EngineKind source_kind;
    Population individuals;
  };
  std::vector<Batch> batches;
  std::vector<std::vector<std::size_t>> removed(islands.size());
  for (auto& isl : islands) {
    for (int t : targets[isl.id() - 1]) {
      const auto slots = isl.choose_emigrants(params);
      batches.push_back({t, isl.engine_kind(), isl.copy_slots(slots)});
      auto& r = removed[isl.id() - 1];
      for (std::size_t s : slots) {
        if (std::find(r.begin(), r.end(), s) == r.end()) r.push_back(s);
      }
    }
  }
  if (params.policy == EmigrationPolicy::Remove) {
    for (auto& isl : islands) isl.refill(removed[isl.id() - 1], pi);
  }
  for (auto& isl : islands) {
    for (auto& b : batches) {
      if (b.target == isl.id()) isl.immigrate(std::move(b.individuals), b.source_kind, params.immigration, pi);
    }
  }
}

ReconfigurationEvent reconfiguration_event(std::vector<Island>& islands,
                                           const std::array<EngineParams, 4>& tuned_params,
                                           const UnsignedPermutation& pi, int event_index) {
  if (islands.size() < 2) throw ContractViolation("reconfiguration needs at least two islands");
  std::vector<ScoredIsland> scored;
  for (const auto& isl : islands) scored.push_back({isl.id(), isl.score()});
  std::sort(scored.begin(), scored.end(), ranks_before);
  Island& best = islands[scored.front().id - 1];
  Island& worst = islands[scored.back().id - 1];

  ReconfigurationEvent ev{event_index, worst.id(), worst.engine_kind(), best.engine_kind()};
  if (ev.old_engine != ev.new_engine) {
    worst.reconfigure(ev.new_engine, tuned_params[static_cast<std::size_t>(ev.new_engine)], pi);
  }
  return ev;
}

}  // namespace rechepim
