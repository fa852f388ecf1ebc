#include "rechepim/engines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "rechepim/errors.hpp"
#include "rechepim/reversal_distance.hpp"

namespace rechepim {

std::string_view to_string(EngineKind kind) noexcept {
  switch (kind) {
    case EngineKind::GA: return "GA";
    case EngineKind::GAD: return "GAD";
    case EngineKind::DE: return "DE";
    case EngineKind::PSO: return "PSO";
  }
  return "?";
}

EngineKind parse_engine_kind(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (EngineKind k : kAllEngines) {
    if (to_string(k) == upper) return k;
  }
  throw ConfigError("unknown engine '" + std::string(text) + "' (expected GA, GAD, DE or PSO)");
}

Representation representation_of(EngineKind kind) noexcept {
  return (kind == EngineKind::GA || kind == EngineKind::GAD) ? Representation::Signs : Representation::Reals;
}

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }
bool is_percentage(double p) { return p > 0.0 && p <= 100.0; }

}  // namespace

void GaParams::validate() const {
  if (!is_probability(crossover_prob) || !is_probability(mutation_prob)) {
    throw ConfigError("GA probabilities must lie in [0,1]");
  }
  if (!is_percentage(selection_pct) || !is_percentage(replacement_pct)) {
    throw ConfigError("GA selection/replacement percentages must lie in (0,100]");
  }
}

void DeParams::validate() const {
  if (!is_probability(crossover_prob)) throw ConfigError("DE crossover probability must lie in [0,1]");
  if (!(mutation_factor >= 0.0) || !std::isfinite(mutation_factor)) {
    throw ConfigError("DE mutation factor must be a non-negative number");
  }
}

void PsoParams::validate() const {
  if (!(acceleration_min <= acceleration_max) || !is_probability(success_threshold)) {
    throw ConfigError("PSO schedule is inconsistent");
  }
}

void check_params_for(EngineKind kind, const EngineParams& params) {
  const bool ok = (kind == EngineKind::GA || kind == EngineKind::GAD) ? std::holds_alternative<GaParams>(params)
                  : kind == EngineKind::DE                              ? std::holds_alternative<DeParams>(params)
                                                                        : std::holds_alternative<PsoParams>(params);
  if (!ok) throw ConfigError("parameters do not match engine " + std::string(to_string(kind)));
  std::visit([](const auto& p) { p.validate(); }, params);
}

// ---------------------------------------------------------------------------
// Fitness
// ---------------------------------------------------------------------------

int fitness(const SignVector& s, const UnsignedPermutation& pi) {
  return signed_reversal_distance(sign_vector_to_signed(s, pi));
}

int fitness(const RealVector& v, const UnsignedPermutation& pi, Rng& rng) {
  return signed_reversal_distance(decode_real_vector(v, pi, rng));
}

void evaluate(Individual& ind, const UnsignedPermutation& pi, Rng& rng) {
  if (const auto* s = std::get_if<SignVector>(&ind.genes)) {
    ind.realized = *s;
  } else {
    const auto& v = std::get<RealVector>(ind.genes);
    if (v.size() != pi.size()) throw ContractViolation("real vector length must match permutation size");
    ind.realized = decode_signs(v, rng);
  }
  ind.fitness = fitness(ind.realized, pi);
}

Individual random_individual(Representation rep, const UnsignedPermutation& pi, Rng& rng) {
  Individual ind;
  if (rep == Representation::Signs) {
    ind.genes = random_sign_vector(pi.size(), rng);
  } else {
    ind.genes = random_real_vector(pi.size(), rng);
  }
  evaluate(ind, pi, rng);
  return ind;
}

Population random_population(Representation rep, std::size_t size, const UnsignedPermutation& pi, Rng& rng) {
  Population pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) pop.push_back(random_individual(rep, pi, rng));
  return pop;
}

std::size_t percent_count(double pct, std::size_t total) {
  const auto raw = static_cast<std::size_t>(std::floor(pct * static_cast<double>(total) / 100.0 + 1e-9));
  return std::max<std::size_t>(1, raw);
}

std::vector<std::size_t> rank_by_fitness(const Population& pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pop[a].fitness.value() < pop[b].fitness.value(); });
  return order;
}

// ---------------------------------------------------------------------------
// Crossover
// ---------------------------------------------------------------------------

std::pair<SignVector, SignVector> one_point_crossover(const SignVector& a, const SignVector& b, std::size_t cut) {
  const std::size_t n = a.size();
  if (b.size() != n) throw ContractViolation("crossover parents must have equal length");
  if (cut < 1 || cut >= n) throw ContractViolation("one-point cut must satisfy 1 <= cut < n");
  SignVector c1 = a, c2 = b;
  for (std::size_t i = cut; i < n; ++i) std::swap(c1.signs[i], c2.signs[i]);
  return {std::move(c1), std::move(c2)};
}

std::pair<SignVector, SignVector> double_point_crossover(const SignVector& a, const SignVector& b, std::size_t cut1,
                                                         std::size_t cut2) {
  const std::size_t n = a.size();
  if (b.size() != n) throw ContractViolation("crossover parents must have equal length");
  if (cut1 < 1 || cut1 >= cut2 || cut2 >= n) {
    throw ContractViolation("double-point cuts must satisfy 1 <= cut1 < cut2 < n");
  }
  SignVector c1 = a, c2 = b;
  for (std::size_t i = cut1; i < cut2; ++i) std::swap(c1.signs[i], c2.signs[i]);
  return {std::move(c1), std::move(c2)};
}

// ---------------------------------------------------------------------------
// GA / GAD
// ---------------------------------------------------------------------------

namespace {

enum class Crossover { OnePoint, DoublePoint };

void check_evaluated(const Population& pop, Representation rep) {
  if (pop.empty()) throw ContractViolation("population must not be empty");
  for (const auto& ind : pop) {
    if (!ind.fitness) throw ContractViolation("population must be evaluated");
    if (ind.representation() != rep) throw ContractViolation("population representation does not match engine");
  }
}

// Draws parents from the pool without replacement, reshuffling when exhausted.
class ParentSampler {
 public:
  ParentSampler(std::vector<std::size_t> pool, Rng& rng) : pool_(std::move(pool)), rng_(rng) { refill(); }

  std::size_t next() {
    if (cursor_ == pool_.size()) refill();
    return pool_[cursor_++];
  }

 private:
  void refill() {
    rng_.shuffle(std::span<std::size_t>(pool_));
    cursor_ = 0;
  }

  std::vector<std::size_t> pool_;
  Rng& rng_;
  std::size_t cursor_ = 0;
};

Population breed(const Population& pop, const GaParams& params, std::size_t wanted, Crossover op,
                 const UnsignedPermutation& pi, Rng& rng) {
  const std::size_t n = pi.size();
  const auto order = rank_by_fitness(pop);
  const std::size_t pool_size = std::min(pop.size(), percent_count(params.selection_pct, pop.size()));
  ParentSampler sampler(std::vector<std::size_t>(order.begin(), order.begin() + pool_size), rng);

  Population children;
  children.reserve(wanted + 1);
  while (children.size() < wanted) {
    const std::size_t pa = sampler.next();
    const std::size_t pb = pool_size > 1 ? sampler.next() : pa;
    SignVector a = std::get<SignVector>(pop[pa].genes);
    SignVector b = std::get<SignVector>(pop[pb].genes);
    if (rng.bernoulli(params.crossover_prob)) {
      if (op == Crossover::OnePoint && n >= 2) {
        const auto cut = static_cast<std::size_t>(rng.between(1, static_cast<long long>(n) - 1));
        std::tie(a, b) = one_point_crossover(a, b, cut);
      } else if (op == Crossover::DoublePoint && n >= 3) {
        auto c1 = static_cast<std::size_t>(rng.between(1, static_cast<long long>(n) - 1));
        auto c2 = static_cast<std::size_t>(rng.between(1, static_cast<long long>(n) - 2));
        if (c2 >= c1) ++c2;
        if (c1 > c2) std::swap(c1, c2);
        std::tie(a, b) = double_point_crossover(a, b, c1, c2);
      }
    }
    for (SignVector* child : {&a, &b}) {
      for (auto& s : child->signs) {
        if (rng.bernoulli(params.mutation_prob)) s = static_cast<std::int8_t>(-s);
      }
    }
    for (SignVector* child : {&a, &b}) {
      Individual ind;
      ind.genes = std::move(*child);
      evaluate(ind, pi, rng);
      children.push_back(std::move(ind));
    }
  }
  std::stable_sort(children.begin(), children.end(),
                   [](const Individual& x, const Individual& y) { return *x.fitness < *y.fitness; });
  children.resize(wanted);
  return children;
}

}  // namespace

void ga_step(Population& pop, const GaParams& params, const UnsignedPermutation& pi, Rng& rng) {
  check_evaluated(pop, Representation::Signs);
  const std::size_t size = pop.size();
  std::size_t wanted = percent_count(params.replacement_pct, size);
  // The current best is never in the replaced block.
  if (size > 1) wanted = std::min(wanted, size - 1);
  Population children = breed(pop, params, wanted, Crossover::OnePoint, pi, rng);

  const auto order = rank_by_fitness(pop);
  if (size == 1) {
    if (*children[0].fitness <= *pop[0].fitness) pop[0] = std::move(children[0]);
    return;
  }
  for (std::size_t i = 0; i < wanted; ++i) pop[order[size - 1 - i]] = std::move(children[i]);
}

void gad_step(Population& pop, const GaParams& params, const UnsignedPermutation& pi, Rng& rng) {
  check_evaluated(pop, Representation::Signs);
  const std::size_t size = pop.size();
  const std::size_t wanted = std::min(size, percent_count(params.replacement_pct, size));
  Population children = breed(pop, params, wanted, Crossover::DoublePoint, pi, rng);

  std::vector<std::size_t> slots(size);
  std::iota(slots.begin(), slots.end(), 0);
  for (std::size_t i = 0; i < wanted; ++i) {
    std::swap(slots[i], slots[i + rng.below(size - i)]);
    pop[slots[i]] = std::move(children[i]);
  }
}

// ---------------------------------------------------------------------------
// DE
// ---------------------------------------------------------------------------

void de_step(Population& pop, const DeParams& params, const UnsignedPermutation& pi, Rng& rng) {
  if (pop.size() < 4) throw ContractViolation("DE needs a population of at least 4");
  check_evaluated(pop, Representation::Reals);
  const std::size_t size = pop.size();
  const std::size_t n = pi.size();

  Population trials;
  trials.reserve(size);
  for (std::size_t target = 0; target < size; ++target) {
    std::size_t r[3];
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t candidate;
      do {
        candidate = rng.below(size);
      } while (candidate == target || std::find(r, r + k, candidate) != r + k);
      r[k] = candidate;
    }
    const auto& x = std::get<RealVector>(pop[target].genes).coords;
    const auto& a = std::get<RealVector>(pop[r[0]].genes).coords;
    const auto& b = std::get<RealVector>(pop[r[1]].genes).coords;
    const auto& c = std::get<RealVector>(pop[r[2]].genes).coords;
    const std::size_t forced = rng.below(n);
    RealVector trial;
    trial.coords.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
      const double mutant = a[d] + params.mutation_factor * (b[d] - c[d]);
      trial.coords[d] = (d == forced || rng.bernoulli(params.crossover_prob)) ? mutant : x[d];
    }
    Individual ind;
    ind.genes = std::move(trial);
    evaluate(ind, pi, rng);
    trials.push_back(std::move(ind));
  }

  std::stable_sort(trials.begin(), trials.end(),
                   [](const Individual& x, const Individual& y) { return *x.fitness < *y.fitness; });
  const auto order = rank_by_fitness(pop);
  for (std::size_t k = 0; k < size; ++k) {
    Individual& worst = pop[order[size - 1 - k]];
    if (!(*trials[k].fitness < *worst.fitness)) break;
    worst = std::move(trials[k]);
  }
}

// ---------------------------------------------------------------------------
// PSO
// ---------------------------------------------------------------------------

PsoState PsoState::attach(const Population& pop, const PsoParams& params, int max_it) {
  if (pop.empty()) throw ContractViolation("population must not be empty");
  check_evaluated(pop, Representation::Reals);
  PsoState st;
  st.params = params;
  st.max_it = std::max(1, max_it);
  st.inertia = params.inertia_start;
  st.individual_acceleration = params.acceleration_start;
  st.global_acceleration = params.acceleration_start;
  st.velocity.assign(pop.size(), RealVector{std::vector<double>(std::get<RealVector>(pop[0].genes).size(), 0.0)});
  st.personal_best.reserve(pop.size());
  for (const auto& ind : pop) {
    st.personal_best.push_back(std::get<RealVector>(ind.genes));
    st.personal_best_fitness.push_back(*ind.fitness);
  }
  const auto best = rank_by_fitness(pop).front();
  st.global_best = st.personal_best[best];
  st.global_best_fitness = st.personal_best_fitness[best];
  return st;
}

void PsoState::reset_particle(const Population& pop, std::size_t slot) {
  const auto& pos = std::get<RealVector>(pop.at(slot).genes);
  velocity.at(slot).coords.assign(pos.size(), 0.0);
  personal_best[slot] = pos;
  personal_best_fitness[slot] = *pop[slot].fitness;
  if (personal_best_fitness[slot] < global_best_fitness) {
    global_best = pos;
    global_best_fitness = personal_best_fitness[slot];
  }
}

void pso_step(Population& pop, PsoState& state, const UnsignedPermutation& pi, Rng& rng) {
  check_evaluated(pop, Representation::Reals);
  if (state.velocity.size() != pop.size()) throw ContractViolation("PSO state does not match population");
  const std::size_t n = pi.size();
  const auto& p = state.params;

  const double progress = std::min(1.0, static_cast<double>(state.generation) / state.max_it);
  state.inertia = p.inertia_start - (p.inertia_start - p.inertia_end) * progress;

  std::size_t improved = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto& x = std::get<RealVector>(pop[i].genes).coords;
    auto& v = state.velocity[i].coords;
    const auto& pb = state.personal_best[i].coords;
    const auto& gb = state.global_best.coords;
    for (std::size_t d = 0; d < n; ++d) {
      const double r1 = rng.uniform01();
      const double r2 = rng.uniform01();
      v[d] = state.inertia * v[d] + state.individual_acceleration * r1 * (pb[d] - x[d]) +
             state.global_acceleration * r2 * (gb[d] - x[d]);
      x[d] += v[d];
    }
    evaluate(pop[i], pi, rng);
    if (*pop[i].fitness < state.personal_best_fitness[i]) {
      state.personal_best[i] = std::get<RealVector>(pop[i].genes);
      state.personal_best_fitness[i] = *pop[i].fitness;
      ++improved;
    }
  }
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (state.personal_best_fitness[i] < state.global_best_fitness) {
      state.global_best = state.personal_best[i];
      state.global_best_fitness = state.personal_best_fitness[i];
    }
  }

  const double success = static_cast<double>(improved) / static_cast<double>(pop.size());
  const double shift = success > p.success_threshold ? p.acceleration_step : -p.acceleration_step;
  state.global_acceleration = std::clamp(state.global_acceleration + shift, p.acceleration_min, p.acceleration_max);
  state.individual_acceleration =
      std::clamp(state.individual_acceleration - shift, p.acceleration_min, p.acceleration_max);
  ++state.generation;
}

// ---------------------------------------------------------------------------
// Conversion
// ---------------------------------------------------------------------------

Population convert_population(Population pop, EngineKind from, EngineKind to, const UnsignedPermutation& pi,
                              Rng& rng) {
  const Representation src = representation_of(from);
  const Representation dst = representation_of(to);
  for (const auto& ind : pop) {
    if (ind.representation() != src) throw ContractViolation("population representation does not match source engine");
  }
  if (src == dst) return pop;

  for (auto& ind : pop) {
    if (src == Representation::Signs) {
      const auto& s = std::get<SignVector>(ind.genes);
      RealVector v;
      v.coords.resize(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) v.coords[i] = s.signs[i] < 0 ? 0.25 : 0.75;
      ind.genes = std::move(v);
    } else {
      const RealVector v = std::get<RealVector>(ind.genes);
      ind.genes = decode_signs(v, rng);
      if (!decodes_deterministically(v) || !ind.fitness) evaluate(ind, pi, rng);
    }
  }
  return pop;
}

// ---------------------------------------------------------------------------
// Engine adaptors
// ---------------------------------------------------------------------------

namespace {

class GaEngine final : public Engine {
 public:
  GaEngine(EngineKind kind, GaParams params) : kind_(kind), params_(params) {}
  EngineKind kind() const noexcept override { return kind_; }
  EngineParams params() const override { return params_; }
  void step(Population& pop, const UnsignedPermutation& pi, Rng& rng) override {
    if (kind_ == EngineKind::GA) {
      ga_step(pop, params_, pi, rng);
    } else {
      gad_step(pop, params_, pi, rng);
    }
  }

 private:
  EngineKind kind_;
  GaParams params_;
};

class DeEngine final : public Engine {
 public:
  explicit DeEngine(DeParams params) : params_(params) {}
  EngineKind kind() const noexcept override { return EngineKind::DE; }
  EngineParams params() const override { return params_; }
  void step(Population& pop, const UnsignedPermutation& pi, Rng& rng) override { de_step(pop, params_, pi, rng); }

 private:
  DeParams params_;
};

class PsoEngine final : public Engine {
 public:
  PsoEngine(PsoParams params, int max_it) : params_(params), max_it_(max_it) {}
  EngineKind kind() const noexcept override { return EngineKind::PSO; }
  EngineParams params() const override { return params_; }
  void attach(const Population& pop) override { state_ = PsoState::attach(pop, params_, max_it_); }
  void step(Population& pop, const UnsignedPermutation& pi, Rng& rng) override {
    if (!state_) attach(pop);
    pso_step(pop, *state_, pi, rng);
  }
  void slot_replaced(const Population& pop, std::size_t slot) override {
    if (state_) state_->reset_particle(pop, slot);
  }

 private:
  PsoParams params_;
  int max_it_;
  std::optional<PsoState> state_;
};

}  // namespace

std::unique_ptr<Engine> make_engine(EngineKind kind, const EngineParams& params, int max_it) {
  check_params_for(kind, params);
  switch (kind) {
    case EngineKind::GA:
    case EngineKind::GAD: return std::make_unique<GaEngine>(kind, std::get<GaParams>(params));
    case EngineKind::DE: return std::make_unique<DeEngine>(std::get<DeParams>(params));
    case EngineKind::PSO: return std::make_unique<PsoEngine>(std::get<PsoParams>(params), max_it);
  }
  throw ContractViolation("unknown engine kind");
}

}  // namespace rechepim
