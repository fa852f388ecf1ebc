#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rechepim/permutation.hpp"
#include "rechepim/rng.hpp"

namespace rechepim {

enum class EngineKind { GA, GAD, DE, PSO };

inline constexpr std::array<EngineKind, 4> kAllEngines = {EngineKind::GA, EngineKind::GAD, EngineKind::DE,
                                                          EngineKind::PSO};

std::string_view to_string(EngineKind kind) noexcept;
/// Accepts "GA", "GAD", "DE", "PSO" (case-insensitive).
EngineKind parse_engine_kind(std::string_view text);

/// GA and GAD evolve sign vectors; DE and PSO evolve real vectors.
enum class Representation { Signs, Reals };

Representation representation_of(EngineKind kind) noexcept;

struct GaParams {
  double crossover_prob = 0.9;
  double mutation_prob = 0.02;
  double selection_pct = 60;
  double replacement_pct = 60;

  void validate() const;
  friend bool operator==(const GaParams&, const GaParams&) = default;
};

struct DeParams {
  double crossover_prob = 0.74;
  /// Scalar factor; a tuned "1%" is 0.01.
  double mutation_factor = 0.01;

  void validate() const;
  friend bool operator==(const DeParams&, const DeParams&) = default;
};

// Self-adjusting PSO schedule. The coefficients are not tuned per model:
// inertia decays linearly from inertia_start to inertia_end over max_it
// generations, and the acceleration pair shifts toward the global term while
// more than success_threshold of the swarm improves its personal best.
struct PsoParams {
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  double acceleration_start = 2.0;
  double acceleration_step = 0.05;
  double acceleration_min = 0.5;
  double acceleration_max = 2.5;
  double success_threshold = 0.2;

  void validate() const;
  friend bool operator==(const PsoParams&, const PsoParams&) = default;
};

using EngineParams = std::variant<GaParams, DeParams, PsoParams>;

/// Checks that params hold the variant alternative expected by kind.
void check_params_for(EngineKind kind, const EngineParams& params);

using Genotype = std::variant<SignVector, RealVector>;

struct Individual {
  Genotype genes;
  std::optional<int> fitness;
  /// Orientation actually scored at the last evaluation event.
  SignVector realized;

  Representation representation() const noexcept {
    return std::holds_alternative<SignVector>(genes) ? Representation::Signs : Representation::Reals;
  }
};

using Population = std::vector<Individual>;

int fitness(const SignVector& s, const UnsignedPermutation& pi);
/// Out-of-range coordinates draw their orientation from rng.
int fitness(const RealVector& v, const UnsignedPermutation& pi, Rng& rng);

void evaluate(Individual& ind, const UnsignedPermutation& pi, Rng& rng);

Individual random_individual(Representation rep, const UnsignedPermutation& pi, Rng& rng);
Population random_population(Representation rep, std::size_t size, const UnsignedPermutation& pi, Rng& rng);

/// floor(pct / 100 * total), at least 1.
std::size_t percent_count(double pct, std::size_t total);

/// Index order by ascending fitness, ties broken by index.
std::vector<std::size_t> rank_by_fitness(const Population& pop);

std::pair<SignVector, SignVector> one_point_crossover(const SignVector& a, const SignVector& b, std::size_t cut);
std::pair<SignVector, SignVector> double_point_crossover(const SignVector& a, const SignVector& b, std::size_t cut1,
                                                         std::size_t cut2);

// One breeding cycle each. Populations must be evaluated on entry and are
// evaluated on exit; their size never changes.
void ga_step(Population& pop, const GaParams& params, const UnsignedPermutation& pi, Rng& rng);
void gad_step(Population& pop, const GaParams& params, const UnsignedPermutation& pi, Rng& rng);
void de_step(Population& pop, const DeParams& params, const UnsignedPermutation& pi, Rng& rng);

struct PsoState {
  PsoParams params;
  std::vector<RealVector> velocity;
  std::vector<RealVector> personal_best;
  std::vector<int> personal_best_fitness;
  RealVector global_best;
  int global_best_fitness = 0;
  double inertia = 0.9;
  double individual_acceleration = 2.0;
  double global_acceleration = 2.0;
  int generation = 0;
  int max_it = 1;

  /// Fresh state: zero velocities, personal bests at the current positions.
  static PsoState attach(const Population& pop, const PsoParams& params, int max_it);
  /// Re-seeds one particle after its slot was overwritten from outside.
  void reset_particle(const Population& pop, std::size_t slot);
};

void pso_step(Population& pop, PsoState& state, const UnsignedPermutation& pi, Rng& rng);

/// Moves a population between engines. Same family: unchanged. Signs to reals:
/// -1 -> 0.25, +1 -> 0.75. Reals to signs: the decode rule, with re-evaluation
/// only when a coordinate was out of range.
Population convert_population(Population pop, EngineKind from, EngineKind to, const UnsignedPermutation& pi,
                              Rng& rng);

/// Common interface over the four engines, as driven by an island.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual EngineKind kind() const noexcept = 0;
  virtual EngineParams params() const = 0;
  /// Called once the population is initialized or replaced wholesale.
  virtual void attach(const Population& /*pop*/) {}
  virtual void step(Population& pop, const UnsignedPermutation& pi, Rng& rng) = 0;
  /// Called after a single slot was overwritten by migration.
  virtual void slot_replaced(const Population& /*pop*/, std::size_t /*slot*/) {}
};

std::unique_ptr<Engine> make_engine(EngineKind kind, const EngineParams& params, int max_it);

}  // namespace rechepim
