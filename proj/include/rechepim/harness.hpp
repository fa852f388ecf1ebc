#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rechepim/archipelago.hpp"
#include "rechepim/engines.hpp"
#include "rechepim/permutation.hpp"
#include "rechepim/stats.hpp"

namespace rechepim {

// ---------------------------------------------------------------------------
// Builtin models
// ---------------------------------------------------------------------------

/// SEQ-{GA,GAD,DE,PSO}, HoPIM-{GA,GAD,DE,PSO}-{Tr12A,gbmm12A},
/// HePIM-{Tr12A,gbmm12A}, RecHePIM-{Tr12A,gbmm12A}.
const std::vector<std::string>& builtin_model_ids();

struct BuiltinParams {
  std::array<EngineParams, 4> engine_params{GaParams{}, GaParams{}, DeParams{}, PsoParams{}};
  MigrationParams migration;
  std::optional<int> reconfiguration_pct;
};

/// Tuned values for a builtin model id. Throws ConfigError for unknown ids.
BuiltinParams load_builtin_params(std::string_view id);

/// A model whose size-dependent fields are filled in once the dataset's n is known.
struct ModelSpec {
  ModelConfig config;  ///< max_it and population_per_island are placeholders
  std::optional<int> max_it;
  std::optional<std::size_t> population;
  /// Sequential engines run one island holding this many island populations.
  std::size_t population_scale = 1;
};

ModelSpec builtin_model(std::string_view id);

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

struct Dataset {
  std::size_t n = 0;
  std::vector<UnsignedPermutation> permutations;
};

/// count random permutations of 1..n drawn from a stream derived from seed.
Dataset generate_dataset(std::size_t n, std::size_t count, std::uint64_t seed);
void write_dataset(const Dataset& d, std::ostream& out);
void gen_dataset(std::size_t n, std::size_t count, std::uint64_t seed, const std::string& path);

Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::string& path);

// ---------------------------------------------------------------------------
// Plan and config file
// ---------------------------------------------------------------------------

struct ExperimentPlan {
  std::string dataset;
  std::size_t runs = 5;
  std::string output = "results.csv";
  std::string timeline;  ///< empty: no timeline file
  std::vector<ModelSpec> models;
  std::optional<int> max_it;                  ///< default: n
  std::optional<std::size_t> population = 20;  ///< empty: max(4, 24 n log2 n / 12)
  std::uint64_t seed = 1;
  ExecutionMode mode = ExecutionMode::Deterministic;
  std::size_t threads = 1;

  void validate() const;
};

ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan(const std::string& path);

/// Fills in max_it and population for problem size n and validates the result.
ModelConfig resolve_model(const ModelSpec& spec, const ExperimentPlan& plan, std::size_t n);

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct ResultRecord {
  std::string model;
  std::size_t n = 0;
  std::size_t perm_id = 0;
  std::size_t run = 0;
  int best_fitness = 0;
  int generations = 0;
  long long wall_ms = 0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

inline constexpr std::string_view kResultsHeader = "model,n,perm_id,run,best_fitness,generations,wall_ms";
inline constexpr std::string_view kTimelineHeader = "model,n,perm_id,run,event_index,island_id,old_engine,new_engine";
inline constexpr std::string_view kHolmHeader = "L,control,i,algorithm,p_value,alpha_over_i,rejected";

std::string format_record(const ResultRecord& r);
std::vector<ResultRecord> read_results(std::istream& in);
std::vector<ResultRecord> load_results(const std::string& path);

struct TimelineRow {
  std::string model;
  std::size_t n = 0;
  std::size_t perm_id = 0;
  std::size_t run = 0;
  ReconfigurationEvent event;  ///< event_index 0 rows give the initial layout; old engine unset
};

std::vector<TimelineRow> read_timeline(std::istream& in);

/// Seed of one (model, permutation, run) cell.
std::uint64_t cell_seed(std::uint64_t root, std::string_view model, std::size_t n, std::size_t perm_id,
                        std::size_t run);

struct ExperimentSummary {
  std::size_t executed = 0;
  std::size_t skipped = 0;
};

/// Runs every missing (model, permutation, run) cell and appends its record.
/// Cells already present in the output file are skipped.
ExperimentSummary run_experiment(const ExperimentPlan& plan);

// ---------------------------------------------------------------------------
// Aggregation and statistics
// ---------------------------------------------------------------------------

struct ModelMean {
  std::string model;
  std::size_t n = 0;
  double mean = 0.0;  ///< mean over permutations of the per-permutation run average
  std::size_t permutations = 0;
  std::size_t records = 0;
};

/// Sorted by (model, n); independent of record order.
std::vector<ModelMean> aggregate_means(const std::vector<ResultRecord>& records);
/// Per (model, n, permutation) average over runs.
std::map<std::string, std::map<std::size_t, std::map<std::size_t, double>>> permutation_averages(
    const std::vector<ResultRecord>& records);

void write_means_csv(const std::vector<ModelMean>& means, std::ostream& out);
/// One row per model, one column per n.
void write_radar_csv(const std::vector<ModelMean>& means, std::ostream& out);

struct EngineDistribution {
  std::string model;
  std::size_t n = 0;
  std::size_t runs = 0;
  std::array<double, 4> percent{};  ///< GA, GAD, DE, PSO over all final islands
};

/// Replays each run's events over its initial layout.
std::vector<EngineDistribution> final_distribution(const std::vector<TimelineRow>& rows);
void write_distribution_csv(const std::vector<EngineDistribution>& d, std::ostream& out);

struct StatsReport {
  std::size_t n = 0;
  RankMatrix matrix;
  FriedmanResult friedman;
  std::vector<HolmRow> holm;
};

/// One report per n; blocks are the permutations measured for every model.
std::vector<StatsReport> compute_stats(const std::vector<ResultRecord>& records, double alpha);
void write_holm_csv(const std::vector<StatsReport>& reports, std::ostream& out);

}  // namespace rechepim
