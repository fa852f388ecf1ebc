#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rechepim {

/// Blocks (problem instances) by algorithms; lower values are better.
struct RankMatrix {
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> values;  ///< values[block][algorithm]

  std::size_t blocks() const noexcept { return values.size(); }
  std::size_t algorithm_count() const noexcept { return algorithms.size(); }
  /// Rectangular, at least 2 algorithms and 2 blocks, finite cells.
  void validate() const;
};

/// Ranks 1..k within one block, averaging over ties.
std::vector<double> rank_block(const std::vector<double>& values);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> mean_ranks;
  /// Index of the lowest mean rank; the first one when tied.
  std::size_t control = 0;
  /// Every algorithm sharing the lowest mean rank.
  std::vector<std::size_t> tied_controls;
};

FriedmanResult friedman_test(const RankMatrix& m);

/// Survival function of the chi-square distribution.
double chi_square_sf(double x, double dof);

/// Two-sided p-value of the rank-difference z-statistic of algorithm j against
/// the control, normalised by sqrt(k(k+1) / (6B)).
double rank_z_statistic(double mean_rank, double control_rank, std::size_t k, std::size_t blocks);
double two_sided_p(double z);

struct HolmComparison {
  std::string algorithm;
  double p_value = 1.0;
};

struct HolmRow {
  std::size_t i = 0;  ///< divisor of alpha
  std::string algorithm;
  double p_value = 1.0;
  double threshold = 0.0;
  bool rejected = false;
};

/// Step-down procedure. Rows come back sorted by ascending p; the first row
/// uses alpha / m for m comparisons, the last alpha / 1.
std::vector<HolmRow> holm_posthoc(std::vector<HolmComparison> comparisons, double alpha);

/// Friedman ranks, then z-test p-values of every algorithm against the control.
std::vector<HolmRow> holm_against_control(const RankMatrix& m, const FriedmanResult& friedman, double alpha);

}  // namespace rechepim
