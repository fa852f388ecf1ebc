#include "rechepim/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>

#include "rechepim/errors.hpp"

namespace rechepim {

void RankMatrix::validate() const {
  require(algorithms.size() >= 2, "rank matrix needs at least two algorithms");
  require(values.size() >= 2, "rank matrix needs at least two blocks");
  for (const auto& row : values) {
    require(row.size() == algorithms.size(), "rank matrix is not rectangular");
    for (double v : row) require(std::isfinite(v), "rank matrix holds a non-finite value");
  }
}

std::vector<double> rank_block(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double chi_square_sf(double x, double dof) {
  require(dof > 0, "chi-square needs positive degrees of freedom");
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

FriedmanResult friedman_test(const RankMatrix& m) {
  m.validate();
  const std::size_t k = m.algorithm_count();
  const double b = static_cast<double>(m.blocks());
  FriedmanResult r;
  r.mean_ranks.assign(k, 0.0);
  for (const auto& row : m.values) {
    const auto ranks = rank_block(row);
    for (std::size_t j = 0; j < k; ++j) r.mean_ranks[j] += ranks[j];
  }
  for (double& x : r.mean_ranks) x /= b;

  const double kd = static_cast<double>(k);
  double ss = 0.0;
  for (double x : r.mean_ranks) ss += (x - (kd + 1) / 2) * (x - (kd + 1) / 2);
  r.statistic = 12.0 * b / (kd * (kd + 1)) * ss;
  r.p_value = chi_square_sf(r.statistic, kd - 1);

  const double best = *std::min_element(r.mean_ranks.begin(), r.mean_ranks.end());
  for (std::size_t j = 0; j < k; ++j) {
    if (std::abs(r.mean_ranks[j] - best) < 1e-12) r.tied_controls.push_back(j);
  }
  r.control = r.tied_controls.front();
  return r;
}

double rank_z_statistic(double mean_rank, double control_rank, std::size_t k, std::size_t blocks) {
  require(k >= 2 && blocks >= 1, "z-statistic needs k >= 2 and at least one block");
  const double kd = static_cast<double>(k);
  const double se = std::sqrt(kd * (kd + 1) / (6.0 * static_cast<double>(blocks)));
  return (mean_rank - control_rank) / se;
}

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

std::vector<HolmRow> holm_posthoc(std::vector<HolmComparison> comparisons, double alpha) {
  require(!comparisons.empty(), "Holm procedure needs at least one comparison");
  require(alpha > 0 && alpha < 1, "alpha must lie in (0,1)");
  for (const auto& c : comparisons) require(c.p_value >= 0 && c.p_value <= 1, "p-value outside [0,1]");
  std::stable_sort(comparisons.begin(), comparisons.end(),
                   [](const auto& a, const auto& b) { return a.p_value < b.p_value; });

  std::vector<HolmRow> rows;
  const std::size_t m = comparisons.size();
  bool still_rejecting = true;
  for (std::size_t j = 0; j < m; ++j) {
    HolmRow row;
    row.i = m - j;
    row.algorithm = comparisons[j].algorithm;
    row.p_value = comparisons[j].p_value;
    row.threshold = alpha / static_cast<double>(row.i);
    still_rejecting = still_rejecting && row.p_value <= row.threshold;
    row.rejected = still_rejecting;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<HolmRow> holm_against_control(const RankMatrix& m, const FriedmanResult& friedman, double alpha) {
  std::vector<HolmComparison> comparisons;
  const double rc = friedman.mean_ranks.at(friedman.control);
  for (std::size_t j = 0; j < m.algorithm_count(); ++j) {
    if (j == friedman.control) continue;
    const double z = rank_z_statistic(friedman.mean_ranks[j], rc, m.algorithm_count(), m.blocks());
    comparisons.push_back({m.algorithms[j], two_sided_p(z)});
  }
  return holm_posthoc(std::move(comparisons), alpha);
}

}  // namespace rechepim
