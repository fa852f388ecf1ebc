// Per-model means, chart data, final engine distributions and the statistics tables.

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"

namespace rechepim {
namespace {

std::string fmt(double x, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

std::map<std::string, std::map<std::size_t, std::map<std::size_t, double>>> permutation_averages(
    const std::vector<ResultRecord>& records) {
  // Integer sums keep the result independent of record order.
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::pair<long long, long long>> sums;
  for (const auto& r : records) {
    auto& [total, count] = sums[{r.model, r.n, r.perm_id}];
    total += r.best_fitness;
    ++count;
  }
  std::map<std::string, std::map<std::size_t, std::map<std::size_t, double>>> out;
  for (const auto& [key, s] : sums) {
    const auto& [model, n, perm] = key;
    out[model][n][perm] = static_cast<double>(s.first) / static_cast<double>(s.second);
  }
  return out;
}

std::vector<ModelMean> aggregate_means(const std::vector<ResultRecord>& records) {
  std::map<std::pair<std::string, std::size_t>, std::size_t> counts;
  for (const auto& r : records) ++counts[{r.model, r.n}];
  std::vector<ModelMean> out;
  for (const auto& [model, by_n] : permutation_averages(records)) {
    for (const auto& [n, perms] : by_n) {
      ModelMean m;
      m.model = model;
      m.n = n;
      m.permutations = perms.size();
      m.records = counts[{model, n}];
      double sum = 0.0;
      for (const auto& [perm, avg] : perms) sum += avg;
      m.mean = sum / static_cast<double>(perms.size());
      out.push_back(std::move(m));
    }
  }
  return out;
}

void write_means_csv(const std::vector<ModelMean>& means, std::ostream& out) {
  out << "model,n,mean_best_fitness,permutations,records\n";
  for (const auto& m : means) {
    out << m.model << ',' << m.n << ',' << fmt(m.mean) << ',' << m.permutations << ',' << m.records << '\n';
  }
}

void write_radar_csv(const std::vector<ModelMean>& means, std::ostream& out) {
  std::set<std::size_t> sizes;
  std::map<std::string, std::map<std::size_t, double>> table;
  for (const auto& m : means) {
    sizes.insert(m.n);
    table[m.model][m.n] = m.mean;
  }
  out << "model";
  for (std::size_t n : sizes) out << ",n" << n;
  out << '\n';
  for (const auto& [model, row] : table) {
    out << model;
    for (std::size_t n : sizes) {
      out << ',';
      if (auto it = row.find(n); it != row.end()) out << fmt(it->second);
    }
    out << '\n';
  }
}

std::vector<EngineDistribution> final_distribution(const std::vector<TimelineRow>& rows) {
  using RunKey = std::tuple<std::string, std::size_t, std::size_t, std::size_t>;
  std::map<RunKey, std::vector<const TimelineRow*>> runs;
  for (const auto& r : rows) runs[{r.model, r.n, r.perm_id, r.run}].push_back(&r);

  std::map<std::pair<std::string, std::size_t>, std::pair<std::array<long long, 4>, std::size_t>> counts;
  for (auto& [key, events] : runs) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto* a, const auto* b) { return a->event.event_index < b->event.event_index; });
    std::map<int, EngineKind> layout;
    for (const auto* e : events) {
      if (e->event.event_index == 0) {
        layout[e->event.island_id] = e->event.new_engine;
      } else {
        auto it = layout.find(e->event.island_id);
        if (it == layout.end()) throw ContractViolation("timeline event references an island with no initial engine");
        it->second = e->event.new_engine;
      }
    }
    auto& [tally, run_count] = counts[{std::get<0>(key), std::get<1>(key)}];
    for (const auto& [id, kind] : layout) ++tally[static_cast<std::size_t>(kind)];
    ++run_count;
  }

  std::vector<EngineDistribution> out;
  for (const auto& [key, c] : counts) {
    EngineDistribution d;
    d.model = key.first;
    d.n = key.second;
    d.runs = c.second;
    long long total = 0;
    for (long long x : c.first) total += x;
    for (std::size_t i = 0; i < 4; ++i) {
      d.percent[i] = total ? 100.0 * static_cast<double>(c.first[i]) / static_cast<double>(total) : 0.0;
    }
    out.push_back(d);
  }
  return out;
}

void write_distribution_csv(const std::vector<EngineDistribution>& d, std::ostream& out) {
  out << "model,n,runs,GA,GAD,DE,PSO\n";
  for (const auto& x : d) {
    out << x.model << ',' << x.n << ',' << x.runs;
    for (double p : x.percent) out << ',' << fmt(p, "%.2f");
    out << '\n';
  }
}

std::vector<StatsReport> compute_stats(const std::vector<ResultRecord>& records, double alpha) {
  const auto averages = permutation_averages(records);
  std::set<std::size_t> sizes;
  for (const auto& [model, by_n] : averages) {
    for (const auto& [n, perms] : by_n) sizes.insert(n);
  }
  std::vector<StatsReport> reports;
  for (std::size_t n : sizes) {
    StatsReport rep;
    rep.n = n;
    std::vector<const std::map<std::size_t, double>*> columns;
    for (const auto& [model, by_n] : averages) {
      if (auto it = by_n.find(n); it != by_n.end()) {
        rep.matrix.algorithms.push_back(model);
        columns.push_back(&it->second);
      }
    }
    // Blocks are the permutations every algorithm was measured on.
    for (const auto& [perm, value] : *columns.front()) {
      std::vector<double> row;
      for (const auto* col : columns) {
        auto it = col->find(perm);
        if (it == col->end()) break;
        row.push_back(it->second);
      }
      if (row.size() == columns.size()) rep.matrix.values.push_back(std::move(row));
    }
    rep.friedman = friedman_test(rep.matrix);
    rep.holm = holm_against_control(rep.matrix, rep.friedman, alpha);
    reports.push_back(std::move(rep));
  }
  if (reports.empty()) throw ContractViolation("no results to compare");
  return reports;
}

void write_holm_csv(const std::vector<StatsReport>& reports, std::ostream& out) {
  out << kHolmHeader << '\n';
  for (const auto& rep : reports) {
    const std::string& control = rep.matrix.algorithms[rep.friedman.control];
    for (const auto& row : rep.holm) {
      out << rep.n << ',' << control << ',' << row.i << ',' << row.algorithm << ',' << fmt(row.p_value, "%.6g") << ','
          << fmt(row.threshold, "%.6g") << ',' << (row.rejected ? "true" : "false") << '\n';
    }
  }
}

}  // namespace rechepim
