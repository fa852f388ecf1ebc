// Results files and the experiment runner.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"

namespace rechepim {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T field_number(const std::string& s, std::size_t line, const char* name) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    if constexpr (std::is_unsigned_v<T>) {
      if (v < 0) throw std::invalid_argument(s);
    }
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + name + " '" + s + "'");
  }
}

using CellKey = std::tuple<std::string, std::size_t, std::size_t, std::size_t>;  // model, n, perm_id, run

}  // namespace

std::string format_record(const ResultRecord& r) {
  std::ostringstream os;
  os << r.model << ',' << r.n << ',' << r.perm_id << ',' << r.run << ',' << r.best_fitness << ',' << r.generations
     << ',' << r.wall_ms;
  return os.str();
}

std::vector<ResultRecord> read_results(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (number == 1 && line == kResultsHeader) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw ParseError(number, "expected 7 fields, got " + std::to_string(f.size()));
    if (f[0].empty()) throw ParseError(number, "empty model name");
    ResultRecord r;
    r.model = f[0];
    r.n = field_number<std::size_t>(f[1], number, "n");
    r.perm_id = field_number<std::size_t>(f[2], number, "perm_id");
    r.run = field_number<std::size_t>(f[3], number, "run");
    r.best_fitness = field_number<int>(f[4], number, "best_fitness");
    r.generations = field_number<int>(f[5], number, "generations");
    r.wall_ms = field_number<long long>(f[6], number, "wall_ms");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRecord> load_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return read_results(in);
}

std::vector<TimelineRow> read_timeline(std::istream& in) {
  std::vector<TimelineRow> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (number == 1 && line == kTimelineHeader) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw ParseError(number, "expected 8 fields, got " + std::to_string(f.size()));
    TimelineRow r;
    r.model = f[0];
    r.n = field_number<std::size_t>(f[1], number, "n");
    r.perm_id = field_number<std::size_t>(f[2], number, "perm_id");
    r.run = field_number<std::size_t>(f[3], number, "run");
    r.event.event_index = field_number<int>(f[4], number, "event_index");
    r.event.island_id = field_number<int>(f[5], number, "island_id");
    try {
      if (r.event.event_index > 0) r.event.old_engine = parse_engine_kind(f[6]);
      r.event.new_engine = parse_engine_kind(f[7]);
    } catch (const std::exception& e) {
      throw ParseError(number, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t root, std::string_view model, std::size_t n, std::size_t perm_id,
                        std::size_t run) {
  return derive_seed(root, {fnv1a(model), n, perm_id, run});
}

namespace {

// Drops a trailing partial line left by an interrupted write.
void repair_tail(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.empty() || content.back() == '\n') return;
  const auto cut = content.find_last_of('\n');
  std::filesystem::resize_file(path, cut == std::string::npos ? 0 : cut + 1);
}

std::string timeline_rows(const ResultRecord& cell, const RunResult& r) {
  std::ostringstream os;
  const std::string prefix =
      cell.model + ',' + std::to_string(cell.n) + ',' + std::to_string(cell.perm_id) + ',' + std::to_string(cell.run);
  for (std::size_t i = 0; i < r.initial_layout.size(); ++i) {
    os << prefix << ",0," << i + 1 << ",-," << to_string(r.initial_layout[i]) << '\n';
  }
  for (const auto& e : r.timeline) {
    os << prefix << ',' << e.event_index << ',' << e.island_id << ',' << to_string(e.old_engine) << ','
       << to_string(e.new_engine) << '\n';
  }
  return os.str();
}

// Rewrites the timeline keeping only rows whose cell has a results record.
void prune_timeline(const std::string& path, const std::set<CellKey>& done) {
  std::ifstream in(path);
  if (!in) return;
  std::vector<TimelineRow> rows = read_timeline(in);
  in.close();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << kTimelineHeader << '\n';
  for (const auto& r : rows) {
    if (!done.count({r.model, r.n, r.perm_id, r.run})) continue;
    out << r.model << ',' << r.n << ',' << r.perm_id << ',' << r.run << ',' << r.event.event_index << ','
        << r.event.island_id << ',' << (r.event.event_index == 0 ? "-" : to_string(r.event.old_engine)) << ','
        << to_string(r.event.new_engine) << '\n';
  }
}

bool file_has_content(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const Dataset data = load_dataset(plan.dataset);
  std::vector<ModelConfig> models;
  for (const auto& spec : plan.models) models.push_back(resolve_model(spec, plan, data.n));

  repair_tail(plan.output);
  std::set<CellKey> done;
  if (file_has_content(plan.output)) {
    for (const auto& r : load_results(plan.output)) {
      done.insert({r.model, r.n, r.perm_id, r.run});
    }
  }
  const bool with_timeline = !plan.timeline.empty();
  if (with_timeline) {
    repair_tail(plan.timeline);
    if (file_has_content(plan.timeline)) prune_timeline(plan.timeline, done);
  }

  struct Cell {
    const ModelConfig* model;
    std::size_t perm_id;
    std::size_t run;
  };
  std::vector<Cell> cells;
  ExperimentSummary summary;
  for (const auto& m : models) {
    for (std::size_t p = 0; p < data.permutations.size(); ++p) {
      for (std::size_t run = 0; run < plan.runs; ++run) {
        if (done.count({m.name, data.n, p, run})) {
          ++summary.skipped;
        } else {
          cells.push_back({&m, p, run});
        }
      }
    }
  }

  const bool new_output = !file_has_content(plan.output);
  std::ofstream out(plan.output, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot write '" + plan.output + "'");
  if (new_output) out << kResultsHeader << '\n' << std::flush;
  std::ofstream timeline;
  if (with_timeline) {
    const bool new_timeline = !file_has_content(plan.timeline);
    timeline.open(plan.timeline, std::ios::binary | std::ios::app);
    if (!timeline) throw IoError("cannot write '" + plan.timeline + "'");
    if (new_timeline) timeline << kTimelineHeader << '\n' << std::flush;
  }

  // Finished cells are written in cell order, whatever the thread count, so
  // deterministic runs produce identical files.
  struct Finished {
    ResultRecord record;
    std::string timeline;
  };
  std::mutex mutex;
  std::map<std::size_t, Finished> pending;
  std::size_t next_to_write = 0;
  std::atomic<std::size_t> next_cell{0};
  std::exception_ptr failure;

  auto flush_ready = [&] {
    for (auto it = pending.find(next_to_write); it != pending.end(); it = pending.find(next_to_write)) {
      if (with_timeline && !it->second.timeline.empty()) {
        timeline << it->second.timeline << std::flush;
      }
      out << format_record(it->second.record) << '\n' << std::flush;
      pending.erase(it);
      ++next_to_write;
    }
  };

  auto worker = [&] {
    while (true) {
      const std::size_t i = next_cell.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      try {
        const Cell& c = cells[i];
        const auto start = std::chrono::steady_clock::now();
        const RunResult r = run_model(*c.model, data.permutations[c.perm_id],
                                      cell_seed(plan.seed, c.model->name, data.n, c.perm_id, c.run), plan.mode);
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        Finished f;
        f.record = {c.model->name, data.n, c.perm_id, c.run, r.best_fitness, r.generations,
                    plan.mode == ExecutionMode::Deterministic ? 0 : static_cast<long long>(elapsed.count())};
        if (c.model->kind == ModelKind::RecHePIM) f.timeline = timeline_rows(f.record, r);
        std::lock_guard lock(mutex);
        pending.emplace(i, std::move(f));
        flush_ready();
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t threads = std::min(plan.threads, std::max<std::size_t>(1, cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  if (!out) throw IoError("write to '" + plan.output + "' failed");
  summary.executed = cells.size();
  return summary;
}

}  // namespace rechepim
