// Dataset files and the experiment config format.
//
//   [plan]
//   dataset = perms.txt
//   runs = 5
//   models = HoPIM-DE-Tr12A, RecHePIM-Tr12A, mine
//
//   [model mine]
//   base = HePIM-Tr12A
//   in = 4
//
// Blank lines, lines starting with '#' or ';', and inline ' ;' / ' #' comments are ignored.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"

namespace rechepim {

Dataset generate_dataset(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw ContractViolation("dataset needs n >= 1");
  if (count < 1) throw ContractViolation("dataset needs at least one permutation");
  Rng rng(derive_seed(seed, {fnv1a("dataset"), n}));
  Dataset d;
  d.n = n;
  for (std::size_t i = 0; i < count; ++i) d.permutations.push_back(random_unsigned_permutation(n, rng));
  return d;
}

void write_dataset(const Dataset& d, std::ostream& out) {
  for (const auto& p : d.permutations) out << to_string(p) << '\n';
}

void gen_dataset(std::size_t n, std::size_t count, std::uint64_t seed, const std::string& path) {
  const Dataset d = generate_dataset(n, count, seed);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_dataset(d, out);
  if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  while (true) {
    const auto pos = s.find(sep);
    const auto item = trim(s.substr(0, pos));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

}  // namespace

Dataset read_dataset(std::istream& in) {
  Dataset d;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      d.permutations.push_back(parse_unsigned(line));
    } catch (const ContractViolation& e) {
      throw ParseError(number, e.what());
    }
    const std::size_t n = d.permutations.back().size();
    if (d.n == 0) d.n = n;
    if (n != d.n) throw ParseError(number, "permutation size differs from the first line");
  }
  if (d.permutations.empty()) throw ParseError(number, "dataset is empty");
  return d;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return read_dataset(in);
}

// ---------------------------------------------------------------------------
// Plan
// ---------------------------------------------------------------------------

void ExperimentPlan::validate() const {
  if (dataset.empty()) throw ConfigError("plan needs a dataset");
  if (runs < 1) throw ConfigError("plan needs runs >= 1");
  if (output.empty()) throw ConfigError("plan needs an output file");
  if (models.empty()) throw ConfigError("plan needs at least one model");
  if (threads < 1) throw ConfigError("threads must be positive");
  if (max_it && *max_it < 1) throw ConfigError("max_it must be positive");
  if (population && *population < 1) throw ConfigError("population must be positive");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!names.insert(m.config.name).second) throw ConfigError("model '" + m.config.name + "' listed twice");
  }
}

ModelConfig resolve_model(const ModelSpec& spec, const ExperimentPlan& plan, std::size_t n) {
  ModelConfig c = spec.config;
  c.max_it = spec.max_it.value_or(plan.max_it.value_or(static_cast<int>(n)));
  if (spec.population) {
    c.population_per_island = *spec.population;
  } else if (plan.population) {
    c.population_per_island = *plan.population * spec.population_scale;
  } else {
    c.population_per_island = default_population_per_island(n, 12) * spec.population_scale;
  }
  c.validate();
  return c;
}

namespace {

struct Section {
  std::string name;  ///< "plan" or the model name
  bool is_model = false;
  std::size_t line = 0;
  std::vector<std::tuple<std::string, std::string, std::size_t>> entries;
};

std::vector<Section> read_sections(std::istream& in) {
  std::vector<Section> sections;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    // Inline comments start at whitespace followed by ';' or '#'.
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if ((raw[i] == ';' || raw[i] == '#') && (raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
        raw.resize(i);
        break;
      }
    }
    const std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(number, "unterminated section header");
      const std::string_view header = trim(line.substr(1, line.size() - 2));
      Section s;
      s.line = number;
      if (header == "plan") {
        s.name = "plan";
      } else if (header.starts_with("model ") && !trim(header.substr(6)).empty()) {
        s.name = std::string(trim(header.substr(6)));
        s.is_model = true;
      } else {
        throw ParseError(number, "unknown section '" + std::string(header) + "'");
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, "expected key = value");
    if (sections.empty()) throw ParseError(number, "entry outside a section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(number, "empty key");
    for (const auto& [k, v, l] : sections.back().entries) {
      if (k == key) throw ParseError(number, "duplicate key '" + key + "'");
    }
    sections.back().entries.emplace_back(key, value, number);
  }
  return sections;
}

ModelKind parse_model_kind(std::string_view s, std::size_t line) {
  if (s == "HoPIM") return ModelKind::HoPIM;
  if (s == "HePIM") return ModelKind::HePIM;
  if (s == "RecHePIM") return ModelKind::RecHePIM;
  throw ParseError(line, "unknown model kind '" + std::string(s) + "'");
}

TopologyKind parse_topology(std::string_view s, std::size_t line) {
  if (s == "tree") return TopologyKind::StaticTree;
  if (s == "gbmm") return TopologyKind::DynamicCompleteGraph;
  throw ParseError(line, "topology must be 'tree' or 'gbmm'");
}

EngineKind engine_at(std::string_view s, std::size_t line) {
  try {
    return parse_engine_kind(s);
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
}

template <typename F>
void with_code(std::string_view value, std::size_t line, std::string_view key, F assign) {
  try {
    assign(parse_number<int>(value, line, key));
  } catch (const ContractViolation& e) {
    throw ParseError(line, e.what());
  } catch (const ConfigError& e) {
    throw ParseError(line, e.what());
  }
}

ModelSpec parse_model_section(const Section& s) {
  ModelSpec spec;
  // base first, so the other keys override it.
  std::optional<std::string> base;
  for (const auto& [k, v, l] : s.entries) {
    if (k == "base") base = v;
  }
  if (base) {
    try {
      spec = builtin_model(*base);
    } catch (const ConfigError& e) {
      throw ParseError(s.line, e.what());
    }
  } else {
    spec.config.layout.assign(12, EngineKind::GA);
  }
  ModelConfig& c = spec.config;
  c.name = s.name;
  std::optional<EngineKind> engine;
  std::optional<std::size_t> islands;
  std::optional<std::vector<EngineKind>> layout;
  bool rf_cleared = false;

  for (const auto& [key, value, line] : s.entries) {
    auto ga_field = [&](GaParams& g, std::string_view field) {
      const double x = parse_number<double>(value, line, key);
      if (field == "crossover") g.crossover_prob = x;
      else if (field == "mutation") g.mutation_prob = x;
      else if (field == "selection") g.selection_pct = x;
      else if (field == "replacement") g.replacement_pct = x;
      else throw ParseError(line, "unknown key '" + key + "'");
    };
    if (key == "base") {
    } else if (key == "kind") {
      c.kind = parse_model_kind(value, line);
    } else if (key == "engine") {
      engine = engine_at(value, line);
    } else if (key == "topology") {
      c.topology = parse_topology(value, line);
    } else if (key == "islands") {
      islands = parse_number<std::size_t>(value, line, key);
    } else if (key == "layout") {
      std::vector<EngineKind> l;
      for (const auto& e : split_list(value)) l.push_back(engine_at(e, line));
      layout = std::move(l);
    } else if (key == "tree_edges") {
      c.tree_edges.clear();
      for (const auto& e : split_list(value)) {
        const auto dash = e.find('-');
        if (dash == std::string::npos) throw ParseError(line, "tree edge must look like a-b");
        c.tree_edges.emplace_back(parse_number<int>(trim(std::string_view(e).substr(0, dash)), line, key),
                                  parse_number<int>(trim(std::string_view(e).substr(dash + 1)), line, key));
      }
    } else if (key == "in") {
      c.migration.individuals = parse_number<std::size_t>(value, line, key);
    } else if (key == "emi") {
      with_code(value, line, key, [&](int x) { c.migration.emigration = emigration_from_code(x); });
    } else if (key == "ep") {
      with_code(value, line, key, [&](int x) { c.migration.policy = policy_from_code(x); });
    } else if (key == "imi") {
      with_code(value, line, key, [&](int x) { c.migration.immigration = immigration_from_code(x); });
    } else if (key == "mi") {
      c.migration.interval_pct = parse_number<int>(value, line, key);
    } else if (key == "rf") {
      if (value == "none") {
        c.reconfiguration_pct.reset();
        rf_cleared = true;
      } else {
        c.reconfiguration_pct = parse_number<int>(value, line, key);
      }
    } else if (key == "population") {
      spec.population = parse_number<std::size_t>(value, line, key);
    } else if (key == "max_it") {
      spec.max_it = parse_number<int>(value, line, key);
    } else if (key.starts_with("ga.")) {
      ga_field(std::get<GaParams>(c.engine_params[0]), std::string_view(key).substr(3));
    } else if (key.starts_with("gad.")) {
      ga_field(std::get<GaParams>(c.engine_params[1]), std::string_view(key).substr(4));
    } else if (key == "de.pc") {
      std::get<DeParams>(c.engine_params[2]).crossover_prob = parse_number<double>(value, line, key);
    } else if (key == "de.fm") {
      std::get<DeParams>(c.engine_params[2]).mutation_factor = parse_number<double>(value, line, key) / 100.0;
    } else {
      throw ParseError(line, "unknown key '" + key + "'");
    }
  }

  const std::size_t count = islands.value_or(layout ? layout->size() : c.layout.size());
  if (layout) {
    if (layout->size() != count) throw ParseError(s.line, "layout length differs from islands");
    c.layout = *layout;
  } else if (engine) {
    c.layout.assign(count, *engine);
  } else if (count != c.layout.size()) {
    c.layout = c.kind == ModelKind::HoPIM ? std::vector<EngineKind>(count, c.layout.front()) : round_robin_layout(count);
  } else if (c.kind != ModelKind::HoPIM && !base) {
    c.layout = round_robin_layout(count);
  }
  if (c.kind == ModelKind::RecHePIM && !c.reconfiguration_pct && !rf_cleared) {
    throw ParseError(s.line, "RecHePIM model '" + s.name + "' needs rf");
  }
  if (c.kind != ModelKind::RecHePIM) c.reconfiguration_pct.reset();
  if (count != 1 || c.kind != ModelKind::HoPIM) spec.population_scale = 1;
  return spec;
}

}  // namespace

ExperimentPlan parse_plan(std::istream& in) {
  const auto sections = read_sections(in);
  ExperimentPlan plan;
  const Section* plan_section = nullptr;
  std::vector<const Section*> model_sections;
  for (const auto& s : sections) {
    if (!s.is_model) {
      if (plan_section) throw ParseError(s.line, "duplicate [plan] section");
      plan_section = &s;
    } else {
      for (const auto* m : model_sections) {
        if (m->name == s.name) throw ParseError(s.line, "duplicate model section '" + s.name + "'");
      }
      model_sections.push_back(&s);
    }
  }
  if (!plan_section) throw ParseError(0, "missing [plan] section");

  std::vector<std::string> names;
  std::size_t models_line = plan_section->line;
  for (const auto& [key, value, line] : plan_section->entries) {
    if (key == "dataset") plan.dataset = value;
    else if (key == "runs") plan.runs = parse_number<std::size_t>(value, line, key);
    else if (key == "output") plan.output = value;
    else if (key == "timeline") plan.timeline = value;
    else if (key == "models") {
      names = split_list(value);
      models_line = line;
    } else if (key == "max_it") plan.max_it = parse_number<int>(value, line, key);
    else if (key == "population") {
      if (value == "auto") plan.population.reset();
      else plan.population = parse_number<std::size_t>(value, line, key);
    } else if (key == "seed") plan.seed = parse_number<std::uint64_t>(value, line, key);
    else if (key == "mode") {
      if (value == "deterministic") plan.mode = ExecutionMode::Deterministic;
      else if (value == "async") plan.mode = ExecutionMode::Asynchronous;
      else throw ParseError(line, "mode must be 'deterministic' or 'async'");
    } else if (key == "threads") plan.threads = parse_number<std::size_t>(value, line, key);
    else throw ParseError(line, "unknown key '" + key + "'");
  }

  if (names.size() == 1 && names[0] == "all") names = builtin_model_ids();
  for (const auto& name : names) {
    auto it = std::find_if(model_sections.begin(), model_sections.end(),
                           [&](const Section* s) { return s->name == name; });
    if (it != model_sections.end()) {
      plan.models.push_back(parse_model_section(**it));
    } else {
      try {
        plan.models.push_back(builtin_model(name));
      } catch (const ConfigError& e) {
        throw ParseError(models_line, e.what());
      }
    }
  }
  for (const auto* s : model_sections) {
    if (std::find(names.begin(), names.end(), s->name) == names.end()) {
      throw ParseError(s->line, "model section '" + s->name + "' is not listed in models");
    }
  }
  try {
    plan.validate();
  } catch (const ConfigError& e) {
    throw ParseError(plan_section->line, e.what());
  }
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  ExperimentPlan plan = parse_plan(in);
  // Relative data paths are taken from the config file's directory.
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) {
    const std::string dir = path.substr(0, slash + 1);
    for (std::string* p : {&plan.dataset, &plan.output, &plan.timeline}) {
      if (!p->empty() && p->front() != '/') *p = dir + *p;
    }
  }
  return plan;
}

}  // namespace rechepim
