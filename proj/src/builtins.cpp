// Tuned parameter sets of the named models.

#include <algorithm>

#include "rechepim/errors.hpp"
#include "rechepim/harness.hpp"

namespace rechepim {
namespace {

struct Tuned {
  GaParams ga;
  GaParams gad;
  DeParams de;
};

MigrationParams migration(std::size_t in, int emi, int ep, int imi, int mi) {
  return {in, emigration_from_code(emi), policy_from_code(ep), immigration_from_code(imi), mi};
}

const Tuned kSequential{{0.90, 0.02, 60, 60}, {0.92, 0.01, 98, 90}, {0.74, 0.01}};
const Tuned kTree{{0.98, 0.015, 92, 70}, {0.98, 0.01, 98, 80}, {0.72, 0.014}};
const Tuned kGbmm{{0.96, 0.011, 94, 70}, {0.98, 0.01, 94, 90}, {0.78, 0.01}};

std::array<EngineParams, 4> params_of(const Tuned& t) { return {t.ga, t.gad, t.de, PsoParams{}}; }

// HoPIM migration, indexed by engine.
const std::array<MigrationParams, 4> kTreeMigration = {
    migration(9, 1, 2, 1, 30), migration(12, 1, 2, 1, 14), migration(3, 1, 1, 1, 14), migration(6, 3, 2, 1, 12)};
const std::array<MigrationParams, 4> kGbmmMigration = {
    migration(5, 1, 2, 1, 30), migration(5, 1, 1, 1, 12), migration(5, 1, 2, 1, 12), migration(5, 3, 2, 2, 22)};

const MigrationParams kHeteroTree = migration(3, 1, 2, 3, 10);
const MigrationParams kHeteroGbmm = migration(6, 3, 1, 3, 14);

std::vector<std::string> make_ids() {
  std::vector<std::string> ids;
  for (EngineKind k : kAllEngines) ids.push_back("SEQ-" + std::string(to_string(k)));
  for (const char* topo : {"Tr12A", "gbmm12A"}) {
    for (EngineKind k : kAllEngines) ids.push_back("HoPIM-" + std::string(to_string(k)) + "-" + topo);
  }
  for (const char* kind : {"HePIM", "RecHePIM"}) {
    for (const char* topo : {"Tr12A", "gbmm12A"}) ids.push_back(std::string(kind) + "-" + topo);
  }
  return ids;
}

struct ParsedId {
  enum { Sequential, Homogeneous, Heterogeneous, Reconfigurable } family;
  EngineKind engine = EngineKind::GA;
  TopologyKind topology = TopologyKind::StaticTree;
};

ParsedId parse_id(std::string_view id) {
  const auto& ids = builtin_model_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw ConfigError("unknown model '" + std::string(id) + "'");
  }
  ParsedId p{};
  const auto dash = id.find('-');
  const std::string_view head = id.substr(0, dash);
  std::string_view rest = id.substr(dash + 1);
  if (rest.ends_with("gbmm12A")) p.topology = TopologyKind::DynamicCompleteGraph;
  if (head == "SEQ") {
    p.family = ParsedId::Sequential;
    p.engine = parse_engine_kind(rest);
  } else if (head == "HoPIM") {
    p.family = ParsedId::Homogeneous;
    p.engine = parse_engine_kind(rest.substr(0, rest.find('-')));
  } else {
    p.family = head == "HePIM" ? ParsedId::Heterogeneous : ParsedId::Reconfigurable;
  }
  return p;
}

}  // namespace

const std::vector<std::string>& builtin_model_ids() {
  static const std::vector<std::string> ids = make_ids();
  return ids;
}

BuiltinParams load_builtin_params(std::string_view id) {
  const ParsedId p = parse_id(id);
  const bool tree = p.topology == TopologyKind::StaticTree;
  BuiltinParams b;
  switch (p.family) {
    case ParsedId::Sequential:
      b.engine_params = params_of(kSequential);
      break;
    case ParsedId::Homogeneous:
      b.engine_params = params_of(tree ? kTree : kGbmm);
      b.migration = (tree ? kTreeMigration : kGbmmMigration)[static_cast<std::size_t>(p.engine)];
      break;
    case ParsedId::Heterogeneous:
    case ParsedId::Reconfigurable:
      b.engine_params = params_of(tree ? kTree : kGbmm);
      b.migration = tree ? kHeteroTree : kHeteroGbmm;
      if (p.family == ParsedId::Reconfigurable) b.reconfiguration_pct = tree ? 14 : 24;
      break;
  }
  return b;
}

ModelSpec builtin_model(std::string_view id) {
  const ParsedId p = parse_id(id);
  const BuiltinParams b = load_builtin_params(id);
  ModelSpec spec;
  ModelConfig& c = spec.config;
  c.name = std::string(id);
  c.topology = p.topology;
  c.migration = b.migration;
  c.reconfiguration_pct = b.reconfiguration_pct;
  c.engine_params = b.engine_params;
  switch (p.family) {
    case ParsedId::Sequential:
      c.kind = ModelKind::HoPIM;
      c.topology = TopologyKind::StaticTree;
      c.layout = {p.engine};
      spec.population_scale = 12;
      break;
    case ParsedId::Homogeneous:
      c.kind = ModelKind::HoPIM;
      c.layout.assign(12, p.engine);
      break;
    case ParsedId::Heterogeneous:
      c.kind = ModelKind::HePIM;
      c.layout = round_robin_layout(12);
      break;
    case ParsedId::Reconfigurable:
      c.kind = ModelKind::RecHePIM;
      c.layout = round_robin_layout(12);
      break;
  }
  return spec;
}

}  // namespace rechepim
