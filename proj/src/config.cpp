#include "vecfog/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void apply_profiles(const json& doc, ProfileTable& table) {
  if (!doc.is_object()) throw ConfigError("profiles must be an object keyed by device code");
  for (const auto& [code, entry] : doc.items()) {
    const auto kind = kind_from_code(code);
    if (!kind || *kind == DeviceKind::SourceNode) {
      throw ConfigError("profiles: unknown device code '" + code + "'");
    }
    const std::string where = "profiles." + code;
    reject_unknown(entry, {"p_max", "p_idle", "capacity", "idle_fraction", "pue"}, where);
    DeviceProfile p = table[*kind];
    if (entry.contains("p_max")) p.p_max = get<double>(entry, "p_max", where);
    if (entry.contains("p_idle")) p.p_idle = get<double>(entry, "p_idle", where);
    if (entry.contains("capacity")) p.capacity = get<double>(entry, "capacity", where);
    if (entry.contains("idle_fraction")) p.idle_fraction = get<double>(entry, "idle_fraction", where);
    if (entry.contains("pue")) p.pue = get<double>(entry, "pue", where);
    table.set(p);
  }
}

}  // namespace

TopologyParams RunConfig::topology_for(Case c) const {
  TopologyParams p = scenario_topology(scenario.architecture, c, cc_servers, rr_hops);
  if (zones) p.zones = *zones;
  if (clusters_per_zone) p.clusters_per_zone = *clusters_per_zone;
  if (vns_per_cluster && vns_for_case(c) > 0) p.vns_per_cluster = *vns_per_cluster;
  return p;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"architecture", "zones", "clusters_per_zone", "vns_per_cluster", "cc_servers",
                  "rr_hops", "profiles", "scenario"},
                 "config");
  RunConfig cfg;
  if (doc.contains("architecture")) {
    cfg.scenario.architecture = parse_architecture(get<std::string>(doc, "architecture", "config"));
  }
  if (doc.contains("zones")) cfg.zones = get<int>(doc, "zones", "config");
  if (doc.contains("clusters_per_zone")) {
    cfg.clusters_per_zone = get<int>(doc, "clusters_per_zone", "config");
  }
  if (doc.contains("vns_per_cluster")) cfg.vns_per_cluster = get<int>(doc, "vns_per_cluster", "config");
  if (doc.contains("cc_servers")) cfg.cc_servers = get<int>(doc, "cc_servers", "config");
  if (doc.contains("rr_hops")) cfg.rr_hops = get<int>(doc, "rr_hops", "config");
  if (doc.contains("profiles")) apply_profiles(doc["profiles"], cfg.profiles);
  if (doc.contains("scenario")) {
    const json& sc = doc["scenario"];
    reject_unknown(sc, {"pattern", "case", "strategy", "demands", "drr"}, "scenario");
    if (sc.contains("pattern")) {
      cfg.scenario.pattern = parse_pattern(get<std::string>(sc, "pattern", "scenario"));
    }
    if (sc.contains("case")) cfg.scenario.availability = parse_case(get<std::string>(sc, "case", "scenario"));
    if (sc.contains("strategy")) {
      cfg.scenario.strategy = parse_strategy(get<std::string>(sc, "strategy", "scenario"));
    }
    if (sc.contains("demands")) {
      cfg.scenario.demands = get<std::vector<double>>(sc, "demands", "scenario");
    }
    if (sc.contains("drr")) cfg.scenario.drr = get<double>(sc, "drr", "scenario");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace vecfog
