#include "opcsim/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace opcsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_double(const std::string& value, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("bad number for '" + where + "': " + value);
  return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  if (!value.empty() && value[0] == '-')
    throw ConfigError("'" + where + "' must be non-negative, got " + value);
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("bad integer for '" + where + "': " + value);
  return v;
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
  if (value == "false" || value == "no" || value == "off" || value == "0") return false;
  throw ConfigError("bad boolean for '" + where + "': " + value);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Scheme scheme_from_string(const std::string& name, const std::string& where) {
  if (name == "lru") return Scheme::Lru;
  if (name == "opc") return Scheme::Opc;
  throw ConfigError("'" + where + "' must be lru or opc, got " + name);
}

AllocatorMode allocator_from_string(const std::string& name, const std::string& where) {
  if (name == "dynamic") return AllocatorMode::DynamicLinked;
  if (name == "fixed") return AllocatorMode::FixedContiguous;
  throw ConfigError("'" + where + "' must be dynamic or fixed, got " + name);
}

AdmitPosition admit_from_string(const std::string& name, const std::string& where) {
  if (name == "head") return AdmitPosition::LruHead;
  if (name == "tail") return AdmitPosition::LruTail;
  throw ConfigError("'" + where + "' must be head or tail, got " + name);
}

PlacementPolicy placement_from(const std::string& name, const std::string& where) {
  try {
    return placement_from_string(name);
  } catch (const std::invalid_argument&) {
    throw ConfigError("'" + where + "' must be universal, edge or betweenness, got " + name);
  }
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

/// Typed access to one section with consumption tracking: any key left
/// unconsumed at finish() is reported as unexpected.
class SectionReader {
 public:
  SectionReader(const IniFile& ini, std::string name) : name_(std::move(name)) {
    if (const IniFile::Section* section = ini.find_section(name_)) {
      for (const auto& [key, value] : *section) entries_.emplace(key, value);
    }
  }

  const std::string* get(const std::string& key) {
    consumed_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const std::string* v = get(key);
    return v ? *v : fallback;
  }

  std::string require_string(const std::string& key) {
    const std::string* v = get(key);
    if (!v) throw ConfigError("missing required key '" + name_ + "." + key + "'");
    return *v;
  }

  double get_double(const std::string& key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_double(*v, name_ + "." + key) : fallback;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    const std::string* v = get(key);
    return v ? parse_u64(*v, name_ + "." + key) : fallback;
  }

  bool get_bool(const std::string& key, bool fallback) {
    const std::string* v = get(key);
    return v ? parse_bool(*v, name_ + "." + key) : fallback;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string where(const std::string& key) const { return name_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : entries_)
      if (!consumed_.count(key))
        throw ConfigError("unexpected key '" + name_ + "." + key + "'");
  }

 private:
  std::string name_;
  std::map<std::string, std::string> entries_;
  std::set<std::string> consumed_;
};

}  // namespace

bool IniFile::has_section(const std::string& name) const { return find_section(name) != nullptr; }

const IniFile::Section* IniFile::find_section(const std::string& name) const {
  for (const auto& [section_name, section] : sections)
    if (section_name == name) return &section;
  return nullptr;
}

const std::string* IniFile::find(const std::string& section, const std::string& key) const {
  const Section* s = find_section(section);
  if (!s) return nullptr;
  for (const auto& [k, v] : *s)
    if (k == key) return &v;
  return nullptr;
}

IniFile parse_ini(std::istream& in) {
  IniFile file;
  IniFile::Section* current = nullptr;
  std::string current_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (name.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      if (file.has_section(name))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + name + "]");
      file.sections.emplace_back(name, IniFile::Section{});
      current = &file.sections.back().second;
      current_name = name;
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!current)
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' appears before any [section]");
    for (const auto& [k, v] : *current)
      if (k == key)
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + current_name +
                          "." + key + "'");
    current->emplace_back(key, value);
  }
  return file;
}

IniFile parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_ini(in);
}

RunSetup build_sim_config(const IniFile& ini, const std::string& base_dir) {
  RunSetup setup;
  SimConfig& cfg = setup.config;
  std::string echo;
  auto note = [&echo](const std::string& key, const std::string& value) {
    echo += key + " = " + value + "\n";
  };

  for (const auto& [name, section] : ini.sections)
    if (name != "topology" && name != "workload" && name != "cache" && name != "sim")
      throw ConfigError("unexpected section [" + name + "] in a run config");

  // ---- topology ----
  SectionReader topo(ini, "topology");
  const std::string topo_source = topo.get_string("source", "generate");
  std::uint64_t topo_seed = 0;
  if (topo_source == "generate") {
    const std::uint64_t nodes = topo.get_u64("nodes", 20);
    const std::uint64_t attach_m = topo.get_u64("attach_m", 2);
    topo_seed = topo.get_u64("seed", 1);
    const std::uint64_t role_seed = topo.get_u64("role_seed", topo_seed + 1);
    cfg.graph = generate_ba(nodes, attach_m, topo_seed);
    assign_roles(cfg.graph, role_seed);
    note("topology.source", "generate");
    note("topology.nodes", std::to_string(nodes));
    note("topology.attach_m", std::to_string(attach_m));
    note("topology.seed", std::to_string(topo_seed));
    note("topology.role_seed", std::to_string(role_seed));
  } else if (topo_source == "file") {
    const std::string path = resolve_path(topo.require_string("file"), base_dir);
    cfg.graph = load_edge_list_file(path);
    const bool file_has_roles =
        std::any_of(cfg.graph.roles.begin(), cfg.graph.roles.end(),
                    [](NodeRole r) { return r == NodeRole::Origin; });
    if (topo.has("role_seed")) {
      const std::uint64_t role_seed = topo.get_u64("role_seed", 0);
      assign_roles(cfg.graph, role_seed);
      note("topology.role_seed", std::to_string(role_seed));
    } else if (!file_has_roles) {
      throw ConfigError("topology file '" + path +
                        "' declares no roles; set topology.role_seed to assign them");
    }
    note("topology.source", "file");
    note("topology.file", path);
  } else {
    throw ConfigError("'topology.source' must be generate or file, got " + topo_source);
  }
  topo.finish();
  note("topology.node_count", std::to_string(cfg.graph.node_count()));
  note("topology.edge_count", std::to_string(cfg.graph.edge_count()));
  note("topology.access_count", std::to_string(cfg.graph.access_nodes().size()));

  // ---- sim (read before workload: receiver math needs it) ----
  SectionReader sim(ini, "sim");
  cfg.placement = placement_from(sim.get_string("placement", "universal"), "sim.placement");
  cfg.receivers_per_access =
      static_cast<std::uint32_t>(sim.get_u64("receivers_per_access", 25));
  cfg.link_delay_ms = sim.get_double("link_delay_ms", 5.0);
  cfg.receiver_stagger_ms = sim.get_double("receiver_stagger_ms", 5.0);
  if (cfg.receiver_stagger_ms < 0) throw ConfigError("'sim.receiver_stagger_ms' must be non-negative");
  cfg.snapshot_every_events = sim.get_u64("snapshot_every_events", 0);
  cfg.snapshot_every_ms = sim.get_double("snapshot_every_ms", 0.0);
  cfg.record_chunk_log = sim.get_bool("record_chunk_log", false);
  sim.finish();

  // ---- cache ----
  SectionReader cache(ini, "cache");
  cfg.scheme = scheme_from_string(cache.get_string("scheme", "opc"), "cache.scheme");
  cfg.allocator = allocator_from_string(cache.get_string("allocator", "dynamic"), "cache.allocator");
  cfg.admit = admit_from_string(cache.get_string("admit", "head"), "cache.admit");
  cfg.lookup_all_capable = cache.get_bool("lookup_all_capable", true);
  cfg.sizing.mss_bytes = static_cast<std::uint32_t>(cache.get_u64("mss_bytes", kDefaultMssBytes));
  const std::string sizing = cache.get_string("sizing", "fraction");
  if (sizing == "fraction") {
    cfg.sizing.mode = CacheSizing::Mode::Fraction;
    cfg.sizing.fraction = cache.get_double("fraction", 0.001);
    // the chunk-level scheme has no slot extension; its ratio is pinned to 1
    const double ratio = cache.get_double("ratio", 11.0);
    cfg.sizing.ratio = cfg.scheme == Scheme::Lru ? 1.0 : ratio;
    if (cfg.sizing.fraction < 0)
      throw ConfigError("'cache.fraction' must be non-negative");
    if (cfg.sizing.ratio <= 0) throw ConfigError("'cache.ratio' must be positive");
  } else if (sizing == "bytes") {
    cfg.sizing.mode = CacheSizing::Mode::Bytes;
    cfg.sizing.sram_bytes = cache.get_u64("sram_bytes", 0);
    cfg.sizing.dram_bytes = cache.get_u64("dram_bytes", 0);
    if (cfg.sizing.sram_bytes == 0 || cfg.sizing.dram_bytes == 0)
      throw ConfigError("bytes sizing needs positive cache.sram_bytes and cache.dram_bytes");
  } else {
    throw ConfigError("'cache.sizing' must be fraction or bytes, got " + sizing);
  }
  cache.finish();

  // ---- workload ----
  SectionReader work(ini, "workload");
  const std::string work_source = work.get_string("source", "generate");
  if (work_source == "generate") {
    const double scale = work.get_double("scale", 50.0);
    if (scale < 1.0) throw ConfigError("'workload.scale' must be >= 1");
    const std::uint64_t seed = work.get_u64("seed", 7);
    const std::uint64_t trace_seed = work.get_u64("trace_seed", seed + 1);
    const std::uint32_t rpr =
        static_cast<std::uint32_t>(work.get_u64("requests_per_receiver", 30));
    const std::vector<TrafficClassParams> classes = table_defaults(scale);
    cfg.catalog = generate_catalog(classes, seed);
    const std::uint32_t receivers = static_cast<std::uint32_t>(
        cfg.graph.access_nodes().size() * cfg.receivers_per_access);
    cfg.trace = generate_requests(cfg.catalog, classes, receivers, rpr, trace_seed);
    note("workload.source", "generate");
    note("workload.scale", fmt_g(scale));
    note("workload.seed", std::to_string(seed));
    note("workload.trace_seed", std::to_string(trace_seed));
    note("workload.requests_per_receiver", std::to_string(rpr));
  } else if (work_source == "files") {
    const std::string catalog_path = resolve_path(work.require_string("catalog_file"), base_dir);
    const std::string trace_path = resolve_path(work.require_string("trace_file"), base_dir);
    cfg.catalog = load_catalog_file(catalog_path);
    cfg.trace = load_trace_file(trace_path, cfg.catalog);
    note("workload.source", "files");
    note("workload.catalog_file", catalog_path);
    note("workload.trace_file", trace_path);
  } else {
    throw ConfigError("'workload.source' must be generate or files, got " + work_source);
  }
  work.finish();
  note("workload.objects", std::to_string(cfg.catalog.size()));
  note("workload.catalog_chunks", std::to_string(cfg.catalog.total_chunks()));
  note("workload.receivers", std::to_string(cfg.trace.per_receiver.size()));
  note("workload.requests", std::to_string(cfg.trace.request_count()));

  note("cache.scheme", to_string(cfg.scheme));
  note("cache.allocator",
       cfg.allocator == AllocatorMode::DynamicLinked ? "dynamic" : "fixed");
  note("cache.admit", cfg.admit == AdmitPosition::LruHead ? "head" : "tail");
  note("cache.lookup_all_capable", cfg.lookup_all_capable ? "true" : "false");
  note("cache.mss_bytes", std::to_string(cfg.sizing.mss_bytes));
  if (cfg.sizing.mode == CacheSizing::Mode::Fraction) {
    note("cache.sizing", "fraction");
    note("cache.fraction", fmt_g(cfg.sizing.fraction));
    note("cache.ratio", fmt_g(cfg.sizing.ratio));
  } else {
    note("cache.sizing", "bytes");
    note("cache.sram_bytes", std::to_string(cfg.sizing.sram_bytes));
    note("cache.dram_bytes", std::to_string(cfg.sizing.dram_bytes));
  }
  const CacheCapacity cap = cfg.sizing.resolve(cfg.scheme, cfg.catalog.total_chunks());
  note("cache.l1_slots", std::to_string(cap.l1_slots));
  note("cache.l2_slots", std::to_string(cap.l2_slots));

  note("sim.placement", to_string(cfg.placement));
  note("sim.receivers_per_access", std::to_string(cfg.receivers_per_access));
  note("sim.link_delay_ms", fmt_g(cfg.link_delay_ms));
  note("sim.receiver_stagger_ms", fmt_g(cfg.receiver_stagger_ms));
  note("sim.snapshot_every_events", std::to_string(cfg.snapshot_every_events));
  note("sim.snapshot_every_ms", fmt_g(cfg.snapshot_every_ms));
  note("sim.record_chunk_log", cfg.record_chunk_log ? "true" : "false");

  setup.labels = {{"placement", to_string(cfg.placement)},
                  {"scheme", to_string(cfg.scheme)},
                  {"allocator", cfg.allocator == AllocatorMode::DynamicLinked ? "dynamic" : "fixed"},
                  {"catalog_chunks", std::to_string(cfg.catalog.total_chunks())}};
  if (cfg.sizing.mode == CacheSizing::Mode::Fraction) {
    setup.labels.emplace_back("fraction", fmt_g(cfg.sizing.fraction));
    setup.labels.emplace_back("ratio", fmt_g(cfg.sizing.ratio));
  } else {
    setup.labels.emplace_back("sram_bytes", std::to_string(cfg.sizing.sram_bytes));
    setup.labels.emplace_back("dram_bytes", std::to_string(cfg.sizing.dram_bytes));
  }
  setup.echo = echo;
  return setup;
}

SweepSpec build_sweep_spec(const IniFile& ini) {
  for (const auto& [name, section] : ini.sections)
    if (name != "sweep")
      throw ConfigError("unexpected section [" + name + "] in a sweep spec");
  if (!ini.has_section("sweep")) throw ConfigError("sweep spec needs a [sweep] section");

  SweepSpec spec;
  SectionReader sweep(ini, "sweep");
  spec.nodes = static_cast<std::size_t>(sweep.get_u64("nodes", spec.nodes));
  spec.attach_m = static_cast<std::size_t>(sweep.get_u64("attach_m", spec.attach_m));
  spec.workload_scale = sweep.get_double("workload_scale", spec.workload_scale);
  spec.workload_seed = sweep.get_u64("workload_seed", spec.workload_seed);
  spec.receivers_per_access = static_cast<std::uint32_t>(
      sweep.get_u64("receivers_per_access", spec.receivers_per_access));
  spec.requests_per_receiver = static_cast<std::uint32_t>(
      sweep.get_u64("requests_per_receiver", spec.requests_per_receiver));
  spec.link_delay_ms = sweep.get_double("link_delay_ms", spec.link_delay_ms);
  spec.receiver_stagger_ms = sweep.get_double("receiver_stagger_ms", spec.receiver_stagger_ms);
  if (spec.receiver_stagger_ms < 0)
    throw ConfigError("'sweep.receiver_stagger_ms' must be non-negative");
  spec.allocator =
      allocator_from_string(sweep.get_string("allocator", "dynamic"), "sweep.allocator");
  spec.admit = admit_from_string(sweep.get_string("admit", "head"), "sweep.admit");
  spec.lookup_all_capable = sweep.get_bool("lookup_all_capable", spec.lookup_all_capable);
  spec.mss_bytes = static_cast<std::uint32_t>(sweep.get_u64("mss_bytes", spec.mss_bytes));
  spec.snapshot_every_events = sweep.get_u64("snapshot_every_events", 0);

  if (const std::string* v = sweep.get("topology_seeds")) {
    spec.topology_seeds.clear();
    for (const std::string& item : split_list(*v))
      spec.topology_seeds.push_back(parse_u64(item, "sweep.topology_seeds"));
  }
  if (const std::string* v = sweep.get("fractions")) {
    spec.fractions.clear();
    for (const std::string& item : split_list(*v))
      spec.fractions.push_back(parse_double(item, "sweep.fractions"));
  }
  if (const std::string* v = sweep.get("ratios")) {
    spec.ratios.clear();
    for (const std::string& item : split_list(*v))
      spec.ratios.push_back(parse_double(item, "sweep.ratios"));
  }
  if (const std::string* v = sweep.get("placements")) {
    spec.placements.clear();
    for (const std::string& item : split_list(*v))
      spec.placements.push_back(placement_from(item, "sweep.placements"));
  }
  if (const std::string* v = sweep.get("schemes")) {
    spec.schemes.clear();
    for (const std::string& item : split_list(*v))
      spec.schemes.push_back(scheme_from_string(item, "sweep.schemes"));
  }
  sweep.finish();

  if (spec.topology_seeds.empty()) throw ConfigError("'sweep.topology_seeds' must not be empty");
  if (spec.fractions.empty()) throw ConfigError("'sweep.fractions' must not be empty");
  if (spec.ratios.empty()) throw ConfigError("'sweep.ratios' must not be empty");
  if (spec.placements.empty()) throw ConfigError("'sweep.placements' must not be empty");
  if (spec.schemes.empty()) throw ConfigError("'sweep.schemes' must not be empty");
  for (double f : spec.fractions)
    if (f < 0) throw ConfigError("'sweep.fractions' entries must be non-negative");
  for (double r : spec.ratios)
    if (r <= 0) throw ConfigError("'sweep.ratios' entries must be positive");
  return spec;
}

std::string sweep_echo(const SweepSpec& spec) {
  std::string out;
  auto note = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  note("sweep.nodes", std::to_string(spec.nodes));
  note("sweep.attach_m", std::to_string(spec.attach_m));
  std::string seeds;
  for (std::uint64_t s : spec.topology_seeds) {
    if (!seeds.empty()) seeds += ',';
    seeds += std::to_string(s);
  }
  note("sweep.topology_seeds", seeds);
  note("sweep.workload_scale", fmt_g(spec.workload_scale));
  note("sweep.workload_seed", std::to_string(spec.workload_seed));
  note("sweep.receivers_per_access", std::to_string(spec.receivers_per_access));
  note("sweep.requests_per_receiver", std::to_string(spec.requests_per_receiver));
  note("sweep.link_delay_ms", fmt_g(spec.link_delay_ms));
  note("sweep.receiver_stagger_ms", fmt_g(spec.receiver_stagger_ms));
  note("sweep.allocator",
       spec.allocator == AllocatorMode::DynamicLinked ? "dynamic" : "fixed");
  note("sweep.admit", spec.admit == AdmitPosition::LruHead ? "head" : "tail");
  note("sweep.lookup_all_capable", spec.lookup_all_capable ? "true" : "false");
  note("sweep.mss_bytes", std::to_string(spec.mss_bytes));
  note("sweep.snapshot_every_events", std::to_string(spec.snapshot_every_events));
  std::string fractions;
  for (double f : spec.fractions) {
    if (!fractions.empty()) fractions += ',';
    fractions += fmt_g(f);
  }
  note("sweep.fractions", fractions);
  std::string ratios;
  for (double r : spec.ratios) {
    if (!ratios.empty()) ratios += ',';
    ratios += fmt_g(r);
  }
  note("sweep.ratios", ratios);
  std::string placements;
  for (PlacementPolicy p : spec.placements) {
    if (!placements.empty()) placements += ',';
    placements += to_string(p);
  }
  note("sweep.placements", placements);
  std::string schemes;
  for (Scheme s : spec.schemes) {
    if (!schemes.empty()) schemes += ',';
    schemes += to_string(s);
  }
  note("sweep.schemes", schemes);
  return out;
}

}  // namespace opcsim
