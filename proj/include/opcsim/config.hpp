#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opcsim/simulator.hpp"
#include "opcsim/sweep.hpp"

namespace opcsim {

/// Raised for anything wrong with a config file: syntax, unknown or
/// duplicate keys, bad values, missing required settings. The message names
/// the offending section.key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed INI file: sections and keys in file order. Full-line comments
/// start with '#' or ';'. Values keep inner whitespace; duplicate sections
/// and duplicate keys within a section are errors.
struct IniFile {
  using Section = std::vector<std::pair<std::string, std::string>>;
  std::vector<std::pair<std::string, Section>> sections;

  bool has_section(const std::string& name) const;
  const Section* find_section(const std::string& name) const;
  const std::string* find(const std::string& section, const std::string& key) const;
};

IniFile parse_ini(std::istream& in);
IniFile parse_ini_file(const std::string& path);

/// A single-run configuration resolved from a config file: the simulator
/// input plus display labels and a flat echo of every effective setting
/// (defaults included).
struct RunSetup {
  SimConfig config;
  std::vector<std::pair<std::string, std::string>> labels;
  std::string echo;
};

/// Sections: [topology] (source=generate|file, nodes, attach_m, seed,
/// role_seed, file), [workload] (source=generate|files, scale, seed,
/// trace_seed, requests_per_receiver, catalog_file, trace_file),
/// [cache] (scheme, sizing=fraction|bytes, fraction, ratio, sram_bytes,
/// dram_bytes, mss_bytes, allocator=dynamic|fixed, admit=head|tail,
/// lookup_all_capable), [sim] (placement, receivers_per_access,
/// link_delay_ms, snapshot_every_events, snapshot_every_ms,
/// record_chunk_log). Relative paths resolve against `base_dir`.
RunSetup build_sim_config(const IniFile& ini, const std::string& base_dir);

/// Section [sweep]: nodes, attach_m, topology_seeds, workload_scale,
/// workload_seed, receivers_per_access, requests_per_receiver,
/// link_delay_ms, allocator, admit, lookup_all_capable, mss_bytes,
/// snapshot_every_events, fractions, ratios, placements, schemes.
SweepSpec build_sweep_spec(const IniFile& ini);

std::string sweep_echo(const SweepSpec& spec);

}  // namespace opcsim
