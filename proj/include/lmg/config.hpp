#pragma once

// JSON configuration: one file with flat sections
//   scenario, schedule, dephasing, disorder, tags, reduction, sweep, units
// Frequency fields take plain numbers in units of nu or strings with an SI
// suffix ("0.1kHz", "2 MHz"), converted with nu/2pi (default 10 MHz).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lmg/protocols.hpp"

namespace lmg {

using Json = nlohmann::ordered_json;

struct ParseError : Error { using Error::Error; };

inline constexpr double kDefaultNuOver2PiHz = 10.0e6;

/// One grid dimension. A value is either a bare JSON value assigned to the
/// config key `name`, or {"label": ..., "set": {key: value, ...}} applying
/// several overrides under one label.
struct SweepAxis {
  std::string name;
  std::vector<Json> values;

  std::string label(std::size_t i) const;
  /// Flat object of dotted config keys to values.
  Json overrides(std::size_t i) const;
  bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::size_t cap = 10000;
  std::vector<std::string> group_by;
  bool operator==(const SweepSpec&) const = default;
};

struct Config {
  ScenarioConfig scenario;
  ReductionConfig reduction;
  SweepSpec sweep;
  double nu_over_2pi_hz = kDefaultNuOver2PiHz;
  bool operator==(const Config&) const = default;
};

/// Throws ParseError carrying source:line:column.
Json parse_json_text(std::string_view text, std::string_view source = "<config>");
Json load_json_file(const std::filesystem::path& path);

/// Sets tree[a][b][c] = value for the dotted key "a.b.c", creating objects.
void set_path(Json& tree, std::string_view dotted_key, Json value);
/// Applies "key=value"; the value is read as JSON when it parses, else as a string.
void apply_override(Json& tree, std::string_view assignment);
/// Selects a schedule preset and drops explicit ramp widths and centers.
void set_schedule_kind(Json& tree, ScheduleKind kind);

/// Number in nu units, or a string with an Hz/kHz/MHz/GHz suffix.
double parse_frequency(const Json& value, double nu_over_2pi_hz, std::string_view field);

/// Resolves defaults and validates. Throws ParseError for malformed fields and
/// ValidationError listing unknown fields and violated constraints.
Config resolve_config(const Json& tree);
Config parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Fully materialized tree; resolve_config(serialize(c)) == c.
Json serialize(const Config& c);
/// Serializes only the scenario-level sections (no reduction or sweep).
Json serialize_scenario(const ScenarioConfig& s, double nu_over_2pi_hz = kDefaultNuOver2PiHz);

/// Dotted leaf keys a sweep may override.
bool is_overridable_key(std::string_view dotted_key);

}  // namespace lmg
