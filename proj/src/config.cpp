#include "lmg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "lmg/output.hpp"

namespace lmg {

namespace {

const std::vector<std::string_view> kScenarioKeys = {
    "case", "n_spins", "lambda_over_nu", "delta", "t_start", "t_final",
    "samples", "step", "nbar", "initial", "fast_path"};
const std::vector<std::string_view> kScheduleKeys = {"kind", "zeta", "ramp1", "ramp2",
                                                     "t0_1", "t0_2", "dzeta1", "dzeta2"};
const std::vector<std::string_view> kDephasingKeys = {"gamma", "per_spin"};
const std::vector<std::string_view> kDisorderKeys = {"fractions"};
const std::vector<std::string_view> kReductionKeys = {
    "n_spins", "case", "eta", "delta", "nbar", "fock_cutoff",
    "omega1", "omega2", "t_final", "samples", "step"};
const std::vector<std::string_view> kSweepKeys = {"axes", "cap", "group_by"};
const std::vector<std::string_view> kUnitsKeys = {"nu_over_2pi"};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string describe(const Json& v) {
  std::string d = v.dump();
  if (d.size() > 40) d = d.substr(0, 37) + "...";
  return d;
}

/// Reads one section, tracking which keys were consumed.
class Section {
 public:
  Section(const Json& root, std::string name, const std::vector<std::string_view>& known,
          std::vector<std::string>& violations, double nu_hz = kDefaultNuOver2PiHz)
      : name_(std::move(name)), nu_hz_(nu_hz) {
    if (!root.contains(name_)) return;
    const Json& s = root.at(name_);
    if (!s.is_object()) throw ParseError("field " + name_ + ": expected an object");
    node_ = &s;
    for (const auto& [k, v] : s.items()) {
      if (std::find(known.begin(), known.end(), k) == known.end())
        violations.push_back("unknown field " + name_ + "." + k);
    }
  }

  const Json* get(std::string_view key) const {
    if (!node_) return nullptr;
    auto it = node_->find(std::string(key));
    if (it == node_->end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string field(std::string_view key) const { return name_ + "." + std::string(key); }

  void read_double(std::string_view key, double& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_number()) throw ParseError("field " + field(key) + ": expected a number, got " + describe(*v));
      out = v->get<double>();
    }
  }

  void read_frequency(std::string_view key, double& out) const {
    if (const Json* v = get(key)) out = parse_frequency(*v, nu_hz_, field(key));
  }

  void read_size(std::string_view key, std::size_t& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0)
        throw ParseError("field " + field(key) + ": expected a non-negative integer, got " + describe(*v));
      out = v->get<std::size_t>();
    }
  }

  void read_bool(std::string_view key, bool& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_boolean()) throw ParseError("field " + field(key) + ": expected true or false, got " + describe(*v));
      out = v->get<bool>();
    }
  }

  const std::string* read_string(std::string_view key) const {
    if (const Json* v = get(key)) {
      if (!v->is_string()) throw ParseError("field " + field(key) + ": expected a string, got " + describe(*v));
      return v->get_ptr<const std::string*>();
    }
    return nullptr;
  }

  void read_frequency_list(std::string_view key, std::vector<double>& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_array()) throw ParseError("field " + field(key) + ": expected an array, got " + describe(*v));
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i)
        out.push_back(parse_frequency((*v)[i], nu_hz_, field(key) + "[" + std::to_string(i) + "]"));
    }
  }

  void read_double_list(std::string_view key, std::vector<double>& out) const {
    if (const Json* v = get(key)) {
      if (!v->is_array()) throw ParseError("field " + field(key) + ": expected an array, got " + describe(*v));
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number())
          throw ParseError("field " + field(key) + "[" + std::to_string(i) + "]: expected a number");
        out.push_back((*v)[i].get<double>());
      }
    }
  }

 private:
  std::string name_;
  double nu_hz_;
  const Json* node_ = nullptr;
};

TransferCase parse_case(const std::string& s, const std::string& field) {
  std::string u;
  for (char ch : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (u == "I" || u == "1") return TransferCase::I;
  if (u == "II" || u == "2") return TransferCase::II;
  if (u == "III" || u == "3") return TransferCase::III;
  throw ParseError("field " + field + ": expected I, II or III, got \"" + s + "\"");
}

ScheduleKind parse_schedule_kind(const std::string& s) {
  if (s == "calibrated") return ScheduleKind::Calibrated;
  if (s == "literal") return ScheduleKind::Literal;
  throw ParseError("field schedule.kind: expected calibrated or literal, got \"" + s + "\"");
}

InitialState parse_initial(const std::string& s) {
  if (s == "auto") return InitialState::Auto;
  if (s == "up") return InitialState::Up;
  if (s == "down") return InitialState::Down;
  throw ParseError("field scenario.initial: expected auto, up or down, got \"" + s + "\"");
}

struct Quantity {
  double value = 0.0;
  double hz_per_unit = 0.0;  // 0 for a bare number
};

std::optional<Quantity> split_quantity(const std::string& text) {
  const std::string s = trim(text);
  Quantity q;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), q.value);
  if (ec != std::errc{}) return std::nullopt;
  const std::string suffix = trim(std::string_view(p, static_cast<std::size_t>(s.data() + s.size() - p)));
  if (suffix.empty()) return q;
  if (suffix == "Hz") q.hz_per_unit = 1.0;
  else if (suffix == "kHz") q.hz_per_unit = 1e3;
  else if (suffix == "MHz") q.hz_per_unit = 1e6;
  else if (suffix == "GHz") q.hz_per_unit = 1e9;
  else return std::nullopt;
  return q;
}

double parse_hz(const Json& v, std::string_view field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string())
    if (auto q = split_quantity(v.get<std::string>()))
      return q->hz_per_unit == 0.0 ? q->value : q->value * q->hz_per_unit;
  throw ParseError("field " + std::string(field) + ": expected a frequency in Hz, got " + describe(v));
}

}  // namespace

double parse_frequency(const Json& value, double nu_over_2pi_hz, std::string_view field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string())
    if (auto q = split_quantity(value.get<std::string>()))
      return q->hz_per_unit == 0.0 ? q->value : q->value * q->hz_per_unit / nu_over_2pi_hz;
  throw ParseError("field " + std::string(field) +
                   ": expected a number (units of nu) or a frequency such as \"0.1kHz\", got " + describe(value));
}

Json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

void set_path(Json& tree, std::string_view dotted_key, Json value) {
  if (dotted_key.empty()) throw ParseError("override: empty key");
  if (!tree.is_object()) tree = Json::object();
  Json* node = &tree;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part(dotted_key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (part.empty()) throw ParseError("override: malformed key \"" + std::string(dotted_key) + "\"");
    if (dot == std::string_view::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    Json& child = (*node)[part];
    if (!child.is_object()) child = Json::object();
    node = &child;
    start = dot + 1;
  }
}

void apply_override(Json& tree, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ParseError("override \"" + std::string(assignment) + "\": expected key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string raw = trim(assignment.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  set_path(tree, key, std::move(value));
}

void set_schedule_kind(Json& tree, ScheduleKind kind) {
  set_path(tree, "schedule.kind", to_string(kind));
  Json& s = tree["schedule"];
  for (const char* k : {"ramp1", "ramp2", "t0_1", "t0_2"}) s.erase(k);
}

std::string SweepAxis::label(std::size_t i) const {
  const Json& v = values.at(i);
  if (v.is_object()) return v.at("label").get<std::string>();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  return v.dump();
}

Json SweepAxis::overrides(std::size_t i) const {
  const Json& v = values.at(i);
  if (v.is_object()) return v.at("set");
  Json o = Json::object();
  o[name] = v;
  return o;
}

bool is_overridable_key(std::string_view key) {
  auto in = [&](std::string_view section, const std::vector<std::string_view>& keys) {
    if (key.substr(0, section.size()) != section || key.size() <= section.size() || key[section.size()] != '.')
      return false;
    const auto leaf = key.substr(section.size() + 1);
    return std::find(keys.begin(), keys.end(), leaf) != keys.end();
  };
  if (key.starts_with("tags.") && key.size() > 5 && key.find('.', 5) == std::string_view::npos) return true;
  return in("scenario", kScenarioKeys) || in("schedule", kScheduleKeys) || in("dephasing", kDephasingKeys) ||
         in("disorder", kDisorderKeys) || in("reduction", kReductionKeys) || in("units", kUnitsKeys);
}

Config resolve_config(const Json& tree) {
  if (!tree.is_object()) throw ParseError("config: top level must be a JSON object");
  std::vector<std::string> violations;
  static const std::set<std::string> sections = {"scenario", "schedule",  "dephasing", "disorder",
                                                 "tags",     "reduction", "sweep",     "units"};
  for (const auto& [k, v] : tree.items())
    if (!sections.count(k)) violations.push_back("unknown section " + k);

  Config cfg;
  Section units(tree, "units", kUnitsKeys, violations);
  if (const Json* nu = units.get("nu_over_2pi")) cfg.nu_over_2pi_hz = parse_hz(*nu, "units.nu_over_2pi");
  if (!(cfg.nu_over_2pi_hz > 0.0)) violations.push_back("units.nu_over_2pi must be positive");
  const double hz = cfg.nu_over_2pi_hz > 0.0 ? cfg.nu_over_2pi_hz : kDefaultNuOver2PiHz;

  Section sc(tree, "scenario", kScenarioKeys, violations, hz);
  TransferCase tc = TransferCase::I;
  if (const auto* s = sc.read_string("case")) tc = parse_case(*s, "scenario.case");
  ScenarioConfig& s = cfg.scenario;
  s = ScenarioConfig::preset(tc);
  sc.read_size("n_spins", s.n_spins);
  sc.read_frequency("lambda_over_nu", s.lambda_over_nu);
  sc.read_frequency("delta", s.delta);
  sc.read_double("t_start", s.t_start);
  sc.read_double("t_final", s.t_final);
  sc.read_size("samples", s.samples);
  sc.read_double("step", s.step);
  sc.read_double("nbar", s.nbar);
  if (const auto* v = sc.read_string("initial")) s.initial = parse_initial(*v);
  sc.read_bool("fast_path", s.fast_path);

  Section sch(tree, "schedule", kScheduleKeys, violations, hz);
  if (const auto* v = sch.read_string("kind")) s.schedule_kind = parse_schedule_kind(*v);
  double zeta = 0.3;
  sch.read_frequency("zeta", zeta);
  s.schedule = schedule_for(s.schedule_kind, s.t_final, zeta);
  sch.read_double("ramp1", s.schedule.ramp1);
  sch.read_double("ramp2", s.schedule.ramp2);
  sch.read_double("t0_1", s.schedule.t0_1);
  sch.read_double("t0_2", s.schedule.t0_2);
  sch.read_frequency("dzeta1", s.schedule.dzeta1);
  sch.read_frequency("dzeta2", s.schedule.dzeta2);

  Section deph(tree, "dephasing", kDephasingKeys, violations, hz);
  deph.read_frequency("gamma", s.gamma_dep);
  deph.read_frequency_list("per_spin", s.gamma_per_spin);

  Section dis(tree, "disorder", kDisorderKeys, violations, hz);
  dis.read_double_list("fractions", s.disorder);

  if (tree.contains("tags") && !tree.at("tags").is_null()) {
    const Json& t = tree.at("tags");
    if (!t.is_object()) throw ParseError("field tags: expected an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_string()) throw ParseError("field tags." + k + ": expected a string, got " + describe(v));
      s.tags[k] = v.get<std::string>();
    }
  }

  Section red(tree, "reduction", kReductionKeys, violations, hz);
  ReductionConfig& r = cfg.reduction;
  red.read_size("n_spins", r.n_spins);
  if (const auto* v = red.read_string("case")) r.transfer_case = parse_case(*v, "reduction.case");
  red.read_double("eta", r.eta);
  red.read_frequency("delta", r.delta);
  red.read_double("nbar", r.nbar);
  red.read_size("fock_cutoff", r.fock_cutoff);
  red.read_frequency("omega1", r.omega1);
  red.read_frequency("omega2", r.omega2);
  red.read_double("t_final", r.t_final);
  red.read_size("samples", r.samples);
  red.read_double("step", r.step);

  Section sw(tree, "sweep", kSweepKeys, violations, hz);
  sw.read_size("cap", cfg.sweep.cap);
  if (const Json* g = sw.get("group_by")) {
    if (!g->is_array()) throw ParseError("field sweep.group_by: expected an array of names");
    for (const auto& x : *g) {
      if (!x.is_string()) throw ParseError("field sweep.group_by: expected an array of names");
      cfg.sweep.group_by.push_back(x.get<std::string>());
    }
  }
  if (const Json* axes = sw.get("axes")) {
    if (!axes->is_array()) throw ParseError("field sweep.axes: expected an array");
    for (std::size_t i = 0; i < axes->size(); ++i) {
      const Json& a = (*axes)[i];
      const std::string where = "sweep.axes[" + std::to_string(i) + "]";
      if (!a.is_object() || !a.contains("name") || !a.at("name").is_string() || !a.contains("values") ||
          !a.at("values").is_array()) {
        throw ParseError("field " + where + ": expected {\"name\": string, \"values\": array}");
      }
      SweepAxis axis{a.at("name").get<std::string>(), {}};
      for (const auto& v : a.at("values")) {
        if (v.is_object()) {
          if (!v.contains("label") || !v.at("label").is_string() || !v.contains("set") || !v.at("set").is_object())
            throw ParseError("field " + where + ": grouped values need a string label and a set object");
          for (const auto& [k, _] : v.at("set").items())
            if (!is_overridable_key(k)) violations.push_back(where + ": unknown override key " + k);
        } else if (!is_overridable_key(axis.name)) {
          violations.push_back(where + ": unknown config key " + axis.name);
          break;
        }
        axis.values.push_back(v);
      }
      if (axis.values.empty()) violations.push_back(where + ": no values");
      cfg.sweep.axes.push_back(std::move(axis));
    }
  }

  auto sv = s.violations();
  violations.insert(violations.end(), sv.begin(), sv.end());
  auto rv = r.violations();
  violations.insert(violations.end(), rv.begin(), rv.end());
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return cfg;
}

Config parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  Json tree = path.empty() ? Json::object() : load_json_file(path);
  for (const auto& o : overrides) apply_override(tree, o);
  return resolve_config(tree);
}

Json serialize_scenario(const ScenarioConfig& s, double nu_over_2pi_hz) {
  Json j = Json::object();
  j["scenario"] = {{"case", to_string(s.transfer_case)},
                   {"n_spins", s.n_spins},
                   {"lambda_over_nu", s.lambda_over_nu},
                   {"delta", s.delta},
                   {"t_start", s.t_start},
                   {"t_final", s.t_final},
                   {"samples", s.samples},
                   {"step", s.step},
                   {"nbar", s.nbar},
                   {"initial", to_string(s.initial)},
                   {"fast_path", s.fast_path}};
  j["schedule"] = {{"kind", to_string(s.schedule_kind)}, {"zeta", s.schedule.zeta},
                   {"ramp1", s.schedule.ramp1},          {"ramp2", s.schedule.ramp2},
                   {"t0_1", s.schedule.t0_1},            {"t0_2", s.schedule.t0_2},
                   {"dzeta1", s.schedule.dzeta1},        {"dzeta2", s.schedule.dzeta2}};
  j["dephasing"] = {{"gamma", s.gamma_dep}, {"per_spin", s.gamma_per_spin}};
  j["disorder"] = {{"fractions", s.disorder}};
  j["tags"] = Json::object();
  for (const auto& [k, v] : s.tags) j["tags"][k] = v;
  j["units"] = {{"nu_over_2pi", nu_over_2pi_hz}};
  return j;
}

Json serialize(const Config& c) {
  Json j = serialize_scenario(c.scenario, c.nu_over_2pi_hz);
  const ReductionConfig& r = c.reduction;
  j["reduction"] = {{"n_spins", r.n_spins},         {"case", to_string(r.transfer_case)},
                    {"eta", r.eta},                 {"delta", r.delta},
                    {"nbar", r.nbar},               {"fock_cutoff", r.fock_cutoff},
                    {"omega1", r.omega1},           {"omega2", r.omega2},
                    {"t_final", r.t_final},         {"samples", r.samples},
                    {"step", r.step}};
  Json axes = Json::array();
  for (const auto& a : c.sweep.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  j["sweep"] = {{"axes", axes}, {"cap", c.sweep.cap}, {"group_by", c.sweep.group_by}};
  return j;
}

}  // namespace lmg
