#include "optomw/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <utility>

#include "optomw/constants.hpp"
#include "optomw/errors.hpp"

namespace optomw {

namespace {

constexpr std::array<std::pair<SweepAxis, std::string_view>, 5> kAxisNames = {{
    {SweepAxis::omega_w_center, "omega_w_center"},
    {SweepAxis::omega_c_center, "omega_c_center"},
    {SweepAxis::epsilon, "epsilon"},
    {SweepAxis::cat_alpha, "cat_alpha"},
    {SweepAxis::temperature, "temperature"},
}};

constexpr std::array<std::pair<Observable, std::string_view>, 5> kObservableNames = {{
    {Observable::log_neg, "E_N"},
    {Observable::f_cat, "F_cat"},
    {Observable::f_coherent, "F_coherent"},
    {Observable::f_opt, "F_opt"},
    {Observable::stability_margin, "stability_margin"},
}};

template <class E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, name] : table)
    if (v == value) return name;
  return "?";
}

template <class E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
  for (const auto& [v, name] : table)
    if (name == s) return v;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line;
};

double parse_number(const Entry& e, std::string_view key) {
  const std::string_view v = trim(e.value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("'" + std::string(key) + "' expects a finite number, got '" + e.value + "'", e.line);
  return out;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> parts;
  while (!s.empty()) {
    const auto comma = s.find(',');
    parts.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return parts;
}

bool is_angular(std::string_view base) {
  if (base == "omega_center_c" || base == "omega_center_w") return true;
  for (const auto& f : kDeviceFields)
    if (f.name == base) return f.kind == FieldKind::angular_frequency;
  return false;
}

}  // namespace

std::string_view to_string(SweepAxis axis) { return name_of(kAxisNames, axis); }
std::string_view to_string(Observable obs) { return name_of(kObservableNames, obs); }
std::string_view to_string(Direction d) { return d == Direction::forward ? "forward" : "reversed"; }
std::string_view to_string(DetuningMode m) { return m == DetuningMode::effective ? "effective" : "bare"; }

std::optional<SweepAxis> parse_axis(std::string_view s) { return lookup(kAxisNames, s); }
std::optional<Observable> parse_observable(std::string_view s) { return lookup(kObservableNames, s); }
std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "forward") return Direction::forward;
  if (s == "reversed") return Direction::reversed;
  return std::nullopt;
}
std::optional<DetuningMode> parse_detuning_mode(std::string_view s) {
  if (s == "effective") return DetuningMode::effective;
  if (s == "bare") return DetuningMode::bare;
  return std::nullopt;
}

RunConfig preset_config(std::string_view name) {
  if (name != kDefaultPreset) throw ConfigError("unknown preset '" + std::string(name) + "'", 0);
  return RunConfig{};
}

RunConfig parse_config(std::istream& in) {
  std::map<std::string, Entry, std::less<>> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    if (entries.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    entries.emplace(key, Entry{value, line_no});
  }

  RunConfig cfg;
  if (auto it = entries.find("preset"); it != entries.end()) {
    try {
      cfg = preset_config(it->second.value);
    } catch (const ConfigError& e) {
      throw ConfigError("unknown preset '" + it->second.value + "'", it->second.line);
    }
    cfg.preset = it->second.value;
    entries.erase(it);
  }

  // omega_m first: `_wm` values elsewhere are relative to it.
  if (entries.contains("omega_m") && entries.contains("omega_m_hz"))
    throw ConfigError("omega_m given twice (omega_m and omega_m_hz)", entries.at("omega_m_hz").line);
  for (std::string_view k : {"omega_m", "omega_m_hz"}) {
    if (auto it = entries.find(k); it != entries.end()) {
      const double v = parse_number(it->second, k);
      cfg.params.omega_m = (k == "omega_m") ? v : v * constants::two_pi;
      entries.erase(it);
    }
  }
  if (auto it = entries.find("omega_m_wm"); it != entries.end())
    throw ConfigError("omega_m cannot be given in units of itself", it->second.line);
  const double wm = cfg.params.omega_m;

  std::optional<double> tau_seconds;
  std::optional<double> center_c_abs, center_w_abs;
  bool epsilon_given = false;
  std::map<std::string, int, std::less<>> seen_base;  // base name -> line

  for (const auto& [key, entry] : entries) {
    std::string_view k = key;
    std::string_view base = k;
    double factor = 1.0;
    if (k.ends_with("_hz") && is_angular(k.substr(0, k.size() - 3))) {
      base = k.substr(0, k.size() - 3);
      factor = constants::two_pi;
    } else if (k.ends_with("_wm") && is_angular(k.substr(0, k.size() - 3))) {
      base = k.substr(0, k.size() - 3);
      factor = wm;
    }
    if (auto [it, fresh] = seen_base.emplace(std::string(base), entry.line); !fresh)
      throw ConfigError("'" + std::string(base) + "' given more than once (unit suffixes alias the same field)",
                        std::max(it->second, entry.line));

    bool handled = false;
    for (const auto& f : kDeviceFields) {
      if (f.name == base) {
        cfg.params.*f.member = parse_number(entry, k) * factor;
        handled = true;
        break;
      }
    }
    if (handled) continue;

    if (base == "omega_center_c") {
      center_c_abs = parse_number(entry, k) * factor;
    } else if (base == "omega_center_w") {
      center_w_abs = parse_number(entry, k) * factor;
    } else if (k == "tau") {
      tau_seconds = parse_number(entry, k);
    } else if (k == "epsilon") {
      cfg.window.epsilon = parse_number(entry, k);
      epsilon_given = true;
    } else if (k == "detuning_mode") {
      auto m = parse_detuning_mode(entry.value);
      if (!m) throw ConfigError("detuning_mode must be 'effective' or 'bare'", entry.line);
      cfg.mode = *m;
    } else if (k == "direction") {
      auto d = parse_direction(entry.value);
      if (!d) throw ConfigError("direction must be 'forward' or 'reversed'", entry.line);
      cfg.direction = *d;
    } else if (k == "cat_alpha") {
      cfg.cat_alpha = parse_number(entry, k);
      if (cfg.cat_alpha < 0.0) throw ConfigError("cat_alpha must be non-negative", entry.line);
    } else if (k == "axis") {
      auto a = parse_axis(entry.value);
      if (!a) throw ConfigError("unknown sweep axis '" + entry.value + "'", entry.line);
      if (!cfg.sweep) cfg.sweep.emplace();
      cfg.sweep->axis = *a;
    } else if (k == "start" || k == "stop") {
      if (!cfg.sweep) cfg.sweep.emplace();
      (k == "start" ? cfg.sweep->start : cfg.sweep->stop) = parse_number(entry, k);
    } else if (k == "points") {
      const double p = parse_number(entry, k);
      if (p < 2.0 || p != std::floor(p) || p > 1e7) throw ConfigError("points must be an integer >= 2", entry.line);
      if (!cfg.sweep) cfg.sweep.emplace();
      cfg.sweep->points = static_cast<int>(p);
    } else if (k == "epsilons") {
      cfg.epsilons.clear();
      for (auto part : split_list(entry.value)) {
        const double e = parse_number(Entry{std::string(part), entry.line}, k);
        if (!(e > 0.0)) throw ConfigError("epsilons must be positive", entry.line);
        cfg.epsilons.push_back(e);
      }
    } else if (k == "outputs") {
      cfg.outputs.clear();
      for (auto part : split_list(entry.value)) {
        auto o = parse_observable(part);
        if (!o) throw ConfigError("unknown observable '" + std::string(part) + "'", entry.line);
        cfg.outputs.push_back(*o);
      }
    } else if (k == "tol") {
      cfg.rel_tol = parse_number(entry, k);
      if (!(cfg.rel_tol > 0.0)) throw ConfigError("tol must be positive", entry.line);
    } else {
      throw ConfigError("unknown key '" + key + "'", entry.line);
    }
  }

  if (tau_seconds) {
    if (epsilon_given) throw ConfigError("give either tau or epsilon, not both", entries.at("tau").line);
    cfg.window.epsilon = *tau_seconds * wm;
  }
  if (center_c_abs) cfg.window.center_c_rel = *center_c_abs / wm;
  if (center_w_abs) cfg.window.center_w_rel = *center_w_abs / wm;
  if (!(cfg.window.epsilon > 0.0)) throw ConfigError("epsilon (tau omega_m) must be positive", 0);
  if (cfg.sweep && !(cfg.sweep->points >= 2)) throw ConfigError("points must be >= 2", 0);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

}  // namespace optomw
