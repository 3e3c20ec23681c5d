#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "massart/core.hpp"

namespace massart {

/// Flat experiment settings shared by the config file and CLI flags.
struct Settings {
  std::size_t d = 20;
  long t_horizon = 10000;
  double eta = 0.1;
  double gamma = 0.2;
  double zeta = 0.0;
  std::size_t k = 3;
  double delta = 0.5;
  double reward_cap = 1.0;
  std::uint64_t seed = 0;
  AdversaryKind adversary = AdversaryKind::Iid;
  std::optional<EnvironmentKind> environment;
  double domain_radius = 1.0;

  HalfspaceConfig halfspace() const {
    if (environment && *environment != EnvironmentKind::Massart2) {
      throw ConfigError("halfspace runs require environment = massart2");
    }
    HalfspaceConfig c;
    c.d = d;
    c.horizon = t_horizon;
    c.eta = eta;
    c.gamma = gamma;
    c.zeta = zeta;
    c.seed = seed;
    c.domain_radius = domain_radius;
    c.adversary = adversary;
    c.validate_and_derive();
    return c;
  }

  BanditConfig bandit() const {
    if (environment == EnvironmentKind::Massart2) {
      throw ConfigError("massart2 is a classification environment");
    }
    BanditConfig c;
    c.d = d;
    c.k = k;
    c.horizon = t_horizon;
    c.gamma = gamma;
    c.delta = delta;
    c.reward_cap = reward_cap;
    c.eta = eta;
    c.seed = seed;
    c.domain_radius = domain_radius;
    c.environment = environment.value_or(EnvironmentKind::MonotoneK);
    c.validate_and_derive();
    return c;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("invalid value for " + key + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline AdversaryKind parse_adversary(std::string_view s) {
  if (s == "iid") return AdversaryKind::Iid;
  if (s == "boundary") return AdversaryKind::Boundary;
  if (s == "adaptive") return AdversaryKind::Adaptive;
  throw ConfigError("unknown adversary '" + std::string(s) + "'");
}

inline EnvironmentKind parse_environment(std::string_view s) {
  if (s == "massart2") return EnvironmentKind::Massart2;
  if (s == "sorted_k") return EnvironmentKind::SortedK;
  if (s == "monotone_k") return EnvironmentKind::MonotoneK;
  if (s == "reduction2") return EnvironmentKind::Reduction2;
  throw ConfigError("unknown environment '" + std::string(s) + "'");
}

/// Applies one key = value assignment; unknown keys are rejected.
inline void apply_setting(Settings& s, const std::string& key, std::string_view value) {
  using detail::parse_number;
  if (key == "d") s.d = parse_number<std::size_t>(key, value);
  else if (key == "t_horizon") s.t_horizon = parse_number<long>(key, value);
  else if (key == "eta") s.eta = parse_number<double>(key, value);
  else if (key == "gamma") s.gamma = parse_number<double>(key, value);
  else if (key == "zeta") s.zeta = parse_number<double>(key, value);
  else if (key == "k") s.k = parse_number<std::size_t>(key, value);
  else if (key == "delta") s.delta = parse_number<double>(key, value);
  else if (key == "reward_cap") s.reward_cap = parse_number<double>(key, value);
  else if (key == "seed") s.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "adversary") s.adversary = parse_adversary(value);
  else if (key == "environment") s.environment = parse_environment(value);
  else if (key == "domain_radius") s.domain_radius = parse_number<double>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

/// Parses `key = value` lines; `#` starts a comment.
inline void apply_settings_text(Settings& s, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(s, std::string(detail::trim(line.substr(0, eq))), detail::trim(line.substr(eq + 1)));
  }
}

inline void apply_settings_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  apply_settings_text(s, text);
}

}  // namespace massart
