#ifndef TACP_HARNESS_CONFIG_HPP
#define TACP_HARNESS_CONFIG_HPP

// Experiment configuration. Files hold `key = value` lines, `#` starts a
// comment, and every key matches the long name of a `cpp run` flag.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tacp/errors.hpp"
#include "tacp/harness/problem.hpp"

namespace tacp::harness {

struct ExperimentConfig {
  ProblemConfig problem;
  std::optional<Mix> mix;             // unset: all seven mixes
  std::optional<std::string> preset;  // unset or "all": all four presets
  std::optional<double> rho_p, rho_d, rho_x;
  bool accelerate = false;
  std::size_t max_iters = 20000;
  double tol = 1e-8;
  std::string out = "out";
  bool emit_plot_script = false;
  int threads = 1;

  bool custom_rho() const { return rho_p || rho_d || rho_x; }

  std::vector<Mix> mixes() const {
    if (mix) return {*mix};
    return {kAllMixes.begin(), kAllMixes.end()};
  }

  /// Explicit rho values win over presets; unset kinds default to 1.
  std::vector<RhoSetting> settings() const {
    if (custom_rho()) {
      RhoSetting s{"", rho_p.value_or(1.0), rho_d.value_or(1.0), rho_x.value_or(1.0)};
      char buf[96];
      std::snprintf(buf, sizeof buf, "rho%g_%g_%g", s.rho_p, s.rho_d, s.rho_x);
      s.name = buf;
      return {s};
    }
    if (preset && *preset != "all") return {find_preset(*preset)};
    return rho_presets();
  }

  void validate() const {
    problem.validate();
    for (auto r : {rho_p, rho_d, rho_x}) {
      if (r && !(*r > 0.0 && std::isfinite(*r))) fail(Errc::InvalidConfig, "rho values must be positive");
    }
    if (max_iters < 1) fail(Errc::InvalidConfig, "max-iters must be at least 1");
    if (!(tol > 0.0)) fail(Errc::InvalidConfig, "tol must be positive");
    if (threads < 1) fail(Errc::InvalidConfig, "threads must be at least 1");
    if (out.empty()) fail(Errc::InvalidConfig, "out must name a directory");
    for (Mix m : mixes()) mix_counts(m, problem.agents);
    (void)settings();
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || ptr != end) {
    fail(Errc::ParseError, "'" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
  }
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  fail(Errc::ParseError, "'" + std::string(key) + "' expects true/false, got '" + std::string(value) + "'");
}

}  // namespace detail

inline void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  using detail::parse_number;
  if (key == "seed") c.problem.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "n") c.problem.n = parse_number<int>(key, value);
  else if (key == "agents") c.problem.agents = parse_number<int>(key, value);
  else if (key == "alpha") c.problem.alpha = parse_number<double>(key, value);
  else if (key == "r2") c.problem.r2 = parse_number<double>(key, value);
  else if (key == "mix") c.mix = value == "all" ? std::nullopt : std::optional<Mix>(parse_mix(value));
  else if (key == "preset") {
    if (value != "all") find_preset(value);
    c.preset = std::string(value);
  }
  else if (key == "rho-p") c.rho_p = parse_number<double>(key, value);
  else if (key == "rho-d") c.rho_d = parse_number<double>(key, value);
  else if (key == "rho-x") c.rho_x = parse_number<double>(key, value);
  else if (key == "accelerate") c.accelerate = detail::parse_bool(key, value);
  else if (key == "max-iters") c.max_iters = parse_number<std::size_t>(key, value);
  else if (key == "tol") c.tol = parse_number<double>(key, value);
  else if (key == "out") c.out = std::string(value);
  else if (key == "emit-plot-script") c.emit_plot_script = detail::parse_bool(key, value);
  else if (key == "threads") c.threads = parse_number<int>(key, value);
  else fail(Errc::ParseError, "unknown key '" + std::string(key) + "'");
}

inline void read_config(std::istream& is, ExperimentConfig& c) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view text = line;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = detail::trim(text.substr(0, eq));
    const auto value = detail::trim(text.substr(eq + 1));
    try {
      apply_setting(c, key, value);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + " of config (" + e.what() + ")");
    }
  }
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open config file '" + path + "'");
  read_config(in, base);
  return base;
}

}  // namespace tacp::harness

#endif  // TACP_HARNESS_CONFIG_HPP
