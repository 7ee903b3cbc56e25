#pragma once

// JSON configuration for runs and sweeps. Every key is optional; missing
// keys keep the defaults (omega = lambda = epsilon = delta_pulse = 40 rad/ns,
// vacuum initial modes, idealized mode, automatic truncation).
//
// {
//   "device":   { "mode1": {"omega": 40, "lambda": 40}, "mode2": {...},
//                 "epsilon": 40, "delta0": 0, "delta_pulse": 40,
//                 "alpha1": {"re": 0, "im": 0}, "alpha2": 0 },
//   "protocol": { "free_time": 0.0785, "mode": "idealized" | "full",
//                 "outcomes": "both" | "sampled", "seed": 42,
//                 "pulse_lambda_scale": 1, "pulse_epsilon_scale": 1 },
//   "truncation": "auto" | { "n1": 40, "n2": 40, "tail_tol": 1e-10 },
//   "sweep":    { "axis": "kappa0", "grid": [0.25, 0.5, 1.0],
//                 "branch": "plus" | "minus", "threads": 0 }
// }

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecsgen/protocol_runner.hpp"

namespace ecsgen {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "ECSGEN_CONFIG";

struct SweepConfig {
  SweepAxis axis = SweepAxis::kappa0;
  std::vector<double> grid{0.25, 0.5, 1.0};
  EcsSign branch = EcsSign::plus;
  unsigned threads = 0;
};

struct RunConfig {
  ProtocolSpec spec;
  SweepConfig sweep;
};

namespace detail {

inline Complex complex_from_json(const nlohmann::json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("config: '" + key + "' must be a number, [re, im] or {\"re\", \"im\"}");
}

inline ModeParams mode_from_json(const nlohmann::json& j, const ModeParams& fallback) {
  return ModeParams(j.value("omega", fallback.omega()), j.value("lambda", fallback.coupling()));
}

}  // namespace detail

inline SimulationMode parse_mode(const std::string& s) {
  if (s == "idealized") return SimulationMode::idealized;
  if (s == "full") return SimulationMode::full;
  throw ConfigError("mode must be 'idealized' or 'full', got '" + s + "'");
}

inline EcsSign parse_branch(const std::string& s) {
  if (s == "plus") return EcsSign::plus;
  if (s == "minus") return EcsSign::minus;
  throw ConfigError("branch must be 'plus' or 'minus', got '" + s + "'");
}

inline RunConfig config_from_json(const nlohmann::json& root) {
  RunConfig cfg;
  try {
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    DeviceParams& p = cfg.spec.params;
    if (auto it = root.find("device"); it != root.end()) {
      const auto& d = *it;
      if (d.contains("mode1")) p.mode1 = detail::mode_from_json(d["mode1"], p.mode1);
      if (d.contains("mode2")) p.mode2 = detail::mode_from_json(d["mode2"], p.mode2);
      p.epsilon = d.value("epsilon", p.epsilon);
      p.delta0 = d.value("delta0", p.delta0);
      p.delta_pulse = d.value("delta_pulse", p.delta_pulse);
      if (d.contains("alpha1")) p.alpha1 = detail::complex_from_json(d["alpha1"], "alpha1");
      if (d.contains("alpha2")) p.alpha2 = detail::complex_from_json(d["alpha2"], "alpha2");
    }
    if (auto it = root.find("protocol"); it != root.end()) {
      const auto& pr = *it;
      if (pr.contains("free_time") && !pr["free_time"].is_null()) cfg.spec.free_time = pr["free_time"].get<double>();
      if (pr.contains("mode")) cfg.spec.mode = parse_mode(pr["mode"].get<std::string>());
      if (pr.contains("outcomes")) {
        const auto o = pr["outcomes"].get<std::string>();
        if (o == "both") cfg.spec.outcomes = OutcomePolicy::both;
        else if (o == "sampled") cfg.spec.outcomes = OutcomePolicy::sampled;
        else throw ConfigError("protocol.outcomes must be 'both' or 'sampled'");
      }
      cfg.spec.seed = pr.value("seed", cfg.spec.seed);
      cfg.spec.pulse_lambda_scale = pr.value("pulse_lambda_scale", cfg.spec.pulse_lambda_scale);
      cfg.spec.pulse_epsilon_scale = pr.value("pulse_epsilon_scale", cfg.spec.pulse_epsilon_scale);
    }
    if (auto it = root.find("truncation"); it != root.end()) {
      const auto& t = *it;
      if (t.is_string()) {
        if (t.get<std::string>() != "auto") throw ConfigError("truncation must be \"auto\" or an object");
      } else if (t.is_object()) {
        cfg.spec.tail_tol = t.value("tail_tol", cfg.spec.tail_tol);
        if (t.contains("n1") || t.contains("n2")) {
          if (!t.contains("n1") || !t.contains("n2")) throw ConfigError("truncation needs both n1 and n2");
          cfg.spec.trunc = TruncationConfig{t["n1"].get<int>(), t["n2"].get<int>(), cfg.spec.tail_tol};
        }
      } else {
        throw ConfigError("truncation must be \"auto\" or an object");
      }
    }
    if (auto it = root.find("sweep"); it != root.end()) {
      const auto& s = *it;
      if (s.contains("axis")) cfg.sweep.axis = parse_sweep_axis(s["axis"].get<std::string>());
      if (s.contains("grid")) cfg.sweep.grid = s["grid"].get<std::vector<double>>();
      if (s.contains("branch")) cfg.sweep.branch = parse_branch(s["branch"].get<std::string>());
      cfg.sweep.threads = s.value("threads", cfg.sweep.threads);
    }
    cfg.spec.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

/// Explicit path if given, else $ECSGEN_CONFIG, else built-in defaults.
inline RunConfig load_config_or_default(const std::optional<std::string>& path) {
  if (path && !path->empty()) return load_config(*path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return load_config(env);
  return RunConfig{};
}

}  // namespace ecsgen
