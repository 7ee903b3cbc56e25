#pragma once

// Serialization of run reports (JSON) and sweep tables (CSV).

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecsgen/protocol_runner.hpp"

namespace ecsgen {

using ordered_json = nlohmann::ordered_json;

/// %.17g; lossless for doubles.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline ordered_json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline ordered_json to_json(const DeviceParams& p) {
  return {{"mode1", {{"omega", p.mode1.omega()}, {"lambda", p.mode1.coupling()}}},
          {"mode2", {{"omega", p.mode2.omega()}, {"lambda", p.mode2.coupling()}}},
          {"epsilon", p.epsilon},
          {"delta0", p.delta0},
          {"delta_pulse", p.delta_pulse},
          {"alpha1", complex_to_json(p.alpha1)},
          {"alpha2", complex_to_json(p.alpha2)}};
}

inline ordered_json to_json(const OutcomeReport& o) {
  return {{"outcome", to_string(o.outcome)},
          {"possible", o.possible},
          {"probability_analytic", o.probability_analytic},
          {"probability_numeric", o.probability_numeric},
          {"concurrence_analytic", o.concurrence_analytic},
          {"concurrence_general", o.concurrence_general},
          {"concurrence_numeric", o.concurrence_numeric},
          {"state_fidelity", o.state_fidelity}};
}

/// Report as JSON. Wall-clock time is left out so that output depends only
/// on the inputs.
inline ordered_json to_json(const ProtocolReport& r) {
  ordered_json outcomes = ordered_json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(to_json(o));
  return {{"mode", to_string(r.mode)},
          {"closed_form", to_string(r.closed_form)},
          {"truncation", {{"n1", r.trunc.n1}, {"n2", r.trunc.n2}, {"tail_tol", r.trunc.tail_tol}}},
          {"t_p", r.t_p},
          {"t_free", r.t_free},
          {"kappa0_abs", r.kappa0_abs},
          {"kappa0_arg", r.kappa0_arg},
          {"phi", r.phi},
          {"regime_ratio", std::isfinite(r.regime_ratio) ? ordered_json(r.regime_ratio) : ordered_json(nullptr)},
          {"engine_fidelity", r.engine_fidelity},
          {"norm_drift", r.norm_drift},
          {"p_Q0", r.probability_numeric[0]},
          {"p_Q1", r.probability_numeric[1]},
          {"p_Q0_analytic", r.probability_analytic[0]},
          {"p_Q1_analytic", r.probability_analytic[1]},
          {"sampled_outcome", r.sampled_outcome ? ordered_json(to_string(*r.sampled_outcome)) : ordered_json(nullptr)},
          {"outcomes", outcomes},
          {"warnings", r.warnings}};
}

inline ordered_json run_document(const ProtocolSpec& spec, const ProtocolReport& r) {
  return {{"params", to_json(spec.params)}, {"seed", spec.seed}, {"report", to_json(r)}};
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string join_warnings(const std::vector<std::string>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += "; ";
    out += w[i];
  }
  return out;
}

/// Columns: <axis>,p_Q0,p_Q1,C_analytic,C_numeric,fidelity,t_p,kappa0_abs,phi,warnings.
/// The concurrences are those of the `branch` outcome (plus = Q1). Failed
/// rows leave the numeric columns empty and put the error in warnings.
inline void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows,
                            EcsSign branch = EcsSign::plus) {
  os << to_string(axis) << ",p_Q0,p_Q1,C_analytic,C_numeric,fidelity,t_p,kappa0_abs,phi,warnings\n";
  for (const auto& row : rows) {
    os << format_number(row.axis_value);
    if (!row.report) {
      os << ",,,,,,,,," << csv_escape("error: " + row.error) << '\n';
      continue;
    }
    const ProtocolReport& r = *row.report;
    const OutcomeReport* o = r.find(outcome_for(branch));
    std::vector<std::string> warnings = r.warnings;
    std::string c_analytic, c_numeric;
    if (o) {
      c_analytic = format_number(o->concurrence_analytic);
      c_numeric = format_number(o->concurrence_numeric);
    } else {
      warnings.push_back("branch outcome not sampled");
    }
    os << ',' << format_number(r.probability_numeric[0]) << ',' << format_number(r.probability_numeric[1]) << ','
       << c_analytic << ',' << c_numeric << ',' << format_number(r.engine_fidelity) << ','
       << format_number(r.t_p) << ',' << format_number(r.kappa0_abs) << ',' << format_number(r.phi) << ','
       << csv_escape(join_warnings(warnings)) << '\n';
  }
}

inline std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows, EcsSign branch = EcsSign::plus) {
  std::ostringstream os;
  write_sweep_csv(os, axis, rows, branch);
  return os.str();
}

}  // namespace ecsgen
