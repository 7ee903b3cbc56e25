#pragma once

// Runs the full prepare -> pulse -> free evolution -> pulse -> readout
// sequence through both engines and collects the comparison.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ecsgen/analytic_protocol.hpp"
#include "ecsgen/fock_space.hpp"
#include "ecsgen/propagator.hpp"

namespace ecsgen {

namespace detail {

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

enum class SimulationMode { idealized, full };
enum class OutcomePolicy { both, sampled };

inline std::string to_string(SimulationMode m) { return m == SimulationMode::idealized ? "idealized" : "full"; }

struct ProtocolSpec {
  DeviceParams params;
  std::optional<double> free_time;  ///< defaults to pi / omega_1
  SimulationMode mode = SimulationMode::idealized;
  OutcomePolicy outcomes = OutcomePolicy::both;
  std::uint64_t seed = 42;
  std::optional<TruncationConfig> trunc;  ///< nullopt: choose automatically
  double tail_tol = 1e-10;                ///< used when trunc is automatic
  double pulse_lambda_scale = 1.0;        ///< full mode: coupling during pulses
  double pulse_epsilon_scale = 1.0;       ///< full mode: splitting during pulses

  double effective_free_time() const { return free_time.value_or(kPi / params.mode1.omega()); }

  void validate() const {
    params.validate();
    if (!(effective_free_time() >= 0.0)) throw Error("ProtocolSpec: free_time must be >= 0");
    if (trunc) trunc->validate();
    if (!(pulse_lambda_scale >= 0.0 && pulse_lambda_scale <= 1.0)) {
      throw Error("ProtocolSpec: pulse_lambda_scale must be in [0, 1]");
    }
  }
};

/// Amplitude slack added to the automatic cutoff in full mode, where the
/// pulses displace the modes slightly beyond the ideal bound.
inline constexpr double kFullModeAmplitudeSlack = 0.25;

inline TruncationConfig resolve_truncation(const ProtocolSpec& spec) {
  if (spec.trunc) return *spec.trunc;
  return auto_truncation(spec.params, spec.tail_tol,
                         spec.mode == SimulationMode::full ? kFullModeAmplitudeSlack : 0.0);
}

/// [pulse(t_p), free(t), pulse(t_p)]. Idealized pulses switch eps and lambda
/// off, which makes them exactly the x-rotation times free mode rotation.
inline std::vector<PulseSegment> protocol_schedule(const ProtocolSpec& spec) {
  const DeviceParams& p = spec.params;
  const double tp = pulse_duration(p);
  PulseSegment pulse{tp, p.delta_pulse, 0.0, 0.0};
  if (spec.mode == SimulationMode::full) {
    pulse.epsilon = p.epsilon * spec.pulse_epsilon_scale;
    pulse.lambda_scale = spec.pulse_lambda_scale;
  }
  const PulseSegment idle{spec.effective_free_time(), p.delta0, p.epsilon, 1.0};
  return {pulse, idle, pulse};
}

/// Numeric pre-readout state of the protocol.
inline FockState simulate_protocol(const ProtocolSpec& spec, const TruncationConfig& trunc) {
  const DeviceParams& p = spec.params;
  const FockState initial = FockState::product(trunc, QubitLabel::Q0, p.alpha1, p.alpha2);
  return run_schedule(initial, p, protocol_schedule(spec));
}

inline FockState simulate_protocol(const ProtocolSpec& spec) {
  spec.validate();
  return simulate_protocol(spec, resolve_truncation(spec));
}

struct TimingReport {
  double t_p = 0.0;     ///< ns
  double t_free = 0.0;  ///< ns
};

/// t_p = pi / (2 delta_pulse), t_free = pi / omega_1.
inline TimingReport timing_report(const DeviceParams& p) {
  if (!(p.delta_pulse > 0.0)) throw Error("timing_report: delta_pulse must be > 0");
  return {kPi / (2.0 * p.delta_pulse), kPi / p.mode1.omega()};
}

enum class ClosedForm { standard, displaced, general };

inline std::string to_string(ClosedForm f) {
  switch (f) {
    case ClosedForm::standard: return "standard";
    case ClosedForm::displaced: return "displaced";
    default: return "general";
  }
}

/// Which closed-form concurrence applies: symmetric modes, equal initial
/// amplitudes and a free time of exactly half an oscillator period.
inline ClosedForm applicable_closed_form(const DeviceParams& p, double free_time) {
  const double half_period = kPi / p.mode1.omega();
  if (!p.symmetric_modes() || std::abs(p.alpha1 - p.alpha2) > 1e-12 ||
      std::abs(free_time - half_period) > 1e-12 * half_period) {
    return ClosedForm::general;
  }
  return std::abs(p.alpha1) == 0.0 ? ClosedForm::standard : ClosedForm::displaced;
}

struct OutcomeReport {
  QubitLabel outcome = QubitLabel::Q0;
  bool possible = true;
  double probability_analytic = 0.0;
  double probability_numeric = 0.0;
  double concurrence_analytic = 0.0;  ///< closed form where it applies, general formula otherwise
  double concurrence_general = 0.0;
  double concurrence_numeric = 0.0;
  double state_fidelity = 0.0;        ///< numeric collapsed state vs analytic one
};

struct ProtocolReport {
  SimulationMode mode = SimulationMode::idealized;
  ClosedForm closed_form = ClosedForm::general;
  TruncationConfig trunc;
  double t_p = 0.0;
  double t_free = 0.0;
  double kappa0_abs = 0.0;
  double kappa0_arg = 0.0;
  double phi = 0.0;
  double regime_ratio = 0.0;
  double engine_fidelity = 0.0;
  double norm_drift = 0.0;
  std::array<double, 2> probability_numeric{};
  std::array<double, 2> probability_analytic{};
  std::optional<QubitLabel> sampled_outcome;
  std::vector<OutcomeReport> outcomes;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;  ///< not serialized

  const OutcomeReport* find(QubitLabel q) const {
    for (const auto& o : outcomes) {
      if (o.outcome == q) return &o;
    }
    return nullptr;
  }
};

/// Regime check threshold for full-mode runs.
inline constexpr double kRegimeWarningRatio = 10.0;

inline ProtocolReport run_protocol(const ProtocolSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  const DeviceParams& p = spec.params;
  const double t = spec.effective_free_time();

  ProtocolReport rep;
  rep.mode = spec.mode;
  rep.trunc = resolve_truncation(spec);
  const TimingReport timing = timing_report(p);
  rep.t_p = timing.t_p;
  rep.t_free = t;
  const Complex k0 = kappa0(p);
  rep.kappa0_abs = std::abs(k0);
  rep.kappa0_arg = arg_or_zero(k0);
  rep.phi = p.epsilon * t;
  rep.regime_ratio = regime_ratio(p);
  rep.closed_form = applicable_closed_form(p, t);
  if (spec.mode == SimulationMode::full && !(rep.regime_ratio > kRegimeWarningRatio)) {
    rep.warnings.push_back("regime: delta_pulse/max(eps,lambda) = " + detail::short_number(rep.regime_ratio) +
                           " <= " + detail::short_number(kRegimeWarningRatio));
  }

  // Analytic engine.
  const CoherentSuperposition analytic = state_after_second_pulse(p, t);

  // Numeric engine.
  const FockState numeric = simulate_protocol(spec, rep.trunc);
  rep.norm_drift = std::abs(numeric.norm() - 1.0);
  rep.engine_fidelity = fidelity_mod_phase(numeric, embed(analytic, rep.trunc));
  if (numeric.top_level_leakage() > 100.0 * rep.trunc.tail_tol) {
    rep.warnings.push_back("truncation: top-level leakage " + detail::short_number(numeric.top_level_leakage()));
  }
  rep.probability_numeric = outcome_probabilities(numeric);
  const double total = superposition_norm(analytic);
  for (QubitLabel q : {QubitLabel::Q0, QubitLabel::Q1}) {
    const CoherentSuperposition sector = analytic.sector(q);
    const double n = sector.empty() ? 0.0 : inner_product(sector, sector).real();
    rep.probability_analytic[static_cast<int>(q)] = n / (total * total);
  }

  std::vector<QubitLabel> wanted{QubitLabel::Q0, QubitLabel::Q1};
  if (spec.outcomes == OutcomePolicy::sampled) {
    rep.sampled_outcome = sample_measurement(numeric, spec.seed);
    wanted = {*rep.sampled_outcome};
  }

  const Complex alpha_prime = free_rotate(p.alpha1, p.mode1.omega(), rep.t_p);
  for (QubitLabel q : wanted) {
    OutcomeReport o;
    o.outcome = q;
    o.probability_analytic = rep.probability_analytic[static_cast<int>(q)];
    o.probability_numeric = rep.probability_numeric[static_cast<int>(q)];
    try {
      const CollapseResult c = collapse(analytic, q);
      const MeasurementResult m = measure_qubit(numeric, q);
      const EcsSign sign = q == QubitLabel::Q1 ? EcsSign::plus : EcsSign::minus;
      o.concurrence_general = concurrence_general(c.pair);
      switch (rep.closed_form) {
        case ClosedForm::standard:
          o.concurrence_analytic = standard_form_concurrence(rep.kappa0_abs, rep.phi, sign);
          break;
        case ClosedForm::displaced:
          o.concurrence_analytic = displaced_form_concurrence(rep.kappa0_abs, rep.phi, alpha_prime.imag(), sign);
          break;
        default:
          o.concurrence_analytic = o.concurrence_general;
      }
      o.concurrence_numeric = i_concurrence(m.modes);
      o.state_fidelity = fidelity_mod_phase(m.modes, embed(c.pair, rep.trunc));
    } catch (const ImpossibleOutcomeError& e) {
      o.possible = false;
      o.concurrence_analytic = o.concurrence_general = o.concurrence_numeric = o.state_fidelity = 0.0;
      rep.warnings.push_back("outcome " + to_string(q) + " impossible: " + e.what());
    }
    rep.outcomes.push_back(o);
  }

  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

enum class SweepAxis { kappa0, phi, alpha_im, delta_pulse };

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kappa0: return "kappa0";
    case SweepAxis::phi: return "phi";
    case SweepAxis::alpha_im: return "alpha_im";
    default: return "delta_pulse";
  }
}

inline SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "kappa0") return SweepAxis::kappa0;
  if (s == "phi") return SweepAxis::phi;
  if (s == "alpha_im") return SweepAxis::alpha_im;
  if (s == "delta_pulse") return SweepAxis::delta_pulse;
  throw Error("unknown sweep axis '" + s + "' (expected kappa0, phi, alpha_im or delta_pulse)");
}

/// Spec for one grid point:
///   kappa0      lambda_i = value * omega_i
///   phi         epsilon = value / free_time
///   alpha_im    Im alpha_i = value (real parts kept)
///   delta_pulse delta_pulse = value
inline ProtocolSpec apply_axis(ProtocolSpec spec, SweepAxis axis, double value) {
  DeviceParams& p = spec.params;
  switch (axis) {
    case SweepAxis::kappa0:
      p.mode1 = ModeParams(p.mode1.omega(), value * p.mode1.omega());
      p.mode2 = ModeParams(p.mode2.omega(), value * p.mode2.omega());
      break;
    case SweepAxis::phi: {
      const double t = spec.effective_free_time();
      if (!(t > 0.0)) throw Error("sweep over phi needs free_time > 0");
      p.epsilon = value / t;
      break;
    }
    case SweepAxis::alpha_im:
      p.alpha1 = {p.alpha1.real(), value};
      p.alpha2 = {p.alpha2.real(), value};
      break;
    case SweepAxis::delta_pulse:
      p.delta_pulse = value;
      break;
  }
  return spec;
}

struct SweepRow {
  double axis_value = 0.0;
  std::optional<ProtocolReport> report;
  std::string error;  ///< set when the row failed hard
};

/// One report per grid point, in grid order. Rows run on up to `threads`
/// workers (0: hardware concurrency); a failing row is recorded, not thrown.
inline std::vector<SweepRow> sweep(const ProtocolSpec& base, SweepAxis axis, const std::vector<double>& grid,
                                   unsigned threads = 0) {
  if (grid.empty()) throw Error("sweep: grid is empty");
  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      rows[i].axis_value = grid[i];
      try {
        rows[i].report = run_protocol(apply_axis(base, axis, grid[i]));
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace ecsgen
