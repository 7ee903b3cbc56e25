#pragma once

// Closed-form protocol: prepare |Q0>|a1 a2>, pi/2 pulse, conditional
// displacement for time t, second pi/2 pulse, projective qubit readout.
// Pulses are idealized as an instantaneous x-rotation plus free mode
// rotation over t_p = pi / (2 delta_pulse). The branch-independent
// driven-oscillator phase is dropped everywhere.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ecsgen/coherent_algebra.hpp"

namespace ecsgen {

/// Device parameters in rad/ns (frequencies) and dimensionless amplitudes.
struct DeviceParams {
  ModeParams mode1{40.0, 40.0};
  ModeParams mode2{40.0, 40.0};
  double epsilon = 40.0;
  double delta0 = 0.0;       ///< idle flip amplitude
  double delta_pulse = 40.0; ///< flip amplitude while a pulse is on
  Complex alpha1{};
  Complex alpha2{};

  const ModeParams& mode(int i) const { return i == 1 ? mode1 : mode2; }
  Complex alpha(int i) const { return i == 1 ? alpha1 : alpha2; }

  void validate() const {
    if (!(delta_pulse > 0.0) || !std::isfinite(delta_pulse)) {
      throw Error("DeviceParams: delta_pulse must be finite and > 0");
    }
    if (!(delta0 >= 0.0) || !std::isfinite(delta0)) {
      throw Error("DeviceParams: delta0 must be finite and >= 0");
    }
    if (!std::isfinite(epsilon)) throw Error("DeviceParams: epsilon must be finite");
    for (Complex a : {alpha1, alpha2}) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw Error("DeviceParams: initial amplitudes must be finite");
      }
    }
  }

  bool symmetric_modes(double tol = 1e-12) const {
    return std::abs(mode1.omega() - mode2.omega()) <= tol * mode1.omega() &&
           std::abs(mode1.coupling() - mode2.coupling()) <= tol * std::max(1.0, mode1.coupling());
  }
};

/// t_p = pi / (2 delta_pulse).
inline double pulse_duration(const DeviceParams& p) { return kPi / (2.0 * p.delta_pulse); }

/// delta_pulse / max(epsilon, lambda_1, lambda_2); the idealized pulse needs this >> 1.
inline double regime_ratio(const DeviceParams& p) {
  const double scale = std::max({std::abs(p.epsilon), p.mode1.coupling(), p.mode2.coupling()});
  return scale > 0.0 ? p.delta_pulse / scale : std::numeric_limits<double>::infinity();
}

/// kappa_0 = (lambda_1 / omega_1) e^{-i omega_1 t_p}.
inline Complex kappa0(const DeviceParams& p) {
  return free_rotate(p.mode1.ratio(), p.mode1.omega(), pulse_duration(p));
}

/// Idealized pulse applied to every branch: |Q0> -> (|Q0> + i|Q1>)/sqrt2,
/// |Q1> -> (i|Q0> + |Q1>)/sqrt2, mode labels rotated by e^{-i omega t_p}.
/// Output lists the Q0 sector first, each sector in input branch order.
inline CoherentSuperposition apply_ideal_pulse(const CoherentSuperposition& state, const DeviceParams& p) {
  const double tp = pulse_duration(p);
  const double h = 1.0 / std::sqrt(2.0);
  CoherentSuperposition out(state.branch_cap());
  for (QubitLabel target : {QubitLabel::Q0, QubitLabel::Q1}) {
    for (const auto& b : state.branches()) {
      const Complex amp = (b.qubit == target) ? Complex{h, 0.0} : Complex{0.0, h};
      out.add({b.weight * amp, target, free_rotate(b.alpha1, p.mode1.omega(), tp),
               free_rotate(b.alpha2, p.mode2.omega(), tp)});
    }
  }
  return out;
}

/// Evolution for time t with the flip amplitude switched off. Each branch
/// picks up e^{+i eps s t/2} (s = sigma_z), its labels move to
/// a e^{-i w t} - s kappa(t), and the weight gains e^{-s delta(a)}.
inline CoherentSuperposition free_evolve(const CoherentSuperposition& state, const DeviceParams& p, double t) {
  if (t < 0.0) throw Error("free_evolve: t must be >= 0");
  const Complex k1 = kappa(p.mode1, t);
  const Complex k2 = kappa(p.mode2, t);
  CoherentSuperposition out(state.branch_cap());
  for (const auto& b : state.branches()) {
    const double s = sigma_z(b.qubit);
    const Complex d1 = delta_phase(p.mode1, b.alpha1, t);
    const Complex d2 = delta_phase(p.mode2, b.alpha2, t);
    const Complex phase = std::polar(1.0, 0.5 * p.epsilon * s * t) * std::exp(-s * (d1 + d2));
    out.add({b.weight * phase, b.qubit, free_rotate(b.alpha1, p.mode1.omega(), t) - s * k1,
             free_rotate(b.alpha2, p.mode2.omega(), t) - s * k2});
  }
  return out;
}

inline CoherentSuperposition initial_state(const DeviceParams& p) {
  return CoherentSuperposition{{Complex{1.0, 0.0}, QubitLabel::Q0, p.alpha1, p.alpha2}};
}

/// (|Q0> + i|Q1>)/sqrt2 |a1' a2'>, a_i' = a_i e^{-i w_i t_p}.
inline CoherentSuperposition state_after_first_pulse(const DeviceParams& p) {
  p.validate();
  return apply_ideal_pulse(initial_state(p), p);
}

/// Qubit-mode entangled state after the conditional displacement:
/// e^{-i theta}/sqrt2 |Q0>|b1+ b2+> + i e^{i theta}/sqrt2 |Q1>|b1- b2->.
inline CoherentSuperposition tripartite_state(const DeviceParams& p, double t) {
  return free_evolve(state_after_first_pulse(p), p, t);
}

/// Four-branch state right before readout. Within each qubit sector the
/// branch descending from Q0 (the "+" labels) comes first.
inline CoherentSuperposition state_after_second_pulse(const DeviceParams& p, double t) {
  return apply_ideal_pulse(tripartite_state(p, t), p);
}

/// mu |b1+ b2+> + nu |b1- b2->.
struct EcsBranchPair {
  Complex weight_plus;
  Complex weight_minus;
  Complex beta1_plus;
  Complex beta2_plus;
  Complex beta1_minus;
  Complex beta2_minus;

  /// As a superposition tagged with one qubit label (for embedding).
  CoherentSuperposition as_superposition(QubitLabel q = QubitLabel::Q0) const {
    CoherentSuperposition s;
    s.add({weight_plus, q, beta1_plus, beta2_plus});
    s.add({weight_minus, q, beta1_minus, beta2_minus});
    return s;
  }
};

/// Per-mode overlaps p_i = <b_i-|b_i+>.
inline std::pair<Complex, Complex> branch_overlaps(const EcsBranchPair& pair) {
  return {coherent_overlap(pair.beta1_plus, pair.beta1_minus),
          coherent_overlap(pair.beta2_plus, pair.beta2_minus)};
}

/// |mu|^2 + |nu|^2 + 2 Re(mu conj(nu) p1 p2).
inline double pair_norm_squared(const EcsBranchPair& pair) {
  const auto [p1, p2] = branch_overlaps(pair);
  return std::norm(pair.weight_plus) + std::norm(pair.weight_minus) +
         2.0 * (pair.weight_plus * std::conj(pair.weight_minus) * p1 * p2).real();
}

inline EcsBranchPair normalized(EcsBranchPair pair) {
  const double n2 = pair_norm_squared(pair);
  if (!(n2 > 0.0)) throw DegenerateStateError("EcsBranchPair: zero norm");
  const double inv = 1.0 / std::sqrt(n2);
  pair.weight_plus *= inv;
  pair.weight_minus *= inv;
  return pair;
}

struct CollapseResult {
  double probability = 0.0;
  EcsBranchPair pair;
};

/// Projects onto qubit outcome `outcome`; returns the Born probability and
/// the normalized two-mode state left behind.
inline CollapseResult collapse(const CoherentSuperposition& state, QubitLabel outcome) {
  const CoherentSuperposition sector = state.sector(outcome);
  if (sector.empty()) {
    throw ImpossibleOutcomeError("collapse: no branch carries outcome " + to_string(outcome));
  }
  if (sector.size() > 2) {
    throw Error("collapse: sector " + to_string(outcome) + " has " + std::to_string(sector.size()) +
                " branches, expected at most 2");
  }
  const double total = superposition_norm(state);
  const double sector_norm = superposition_norm(sector);

  const auto& b = sector.branches();
  EcsBranchPair pair{};
  pair.weight_plus = b[0].weight / sector_norm;
  pair.beta1_plus = b[0].alpha1;
  pair.beta2_plus = b[0].alpha2;
  if (b.size() == 2) {
    pair.weight_minus = b[1].weight / sector_norm;
    pair.beta1_minus = b[1].alpha1;
    pair.beta2_minus = b[1].alpha2;
  } else {
    pair.beta1_minus = b[0].alpha1;
    pair.beta2_minus = b[0].alpha2;
  }
  return {(sector_norm * sector_norm) / (total * total), pair};
}

/// 1 - |<b|a>|^2 = 1 - exp(-|a - b|^2), accurate when a ~ b.
inline double distinguishability(Complex a, Complex b) { return -std::expm1(-std::norm(a - b)); }

/// Concurrence of mu|a1 a2> + nu|b1 b2> with non-orthogonal branches:
///   C = 2 |mu nu| sqrt(1 - |p1|^2) sqrt(1 - |p2|^2) / N^2.
inline double concurrence_general(const EcsBranchPair& pair) {
  const double scale = std::norm(pair.weight_plus) + std::norm(pair.weight_minus);
  const double n2 = pair_norm_squared(pair);
  if (!(scale > 0.0) || !(n2 > 1e-14 * scale)) {
    throw DegenerateStateError("concurrence_general: branch pair has (numerically) zero norm");
  }
  const double d1 = distinguishability(pair.beta1_plus, pair.beta1_minus);
  const double d2 = distinguishability(pair.beta2_plus, pair.beta2_minus);
  const double c = 2.0 * std::abs(pair.weight_plus * pair.weight_minus) * std::sqrt(d1 * d2) / n2;
  return std::clamp(c, 0.0, 1.0);
}

/// Which collapsed state: plus (qubit read as Q1) or minus (read as Q0).
enum class EcsSign { plus, minus };

constexpr double sign_value(EcsSign s) noexcept { return s == EcsSign::plus ? 1.0 : -1.0; }
constexpr QubitLabel outcome_for(EcsSign s) noexcept {
  return s == EcsSign::plus ? QubitLabel::Q1 : QubitLabel::Q0;
}

/// Concurrence of (|2k 2k> +- e^{i phi}|-2k -2k>)/N as a function of |k| and phi:
///   (1 - e^{-16|k|^2}) / (1 +- e^{-16|k|^2} cos phi).
inline double standard_form_concurrence(double kappa0_abs, double phi, EcsSign sign) {
  if (!(kappa0_abs >= 0.0)) throw Error("standard_form_concurrence: |kappa0| must be >= 0");
  const double a = 16.0 * kappa0_abs * kappa0_abs;
  const double num = -std::expm1(-a);
  if (num == 0.0) return 0.0;
  // 1 +- x cos(phi) = (1 - x) + 2x cos^2(phi/2) or (1 - x) + 2x sin^2(phi/2),
  // free of cancellation near the maximum.
  const double h = sign == EcsSign::plus ? std::cos(0.5 * phi) : std::sin(0.5 * phi);
  return num / (num + 2.0 * std::exp(-a) * h * h);
}

/// Same form for displaced initial amplitudes (symmetric modes, t = pi/omega):
/// the cosine argument becomes phi - 16 |k| Im a'.
inline double displaced_form_concurrence(double kappa0_abs, double phi, double im_alpha_prime, EcsSign sign) {
  return standard_form_concurrence(kappa0_abs, phi - 16.0 * kappa0_abs * im_alpha_prime, sign);
}

/// (|2k 2k> +- e^{i phi}|-2k -2k>)/N, exactly normalized.
inline EcsBranchPair standard_form_pair(Complex kappa0_value, double phi, EcsSign sign) {
  const Complex a = 2.0 * kappa0_value;
  return normalized({1.0, sign_value(sign) * std::polar(1.0, phi), a, a, -a, -a});
}

}  // namespace ecsgen
