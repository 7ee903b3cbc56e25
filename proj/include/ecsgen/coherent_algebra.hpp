#pragma once

// Exact algebra on coherent-state labels. Nothing here truncates a Fock
// space: states are finite lists of (weight, qubit, alpha1, alpha2) branches
// and inner products come from the closed-form coherent overlap.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ecsgen/errors.hpp"

namespace ecsgen {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Qubit basis label. Convention: sigma_z|Q0> = -|Q0>, sigma_z|Q1> = +|Q1>.
enum class QubitLabel { Q0 = 0, Q1 = 1 };

/// sigma_z eigenvalue of a basis label.
constexpr double sigma_z(QubitLabel q) noexcept { return q == QubitLabel::Q0 ? -1.0 : 1.0; }

inline std::string to_string(QubitLabel q) { return q == QubitLabel::Q0 ? "Q0" : "Q1"; }

/// arg() with arg(0) defined as 0.
inline double arg_or_zero(Complex z) noexcept {
  return (z.real() == 0.0 && z.imag() == 0.0) ? 0.0 : std::arg(z);
}

/// One LC mode: angular frequency and qubit coupling, both in rad/ns.
class ModeParams {
 public:
  ModeParams() = default;
  ModeParams(double omega, double coupling) : omega_(omega), coupling_(coupling) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
      throw Error("ModeParams: omega must be finite and > 0, got " + std::to_string(omega));
    }
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
      throw Error("ModeParams: coupling must be finite and >= 0, got " + std::to_string(coupling));
    }
  }

  double omega() const noexcept { return omega_; }
  double coupling() const noexcept { return coupling_; }
  /// lambda / omega, the natural displacement scale.
  double ratio() const noexcept { return coupling_ / omega_; }

  friend bool operator==(const ModeParams&, const ModeParams&) = default;

 private:
  double omega_ = 1.0;
  double coupling_ = 0.0;
};

/// <beta|alpha> for coherent states.
inline Complex coherent_overlap(Complex alpha, Complex beta) noexcept {
  return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(beta) * alpha);
}

/// 1 - e^{-i x}, written so that it stays accurate for small x.
inline Complex one_minus_expi(double x) noexcept {
  const double s = std::sin(0.5 * x);
  return {2.0 * s * s, std::sin(x)};
}

/// Conditional displacement reached from the vacuum after time t:
/// kappa(t) = (lambda/omega)(1 - e^{-i omega t}).
inline Complex kappa(const ModeParams& mode, double t) noexcept {
  return mode.ratio() * one_minus_expi(mode.omega() * t);
}

/// Free oscillator rotation alpha e^{-i omega t}.
inline Complex free_rotate(Complex alpha, double omega, double t) noexcept {
  return alpha * std::polar(1.0, -omega * t);
}

/// Branch-dependent part of the driven-oscillator path phase,
///   delta = (lambda / 2 omega)[(e^{i w t} - 1) conj(a') + (1 - e^{-i w t}) a'].
/// The bracket is z - conj(z) with z = (1 - e^{-i w t}) a', so delta is
/// i (lambda/omega) Im z and is returned exactly imaginary.
inline Complex delta_phase(const ModeParams& mode, Complex alpha_prime, double t) noexcept {
  const Complex z = one_minus_expi(mode.omega() * t) * alpha_prime;
  return {0.0, mode.ratio() * z.imag()};
}

/// theta = (eps/2) t + i(delta1 + delta2). Real because each delta is imaginary.
inline double theta_phase(double epsilon, double t, Complex delta1, Complex delta2) noexcept {
  return 0.5 * epsilon * t - (delta1.imag() + delta2.imag());
}

/// One term weight * |qubit> |alpha1> |alpha2>.
struct Branch {
  Complex weight;
  QubitLabel qubit = QubitLabel::Q0;
  Complex alpha1;
  Complex alpha2;
};

/// Amplitudes closer than this are treated as the same coherent label.
inline constexpr double kLabelMergeTol = 1e-12;

/// Finite superposition of qubit-labelled two-mode coherent states.
///
/// Adding a branch whose qubit and both amplitudes match an existing branch
/// (within kLabelMergeTol) adds the weights instead of appending; a merged
/// branch whose weight cancels exactly is dropped.
class CoherentSuperposition {
 public:
  static constexpr std::size_t kDefaultBranchCap = 64;

  explicit CoherentSuperposition(std::size_t branch_cap = kDefaultBranchCap) : cap_(branch_cap) {}

  CoherentSuperposition(std::initializer_list<Branch> branches, std::size_t branch_cap = kDefaultBranchCap)
      : cap_(branch_cap) {
    for (const auto& b : branches) add(b);
  }

  void add(const Branch& b) {
    for (auto it = branches_.begin(); it != branches_.end(); ++it) {
      if (it->qubit == b.qubit && std::abs(it->alpha1 - b.alpha1) < kLabelMergeTol &&
          std::abs(it->alpha2 - b.alpha2) < kLabelMergeTol) {
        it->weight += b.weight;
        if (std::abs(it->weight) < 1e-15) branches_.erase(it);
        return;
      }
    }
    if (branches_.size() >= cap_) {
      throw Error("CoherentSuperposition: branch cap " + std::to_string(cap_) + " exceeded");
    }
    branches_.push_back(b);
  }

  std::span<const Branch> branches() const noexcept { return branches_; }
  std::size_t size() const noexcept { return branches_.size(); }
  bool empty() const noexcept { return branches_.empty(); }
  std::size_t branch_cap() const noexcept { return cap_; }

  /// Branches carrying the given qubit label, in insertion order.
  CoherentSuperposition sector(QubitLabel q) const {
    CoherentSuperposition out(cap_);
    for (const auto& b : branches_) {
      if (b.qubit == q) out.branches_.push_back(b);
    }
    return out;
  }

  CoherentSuperposition scaled(Complex factor) const {
    CoherentSuperposition out = *this;
    for (auto& b : out.branches_) b.weight *= factor;
    return out;
  }

 private:
  std::size_t cap_;
  std::vector<Branch> branches_;
};

/// <a|b> between two superpositions, using exact coherent overlaps.
inline Complex inner_product(const CoherentSuperposition& a, const CoherentSuperposition& b) {
  Complex acc{};
  for (const auto& x : a.branches()) {
    for (const auto& y : b.branches()) {
      if (x.qubit != y.qubit) continue;
      acc += std::conj(x.weight) * y.weight * coherent_overlap(y.alpha1, x.alpha1) *
             coherent_overlap(y.alpha2, x.alpha2);
    }
  }
  return acc;
}

/// Exact norm from pairwise coherent overlaps. Throws DegenerateStateError
/// for an empty branch list or a vanishing norm.
inline double superposition_norm(const CoherentSuperposition& state) {
  if (state.empty()) throw DegenerateStateError("superposition_norm: empty branch list");
  const double n2 = inner_product(state, state).real();
  if (!(n2 > 0.0)) throw DegenerateStateError("superposition_norm: state has zero norm");
  return std::sqrt(n2);
}

inline bool is_normalized(const CoherentSuperposition& state, double tol = 1e-12) {
  return std::abs(superposition_norm(state) - 1.0) <= tol;
}

}  // namespace ecsgen
