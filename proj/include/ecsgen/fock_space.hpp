#pragma once

// Truncated qubit (x) Fock(n1) (x) Fock(n2) state vectors, coherent-state
// embedding, measurement and entanglement diagnostics.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ecsgen/analytic_protocol.hpp"
#include "ecsgen/coherent_algebra.hpp"
#include "ecsgen/errors.hpp"

namespace ecsgen {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// P(N >= n) for N ~ Poisson(mean).
inline double poisson_tail(double mean, int n) {
  if (n <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  const double log_mean = std::log(mean);
  double tail = 0.0;
  for (int k = n;; ++k) {
    const double term = std::exp(k * log_mean - mean - std::lgamma(k + 1.0));
    tail += term;
    if (k > mean && term <= 1e-18 * tail) break;
    if (term == 0.0 && k > mean) break;
  }
  return tail;
}

/// Extra Fock levels kept above the smallest tail-satisfying cutoff.
inline constexpr int kCutoffMargin = 4;

/// Smallest n >= 2 such that the Poisson tail of |amplitude|^2 beyond n-1
/// is below tail_tol.
inline int minimal_cutoff(double amplitude, double tail_tol) {
  const double mean = amplitude * amplitude;
  int n = 2;
  while (poisson_tail(mean, n) >= tail_tol) ++n;
  return n;
}

/// Per-mode cutoffs (levels 0..n-1) plus the tail tolerance they satisfy.
struct TruncationConfig {
  int n1 = 2;
  int n2 = 2;
  double tail_tol = 1e-10;

  int dim_modes() const noexcept { return n1 * n2; }
  int dim() const noexcept { return 2 * n1 * n2; }

  void validate() const {
    if (n1 < 2 || n2 < 2) throw Error("TruncationConfig: cutoffs must be >= 2");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw Error("TruncationConfig: tail_tol must be in (0, 1)");
  }

  friend bool operator==(const TruncationConfig&, const TruncationConfig&) = default;
};

/// Cutoff large enough for a coherent amplitude bound, with margin.
inline int cutoff_for_amplitude(double amplitude, double tail_tol) {
  return minimal_cutoff(amplitude, tail_tol) + kCutoffMargin;
}

/// Largest coherent amplitude mode i can reach: |alpha_i| + 2 lambda_i / omega_i.
inline double amplitude_bound(const DeviceParams& p, int mode, double lambda_scale = 1.0) {
  return std::abs(p.alpha(mode)) + 2.0 * lambda_scale * p.mode(mode).ratio();
}

/// Automatic cutoffs for a device; `extra_amplitude` widens the bound for
/// non-ideal dynamics.
inline TruncationConfig auto_truncation(const DeviceParams& p, double tail_tol = 1e-10,
                                        double extra_amplitude = 0.0) {
  TruncationConfig t;
  t.tail_tol = tail_tol;
  t.n1 = cutoff_for_amplitude(amplitude_bound(p, 1) + extra_amplitude, tail_tol);
  t.n2 = cutoff_for_amplitude(amplitude_bound(p, 2) + extra_amplitude, tail_tol);
  return t;
}

/// Throws TruncationError if Fock(n) cannot hold amplitude within tail_tol.
inline void check_tail_bound(double amplitude, int n, double tail_tol, const std::string& what) {
  const double tail = poisson_tail(amplitude * amplitude, n);
  if (tail >= tail_tol) {
    std::ostringstream os;
    os << what << ": tail bound violated, amplitude " << amplitude << " has Poisson tail " << tail
       << " beyond cutoff " << n << " (tail_tol " << tail_tol << ", need n >= "
       << minimal_cutoff(amplitude, tail_tol) << ")";
    throw TruncationError(os.str());
  }
}

/// |alpha> in Fock(n): e^{-|a|^2/2} a^k / sqrt(k!), renormalized.
inline ComplexVector coherent_vector(Complex alpha, int n, double tail_tol = 1e-10) {
  if (n < 1) throw Error("coherent_vector: cutoff must be >= 1");
  check_tail_bound(std::abs(alpha), n, tail_tol, "coherent_vector");
  ComplexVector v(n);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < n; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  v /= v.norm();
  return v;
}

/// Two-mode state Psi(k1, k2), stored as an n1 x n2 row-major matrix.
class TwoModeState {
 public:
  TwoModeState(int n1, int n2) : psi_(RowMajorMatrix::Zero(n1, n2)) {}
  explicit TwoModeState(RowMajorMatrix psi) : psi_(std::move(psi)) {}

  int n1() const noexcept { return static_cast<int>(psi_.rows()); }
  int n2() const noexcept { return static_cast<int>(psi_.cols()); }
  const RowMajorMatrix& matrix() const noexcept { return psi_; }
  RowMajorMatrix& matrix() noexcept { return psi_; }
  double norm() const { return psi_.norm(); }

 private:
  RowMajorMatrix psi_;
};

/// Amplitudes over qubit (x) mode1 (x) mode2; qubit index slowest, mode 2 fastest.
class FockState {
 public:
  using SectorMap = Eigen::Map<RowMajorMatrix>;
  using ConstSectorMap = Eigen::Map<const RowMajorMatrix>;

  explicit FockState(TruncationConfig trunc) : trunc_(trunc) {
    trunc_.validate();
    amps_ = ComplexVector::Zero(trunc_.dim());
  }

  FockState(TruncationConfig trunc, ComplexVector amps) : trunc_(trunc), amps_(std::move(amps)) {
    trunc_.validate();
    if (amps_.size() != trunc_.dim()) {
      throw DimensionMismatchError("FockState: amplitude vector has wrong length");
    }
  }

  /// |q> |alpha1> |alpha2>.
  static FockState product(TruncationConfig trunc, QubitLabel q, Complex alpha1, Complex alpha2) {
    FockState s(trunc);
    s.sector(q) = coherent_vector(alpha1, trunc.n1, trunc.tail_tol) *
                  coherent_vector(alpha2, trunc.n2, trunc.tail_tol).transpose();
    return s;
  }

  static int index(const TruncationConfig& t, QubitLabel q, int k1, int k2) noexcept {
    return static_cast<int>(q) * t.n1 * t.n2 + k1 * t.n2 + k2;
  }

  const TruncationConfig& trunc() const noexcept { return trunc_; }
  const ComplexVector& amplitudes() const noexcept { return amps_; }
  ComplexVector& amplitudes() noexcept { return amps_; }
  double norm() const { return amps_.norm(); }

  SectorMap sector(QubitLabel q) {
    return SectorMap(amps_.data() + static_cast<int>(q) * trunc_.dim_modes(), trunc_.n1, trunc_.n2);
  }
  ConstSectorMap sector(QubitLabel q) const {
    return ConstSectorMap(amps_.data() + static_cast<int>(q) * trunc_.dim_modes(), trunc_.n1, trunc_.n2);
  }

  /// Population in the top two Fock levels of either mode.
  double top_level_leakage() const {
    double leak = 0.0;
    for (QubitLabel q : {QubitLabel::Q0, QubitLabel::Q1}) {
      const auto s = sector(q);
      leak += s.bottomRows(2).squaredNorm() + s.rightCols(2).squaredNorm() -
              s.bottomRightCorner(2, 2).squaredNorm();
    }
    return leak;
  }

 private:
  TruncationConfig trunc_;
  ComplexVector amps_;
};

/// |<b|a>|^2 / (<a|a><b|b>); insensitive to global phase and normalization.
inline double fidelity_mod_phase(const FockState& a, const FockState& b) {
  if (a.trunc().n1 != b.trunc().n1 || a.trunc().n2 != b.trunc().n2) {
    throw DimensionMismatchError("fidelity_mod_phase: states live in different truncations");
  }
  return std::norm(b.amplitudes().dot(a.amplitudes())) /
         (a.amplitudes().squaredNorm() * b.amplitudes().squaredNorm());
}

inline double fidelity_mod_phase(const TwoModeState& a, const TwoModeState& b) {
  if (a.n1() != b.n1() || a.n2() != b.n2()) {
    throw DimensionMismatchError("fidelity_mod_phase: states live in different truncations");
  }
  return std::norm((b.matrix().conjugate().cwiseProduct(a.matrix())).sum()) /
         (a.matrix().squaredNorm() * b.matrix().squaredNorm());
}

/// Linear combination of embedded coherent vectors. The result carries the
/// superposition's own norm (no renormalization).
inline FockState embed(const CoherentSuperposition& state, const TruncationConfig& trunc) {
  FockState out(trunc);
  for (const auto& b : state.branches()) {
    const ComplexVector v1 = coherent_vector(b.alpha1, trunc.n1, trunc.tail_tol);
    const ComplexVector v2 = coherent_vector(b.alpha2, trunc.n2, trunc.tail_tol);
    out.sector(b.qubit) += b.weight * (v1 * v2.transpose());
  }
  return out;
}

inline TwoModeState embed(const EcsBranchPair& pair, const TruncationConfig& trunc) {
  const FockState full = embed(pair.as_superposition(QubitLabel::Q0), trunc);
  return TwoModeState(RowMajorMatrix(full.sector(QubitLabel::Q0)));
}

struct MeasurementResult {
  double probability = 0.0;
  TwoModeState modes{2, 2};
};

inline std::array<double, 2> outcome_probabilities(const FockState& state) {
  const double p0 = state.sector(QubitLabel::Q0).squaredNorm();
  const double p1 = state.sector(QubitLabel::Q1).squaredNorm();
  const double total = p0 + p1;
  return {p0 / total, p1 / total};
}

/// Projective sigma_z readout. Throws ImpossibleOutcomeError when the
/// requested outcome has probability below 1e-15.
inline MeasurementResult measure_qubit(const FockState& state, QubitLabel outcome) {
  const double total = state.amplitudes().squaredNorm();
  const double sector2 = state.sector(outcome).squaredNorm();
  const double p = sector2 / total;
  if (!(p >= 1e-15)) {
    throw ImpossibleOutcomeError("measure_qubit: outcome " + to_string(outcome) + " has probability " +
                                 std::to_string(p));
  }
  RowMajorMatrix psi = state.sector(outcome);
  psi /= std::sqrt(sector2);
  return {p, TwoModeState(std::move(psi))};
}

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Born-rule readout: Q0 iff u < P(Q0), u from unit_uniform on mt19937_64(seed).
inline QubitLabel sample_measurement(const FockState& state, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return unit_uniform(rng) < outcome_probabilities(state)[0] ? QubitLabel::Q0 : QubitLabel::Q1;
}

/// `count` readouts from a single mt19937_64(seed) stream.
inline std::vector<QubitLabel> sample_measurements(const FockState& state, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  const double p0 = outcome_probabilities(state)[0];
  std::vector<QubitLabel> out(count);
  for (auto& o : out) o = unit_uniform(rng) < p0 ? QubitLabel::Q0 : QubitLabel::Q1;
  return out;
}

enum class ModeIndex { mode1, mode2 };

/// Reduced density matrix of one mode (the other is traced out).
inline ComplexMatrix reduced_density(const TwoModeState& state, ModeIndex keep) {
  const RowMajorMatrix& psi = state.matrix();
  const double n2 = psi.squaredNorm();
  if (keep == ModeIndex::mode1) return (psi * psi.adjoint()) / n2;
  return (psi.transpose() * psi.conjugate()) / n2;
}

inline double purity(const ComplexMatrix& rho) { return rho.squaredNorm(); }

/// Pure-state I-concurrence sqrt(2 (1 - Tr rho_1^2)).
inline double i_concurrence(const TwoModeState& state) {
  const double p = purity(reduced_density(state, ModeIndex::mode1));
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - p)));
}

}  // namespace ecsgen
