#pragma once

// Hamiltonian assembly and unitary propagation in the truncated space.
//
//   H = sum_i w_i a_i^dag a_i - (eps/2) sz - (Delta/2) sx
//       + sum_i g_i (a_i^dag + a_i) sz,          g_i = lambda_i * lambda_scale
//
// Segments with Delta = 0 (sz conserved) or g = 0 (qubit decoupled) are
// propagated through exact per-mode eigendecompositions. Everything else
// goes through a scaled Taylor expansion of exp(-iHt) applied to the vector,
// summed to machine precision.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ecsgen/analytic_protocol.hpp"
#include "ecsgen/fock_space.hpp"

namespace ecsgen {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// One piecewise-constant stretch of the control schedule.
struct PulseSegment {
  double duration = 0.0;     ///< ns
  double delta = 0.0;        ///< flip amplitude, rad/ns
  double epsilon = 0.0;      ///< qubit splitting, rad/ns
  double lambda_scale = 1.0; ///< multiplies both couplings, in [0, 1]

  void validate() const {
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw Error("PulseSegment: duration must be >= 0");
    if (!(lambda_scale >= 0.0 && lambda_scale <= 1.0)) throw Error("PulseSegment: lambda_scale must be in [0, 1]");
    if (!std::isfinite(delta) || !std::isfinite(epsilon)) throw Error("PulseSegment: non-finite parameter");
  }
};

/// The assembled operator plus the coefficients it was built from.
struct Hamiltonian {
  TruncationConfig trunc;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double coupling1 = 0.0;  ///< effective, lambda_scale applied
  double coupling2 = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  SparseMatrix matrix;
};

namespace detail {

/// Real tridiagonal w n + s g (a + a^dag) on Fock(n).
inline Eigen::MatrixXd single_mode_hamiltonian(int n, double omega, double g) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = omega * k;
  for (int k = 1; k < n; ++k) {
    h(k - 1, k) = g * std::sqrt(static_cast<double>(k));
    h(k, k - 1) = h(k - 1, k);
  }
  return h;
}

/// exp(-i h t) for real symmetric h.
inline ComplexMatrix symmetric_exponential(const Eigen::MatrixXd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<Complex>() * Complex{0.0, -t}).array().exp().matrix();
  const ComplexMatrix v = es.eigenvectors().cast<Complex>();
  return v * phases.asDiagonal() * v.transpose();
}

inline void check_finite(const ComplexVector& v, const char* where) {
  if (!v.allFinite()) throw NonFiniteError(std::string(where) + ": non-finite amplitude");
}

}  // namespace detail

/// Builds H for device `p` during segment `seg`. Throws TruncationError if
/// the cutoffs cannot hold the reachable amplitude |alpha_i| + 2 g_i / w_i.
inline Hamiltonian build_hamiltonian(const DeviceParams& p, const PulseSegment& seg, const TruncationConfig& trunc) {
  trunc.validate();
  seg.validate();
  for (int i = 1; i <= 2; ++i) {
    check_tail_bound(amplitude_bound(p, i, seg.lambda_scale), i == 1 ? trunc.n1 : trunc.n2, trunc.tail_tol,
                     "build_hamiltonian mode " + std::to_string(i));
  }

  Hamiltonian h;
  h.trunc = trunc;
  h.omega1 = p.mode1.omega();
  h.omega2 = p.mode2.omega();
  h.coupling1 = p.mode1.coupling() * seg.lambda_scale;
  h.coupling2 = p.mode2.coupling() * seg.lambda_scale;
  h.epsilon = seg.epsilon;
  h.delta = seg.delta;

  const int n1 = trunc.n1;
  const int n2 = trunc.n2;
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(trunc.dim()) * 7);
  auto push_sym = [&entries](int r, int c, double v) {
    if (v == 0.0) return;
    entries.emplace_back(r, c, v);
    entries.emplace_back(c, r, v);
  };
  for (QubitLabel q : {QubitLabel::Q0, QubitLabel::Q1}) {
    const double s = sigma_z(q);
    for (int k1 = 0; k1 < n1; ++k1) {
      for (int k2 = 0; k2 < n2; ++k2) {
        const int row = FockState::index(trunc, q, k1, k2);
        entries.emplace_back(row, row, h.omega1 * k1 + h.omega2 * k2 - 0.5 * h.epsilon * s);
        if (k1 > 0) push_sym(FockState::index(trunc, q, k1 - 1, k2), row, s * h.coupling1 * std::sqrt(double(k1)));
        if (k2 > 0) push_sym(FockState::index(trunc, q, k1, k2 - 1), row, s * h.coupling2 * std::sqrt(double(k2)));
        if (q == QubitLabel::Q0) push_sym(row, FockState::index(trunc, QubitLabel::Q1, k1, k2), -0.5 * h.delta);
      }
    }
  }
  h.matrix.resize(trunc.dim(), trunc.dim());
  h.matrix.setFromTriplets(entries.begin(), entries.end());
  return h;
}

/// exp(-i H t) v by scaled Taylor series. The diagonal midpoint is shifted
/// out first; each substep has ||H - mu|| tau <= 1 and is summed until the
/// next term falls below double precision.
inline ComplexVector taylor_expm_action(const SparseMatrix& h, double t, const ComplexVector& v) {
  if (t == 0.0) return v;
  const Eigen::VectorXd diag = h.diagonal().real();
  const double mu = 0.5 * (diag.minCoeff() + diag.maxCoeff());

  double norm1 = 0.0;
  for (int c = 0; c < h.outerSize(); ++c) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(h, c); it; ++it) {
      col += std::abs(it.row() == it.col() ? it.value() - mu : it.value());
    }
    norm1 = std::max(norm1, col);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * t)));
  const double tau = t / steps;
  const Complex shift_phase = std::polar(1.0, -mu * tau);

  ComplexVector acc = v;
  ComplexVector term(v.size());
  for (int step = 0; step < steps; ++step) {
    term = acc;
    ComplexVector sum = acc;
    for (int k = 1; k < 200; ++k) {
      ComplexVector next = h * term - mu * term;
      term = next * Complex{0.0, -tau / k};
      sum += term;
      if (term.norm() <= 1e-17 * sum.norm()) break;
    }
    acc = sum * shift_phase;
  }
  return acc;
}

/// Applies exp(-i H t) on the full matrix, ignoring any structure.
inline FockState propagate_general(const FockState& state, const Hamiltonian& h, double t) {
  if (!(t >= 0.0)) throw Error("propagate: t must be >= 0");
  ComplexVector out = taylor_expm_action(h.matrix, t, state.amplitudes());
  detail::check_finite(out, "propagate");
  return FockState(state.trunc(), std::move(out));
}

/// exp(-i H t) |state>.
inline FockState propagate(const FockState& state, const Hamiltonian& h, double t) {
  if (!(t >= 0.0)) throw Error("propagate: t must be >= 0");
  if (!(state.trunc() == h.trunc)) throw DimensionMismatchError("propagate: state and Hamiltonian truncations differ");
  if (t == 0.0) return state;
  const int n1 = h.trunc.n1;
  const int n2 = h.trunc.n2;

  if (h.delta == 0.0) {
    // sz conserved: each qubit sector evolves under two independent driven oscillators.
    FockState out(state.trunc());
    for (QubitLabel q : {QubitLabel::Q0, QubitLabel::Q1}) {
      const double s = sigma_z(q);
      const ComplexMatrix u1 = detail::symmetric_exponential(detail::single_mode_hamiltonian(n1, h.omega1, s * h.coupling1), t);
      const ComplexMatrix u2 = detail::symmetric_exponential(detail::single_mode_hamiltonian(n2, h.omega2, s * h.coupling2), t);
      out.sector(q).noalias() = std::polar(1.0, 0.5 * h.epsilon * s * t) * (u1 * state.sector(q) * u2.transpose());
    }
    detail::check_finite(out.amplitudes(), "propagate");
    return out;
  }

  if (h.coupling1 == 0.0 && h.coupling2 == 0.0) {
    // Qubit decoupled: 2x2 rotation times free mode phases.
    const double e = 0.5 * std::hypot(h.epsilon, h.delta);
    const double c = std::cos(e * t);
    const double sn = std::sin(e * t) / e;
    // qubit block in (Q0, Q1) order: [[eps/2, -Delta/2], [-Delta/2, -eps/2]]
    const Complex u00{c, -sn * 0.5 * h.epsilon};
    const Complex u11{c, sn * 0.5 * h.epsilon};
    const Complex u01{0.0, sn * 0.5 * h.delta};
    Eigen::VectorXcd d1(n1);
    Eigen::VectorXcd d2(n2);
    for (int k = 0; k < n1; ++k) d1(k) = std::polar(1.0, -h.omega1 * k * t);
    for (int k = 0; k < n2; ++k) d2(k) = std::polar(1.0, -h.omega2 * k * t);

    FockState out(state.trunc());
    const RowMajorMatrix s0 = d1.asDiagonal() * state.sector(QubitLabel::Q0) * d2.asDiagonal();
    const RowMajorMatrix s1 = d1.asDiagonal() * state.sector(QubitLabel::Q1) * d2.asDiagonal();
    out.sector(QubitLabel::Q0) = u00 * s0 + u01 * s1;
    out.sector(QubitLabel::Q1) = u01 * s0 + u11 * s1;
    detail::check_finite(out.amplitudes(), "propagate");
    return out;
  }

  return propagate_general(state, h, t);
}

/// Sequential propagation through a piecewise-constant schedule.
inline FockState run_schedule(const FockState& initial, const DeviceParams& p, std::span<const PulseSegment> schedule) {
  if (schedule.empty()) throw Error("run_schedule: schedule is empty");
  FockState state = initial;
  for (const auto& seg : schedule) {
    if (seg.duration == 0.0) continue;
    state = propagate(state, build_hamiltonian(p, seg, initial.trunc()), seg.duration);
  }
  return state;
}

}  // namespace ecsgen
