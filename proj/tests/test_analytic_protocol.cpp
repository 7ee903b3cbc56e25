#include <gtest/gtest.h>

#include "ecsgen/analytic_protocol.hpp"
#include "ecsgen/fock_space.hpp"
#include "ecsgen/propagator.hpp"
#include "test_support.hpp"

using namespace ecsgen;
using ecsgen::testing::Gen;
using ecsgen::testing::pi;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

void expect_close(Complex a, Complex b, double tol, const char* what = "") {
  EXPECT_LE(std::abs(a - b), tol) << what << ": " << a << " vs " << b;
}

DeviceParams symmetric(double ratio, double epsilon, Complex alpha = {}) {
  DeviceParams p;
  p.mode1 = p.mode2 = ModeParams(40.0, ratio * 40.0);
  p.epsilon = epsilon;
  p.alpha1 = p.alpha2 = alpha;
  return p;
}

DeviceParams random_params(Gen& g, double max_alpha) {
  DeviceParams p;
  const double w1 = g.uniform(20.0, 60.0);
  const double w2 = g.uniform(20.0, 60.0);
  p.mode1 = ModeParams(w1, g.uniform(0.05, 1.0) * w1);
  p.mode2 = ModeParams(w2, g.uniform(0.05, 1.0) * w2);
  p.epsilon = g.uniform(0.0, 60.0);
  p.delta_pulse = g.uniform(20.0, 100.0);
  p.alpha1 = g.disk(max_alpha);
  p.alpha2 = g.disk(max_alpha);
  return p;
}

/// Idealized numeric run: pulse, idle for t, and optionally the second pulse.
FockState numeric_run(const DeviceParams& p, double t, bool second_pulse, const TruncationConfig& tc) {
  const double tp = pulse_duration(p);
  std::vector<PulseSegment> sched{{tp, p.delta_pulse, 0.0, 0.0}, {t, 0.0, p.epsilon, 1.0}};
  if (second_pulse) sched.push_back({tp, p.delta_pulse, 0.0, 0.0});
  return run_schedule(FockState::product(tc, QubitLabel::Q0, p.alpha1, p.alpha2), p, sched);
}

/// <q, b1, b2 | psi>.
Complex branch_amplitude(const FockState& psi, QubitLabel q, Complex b1, Complex b2) {
  const FockState ref = embed(CoherentSuperposition{{1.0, q, b1, b2}}, psi.trunc());
  return ref.amplitudes().dot(psi.amplitudes());
}

/// The expected post-readout pair for outcome q, before normalization.
EcsBranchPair expected_pair(const DeviceParams& p, double t, QubitLabel q) {
  const double tp = pulse_duration(p);
  const Complex a1 = free_rotate(p.alpha1, p.mode1.omega(), tp);
  const Complex a2 = free_rotate(p.alpha2, p.mode2.omega(), tp);
  const double theta =
      theta_phase(p.epsilon, t, delta_phase(p.mode1, a1, t), delta_phase(p.mode2, a2, t));
  const Complex k1 = kappa(p.mode1, t);
  const Complex k2 = kappa(p.mode2, t);
  auto rot1 = [&](Complex z) { return free_rotate(z, p.mode1.omega(), tp); };
  auto rot2 = [&](Complex z) { return free_rotate(z, p.mode2.omega(), tp); };
  const Complex b1p = rot1(free_rotate(a1, p.mode1.omega(), t) + k1);
  const Complex b2p = rot2(free_rotate(a2, p.mode2.omega(), t) + k2);
  const Complex b1m = rot1(free_rotate(a1, p.mode1.omega(), t) - k1);
  const Complex b2m = rot2(free_rotate(a2, p.mode2.omega(), t) - k2);
  const Complex e_minus = std::polar(0.5, -theta);
  const Complex e_plus = std::polar(0.5, theta);
  if (q == QubitLabel::Q1) return {kI * e_minus, kI * e_plus, b1p, b2p, b1m, b2m};
  return {e_minus, -e_plus, b1p, b2p, b1m, b2m};
}

/// Owning copy; branches() of a temporary would dangle.
std::vector<Branch> branches_of(const CoherentSuperposition& s) {
  return {s.branches().begin(), s.branches().end()};
}

}  // namespace

TEST(FirstPulse, VacuumGivesEqualSuperposition) {
  const CoherentSuperposition s = state_after_first_pulse(DeviceParams{});
  ASSERT_EQ(s.size(), 2u);
  const auto b = s.branches();
  EXPECT_EQ(b[0].qubit, QubitLabel::Q0);
  EXPECT_EQ(b[1].qubit, QubitLabel::Q1);
  expect_close(b[0].weight, kH, 1e-15);
  expect_close(b[1].weight, kI * kH, 1e-15);
  for (const auto& x : b) {
    EXPECT_EQ(x.alpha1, Complex(0.0));
    EXPECT_EQ(x.alpha2, Complex(0.0));
  }
  EXPECT_TRUE(is_normalized(s));
}

TEST(FirstPulse, RotatesModeAmplitudes) {
  DeviceParams p;
  p.alpha1 = 1.0;
  const auto b = branches_of(state_after_first_pulse(p));
  expect_close(b[0].alpha1, -kI, 1e-15, "alpha1'");
  expect_close(b[1].alpha1, -kI, 1e-15, "alpha1'");
}

TEST(FirstPulse, FastPulseLeavesAmplitudes) {
  DeviceParams p;
  p.alpha1 = {0.4, -1.1};
  p.alpha2 = {2.0, 0.3};
  p.delta_pulse = 1e12;
  const auto b = branches_of(state_after_first_pulse(p));
  expect_close(b[0].alpha1, p.alpha1, 1e-9);
  expect_close(b[0].alpha2, p.alpha2, 1e-9);
}

TEST(FirstPulse, MatchesNumericPulse) {
  Gen g(21);
  for (int i = 0; i < 5; ++i) {
    const DeviceParams p = random_params(g, 1.5);
    const TruncationConfig tc = auto_truncation(p);
    const FockState num = run_schedule(FockState::product(tc, QubitLabel::Q0, p.alpha1, p.alpha2), p,
                                       std::vector<PulseSegment>{{pulse_duration(p), p.delta_pulse, 0.0, 0.0}});
    EXPECT_GT(fidelity_mod_phase(num, embed(state_after_first_pulse(p), tc)), 1.0 - 1e-10);
  }
}

TEST(Tripartite, ZeroTimeIsFirstPulse) {
  const DeviceParams p = symmetric(1.0, 40.0);
  const auto a = branches_of(tripartite_state(p, 0.0));
  const auto b = branches_of(state_after_first_pulse(p));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    expect_close(a[i].weight, b[i].weight, 1e-15);
    expect_close(a[i].alpha1, b[i].alpha1, 1e-15);
  }
}

TEST(Tripartite, HalfPeriodBranchesForVacuum) {
  const double ratio = 0.7, eps = 33.0;
  const DeviceParams p = symmetric(ratio, eps);
  const auto b = branches_of(tripartite_state(p, pi / 40.0));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].qubit, QubitLabel::Q0);
  expect_close(b[0].weight, kH * std::polar(1.0, -pi * eps / 80.0), 1e-15);
  expect_close(b[1].weight, kI * kH * std::polar(1.0, pi * eps / 80.0), 1e-15);
  expect_close(b[0].alpha1, 2.0 * ratio, 1e-14);
  expect_close(b[0].alpha2, 2.0 * ratio, 1e-14);
  expect_close(b[1].alpha1, -2.0 * ratio, 1e-14);
  expect_close(b[1].alpha2, -2.0 * ratio, 1e-14);
}

TEST(Tripartite, ThetaMatchesNumericRelativePhase) {
  // Global phases cancel in the ratio of the two branch amplitudes, which
  // must be i e^{2 i theta}.
  DeviceParams p = symmetric(1.0, 40.0, kI);
  const double t = pi / 40.0;
  const TruncationConfig tc = auto_truncation(p);
  const FockState num = numeric_run(p, t, false, tc);
  const auto b = branches_of(tripartite_state(p, t));
  const Complex a0 = branch_amplitude(num, QubitLabel::Q0, b[0].alpha1, b[0].alpha2);
  const Complex a1 = branch_amplitude(num, QubitLabel::Q1, b[1].alpha1, b[1].alpha2);
  EXPECT_NEAR(std::abs(a0), kH, 1e-9);
  EXPECT_NEAR(std::abs(a1), kH, 1e-9);
  expect_close(a1 / a0, b[1].weight / b[0].weight, 1e-9, "relative phase");
  // theta itself: e^{-i theta} on Q0, i e^{i theta} on Q1.
  const double theta = -std::arg(b[0].weight);
  expect_close(b[1].weight / b[0].weight, kI * std::polar(1.0, 2.0 * theta), 1e-14);
}

TEST(Tripartite, PropertyMatchesNumericEngine) {
  Gen g(22);
  for (int i = 0; i < 6; ++i) {
    const DeviceParams p = random_params(g, 1.5);
    const double t = g.uniform(0.0, 0.2);
    const TruncationConfig tc = auto_truncation(p);
    EXPECT_GT(fidelity_mod_phase(numeric_run(p, t, false, tc), embed(tripartite_state(p, t), tc)), 1.0 - 1e-10);
  }
}

TEST(SecondPulse, VacuumGroupsIntoCatStates) {
  const DeviceParams p = symmetric(0.8, 27.0);
  const double t = 0.031;
  const CoherentSuperposition s = state_after_second_pulse(p, t);
  ASSERT_EQ(s.size(), 4u);
  const Complex kp = free_rotate(kappa(p.mode1, t), 40.0, pulse_duration(p));
  const Complex e = std::polar(1.0, 0.5 * p.epsilon * t);
  const auto q0 = branches_of(s.sector(QubitLabel::Q0));
  const auto q1 = branches_of(s.sector(QubitLabel::Q1));
  expect_close(q0[0].weight, 0.5 / e, 1e-15);
  expect_close(q0[1].weight, -0.5 * e, 1e-15);
  expect_close(q1[0].weight, 0.5 * kI / e, 1e-15);
  expect_close(q1[1].weight, 0.5 * kI * e, 1e-15);
  expect_close(q0[0].alpha1, kp, 1e-14);
  expect_close(q0[1].alpha2, -kp, 1e-14);
  expect_close(q1[0].alpha2, kp, 1e-14);
  expect_close(q1[1].alpha1, -kp, 1e-14);
}

TEST(SecondPulse, BackToBackPulsesFlipTheQubit) {
  DeviceParams p;
  p.alpha1 = {0.5, 0.2};
  const CoherentSuperposition s = state_after_second_pulse(p, 0.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.branches()[0].qubit, QubitLabel::Q1);
  EXPECT_NEAR(std::abs(s.branches()[0].weight), 1.0, 1e-15);
  expect_close(s.branches()[0].alpha1, free_rotate(p.alpha1, 40.0, 2.0 * pulse_duration(p)), 1e-15);
}

TEST(SecondPulse, HalfPeriodZeroSplittingIsOddCat) {
  const DeviceParams p = symmetric(0.5, 0.0);
  const double t = pi / 40.0;
  const auto q0 = branches_of(state_after_second_pulse(p, t).sector(QubitLabel::Q0));
  ASSERT_EQ(q0.size(), 2u);
  expect_close(q0[0].weight, -q0[1].weight, 1e-15);
  const TruncationConfig tc = auto_truncation(p);
  EXPECT_GT(fidelity_mod_phase(numeric_run(p, t, true, tc), embed(state_after_second_pulse(p, t), tc)),
            1.0 - 1e-10);
}

TEST(SecondPulse, PropertyMatchesNumericEngine) {
  Gen g(23);
  for (int i = 0; i < 6; ++i) {
    const DeviceParams p = random_params(g, 1.5);
    const double t = g.uniform(0.0, 0.2);
    const TruncationConfig tc = auto_truncation(p);
    EXPECT_GT(fidelity_mod_phase(numeric_run(p, t, true, tc), embed(state_after_second_pulse(p, t), tc)),
              1.0 - 1e-10);
  }
}

TEST(Collapse, CatStateProbabilityAndRelativePhase) {
  const DeviceParams p = symmetric(1.0, 40.0);
  const double t = pi / 40.0;
  const CollapseResult r = collapse(state_after_second_pulse(p, t), QubitLabel::Q1);
  // 1/2 (1 + e^{-16} cos(eps t)) with eps t = pi
  EXPECT_NEAR(r.probability, 0.5 * (1.0 - std::exp(-16.0)), 1e-14);
  EXPECT_NEAR(std::abs(r.probability - 0.5), 0.5 * std::exp(-16.0), 1e-14);
  expect_close(r.pair.weight_minus / r.pair.weight_plus, std::polar(1.0, p.epsilon * t), 1e-14);
  EXPECT_NEAR(pair_norm_squared(r.pair), 1.0, 1e-14);
}

TEST(Collapse, PropertyProbabilitiesForVacuum) {
  Gen g(24);
  for (int i = 0; i < 200; ++i) {
    DeviceParams p = random_params(g, 0.0);
    p.alpha1 = p.alpha2 = 0.0;
    const double t = g.uniform(0.0, 0.3);
    const CoherentSuperposition s = state_after_second_pulse(p, t);
    const double p1 = collapse(s, QubitLabel::Q1).probability;
    const double p0 = collapse(s, QubitLabel::Q0).probability;
    const double x = std::exp(-2.0 * (std::norm(kappa(p.mode1, t)) + std::norm(kappa(p.mode2, t))));
    EXPECT_NEAR(p1, 0.5 * (1.0 + x * std::cos(p.epsilon * t)), 1e-12);
    EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
    EXPECT_LE(std::abs(p1 - 0.5), 0.5 * x + 1e-15);
  }
}

TEST(Collapse, ProductStateUsesWeightsOnly) {
  CoherentSuperposition s;
  s.add({std::sqrt(0.3), QubitLabel::Q0, 0.5, 0.5});
  s.add({kI * std::sqrt(0.7), QubitLabel::Q1, 0.5, 0.5});
  const CollapseResult r0 = collapse(s, QubitLabel::Q0);
  const CollapseResult r1 = collapse(s, QubitLabel::Q1);
  EXPECT_NEAR(r0.probability, 0.3, 1e-15);
  EXPECT_NEAR(r1.probability, 0.7, 1e-15);
  EXPECT_EQ(r1.pair.weight_minus, Complex(0.0));
  EXPECT_NEAR(std::abs(r1.pair.weight_plus), 1.0, 1e-15);
}

TEST(Collapse, EmptySectorIsAnError) {
  EXPECT_THROW(collapse(initial_state(DeviceParams{}), QubitLabel::Q1), ImpossibleOutcomeError);
}

TEST(Collapse, DisplacedLowerOutcomeMatchesNumericProjection) {
  DeviceParams p = symmetric(1.0, 25.0, {1.0, 1.0});
  p.mode2 = ModeParams(35.0, 20.0);
  const double t = 0.05;
  const TruncationConfig tc = auto_truncation(p);
  const FockState num = numeric_run(p, t, true, tc);
  const CollapseResult r = collapse(state_after_second_pulse(p, t), QubitLabel::Q0);
  const MeasurementResult m = measure_qubit(num, QubitLabel::Q0);
  EXPECT_NEAR(r.probability, m.probability, 1e-10);
  EXPECT_GT(fidelity_mod_phase(m.modes, embed(r.pair, tc)), 1.0 - 1e-10);
  const EcsBranchPair e = expected_pair(p, t, QubitLabel::Q0);
  expect_close(r.pair.beta1_plus, e.beta1_plus, 1e-13);
  expect_close(r.pair.beta2_minus, e.beta2_minus, 1e-13);
}

TEST(Collapse, PropertyConsistencyChain) {
  Gen g(25);
  for (int i = 0; i < 300; ++i) {
    const DeviceParams p = random_params(g, 2.0);
    const double t = g.uniform(0.0, 0.3);
    const CoherentSuperposition s = state_after_second_pulse(p, t);
    double total = 0.0;
    for (QubitLabel q : {QubitLabel::Q0, QubitLabel::Q1}) {
      const CollapseResult r = collapse(s, q);
      const EcsBranchPair raw = expected_pair(p, t, q);
      const EcsBranchPair e = normalized(raw);
      EXPECT_NEAR(r.probability, pair_norm_squared(raw), 1e-12);
      expect_close(r.pair.weight_plus, e.weight_plus, 1e-12, "mu");
      expect_close(r.pair.weight_minus, e.weight_minus, 1e-12, "nu");
      expect_close(r.pair.beta1_plus, e.beta1_plus, 1e-12);
      expect_close(r.pair.beta2_plus, e.beta2_plus, 1e-12);
      expect_close(r.pair.beta1_minus, e.beta1_minus, 1e-12);
      expect_close(r.pair.beta2_minus, e.beta2_minus, 1e-12);
      total += r.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Collapse, HalfPeriodVacuumIsStandardForm) {
  Gen g(26);
  for (int i = 0; i < 100; ++i) {
    const DeviceParams p = symmetric(g.uniform(0.1, 1.0), g.uniform(0.0, 80.0));
    const double t = pi / 40.0;
    const double phi = p.epsilon * t;
    for (EcsSign sign : {EcsSign::plus, EcsSign::minus}) {
      const CollapseResult r = collapse(state_after_second_pulse(p, t), outcome_for(sign));
      const EcsBranchPair e = standard_form_pair(kappa0(p), phi, sign);
      // Same state up to a global phase.
      const Complex g_phase = r.pair.weight_plus / e.weight_plus;
      EXPECT_NEAR(std::abs(g_phase), 1.0, 1e-12);
      expect_close(r.pair.weight_minus, g_phase * e.weight_minus, 1e-12);
      expect_close(r.pair.beta1_plus, e.beta1_plus, 1e-13);
      expect_close(r.pair.beta2_minus, e.beta2_minus, 1e-13);
    }
  }
}

TEST(ConcurrenceGeneral, IdenticalBranchesAreUnentangled) {
  const EcsBranchPair pair{0.6, 0.8, {1.0, 0.5}, {-0.3, 0.0}, {1.0, 0.5}, {-0.3, 0.0}};
  EXPECT_EQ(concurrence_general(pair), 0.0);
}

TEST(ConcurrenceGeneral, FarApartBranchesApproachOne) {
  const EcsBranchPair pair = normalized({1.0, 1.0, 5.0, 5.0, -5.0, -5.0});
  EXPECT_NEAR(concurrence_general(pair), 1.0, 1e-15);
}

TEST(ConcurrenceGeneral, DegeneratePairIsAnError) {
  const EcsBranchPair pair{1.0, -1.0, 0.3, 0.3, 0.3, 0.3};
  EXPECT_THROW(concurrence_general(pair), DegenerateStateError);
  EXPECT_THROW(concurrence_general(EcsBranchPair{}), DegenerateStateError);
}

TEST(ConcurrenceGeneral, PropertyInvariances) {
  Gen g(27);
  for (int i = 0; i < 1000; ++i) {
    const EcsBranchPair pair{g.disk(1.0), g.disk(1.0), g.disk(2.0), g.disk(2.0), g.disk(2.0), g.disk(2.0)};
    if (pair_norm_squared(pair) < 1e-6) continue;
    const double c = concurrence_general(pair);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    const Complex ph = g.unit_phase();
    EcsBranchPair rotated = pair;
    rotated.weight_plus *= ph;
    rotated.weight_minus *= ph;
    EXPECT_NEAR(concurrence_general(rotated), c, 1e-12);
    const EcsBranchPair swapped{pair.weight_minus, pair.weight_plus, pair.beta1_minus,
                                pair.beta2_minus,  pair.beta1_plus,  pair.beta2_plus};
    EXPECT_NEAR(concurrence_general(swapped), c, 1e-12);
    EcsBranchPair scaled = pair;
    scaled.weight_plus *= 3.0;
    scaled.weight_minus *= 3.0;
    EXPECT_NEAR(concurrence_general(scaled), c, 1e-12);
  }
}

TEST(StandardForm, HalfRatioIsNearlyMaximal) {
  const double x = std::exp(-4.0);
  for (int j = 0; j < 16; ++j) {
    const double phi = j * pi / 8.0;
    for (EcsSign sign : {EcsSign::plus, EcsSign::minus}) {
      const double c = standard_form_concurrence(0.5, phi, sign);
      EXPECT_LE(1.0 - c, 2.0 * x / (1.0 + x) + 1e-15);
      if (sign_value(sign) * std::cos(phi) <= 1e-12) {
        EXPECT_LE(1.0 - c, x + 1e-15);
      }
    }
  }
  EXPECT_NEAR(standard_form_concurrence(0.5, 0.0, EcsSign::plus), (1.0 - x) / (1.0 + x), 1e-15);
}

TEST(StandardForm, NoDisplacementNoEntanglement) {
  EXPECT_EQ(standard_form_concurrence(0.0, 0.3, EcsSign::plus), 0.0);
  EXPECT_EQ(standard_form_concurrence(0.0, 0.0, EcsSign::minus), 0.0);
}

TEST(StandardForm, MinusAtZeroPhaseIsExactlyOne) {
  for (double k : {1e-3, 0.1, 0.5, 1.0, 3.0}) EXPECT_EQ(standard_form_concurrence(k, 0.0, EcsSign::minus), 1.0);
}

TEST(StandardForm, RejectsNegativeMagnitude) {
  EXPECT_THROW(standard_form_concurrence(-0.1, 0.0, EcsSign::plus), Error);
}

TEST(StandardForm, PropertyAgreesWithGeneralFormula) {
  Gen g(28);
  for (int i = 0; i < 2000; ++i) {
    const Complex k0 = std::polar(g.uniform(0.02, 1.5), g.uniform(0.0, 2.0 * pi));
    const double phi = g.uniform(-2.0 * pi, 2.0 * pi);
    for (EcsSign sign : {EcsSign::plus, EcsSign::minus}) {
      if (std::abs(1.0 + sign_value(sign) * std::exp(-16.0 * std::norm(k0)) * std::cos(phi)) < 1e-6) continue;
      EXPECT_NEAR(standard_form_concurrence(std::abs(k0), phi, sign),
                  concurrence_general(standard_form_pair(k0, phi, sign)), 1e-12);
    }
  }
}

TEST(DisplacedForm, PropertyAgreesWithCollapsedState) {
  Gen g(29);
  for (int i = 0; i < 500; ++i) {
    const DeviceParams p = symmetric(g.uniform(0.1, 1.0), g.uniform(0.0, 80.0), g.disk(3.0));
    const double t = pi / 40.0;
    const Complex a_prime = free_rotate(p.alpha1, 40.0, pulse_duration(p));
    for (EcsSign sign : {EcsSign::plus, EcsSign::minus}) {
      const CollapseResult r = collapse(state_after_second_pulse(p, t), outcome_for(sign));
      EXPECT_NEAR(displaced_form_concurrence(std::abs(kappa0(p)), p.epsilon * t, a_prime.imag(), sign),
                  concurrence_general(r.pair), 1e-12);
    }
  }
}

TEST(DisplacedForm, StrongCouplingIsMaximalForAnyAmplitude) {
  Gen g(30);
  const double k = 1.0;
  ASSERT_LE(std::exp(-16.0 * k * k), 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double c = displaced_form_concurrence(k, g.uniform(0.0, 2.0 * pi), g.uniform(-5.0, 5.0),
                                                g.integer(0, 1) ? EcsSign::plus : EcsSign::minus);
    EXPECT_GE(c, 1.0 - 2e-6);
  }
}

TEST(DisplacedForm, ZeroImaginaryPartIsStandardForm) {
  EXPECT_EQ(displaced_form_concurrence(0.4, 1.1, 0.0, EcsSign::plus),
            standard_form_concurrence(0.4, 1.1, EcsSign::plus));
}

TEST(DeviceParams, Validation) {
  DeviceParams p;
  p.delta_pulse = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = DeviceParams{};
  p.alpha1 = {std::nan(""), 0.0};
  EXPECT_THROW(p.validate(), Error);
  p = DeviceParams{};
  p.delta0 = -1.0;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(DeviceParams{}.validate());
}

TEST(DeviceParams, DerivedQuantities) {
  const DeviceParams p;
  EXPECT_DOUBLE_EQ(pulse_duration(p), pi / 80.0);
  EXPECT_DOUBLE_EQ(regime_ratio(p), 1.0);
  expect_close(kappa0(p), -kI, 1e-15);
}
