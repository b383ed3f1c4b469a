#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ddgate/engine.hpp"
#include "test_support.hpp"

using namespace ddgate;

namespace {

constexpr double kPi = std::numbers::pi;

NoiseTrajectory zero_noise(const SimulationPlan& plan) {
  return NoiseTrajectory::zero(800 * plan.n_cycles, plan.segment_duration(800));
}

double simulate_fidelity(const SimulationPlan& plan, const NoiseTrajectory& traj, std::uint64_t seed = 1) {
  RngStream z(seed, 0, StreamPurpose::Zeta);
  const auto r = simulate(plan, traj, z);
  return haar_average_fidelity(ideal_gate(plan.gate, plan.gate_angle()), r.propagator);
}

}  // namespace

TEST(SegmentPropagator, Basics) {
  EXPECT_LT(max_abs(segment_propagator(Operator::Zero(4, 4), 1e-9) - Operator::Identity(4, 4)), 1e-15);

  const double dt = 2e-11;
  const Operator h = kPi / (2 * dt) * oracle::pauli("XI");
  const Operator expected = Complex(0, -1) * oracle::pauli("XI");
  EXPECT_LT(max_abs(segment_propagator(h, dt) - expected), 1e-12);

  Operator bad = Operator::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(segment_propagator(bad, 1.0), std::invalid_argument);
}

TEST(SegmentPropagator, MatchesStateRk4AndPade) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Mat h = oracle::random_hermitian(rng, 4, 1e8);
    const double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
    const double dt = 0.09 / norm;
    const Operator u = segment_propagator(h, dt);
    EXPECT_LT(unitarity_defect(u), 1e-12);
    EXPECT_LT(oracle::max_abs(u - oracle::expm_minus_i(h, dt)), 1e-12);
    for (int col = 0; col < 4; ++col) {
      Eigen::VectorXcd psi = Eigen::VectorXcd::Unit(4, col);
      const Eigen::VectorXcd ref = oracle::rk4_state(h, psi, dt, 200);
      EXPECT_LT((u * psi - ref).cwiseAbs().maxCoeff(), 1e-8);
    }
    EXPECT_LT(max_abs(rk4_propagator(h, dt) - u), 1e-8);
  }
}

TEST(ApplyPulse, IdealPulses) {
  RngStream r(1, 0, StreamPurpose::Zeta);
  const auto ideal = PulseErrorModel::ideal();
  EXPECT_LT(max_abs(apply_pulse(PauliString::parse("XI"), ideal, r) - Complex(0, -1) * oracle::pauli("XI")),
            1e-15);
  EXPECT_LT(max_abs(apply_pulse(PauliString::parse("ZZ"), ideal, r) + oracle::pauli("ZZ")), 1e-15);
  EXPECT_LT(max_abs(apply_pulse(PauliString::parse("Z"), ideal, r) - Complex(0, -1) * oracle::pauli("Z")), 1e-15);
  EXPECT_THROW(apply_pulse(PauliString::parse("YI"), ideal, r), std::invalid_argument);
  EXPECT_THROW(apply_pulse(PauliString::parse("-XI"), ideal, r), std::invalid_argument);
}

TEST(ApplyPulse, OverRotation) {
  RngStream r(1, 0, StreamPurpose::Zeta);
  const double zeta = 0.01;
  const auto model = PulseErrorModel::gaussian(zeta, 0.0);
  const Operator u = apply_pulse(PauliString::parse("XI"), model, r);
  const double a = kPi / 2 + zeta;
  const oracle::Mat expected = std::cos(a) * oracle::Mat::Identity(4, 4) - Complex(0, std::sin(a)) * oracle::pauli("XI");
  EXPECT_LT(max_abs(u - expected), 1e-15);
  EXPECT_LT(max_abs(u - oracle::expm_minus_i(oracle::pauli("XI"), a)), 1e-12);
  const Operator ideal = Complex(0, -1) * oracle::pauli("XI");
  const double overlap = std::norm((ideal.adjoint() * u).trace() / 4.0);
  EXPECT_NEAR(overlap, std::cos(zeta) * std::cos(zeta), 1e-14);
}

TEST(ApplyPulse, IndependentZetaPerFactor) {
  RngStream a(3, 0, StreamPurpose::Zeta), b(3, 0, StreamPurpose::Zeta);
  const auto model = PulseErrorModel::gauss2();
  const Operator u = apply_pulse(PauliString::parse("XX"), model, a);
  const double z1 = sample_zeta(b, model), z2 = sample_zeta(b, model);
  EXPECT_NE(z1, z2);
  const oracle::Mat expected = oracle::expm_minus_i(oracle::pauli("XI"), kPi / 2 + z1) *
                               oracle::expm_minus_i(oracle::pauli("IX"), kPi / 2 + z2);
  EXPECT_LT(max_abs(u - expected), 1e-12);
}

TEST(IdealGate, ClosedForms) {
  const double g = kPi / 4;
  const Operator u3 = ideal_gate(GateKind::FlipFlop, g);
  EXPECT_EQ(u3(0, 0), Complex(1.0));
  EXPECT_EQ(u3(3, 3), Complex(1.0));
  EXPECT_NEAR(std::abs(u3(1, 1) - std::cos(g)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u3(1, 2) - Complex(0, -std::sin(g))), 0.0, 1e-15);

  const Operator ue1 = ideal_gate(GateKind::ZZ, g);
  const Complex em = std::polar(1.0, -g), ep = std::polar(1.0, g);
  oracle::Mat diag = oracle::Mat::Zero(4, 4);
  diag.diagonal() << em, ep, ep, em;
  EXPECT_LT(max_abs(ue1 - diag), 1e-15);

  for (auto kind : kAllGateKinds) {
    EXPECT_LT(max_abs(ideal_gate(kind, 0.0) - Operator::Identity(4, 4)), 1e-15);
    for (double angle : {0.3, kPi / 4, 2.0})
      EXPECT_LT(max_abs(ideal_gate(kind, angle) - oracle::expm_minus_i(target_coupling(kind, 1.0), angle)), 1e-12);
  }
}

TEST(MakePlan, TimingDefaults) {
  const auto plan = make_plan(GateKind::FlipFlop, Scheme::DD);
  EXPECT_NEAR(plan.total_time(), 12.5e-9, 1e-21);
  EXPECT_NEAR(plan.tau, 0.78125e-9, 1e-21);
  EXPECT_NEAR(plan.segment_duration(800), 15.625e-12, 1e-24);
  EXPECT_NEAR(plan.gate_angle(), kPi / 4, 1e-15);

  const auto two = make_plan(GateKind::ZZ, Scheme::DD, {.n_cycles = 2});
  EXPECT_NEAR(two.total_time(), 12.5e-9, 1e-21);
  EXPECT_NEAR(two.tau, 12.5e-9 / 32, 1e-21);
  EXPECT_THROW(make_plan(GateKind::ZZ, Scheme::DD, {.n_cycles = 0}), std::invalid_argument);
}

TEST(Simulate, ZeroNoiseRecoversEveryGate) {
  for (auto kind : kAllGateKinds)
    for (auto scheme : {Scheme::NoDD, Scheme::DD})
      for (int cycles : {1, 3}) {
        const auto plan = make_plan(kind, scheme, {.n_cycles = cycles});
        RngStream z(1, 0, StreamPurpose::Zeta);
        const auto r = simulate(plan, zero_noise(plan), z);
        EXPECT_GT(haar_average_fidelity(ideal_gate(kind, kPi / 4), r.propagator), 1.0 - 1e-9)
            << gate_name(kind) << ' ' << scheme_name(scheme) << ' ' << cycles;
        EXPECT_LT(r.unitarity_defect, 1e-8);
        EXPECT_EQ(r.frames.size(), 16u * cycles);
        EXPECT_EQ(r.pulses_applied, scheme == Scheme::DD ? 20 * cycles : 0);
      }
}

TEST(Simulate, ConstantNoiseSuppressedByDD) {
  const double eps = 5.0 * kMHz;
  for (auto kind : {GateKind::FlipFlop, GateKind::ZZ}) {
    const auto dd = make_plan(kind, Scheme::DD);
    const auto none = make_plan(kind, Scheme::NoDD);
    const auto traj = NoiseTrajectory::constant(800, dd.segment_duration(800), eps);
    const double inf_dd = 1.0 - simulate_fidelity(dd, traj);
    const double inf_none = 1.0 - simulate_fidelity(none, traj);
    EXPECT_LT(10.0 * inf_dd, inf_none) << gate_name(kind);
  }
}

TEST(Simulate, UnitaryUnderRandomNoiseAndPulseErrors) {
  const auto plan = make_plan(GateKind::ZX, Scheme::DD, {.pulse_error = PulseErrorModel::gauss2()});
  RngStream t(9, 0, StreamPurpose::Trajectory), z(9, 0, StreamPurpose::Zeta);
  const auto traj = sample_trajectory(t, 800, plan.segment_duration(800));
  EXPECT_LT(simulate(plan, traj, z).unitarity_defect, 1e-8);
}

TEST(Simulate, IntegratorsAgree) {
  for (auto kind : {GateKind::FlipFlop, GateKind::ZZ}) {
    auto plan = make_plan(kind, Scheme::DD);
    RngStream t(4, 0, StreamPurpose::Trajectory);
    const auto traj = sample_trajectory(t, 800, plan.segment_duration(800));
    RngStream z1(4, 0, StreamPurpose::Zeta), z2(4, 0, StreamPurpose::Zeta);
    const Operator a = simulate(plan, traj, z1).propagator;
    plan.integrator = Integrator::RungeKutta4;
    const Operator b = simulate(plan, traj, z2).propagator;
    EXPECT_LT(max_abs(a - b), 1e-6);
  }
}

TEST(Simulate, RejectsMisalignedTrajectory) {
  const auto plan = make_plan(GateKind::FlipFlop, Scheme::DD);
  RngStream z(1, 0, StreamPurpose::Zeta);
  EXPECT_THROW(simulate(plan, NoiseTrajectory::zero(810, plan.tau / 50), z), std::invalid_argument);
  EXPECT_THROW(simulate(plan, NoiseTrajectory::zero(800, plan.tau), z), std::invalid_argument);
}

TEST(Simulate, TraceFollowsToggledTarget) {
  const auto plan = make_plan(GateKind::FlipFlop, Scheme::DD);
  RngStream z(1, 0, StreamPurpose::Zeta);
  int samples = 0;
  const Operator target = build_flip_flop(plan.coupling);
  simulate(plan, zero_noise(plan), z, [&](const TraceSample& s) {
    ++samples;
    EXPECT_EQ(s.interval, samples);
    EXPECT_NEAR(s.time, samples * plan.tau, 1e-20);
    const Operator expected = to_matrix(s.frame) * oracle::expm_minus_i(target, s.time);
    EXPECT_GT(haar_average_fidelity(expected, s.propagator), 1.0 - 1e-9);
  });
  EXPECT_EQ(samples, 16);
}

TEST(Simulate, SuppressionImprovesWithShorterIntervals) {
  // Fixed gate angle: tau scaled by s, J by 1/s, constant noise.
  const double eps = 5.0 * kMHz;
  double previous = 1.0;
  for (double s : {1.0, 0.5, 0.25}) {
    const auto plan = make_plan(GateKind::FlipFlop, Scheme::DD, {.coupling = kDefaultCoupling / s});
    const auto traj = NoiseTrajectory::constant(800, plan.segment_duration(800), eps);
    const double inf = 1.0 - simulate_fidelity(plan, traj);
    EXPECT_LT(inf, previous) << s;
    previous = inf;
  }
}

TEST(Simulate, PureStorageSuppressionIsSecondOrder) {
  // With the coupling switched off the residual is second order in eps*T, so
  // the infidelity falls as s^4. Identity storage is modelled by an XX gate of
  // vanishing angle (its schedule only flips signs of a zero term).
  const double eps = 5.0 * kMHz;
  std::vector<double> inf;
  for (double s : {1.0, 0.25}) {
    auto plan = make_plan(GateKind::XX, Scheme::DD, {.coupling = kDefaultCoupling / s});
    plan.coupling = 0.0;
    const auto traj = NoiseTrajectory::constant(800, plan.segment_duration(800), eps);
    RngStream z(1, 0, StreamPurpose::Zeta);
    inf.push_back(1.0 - haar_average_fidelity(Operator::Identity(4, 4), simulate(plan, traj, z).propagator));
  }
  EXPECT_GT(std::log(inf[0] / inf[1]) / std::log(4.0), 3.9);
}

TEST(Crosstalk, ZeroStrengthIsPlainSimulation) {
  const auto plan = make_plan(GateKind::FlipFlop, Scheme::DD, {.pulse_error = PulseErrorModel::gauss1()});
  RngStream t(2, 0, StreamPurpose::Trajectory);
  const auto traj = sample_trajectory(t, 800, plan.segment_duration(800));
  RngStream z1(2, 0, StreamPurpose::Zeta), z2(2, 0, StreamPurpose::Zeta);
  EXPECT_EQ(crosstalk_scenario(plan, 0.0, traj, z1).propagator, simulate(plan, traj, z2).propagator);
  EXPECT_THROW(crosstalk_scenario(make_plan(GateKind::ZZ, Scheme::DD), 1.0, traj, z1), std::invalid_argument);
}

TEST(Crosstalk, RemovedByDD) {
  const double jct = 2.0 * kMHz;
  auto fid = [&](Scheme s) {
    const auto plan = make_plan(GateKind::FlipFlop, s);
    RngStream z(1, 0, StreamPurpose::Zeta);
    return haar_average_fidelity(ideal_gate(GateKind::FlipFlop, kPi / 4),
                                 crosstalk_scenario(plan, jct, zero_noise(plan), z).propagator);
  };
  EXPECT_GT(fid(Scheme::DD), fid(Scheme::NoDD));
  EXPECT_GT(fid(Scheme::DD), 0.99);
}

TEST(Crosstalk, NoDDMatchesCommutingClosedForm) {
  // Z1Z2 commutes with the flip-flop coupling, so without DD the gate picks
  // up exp(-i theta Z1Z2), theta = J_ct T. A state with <Z1Z2> = 0 keeps
  // fidelity cos^2(theta), which is the worst case.
  const double jct = 2.0 * kMHz;
  const auto plan = make_plan(GateKind::FlipFlop, Scheme::NoDD);
  RngStream z(1, 0, StreamPurpose::Zeta);
  const Operator u = crosstalk_scenario(plan, jct, zero_noise(plan), z).propagator;
  const Operator ideal = ideal_gate(GateKind::FlipFlop, kPi / 4);
  const double theta = jct * plan.total_time();

  Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(4, 0.5);  // |++>
  const double f = std::norm((ideal * plus).dot(u * plus));
  EXPECT_NEAR(f, std::cos(theta) * std::cos(theta), 1e-9);
  EXPECT_NEAR(1.0 - f, std::sin(theta) * std::sin(theta), 1e-9);
  EXPECT_LT(f, 1.0);
}

TEST(HaarAverage, IdentityAndPhase) {
  const Operator u = ideal_gate(GateKind::ZX, 0.4);
  EXPECT_NEAR(haar_average_fidelity(u, u), 1.0, 1e-15);
  EXPECT_NEAR(haar_average_fidelity(u, std::polar(1.0, 0.8) * u), 1.0, 1e-15);
  // Orthogonal Paulis: |Tr| = 0 gives d / (d (d + 1)) = 1/5.
  EXPECT_NEAR(haar_average_fidelity(oracle::pauli("XI"), oracle::pauli("ZI")), 0.2, 1e-15);
}
