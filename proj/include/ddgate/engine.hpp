#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ddgate/model.hpp"
#include "ddgate/noise.hpp"
#include "ddgate/pauli.hpp"
#include "ddgate/sequence.hpp"

namespace ddgate {

enum class Scheme { NoDD, DD };
enum class Integrator { SegmentExponential, RungeKutta4 };

inline std::string scheme_name(Scheme s) { return s == Scheme::DD ? "dd" : "none"; }

inline Scheme parse_scheme(std::string_view s) {
  if (s == "dd") return Scheme::DD;
  if (s == "none" || s == "no_dd") return Scheme::NoDD;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

inline std::string integrator_name(Integrator i) {
  return i == Integrator::RungeKutta4 ? "runge_kutta_4" : "segment_exponential";
}

inline Integrator parse_integrator(std::string_view s) {
  if (s == "segment_exponential" || s == "exp") return Integrator::SegmentExponential;
  if (s == "runge_kutta_4" || s == "rk4") return Integrator::RungeKutta4;
  throw std::invalid_argument("unknown integrator '" + std::string(s) + "'");
}

/// Default coupling J = J' = 2 pi x 10 MHz and gate angle pi/4.
inline constexpr double kDefaultCoupling = 10.0 * kMHz;
inline constexpr double kDefaultGateAngle = std::numbers::pi / 4;

struct SimulationPlan {
  GateKind gate = GateKind::FlipFlop;
  Scheme scheme = Scheme::DD;
  DDSequence sequence = build_full_cycle();  // one cycle
  CouplingSchedule schedule = coupling_schedule(GateKind::FlipFlop);
  double coupling = kDefaultCoupling;  // J or J', rad/s
  double tau = 0.0;                    // seconds per interval
  int n_cycles = 1;
  PulseErrorModel pulse_error;
  Integrator integrator = Integrator::SegmentExponential;
  /// Unscheduled extra system term (crosstalk); zero unless set.
  Operator static_term = Operator::Zero(4, 4);

  int total_intervals() const { return sequence.interval_count() * n_cycles; }
  double total_time() const { return tau * total_intervals(); }
  double gate_angle() const { return std::abs(coupling) * total_time(); }
  /// Segment length when each cycle is cut into `segments_per_cycle` pieces.
  double segment_duration(std::size_t segments_per_cycle) const {
    return tau * sequence.interval_count() / static_cast<double>(segments_per_cycle);
  }
};

struct PlanOptions {
  double angle = kDefaultGateAngle;
  double coupling = kDefaultCoupling;
  int n_cycles = 1;
  PulseErrorModel pulse_error;
  Integrator integrator = Integrator::SegmentExponential;
};

/// Builds a plan whose coupling accumulates exactly `angle` over all cycles:
/// |J| * 16 * tau * n_cycles = angle.
inline SimulationPlan make_plan(GateKind gate, Scheme scheme, const PlanOptions& o = {}) {
  if (o.n_cycles < 1) throw std::invalid_argument("cycle count must be >= 1");
  if (o.coupling == 0.0) throw std::invalid_argument("coupling must be nonzero");
  SimulationPlan p;
  p.gate = gate;
  p.scheme = scheme;
  p.sequence = build_full_cycle();
  p.schedule = coupling_schedule(gate);
  p.coupling = o.coupling;
  p.n_cycles = o.n_cycles;
  p.tau = o.angle / (std::abs(o.coupling) * p.sequence.interval_count() * o.n_cycles);
  p.pulse_error = o.pulse_error;
  p.integrator = o.integrator;
  if (!(p.tau > 0.0)) throw std::invalid_argument("gate angle must be positive");
  return p;
}

namespace detail {

using Mat4 = Eigen::Matrix4cd;

inline double hermitian_tolerance(const Operator& h) { return 1e-12 * std::max(1.0, max_abs(h)); }

template <typename M>
M exp_hermitian(const M& h, double dt) {
  Eigen::SelfAdjointEigenSolver<M> es(h);
  const auto& v = es.eigenvectors();
  const Eigen::VectorXd w = es.eigenvalues();
  M d = M::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < w.size(); ++k) d(k, k) = std::polar(1.0, -w(k) * dt);
  return v * d * v.adjoint();
}

template <typename M>
M rk4_hermitian(const M& h, double dt) {
  const double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(norm * std::abs(dt) / 0.05)));
  const double step = dt / steps;
  const Complex mi(0, -1);
  auto f = [&](const M& u) -> M { return mi * (h * u); };
  M u = M::Identity(h.rows(), h.cols());
  for (int s = 0; s < steps; ++s) {
    const M k1 = f(u);
    const M k2 = f(u + 0.5 * step * k1);
    const M k3 = f(u + 0.5 * step * k2);
    const M k4 = f(u + step * k3);
    u += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

}  // namespace detail

/// exp(-i H dt) for Hermitian H via eigendecomposition.
inline Operator segment_propagator(const Operator& h, double dt) {
  if (h.rows() != h.cols()) throw DimensionError("Hamiltonian must be square");
  if (hermiticity_defect(h) > detail::hermitian_tolerance(h))
    throw std::invalid_argument("segment_propagator needs a Hermitian Hamiltonian");
  return detail::exp_hermitian<Operator>(h, dt);
}

/// Fixed-step 4th-order Runge-Kutta integration of dU/dt = -i H U.
inline Operator rk4_propagator(const Operator& h, double dt) {
  if (h.rows() != h.cols()) throw DimensionError("Hamiltonian must be square");
  return detail::rk4_hermitian<Operator>(h, dt);
}

namespace detail {

inline Operator rotation(Pauli letter, double angle) {
  const Operator sigma = to_matrix(PauliString({letter}));
  return std::cos(angle) * Operator::Identity(2, 2) - Complex(0, 1) * std::sin(angle) * sigma;
}

}  // namespace detail

/// Product over each non-identity factor of exp(-i (pi/2 + zeta) sigma), with
/// an independent zeta per factor drawn in qubit order.
inline Operator apply_pulse(const PauliString& p, const PulseErrorModel& model, RngStream& rng) {
  if (p.phase() != Phase::plus_one()) throw std::invalid_argument("pulse must carry phase +1");
  if (p.n_qubits() < 1 || p.n_qubits() > 2) throw DimensionError("pulses act on 1 or 2 qubits");
  std::vector<Operator> factors;
  for (auto letter : p.letters()) {
    if (letter == Pauli::Y) throw std::invalid_argument("Y pulses are not supported: " + p.str());
    if (letter == Pauli::I) {
      factors.push_back(Operator::Identity(2, 2));
    } else {
      const double zeta = sample_zeta(rng, model);
      factors.push_back(detail::rotation(letter, std::numbers::pi / 2 + zeta));
    }
  }
  return factors.size() == 1 ? factors[0] : detail::kron(factors[0], factors[1]);
}

/// Closed-form target gate exp(-i angle G) for the gate's coupling generator G.
inline Operator ideal_gate(GateKind kind, double angle) {
  const Complex mi(0, -1);
  if (kind == GateKind::FlipFlop) {
    // G^2 projects onto span{|01>, |10>}; identity on |00>, |11>.
    Operator u = Operator::Identity(4, 4);
    u(1, 1) = u(2, 2) = std::cos(angle);
    u(1, 2) = u(2, 1) = mi * std::sin(angle);
    return u;
  }
  const Operator g = to_matrix(plain_coupling_string(kind));
  return std::cos(angle) * Operator::Identity(4, 4) + mi * std::sin(angle) * g;
}

struct PropagationResult {
  Operator propagator;
  std::vector<PauliString> frames;  // toggling frame of each interval
  double unitarity_defect = 0.0;
  int pulses_applied = 0;
};

/// One record per interval, emitted when the interval ends.
struct TraceSample {
  double time = 0.0;
  int interval = 0;
  PauliString frame;
  Operator propagator;
};

using TraceSink = std::function<void(const TraceSample&)>;

/// Time-ordered propagation of H_S + H_e through all cycles of the plan.
/// Pulse over-rotations are drawn from `zeta_rng` in time order.
inline PropagationResult simulate(const SimulationPlan& plan, const NoiseTrajectory& trajectory,
                                  RngStream& zeta_rng, const TraceSink& trace = {}) {
  using detail::Mat4;
  if (plan.sequence.n_qubits() != 2) throw DimensionError("engine simulates two qubits");
  const int intervals = plan.total_intervals();
  if (intervals < 1) throw std::invalid_argument("plan has no evolution intervals");
  if (trajectory.n_segments() == 0 || trajectory.n_segments() % intervals != 0)
    throw std::invalid_argument("trajectory of " + std::to_string(trajectory.n_segments()) +
                                " segments does not align with " + std::to_string(intervals) +
                                " intervals");
  const std::size_t per_interval = trajectory.n_segments() / intervals;
  const double dt = plan.tau / static_cast<double>(per_interval);
  if (std::abs(trajectory.segment_duration - dt) > 1e-9 * dt)
    throw std::invalid_argument("trajectory segment duration does not match the plan");

  static const std::array<Mat4, kNumChannels> channel_mats = [] {
    std::array<Mat4, kNumChannels> m;
    for (std::size_t i = 0; i < kNumChannels; ++i)
      m[i] = to_matrix(channel_operator(static_cast<Channel>(i)));
    return m;
  }();

  const DDSequence seq = repeat(plan.sequence, plan.n_cycles);
  const bool dd = plan.scheme == Scheme::DD;
  const Mat4 static_term = plan.static_term;
  const Mat4 unscheduled = Mat4(target_coupling(plan.gate, plan.coupling)) + static_term;

  PropagationResult out;
  Mat4 u = Mat4::Identity();
  auto frame = PauliString::identity(2);
  std::size_t seg = 0;
  double time = 0.0;

  for (const auto& step : seq.steps()) {
    if (const auto* p = std::get_if<Pulse>(&step)) {
      if (!dd) continue;
      u = Mat4(apply_pulse(p->op, plan.pulse_error, zeta_rng)) * u;
      frame = p->op * frame;
      ++out.pulses_applied;
      continue;
    }
    const int k = std::get<Interval>(step).index;
    Mat4 h_sys = unscheduled;
    if (dd) {
      const auto& e = plan.schedule.at(k);
      h_sys = Mat4(scheduled_coupling(plan.gate, e.sign, e.form, plan.coupling)) + static_term;
    }
    out.frames.push_back(dd ? frame : PauliString::identity(2));
    for (std::size_t s = 0; s < per_interval; ++s, ++seg) {
      Mat4 h = h_sys;
      const auto& c = trajectory.segments[seg].values;
      for (std::size_t i = 0; i < kNumChannels; ++i)
        if (c[i] != 0.0) h += c[i] * channel_mats[i];
      u = (plan.integrator == Integrator::RungeKutta4 ? detail::rk4_hermitian<Mat4>(h, dt)
                                                      : detail::exp_hermitian<Mat4>(h, dt)) *
          u;
    }
    time += plan.tau;
    if (trace) trace(TraceSample{time, k, out.frames.back(), Operator(u)});
  }
  out.propagator = u;
  out.unitarity_defect = unitarity_defect(out.propagator);
  return out;
}

/// Adds a static J_ct Z1 Z2 crosstalk with fixed sign in every step; the
/// schedule is not applied to it.
inline PropagationResult crosstalk_scenario(SimulationPlan plan, double crosstalk_strength,
                                            const NoiseTrajectory& trajectory, RngStream& zeta_rng) {
  if (plan.gate != GateKind::FlipFlop)
    throw std::invalid_argument("crosstalk scenario is defined for the flip-flop gate");
  plan.static_term += crosstalk_strength * to_matrix(PauliString({Pauli::Z, Pauli::Z}));
  return simulate(plan, trajectory, zeta_rng);
}

/// Haar-averaged state fidelity of unitary `actual` against `ideal`:
/// (|Tr(V^dagger U)|^2 + d) / (d (d + 1)).
inline double haar_average_fidelity(const Operator& ideal, const Operator& actual) {
  const double d = static_cast<double>(ideal.rows());
  const double tr = std::norm((ideal.adjoint() * actual).trace());
  return (tr + d) / (d * (d + 1.0));
}

}  // namespace ddgate
