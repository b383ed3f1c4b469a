#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ddgate/pauli.hpp"

namespace ddgate {

/// Two-qubit gate families. FlipFlop is the H1 / transmon exchange gate U3;
/// the others are the H2 couplings behind Ue1, Ue2, Ue3.
enum class GateKind { FlipFlop, ZZ, XX, ZX };

inline constexpr std::array<GateKind, 4> kAllGateKinds = {GateKind::FlipFlop, GateKind::ZZ,
                                                         GateKind::XX, GateKind::ZX};

/// Short CLI name: u3, ue1, ue2, ue3.
inline std::string gate_name(GateKind k) {
  switch (k) {
    case GateKind::FlipFlop: return "u3";
    case GateKind::ZZ: return "ue1";
    case GateKind::XX: return "ue2";
    case GateKind::ZX: return "ue3";
  }
  throw std::invalid_argument("unknown gate kind");
}

inline GateKind parse_gate_kind(std::string_view name) {
  if (name == "u3" || name == "flipflop") return GateKind::FlipFlop;
  if (name == "ue1" || name == "zz") return GateKind::ZZ;
  if (name == "ue2" || name == "xx") return GateKind::XX;
  if (name == "ue3" || name == "zx") return GateKind::ZX;
  throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

/// Hamiltonian form used at one evolution step.
enum class CouplingForm { FlipFlop, DoubleExcitation, Plain };

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Conversion factor from MHz (cyclic) to rad/s.
inline constexpr double kMHz = kTwoPi * 1e6;

namespace detail {

inline Operator sigma_plus() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline Operator sigma_minus() { return sigma_plus().transpose(); }

// Embed a single-qubit operator on a 1-based qubit of a two-qubit register.
inline Operator embed(const Operator& op, std::size_t qubit) {
  const Operator id = Operator::Identity(2, 2);
  const Operator& a = qubit == 1 ? op : id;
  const Operator& b = qubit == 1 ? id : op;
  Operator out(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block(2 * r, 2 * c, 2, 2) = a(r, c) * b;
  return out;
}

inline Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline Operator pauli2(Pauli a, Pauli b) { return to_matrix(PauliString({a, b})); }

inline void check_qubit(std::size_t q) {
  if (q != 1 && q != 2) throw DimensionError("qubit index must be 1 or 2");
}

}  // namespace detail

/// J (s+ s- + s- s+), the excitation-exchange coupling.
inline Operator build_flip_flop(double coupling) {
  using detail::kron, detail::sigma_plus, detail::sigma_minus;
  return coupling * (kron(sigma_plus(), sigma_minus()) + kron(sigma_minus(), sigma_plus()));
}

/// J (s+ s+ + s- s-), the "*" form of the exchange schedule.
inline Operator build_double_excitation(double coupling) {
  using detail::kron, detail::sigma_plus, detail::sigma_minus;
  return coupling * (kron(sigma_plus(), sigma_plus()) + kron(sigma_minus(), sigma_minus()));
}

struct H1Params {
  double detuning = 0.0;  // delta, rad/s
  double rabi = 0.0;      // Omega, rad/s
  double drive_phase = 0.0;
  double coupling = 0.0;  // J, rad/s
  std::size_t driven_qubit = 1;
};

/// delta sz + Omega (e^{-i phi} s+ + e^{i phi} s-) on the driven qubit plus
/// the exchange coupling to the other qubit.
inline Operator build_h1(const H1Params& p) {
  detail::check_qubit(p.driven_qubit);
  const Complex drive = std::polar(1.0, -p.drive_phase);
  Operator single = p.detuning * to_matrix(PauliString({Pauli::Z})) +
                    p.rabi * (drive * detail::sigma_plus() + std::conj(drive) * detail::sigma_minus());
  return detail::embed(single, p.driven_qubit) + build_flip_flop(p.coupling);
}

/// Per-qubit drive terms of the transmon model (index 0 is qubit 1).
struct QubitDrive {
  double detuning = 0.0;
  double rabi = 0.0;
  double drive_phase = 0.0;
};

struct TransmonParams {
  double bare_coupling = 0.0;     // g, rad/s
  double modulation_ratio = 0.0;  // beta
  double modulation_phase = 0.0;  // varphi; pi flips the sign of the effective J
  std::array<QubitDrive, 2> drives{};
};

/// g J1(beta). J1 is evaluated with the standard library's cylindrical Bessel function.
inline double effective_j(double bare_coupling, double modulation_ratio) {
  if (modulation_ratio < 0.0) throw std::invalid_argument("modulation ratio must be >= 0");
  return bare_coupling * std::cyl_bessel_j(1.0, modulation_ratio);
}

/// Interaction-picture transmon Hamiltonian with effective coupling g J1(beta).
inline Operator build_transmon(const TransmonParams& p) {
  if (p.bare_coupling < 0.0) throw std::invalid_argument("bare coupling g must be >= 0");
  using detail::kron, detail::sigma_plus, detail::sigma_minus;
  const double j = effective_j(p.bare_coupling, p.modulation_ratio);
  const Complex ph = std::polar(1.0, -p.modulation_phase);
  Operator h = j * (ph * kron(sigma_plus(), sigma_minus()) +
                    std::conj(ph) * kron(sigma_minus(), sigma_plus()));
  for (std::size_t q = 0; q < 2; ++q) {
    const auto& d = p.drives[q];
    const Complex drive = std::polar(1.0, -d.drive_phase);
    Operator single = d.detuning * to_matrix(PauliString({Pauli::Z})) +
                      d.rabi * (drive * sigma_plus() + std::conj(drive) * sigma_minus());
    h += detail::embed(single, q + 1);
  }
  return h;
}

struct H2Params {
  GateKind kind = GateKind::ZZ;
  double coupling = 0.0;  // J', rad/s
};

/// Pauli generator of a plain two-qubit coupling (ZZ, XX or Z1 X2).
inline PauliString plain_coupling_string(GateKind kind) {
  switch (kind) {
    case GateKind::ZZ: return PauliString({Pauli::Z, Pauli::Z});
    case GateKind::XX: return PauliString({Pauli::X, Pauli::X});
    case GateKind::ZX: return PauliString({Pauli::Z, Pauli::X});
    case GateKind::FlipFlop: break;
  }
  throw std::invalid_argument("gate kind has no plain Pauli coupling");
}

inline Operator build_h2(const H2Params& p) {
  return p.coupling * to_matrix(plain_coupling_string(p.kind));
}

/// The coupling Hamiltonian a gate kind is meant to realise, at strength J.
inline Operator target_coupling(GateKind kind, double coupling) {
  if (kind == GateKind::FlipFlop) return build_flip_flop(coupling);
  return build_h2({kind, coupling});
}

/// Physical coupling programmed during one step: sign * J * form.
inline Operator scheduled_coupling(GateKind kind, int sign, CouplingForm form, double coupling) {
  const double j = sign * coupling;
  switch (form) {
    case CouplingForm::FlipFlop: return build_flip_flop(j);
    case CouplingForm::DoubleExcitation: return build_double_excitation(j);
    case CouplingForm::Plain: return build_h2({kind, j});
  }
  throw std::invalid_argument("unknown coupling form");
}

/// Stochastic error channels: six single-qubit and nine two-qubit terms.
enum class Channel {
  X1, Y1, Z1, X2, Y2, Z2,
  XX, YY, ZZ, XY, YX, XZ, ZX, YZ, ZY,
};

inline constexpr std::size_t kNumChannels = 15;

inline constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "x1", "y1", "z1", "x2", "y2", "z2", "xx", "yy", "zz", "xy", "yx", "xz", "zx", "yz", "zy"};

/// Pauli operator multiplying a channel's coefficient.
inline PauliString channel_operator(Channel c) {
  using P = Pauli;
  switch (c) {
    case Channel::X1: return PauliString({P::X, P::I});
    case Channel::Y1: return PauliString({P::Y, P::I});
    case Channel::Z1: return PauliString({P::Z, P::I});
    case Channel::X2: return PauliString({P::I, P::X});
    case Channel::Y2: return PauliString({P::I, P::Y});
    case Channel::Z2: return PauliString({P::I, P::Z});
    case Channel::XX: return PauliString({P::X, P::X});
    case Channel::YY: return PauliString({P::Y, P::Y});
    case Channel::ZZ: return PauliString({P::Z, P::Z});
    case Channel::XY: return PauliString({P::X, P::Y});
    case Channel::YX: return PauliString({P::Y, P::X});
    case Channel::XZ: return PauliString({P::X, P::Z});
    case Channel::ZX: return PauliString({P::Z, P::X});
    case Channel::YZ: return PauliString({P::Y, P::Z});
    case Channel::ZY: return PauliString({P::Z, P::Y});
  }
  throw std::invalid_argument("unknown channel");
}

/// The full two-qubit error set: every non-identity Pauli string on qubits 1, 2.
inline std::array<PauliString, kNumChannels> error_set() {
  std::array<PauliString, kNumChannels> out;
  for (std::size_t c = 0; c < kNumChannels; ++c) out[c] = channel_operator(static_cast<Channel>(c));
  return out;
}

/// Coefficients of the 15 error channels in rad/s, one value per channel.
struct ErrorCoefficients {
  std::array<double, kNumChannels> values{};

  double& operator[](Channel c) { return values[static_cast<std::size_t>(c)]; }
  double operator[](Channel c) const { return values[static_cast<std::size_t>(c)]; }

  ErrorCoefficients operator+(const ErrorCoefficients& o) const {
    ErrorCoefficients out;
    for (std::size_t i = 0; i < kNumChannels; ++i) out.values[i] = values[i] + o.values[i];
    return out;
  }

  static ErrorCoefficients constant(double v) {
    ErrorCoefficients out;
    out.values.fill(v);
    return out;
  }
};

/// Sum over all 15 channels of coefficient * Pauli operator.
inline Operator build_error_hamiltonian(const ErrorCoefficients& c) {
  static const std::array<Operator, kNumChannels> mats = [] {
    std::array<Operator, kNumChannels> m;
    for (std::size_t i = 0; i < kNumChannels; ++i)
      m[i] = to_matrix(channel_operator(static_cast<Channel>(i)));
    return m;
  }();
  Operator h = Operator::Zero(4, 4);
  for (std::size_t i = 0; i < kNumChannels; ++i) {
    if (!std::isfinite(c.values[i]))
      throw std::invalid_argument("error coefficient " + std::string(kChannelNames[i]) +
                                  " is not finite");
    h += c.values[i] * mats[i];
  }
  return h;
}

}  // namespace ddgate
