#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ddgate {

/// Dense complex matrix on the 2^n dimensional state space.
using Operator = Eigen::MatrixXcd;
using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Fourth root of unity, stored as the exponent k of i^k.
class Phase {
 public:
  constexpr Phase() = default;
  static constexpr Phase plus_one() { return Phase(0); }
  static constexpr Phase plus_i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }
  static constexpr Phase from_sign(int sign) { return sign < 0 ? minus_one() : plus_one(); }

  constexpr int exponent() const { return k_; }
  constexpr bool is_real() const { return (k_ & 1) == 0; }
  /// +1 or -1; only meaningful for real phases.
  constexpr int sign() const { return k_ == 2 ? -1 : 1; }

  Complex value() const {
    constexpr Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k_];
  }

  constexpr Phase operator*(Phase o) const { return Phase((k_ + o.k_) & 3); }
  constexpr Phase conj() const { return Phase((4 - k_) & 3); }
  constexpr bool operator==(const Phase&) const = default;

 private:
  constexpr explicit Phase(int k) : k_(static_cast<std::uint8_t>(k & 3)) {}
  std::uint8_t k_ = 0;
};

namespace detail {

// Single-qubit product a*b = phase * letter.
constexpr std::pair<Phase, Pauli> letter_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {Phase::plus_one(), b};
  if (b == Pauli::I) return {Phase::plus_one(), a};
  if (a == b) return {Phase::plus_one(), Pauli::I};
  // Cyclic order X -> Y -> Z gives +i, anti-cyclic gives -i.
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const int third = 6 - ia - ib;  // X=1, Y=2, Z=3
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? Phase::plus_i() : Phase::minus_i(), static_cast<Pauli>(third)};
}

inline char letter_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Eigen::Matrix2cd letter_matrix(Pauli p) {
  using C = Complex;
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, C(0, -1), C(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace detail

/// Signed multi-qubit Pauli operator phase * P_1 (x) ... (x) P_n.
/// Qubits are numbered from 1 in the public API; qubit 1 is the leftmost
/// tensor factor (most significant bit of the basis index).
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters, Phase phase = Phase::plus_one())
      : letters_(std::move(letters)), phase_(phase) {
    if (letters_.empty()) throw DimensionError("PauliString needs at least one qubit");
  }

  static PauliString identity(std::size_t n_qubits) {
    return PauliString(std::vector<Pauli>(n_qubits, Pauli::I));
  }

  /// Single letter on a 1-based qubit.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
    auto s = identity(n_qubits);
    s.set(qubit, p);
    return s;
  }

  static PauliString pair(std::size_t n_qubits, std::size_t q1, Pauli p1, std::size_t q2,
                          Pauli p2) {
    if (q1 == q2) throw std::invalid_argument("PauliString::pair needs distinct qubits");
    auto s = identity(n_qubits);
    s.set(q1, p1);
    s.set(q2, p2);
    return s;
  }

  /// Parses "±[IXYZ]+" with optional "i" after the sign ("+iZI", "-iXY").
  static PauliString parse(std::string_view text) {
    Phase phase = Phase::plus_one();
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') phase = Phase::minus_one();
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
      phase = phase * Phase::plus_i();
      ++pos;
    }
    std::vector<Pauli> letters;
    for (; pos < text.size(); ++pos) {
      switch (text[pos]) {
        case 'I': case '_': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default:
          throw std::invalid_argument("invalid Pauli string: '" + std::string(text) + "'");
      }
    }
    if (letters.empty()) throw std::invalid_argument("empty Pauli string");
    return PauliString(std::move(letters), phase);
  }

  std::string str() const {
    std::string out;
    switch (phase_.exponent()) {
      case 0: out = "+"; break;
      case 1: out = "+i"; break;
      case 2: out = "-"; break;
      default: out = "-i"; break;
    }
    for (auto p : letters_) out += detail::letter_char(p);
    return out;
  }

  std::size_t n_qubits() const { return letters_.size(); }
  const std::vector<Pauli>& letters() const { return letters_; }
  Pauli at(std::size_t qubit) const { return letters_.at(qubit - 1); }
  Phase phase() const { return phase_; }

  PauliString with_phase(Phase p) const { return PauliString(letters_, p); }
  PauliString unsigned_part() const { return with_phase(Phase::plus_one()); }

  bool is_identity() const {
    for (auto p : letters_)
      if (p != Pauli::I) return false;
    return true;
  }

  /// Letters equal; phase ignored.
  bool same_letters(const PauliString& o) const { return letters_ == o.letters_; }

  bool commutes_with(const PauliString& o) const {
    check_same_size(o);
    int anti = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
      const auto a = letters_[q], b = o.letters_[q];
      if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
    }
    return anti % 2 == 0;
  }

  bool operator==(const PauliString&) const = default;

  void check_same_size(const PauliString& o) const {
    if (o.n_qubits() != n_qubits())
      throw DimensionError("Pauli strings act on " + std::to_string(n_qubits()) + " and " +
                           std::to_string(o.n_qubits()) + " qubits");
  }

 private:
  void set(std::size_t qubit, Pauli p) {
    if (qubit < 1 || qubit > letters_.size())
      throw DimensionError("qubit index " + std::to_string(qubit) + " out of range");
    letters_[qubit - 1] = p;
  }

  std::vector<Pauli> letters_;
  Phase phase_;
};

/// Group product a*b with exact phase tracking.
inline PauliString multiply(const PauliString& a, const PauliString& b) {
  a.check_same_size(b);
  Phase phase = a.phase() * b.phase();
  std::vector<Pauli> letters(a.n_qubits());
  for (std::size_t q = 0; q < letters.size(); ++q) {
    auto [ph, l] = detail::letter_product(a.letters()[q], b.letters()[q]);
    phase = phase * ph;
    letters[q] = l;
  }
  return PauliString(std::move(letters), phase);
}

inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }

/// pulse * error * pulse for a phase +1 pulse. The result keeps the error's
/// letters and only its sign can change.
inline PauliString conjugate(const PauliString& pulse, const PauliString& error) {
  pulse.check_same_size(error);
  if (pulse.phase() != Phase::plus_one())
    throw std::invalid_argument("conjugating pulse must carry phase +1, got " + pulse.str());
  return pulse.commutes_with(error) ? error : error.with_phase(error.phase() * Phase::minus_one());
}

/// Conjugation by a frame F^dagger E F, which ignores the global phase of F.
inline PauliString conjugate_by_frame(const PauliString& frame, const PauliString& error) {
  return conjugate(frame.unsigned_part(), error);
}

/// Dense matrix of a 1- or 2-qubit Pauli string.
inline Operator to_matrix(const PauliString& p) {
  if (p.n_qubits() < 1 || p.n_qubits() > 2)
    throw DimensionError("to_matrix supports 1 or 2 qubits, got " + std::to_string(p.n_qubits()));
  Operator m = detail::letter_matrix(p.letters()[0]);
  if (p.n_qubits() == 2) {
    const Eigen::Matrix2cd a = detail::letter_matrix(p.letters()[0]);
    const Eigen::Matrix2cd b = detail::letter_matrix(p.letters()[1]);
    m.resize(4, 4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  }
  return p.phase().value() * m;
}

inline double max_abs(const Operator& m) { return m.cwiseAbs().maxCoeff(); }

/// max |H - H^dagger|
inline double hermiticity_defect(const Operator& h) { return max_abs(h - h.adjoint()); }

/// max |U^dagger U - I|
inline double unitarity_defect(const Operator& u) {
  return max_abs(u.adjoint() * u - Operator::Identity(u.rows(), u.cols()));
}

}  // namespace ddgate
