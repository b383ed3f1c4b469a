#pragma once

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ddgate/model.hpp"
#include "ddgate/pauli.hpp"

namespace ddgate {

/// Instantaneous pulse. Consecutive pulses between two intervals are allowed.
struct Pulse {
  PauliString op;
  bool operator==(const Pulse&) const = default;
};

/// Free evolution for one interval tau; index counts from 1 in time order.
struct Interval {
  int index = 0;
  bool operator==(const Interval&) const = default;
};

using Step = std::variant<Pulse, Interval>;

/// Pulses and evolution intervals in time order.
class DDSequence {
 public:
  DDSequence(std::size_t n_qubits, std::vector<Step> steps) : n_qubits_(n_qubits), steps_(std::move(steps)) {
    int expected = 1;
    for (const auto& s : steps_) {
      if (const auto* p = std::get_if<Pulse>(&s)) {
        if (p->op.n_qubits() != n_qubits_)
          throw DimensionError("pulse " + p->op.str() + " does not act on " +
                               std::to_string(n_qubits_) + " qubits");
        if (p->op.phase() != Phase::plus_one())
          throw std::invalid_argument("pulse " + p->op.str() + " must carry phase +1");
      } else {
        if (std::get<Interval>(s).index != expected)
          throw std::invalid_argument("intervals must be numbered 1, 2, ... in order");
        ++expected;
      }
    }
    intervals_ = expected - 1;
  }

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Step>& steps() const { return steps_; }
  int interval_count() const { return intervals_; }

  std::vector<PauliString> pulses() const {
    std::vector<PauliString> out;
    for (const auto& s : steps_)
      if (const auto* p = std::get_if<Pulse>(&s)) out.push_back(p->op);
    return out;
  }

  /// Product of all pulses, later pulses on the left.
  PauliString net_pulse() const {
    auto acc = PauliString::identity(n_qubits_);
    for (const auto& p : pulses()) acc = p * acc;
    return acc;
  }

  bool operator==(const DDSequence&) const = default;

 private:
  std::size_t n_qubits_;
  std::vector<Step> steps_;
  int intervals_ = 0;
};

namespace detail {

class SequenceBuilder {
 public:
  explicit SequenceBuilder(std::size_t n) : n_(n) {}
  SequenceBuilder& pulse(PauliString p) {
    steps_.emplace_back(Pulse{std::move(p)});
    return *this;
  }
  SequenceBuilder& evolve() {
    steps_.emplace_back(Interval{++count_});
    return *this;
  }
  DDSequence build() && { return DDSequence(n_, std::move(steps_)); }

 private:
  std::size_t n_;
  int count_ = 0;
  std::vector<Step> steps_;
};

inline void check_pair(std::size_t i, std::size_t j, std::size_t n) {
  if (i == j) throw std::invalid_argument("DD sequence needs two distinct qubits");
  if (i < 1 || j < 1 || i > n || j > n) throw DimensionError("qubit index out of range");
}

// Appends the merged four-interval pattern
//   s^j [.] s^j s^i [.] s^j [.] s^i s^j [.]   (rightmost first in time)
// i.e. [.] P(ij) [.] P(j) [.] P(ij) [.] P(j).
inline void append_basic_block(SequenceBuilder& b, Pauli letter, std::size_t i, std::size_t j,
                               std::size_t n) {
  const auto both = PauliString::pair(n, i, letter, j, letter);
  const auto only_j = PauliString::single(n, j, letter);
  b.evolve().pulse(both).evolve().pulse(only_j).evolve().pulse(both).evolve().pulse(only_j);
}

}  // namespace detail

/// Four-interval sigma_x sequence; frames I, XiXj, Xi, Xj.
inline DDSequence build_x_sequence(std::size_t i = 1, std::size_t j = 2, std::size_t n_qubits = 2) {
  detail::check_pair(i, j, n_qubits);
  detail::SequenceBuilder b(n_qubits);
  detail::append_basic_block(b, Pauli::X, i, j, n_qubits);
  return std::move(b).build();
}

/// Four-interval sigma_z sequence; frames I, ZiZj, Zi, Zj.
inline DDSequence build_z_sequence(std::size_t i = 1, std::size_t j = 2, std::size_t n_qubits = 2) {
  detail::check_pair(i, j, n_qubits);
  detail::SequenceBuilder b(n_qubits);
  detail::append_basic_block(b, Pauli::Z, i, j, n_qubits);
  return std::move(b).build();
}

/// Simplified concatenated cycle: the Z pattern whose every interval is a
/// full X pattern. 16 intervals, 20 pulses.
inline DDSequence build_full_cycle(std::size_t i = 1, std::size_t j = 2, std::size_t n_qubits = 2) {
  detail::check_pair(i, j, n_qubits);
  detail::SequenceBuilder b(n_qubits);
  const auto zz = PauliString::pair(n_qubits, i, Pauli::Z, j, Pauli::Z);
  const auto zj = PauliString::single(n_qubits, j, Pauli::Z);
  const std::array<PauliString, 4> outer = {zz, zj, zz, zj};
  for (const auto& p : outer) {
    detail::append_basic_block(b, Pauli::X, i, j, n_qubits);
    b.pulse(p);
  }
  return std::move(b).build();
}

/// Literal nested concatenation with every interval sandwiched by its pulse
/// pair: (s^j[..]s^j)(s^i[..]s^i)(s^i s^j[..]s^i s^j)[..] for both levels.
inline DDSequence build_nested_cycle(std::size_t i = 1, std::size_t j = 2, std::size_t n_qubits = 2) {
  detail::check_pair(i, j, n_qubits);
  detail::SequenceBuilder b(n_qubits);
  auto sandwiches = [&](Pauli letter) {
    return std::array<std::optional<PauliString>, 4>{
        std::nullopt, PauliString::pair(n_qubits, i, letter, j, letter),
        PauliString::single(n_qubits, i, letter), PauliString::single(n_qubits, j, letter)};
  };
  const auto outer = sandwiches(Pauli::Z);
  const auto inner = sandwiches(Pauli::X);
  for (const auto& o : outer) {
    if (o) b.pulse(*o);
    for (const auto& in : inner) {
      if (in) b.pulse(*in);
      b.evolve();
      if (in) b.pulse(*in);
    }
    if (o) b.pulse(*o);
  }
  return std::move(b).build();
}

/// Single-qubit XY4: pulses X, Y, X, Y after each interval.
inline DDSequence xy4_preset() {
  detail::SequenceBuilder b(1);
  const PauliString x({Pauli::X}), y({Pauli::Y});
  b.evolve().pulse(x).evolve().pulse(y).evolve().pulse(x).evolve().pulse(y);
  return std::move(b).build();
}

/// Repeats a sequence back to back.
inline DDSequence repeat(const DDSequence& seq, int n_cycles) {
  if (n_cycles < 1) throw std::invalid_argument("cycle count must be >= 1");
  detail::SequenceBuilder b(seq.n_qubits());
  for (int c = 0; c < n_cycles; ++c)
    for (const auto& s : seq.steps()) {
      if (const auto* p = std::get_if<Pulse>(&s)) b.pulse(p->op);
      else b.evolve();
    }
  return std::move(b).build();
}

/// Frames F_k: product of every pulse applied before interval k, later pulses
/// on the left. `after_cycle` is the product of all pulses.
struct TogglingFrame {
  std::vector<PauliString> frames;
  PauliString after_cycle;
};

inline TogglingFrame toggling_frames(const DDSequence& seq) {
  TogglingFrame out;
  auto acc = PauliString::identity(seq.n_qubits());
  for (const auto& s : seq.steps()) {
    if (const auto* p = std::get_if<Pulse>(&s)) acc = p->op * acc;
    else out.frames.push_back(acc);
  }
  out.after_cycle = acc;
  return out;
}

/// Sign s_k with F_k^dagger E F_k = s_k E, one per interval.
inline std::vector<int> interval_signs(const DDSequence& seq, const PauliString& error) {
  if (error.phase() != Phase::plus_one())
    throw std::invalid_argument("error operator must carry phase +1");
  std::vector<int> out;
  for (const auto& f : toggling_frames(seq).frames)
    out.push_back(conjugate_by_frame(f, error).phase().sign());
  return out;
}

/// Sum of interval signs; zero means the error cancels to first order.
inline int first_order_sum(const DDSequence& seq, const PauliString& error) {
  int sum = 0;
  for (int s : interval_signs(seq, error)) sum += s;
  return sum;
}

struct ScheduleEntry {
  int sign = 1;
  CouplingForm form = CouplingForm::Plain;
  bool operator==(const ScheduleEntry&) const = default;
};

/// Per-step coupling sign and form for one gate kind over a 16-interval cycle.
struct CouplingSchedule {
  GateKind kind = GateKind::FlipFlop;
  std::vector<ScheduleEntry> steps;

  /// Entry for a 1-based interval, wrapping around for repeated cycles.
  const ScheduleEntry& at(int interval) const {
    return steps.at(static_cast<std::size_t>(interval - 1) % steps.size());
  }
};

/// Coupling settings per evolution step, transcribed from the published table.
inline CouplingSchedule coupling_schedule(GateKind kind) {
  auto from = [kind](const std::array<int, 16>& signs, CouplingForm form,
                     const std::array<bool, 16>& starred) {
    CouplingSchedule s{kind, {}};
    for (std::size_t k = 0; k < 16; ++k)
      s.steps.push_back({signs[k], starred[k] ? CouplingForm::DoubleExcitation : form});
    return s;
  };
  constexpr std::array<bool, 16> none{};
  switch (kind) {
    case GateKind::FlipFlop:
      return from({1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1, -1, -1}, CouplingForm::FlipFlop,
                  {0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1});
    case GateKind::ZZ:
      return from({1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1}, CouplingForm::Plain, none);
    case GateKind::XX:
      return from({1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1, -1, -1}, CouplingForm::Plain, none);
    case GateKind::ZX:
      return from({1, -1, -1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1, 1, 1, -1}, CouplingForm::Plain, none);
  }
  throw std::invalid_argument("unknown gate kind");
}

/// Same coupling in every step: what a naive, unscheduled gate would do.
inline CouplingSchedule constant_schedule(GateKind kind) {
  const auto form = kind == GateKind::FlipFlop ? CouplingForm::FlipFlop : CouplingForm::Plain;
  return CouplingSchedule{kind, std::vector<ScheduleEntry>(16, ScheduleEntry{1, form})};
}

struct ScheduleCheck {
  bool ok = true;
  std::optional<int> first_failing_step;
  double max_error = 0.0;
  explicit operator bool() const { return ok; }
};

/// Checks F_k^dagger H_k F_k == target for every interval, where H_k is the
/// scheduled coupling at unit strength.
inline ScheduleCheck verify_schedule(const DDSequence& seq, const CouplingSchedule& sched,
                                     const Operator& target, double tolerance = 1e-12) {
  if (target.rows() != 4 || target.cols() != 4 || seq.n_qubits() != 2)
    throw DimensionError("schedule verification needs a two-qubit sequence and 4x4 target");
  ScheduleCheck out;
  const auto frames = toggling_frames(seq).frames;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const int step = static_cast<int>(k) + 1;
    const auto& e = sched.at(step);
    const Operator f = to_matrix(frames[k]);
    const Operator h = scheduled_coupling(sched.kind, e.sign, e.form, 1.0);
    const double err = max_abs(f.adjoint() * h * f - target);
    out.max_error = std::max(out.max_error, err);
    if (err > tolerance && out.ok) {
      out.ok = false;
      out.first_failing_step = step;
    }
  }
  return out;
}

/// Line-oriented text form: "PULSE <string>" / "EVOLVE <index>".
inline void write_sequence(std::ostream& os, const DDSequence& seq) {
  for (const auto& s : seq.steps()) {
    if (const auto* p = std::get_if<Pulse>(&s)) os << "PULSE " << p->op.str() << '\n';
    else os << "EVOLVE " << std::get<Interval>(s).index << '\n';
  }
}

inline std::string to_text(const DDSequence& seq) {
  std::ostringstream os;
  write_sequence(os, seq);
  return os.str();
}

inline DDSequence read_sequence(std::istream& is) {
  std::vector<Step> steps;
  std::optional<std::size_t> n;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind, arg;
    if (!(ls >> kind)) continue;
    if (!(ls >> arg)) throw std::invalid_argument("line " + std::to_string(line_no) + ": missing argument");
    if (kind == "PULSE") {
      auto p = PauliString::parse(arg);
      if (n && *n != p.n_qubits()) throw DimensionError("line " + std::to_string(line_no) + ": qubit count changes");
      n = p.n_qubits();
      steps.emplace_back(Pulse{std::move(p)});
    } else if (kind == "EVOLVE") {
      steps.emplace_back(Interval{std::stoi(arg)});
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown record '" + kind + "'");
    }
  }
  return DDSequence(n.value_or(1), std::move(steps));
}

}  // namespace ddgate
