#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddgate/model.hpp"
#include "ddgate/pauli.hpp"
#include "ddgate/sequence.hpp"

namespace ddgate {

struct VerifyOptions {
  enum class Target { Full, Nested, XY4 };
  Target target = Target::Full;
  /// Flips the sign of this 1-based step in every schedule (fault injection).
  std::optional<int> corrupt_step;
};

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> lines;   // detail, one check per line
  std::string summary;

  void fail(std::string msg) {
    ok = false;
    lines.push_back("FAIL " + std::move(msg));
  }
  void pass(std::string msg) { lines.push_back("ok   " + std::move(msg)); }
};

namespace detail {

inline void verify_single_qubit(VerifyReport& r) {
  const auto seq = xy4_preset();
  int cancelled = 0;
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const PauliString e({p});
    const int sum = first_order_sum(seq, e);
    if (sum == 0) {
      ++cancelled;
      r.pass("xy4 cancels " + e.str());
    } else {
      r.fail("xy4 leaves " + e.str() + " with first-order sum " + std::to_string(sum));
    }
  }
  if (!toggling_frames(seq).after_cycle.is_identity()) r.fail("xy4 pulses do not multiply to identity");
  r.summary = std::to_string(cancelled) + "/3 single-qubit errors cancelled";
}

inline void verify_two_qubit(VerifyReport& r, const DDSequence& seq, const VerifyOptions& o) {
  const auto errors = error_set();
  const auto frames = toggling_frames(seq);

  int cancelled = 0;
  for (const auto& e : errors) {
    const int sum = first_order_sum(seq, e);
    if (sum == 0) ++cancelled;
    else r.fail("error " + e.str() + " survives with first-order sum " + std::to_string(sum));
  }
  if (cancelled == static_cast<int>(errors.size())) r.pass("all 15 error operators cancel to first order");

  for (const auto& e : errors) {
    Operator acc = Operator::Zero(4, 4);
    const Operator m = to_matrix(e);
    for (const auto& f : frames.frames) {
      const Operator fm = to_matrix(f);
      acc += fm.adjoint() * m * fm;
    }
    if (max_abs(acc) > 1e-12) r.fail("matrix frame average of " + e.str() + " is nonzero");
  }

  if (frames.after_cycle.is_identity()) r.pass("pulse product is identity up to phase " + frames.after_cycle.str());
  else r.fail("pulse product is " + frames.after_cycle.str() + ", not identity");

  const auto nested = toggling_frames(build_nested_cycle()).frames;
  bool same = nested.size() == frames.frames.size();
  for (std::size_t k = 0; same && k < nested.size(); ++k) same = nested[k].same_letters(frames.frames[k]);
  if (same) r.pass("nested and simplified cycles have identical toggling frames");
  else r.fail("nested and simplified toggling frames differ");

  int verified = 0;
  for (auto kind : kAllGateKinds) {
    auto sched = coupling_schedule(kind);
    if (o.corrupt_step) {
      auto& entry = sched.steps.at(static_cast<std::size_t>(*o.corrupt_step - 1));
      entry.sign = -entry.sign;
    }
    const auto check = verify_schedule(seq, sched, target_coupling(kind, 1.0));
    if (check) {
      ++verified;
      r.pass("schedule " + gate_name(kind) + " keeps the target coupling in all 16 steps");
    } else {
      r.fail("schedule " + gate_name(kind) + " breaks at step " + std::to_string(*check.first_failing_step));
    }
  }
  r.summary = std::to_string(cancelled) + "/15 error operators cancelled; " + std::to_string(verified) +
              "/4 schedules verified";
}

}  // namespace detail

/// Symbolic verification suite: first-order cancellation of every error,
/// nested vs simplified frames, net pulse identity, and all coupling schedules.
inline VerifyReport run_verification(const VerifyOptions& o = {}) {
  VerifyReport r;
  if (o.corrupt_step && (*o.corrupt_step < 1 || *o.corrupt_step > 16))
    throw std::invalid_argument("corrupt step must lie in 1..16");
  switch (o.target) {
    case VerifyOptions::Target::XY4: detail::verify_single_qubit(r); break;
    case VerifyOptions::Target::Nested: detail::verify_two_qubit(r, build_nested_cycle(), o); break;
    case VerifyOptions::Target::Full: detail::verify_two_qubit(r, build_full_cycle(), o); break;
  }
  return r;
}

}  // namespace ddgate
