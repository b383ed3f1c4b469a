#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ddgate/noise.hpp"
#include "ddgate/pauli.hpp"

namespace ddgate {

using StateVector = Eigen::VectorXcd;

/// Haar-random pure state: independent standard complex Gaussians, normalised.
inline StateVector random_state(RngStream& rng, Eigen::Index dim = 4) {
  StateVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(k) = Complex(re, im);
  }
  return v / v.norm();
}

/// |<ideal|actual>|^2
inline double state_fidelity(const StateVector& ideal, const StateVector& actual) {
  if (ideal.size() != actual.size()) throw DimensionError("state dimensions differ");
  constexpr double tol = 1e-6;
  if (std::abs(ideal.norm() - 1.0) > tol || std::abs(actual.norm() - 1.0) > tol)
    throw std::invalid_argument("state_fidelity needs normalised states");
  return std::min(1.0, std::norm(ideal.dot(actual)));
}

struct FidelityReport {
  double mean = 0.0;
  double std = 0.0;  // unbiased sample standard deviation
  std::size_t n_states = 0;
  std::vector<double> per_state;

  static FidelityReport from_samples(std::vector<double> samples) {
    FidelityReport r;
    r.n_states = samples.size();
    double sum = 0.0;
    for (double f : samples) sum += f;
    r.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
      double ss = 0.0;
      for (double f : samples) ss += (f - r.mean) * (f - r.mean);
      r.std = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    }
    r.per_state = std::move(samples);
    return r;
  }
};

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. Results must be
/// written by index so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// Produces the actual gate executed for trial i (one fresh noise realisation).
using TrialPropagator = std::function<Operator(std::size_t trial)>;

/// Mean over n_states Haar states of |<U_ideal psi | U_i psi>|^2, where state
/// i is drawn from the (seed, i, State) stream and paired with trial i.
inline FidelityReport average_gate_fidelity(const Operator& ideal, const TrialPropagator& actual,
                                            std::size_t n_states, std::uint64_t seed,
                                            unsigned threads = 1) {
  if (n_states < 1) throw std::invalid_argument("need at least one state");
  std::vector<double> fids(n_states);
  parallel_for(n_states, threads, [&](std::size_t i) {
    RngStream rng(seed, i, StreamPurpose::State);
    const StateVector psi = random_state(rng, ideal.rows());
    const Operator u = actual(i);
    const StateVector a = u * psi;
    fids[i] = state_fidelity(ideal * psi, a / a.norm());
  });
  return FidelityReport::from_samples(std::move(fids));
}

}  // namespace ddgate
