#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddgate/model.hpp"

namespace ddgate {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combines a seed with further identifiers into one well-mixed seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

/// What a stream's draws are used for. Each trial owns one stream per purpose.
enum class StreamPurpose : std::uint64_t { Trajectory = 1, Zeta = 2, State = 3 };

/// Deterministic random stream keyed by (master seed, trial, purpose).
/// Uses mt19937_64, whose output sequence is fixed by the standard, and
/// derives variates by hand so results match across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t trial, StreamPurpose purpose)
      : engine_(derive_seed(master_seed, trial, static_cast<std::uint64_t>(purpose))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Piecewise-constant error coefficients, one row of 15 channels per segment.
struct NoiseTrajectory {
  double segment_duration = 0.0;  // seconds
  std::vector<ErrorCoefficients> segments;

  std::size_t n_segments() const { return segments.size(); }

  static NoiseTrajectory zero(std::size_t n_segments, double segment_duration) {
    return {segment_duration, std::vector<ErrorCoefficients>(n_segments)};
  }
  static NoiseTrajectory constant(std::size_t n_segments, double segment_duration, double value) {
    return {segment_duration,
            std::vector<ErrorCoefficients>(n_segments, ErrorCoefficients::constant(value))};
  }
};

/// Default sampling range of every channel: [2 pi 1 MHz, 2 pi 10 MHz].
inline constexpr double kDefaultNoiseLo = 1.0 * kMHz;
inline constexpr double kDefaultNoiseHi = 10.0 * kMHz;
inline constexpr std::size_t kDefaultSegmentsPerCycle = 800;

/// Draws every channel of every segment independently from U[lo, hi].
/// With random_sign each value is also negated with probability 1/2.
inline NoiseTrajectory sample_trajectory(RngStream& rng, std::size_t n_segments, double segment_duration,
                                         double lo = kDefaultNoiseLo, double hi = kDefaultNoiseHi,
                                         bool random_sign = false) {
  if (lo > hi) throw std::invalid_argument("noise range has lo > hi");
  if (n_segments < 1) throw std::invalid_argument("trajectory needs at least one segment");
  NoiseTrajectory t{segment_duration, std::vector<ErrorCoefficients>(n_segments)};
  for (auto& seg : t.segments)
    for (auto& v : seg.values) {
      v = lo == hi ? lo : rng.uniform(lo, hi);
      if (random_sign && (rng.next_u64() >> 63)) v = -v;
    }
  return t;
}

/// CSV audit dump: segment index then the 15 channel coefficients in rad/s.
inline void write_trajectory_csv(std::ostream& os, const NoiseTrajectory& t) {
  os << "segment";
  for (auto name : kChannelNames) os << ',' << name;
  os << '\n';
  const auto old_prec = os.precision(17);
  for (std::size_t s = 0; s < t.segments.size(); ++s) {
    os << s;
    for (double v : t.segments[s].values) os << ',' << v;
    os << '\n';
  }
  os.precision(old_prec);
}

/// Over-rotation model for pulses exp(-i (pi/2 + zeta) sigma).
struct PulseErrorModel {
  enum class Kind { Ideal, Gaussian };
  Kind kind = Kind::Ideal;
  double mean = 0.0;  // radians
  double stddev = 0.0;

  static PulseErrorModel ideal() { return {}; }
  static PulseErrorModel gaussian(double mean, double stddev) {
    if (!(stddev >= 0.0)) throw std::invalid_argument("pulse error std must be >= 0");
    return {Kind::Gaussian, mean, stddev};
  }
  /// mean = std = pi/500
  static PulseErrorModel gauss1() { return gaussian(std::numbers::pi / 500, std::numbers::pi / 500); }
  /// mean = std = pi/200
  static PulseErrorModel gauss2() { return gaussian(std::numbers::pi / 200, std::numbers::pi / 200); }

  bool operator==(const PulseErrorModel&) const = default;
};

inline double sample_zeta(RngStream& rng, const PulseErrorModel& model) {
  if (model.kind == PulseErrorModel::Kind::Ideal) return 0.0;
  return model.mean + model.stddev * rng.normal();
}

}  // namespace ddgate
