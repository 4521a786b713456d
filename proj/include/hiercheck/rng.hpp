#ifndef HIERCHECK_RNG_HPP
#define HIERCHECK_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>

namespace hiercheck {

// SplitMix64 finalizer; used both to expand seeds into generator state and to
// derive independent substream keys from (seed, task ids).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream key for a task identified by a path of ids under a master seed.
// Every parallel unit of work (group left out, replicate index, ...) gets its
// own key so draws never collide and runs replay exactly regardless of the
// thread count.
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t key = mix64(seed);
  for (std::uint64_t id : path) key = mix64(key ^ mix64(id));
  return key;
}

// xoshiro256++ with hand-rolled distribution samplers. The standard library
// distributions are implementation-defined, so chains would not replay across
// toolchains; everything below is pinned bit-for-bit by the seed alone.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s = mix64(s);
      word = s;
    }
  }

  static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return RngStream(derive_key(seed, path));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1); safe as a log() argument.
  double uniform_pos() noexcept {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  // Standard normal (Box-Muller, no cached second value so replay depends on
  // nothing but the call sequence).
  double normal() noexcept {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double var) noexcept { return mean + std::sqrt(var) * normal(); }

  // Gamma(shape, rate 1) via Marsaglia-Tsang, with the power boost for
  // shape < 1.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double gamma(double shape, double rate) { return gamma(shape) / rate; }

  // Inverse-gamma with the given shape and rate. Written as rate / Gamma(shape)
  // so the draw is exactly scale-equivariant in the rate for a fixed stream.
  double inv_gamma(double shape, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("inv_gamma: rate must be positive");
    return rate / gamma(shape);
  }

  // Standard Student-t with nu degrees of freedom.
  double student_t(double nu) {
    const double z = normal();
    const double chi2 = 2.0 * gamma(0.5 * nu);
    return z / std::sqrt(chi2 / nu);
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

// Substream ids. One namespace-wide list keeps clashes impossible to miss.
namespace stream_tag {
inline constexpr std::uint64_t gibbs = 1;       // inside fit_posterior
inline constexpr std::uint64_t ppc_fit = 2;     // full-data fit for the regular check
inline constexpr std::uint64_t ppc_draws = 3;   // replicate data for the regular check
inline constexpr std::uint64_t cv_fit = 4;      // leave-one-group-out fits
inline constexpr std::uint64_t cv_draws = 5;    // per-group theta/replicate draws
inline constexpr std::uint64_t full_fit = 6;    // full-data fit for the fast path
inline constexpr std::uint64_t resample = 7;    // importance resampling indices
inline constexpr std::uint64_t marginal = 8;    // Monte Carlo group marginals
inline constexpr std::uint64_t simulate = 9;    // scenario dataset generation
inline constexpr std::uint64_t cal_rep = 10;    // per-replicate check seeds
}  // namespace stream_tag

}  // namespace hiercheck

#endif
