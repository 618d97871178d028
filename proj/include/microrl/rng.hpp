#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace microrl {

// splitmix64 finalizer. Used to derive well-separated substream seeds from a
// master seed, so episode i is reproducible independently of episode count.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for substream `stream` of `master`. stream 0 is distinct from the
// master seed itself.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(master + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

template <class R>
concept UnitRandomSource = requires(R r) {
  { r.unit() } -> std::convertible_to<double>;
};

// Deterministic random stream with platform-independent output. Draws come
// from mt19937_64 directly; uniform [0,1) doubles are built from the top 53
// bits rather than std::uniform_real_distribution, whose output is not
// pinned by the standard.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  static RandomStream substream(std::uint64_t master, std::uint64_t stream) {
    return RandomStream(substream_seed(master, stream));
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Samples an index from a finite distribution given as (payload, probability)
// pairs. Probability mass at the tail absorbs rounding slack, so the draw is
// total whenever the weights sum to ~1. One unit() draw per call.
template <UnitRandomSource R, class Payload>
Payload sample_categorical(R& rng, std::span<const std::pair<Payload, double>> entries) {
  double u = rng.unit();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    acc += entries[i].second;
    if (u < acc) return entries[i].first;
  }
  return entries.back().first;
}

}  // namespace microrl
