#pragma once

#include <cstdint>
#include <string_view>

namespace csched {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Named, splittable deterministic stream. Every draw in the system is a pure
// function of (seed, stream name, child path), independent of thread schedule
// and platform, which is what makes reports byte-reproducible.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view name)
      : state_(mix(seed, detail::fnv1a(name))) {}

  RngStream child(std::uint64_t index) const {
    return RngStream(mix(state_, 0x9ddfea08eb382d69ULL ^ index));
  }

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  // 53 uniform bits; numerator of an exact dyadic rational draw in [0, 1).
  std::uint64_t next_u53() { return next_u64() >> 11; }

  double next_unit() { return static_cast<double>(next_u53()) * 0x1.0p-53; }

  // Uniform in [0, bound); bound > 0. Rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t v = next_u64();
      if (v >= threshold) return v % bound;
    }
  }

  std::int64_t next_in(std::int64_t lo, std::int64_t hi) {  // inclusive range
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return detail::splitmix64(s);
  }

  std::uint64_t state_;
};

}  // namespace csched
