#pragma once

// Seedable random streams for reproducible parallel sampling. A stream is
// fully determined by (seed, stream_id); distinct stream ids give
// statistically independent sequences, so one stream per data source makes
// results identical regardless of how work is scheduled across workers.

#include <cmath>
#include <cstdint>

namespace hiermc {

class RandomStream {
  using u128 = unsigned __int128;

 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    inc_ = (static_cast<u128>(stream_id) << 1) | 1u;
    state_ = 0;
    step();
    state_ += seed;
    step();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Fresh stream with the same seed and the given stream id.
  RandomStream substream(std::uint64_t stream_id) const {
    return RandomStream(seed_, stream_id);
  }

  /// Stream under a decorrelated seed, for a second sampling phase that
  /// must not replay the draws of streams derived from the original seed.
  RandomStream reseeded(std::uint64_t salt) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return RandomStream(z ^ (z >> 31), stream_id_);
  }

  std::uint64_t next_u64() {
    u128 old = state_;
    step();
    auto xored = static_cast<std::uint64_t>((old >> 64) ^ old);
    auto rot = static_cast<unsigned>(old >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  /// Uniform draw in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw (ziggurat; one word per draw on the common path).
  double normal();

 private:
  static constexpr u128 multiplier() {
    return (static_cast<u128>(0x2360ed051fc65da4ULL) << 64) |
           0x4385df649fccf645ULL;
  }
  void step() { state_ = state_ * multiplier() + inc_; }

  u128 state_{};
  u128 inc_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace hiermc
