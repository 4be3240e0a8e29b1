#ifndef BMC_RANDOM_HPP
#define BMC_RANDOM_HPP

#include <cstdint>
#include <random>

namespace bmc {

/// SplitMix64 finalizer. Used to derive substream identifiers.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combines identifiers into one 64-bit substream id, order sensitive.
constexpr std::uint64_t combine_ids(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

/// A reproducible random stream identified by (seed, stream_id).
///
/// The engine is a 64-bit Mersenne Twister whose state is filled through
/// std::seed_seq from the hashed seed and stream id, so distinct stream ids
/// under one seed give unrelated sequences. Identical (seed, stream_id)
/// pairs yield identical draws.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// A fresh stream under the same seed whose id is derived from this
  /// stream's id and `child`.
  RandomStream substream(std::uint64_t child) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Exponential with unit rate.
  double exponential();

  engine_type& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  engine_type engine_;
  std::normal_distribution<double> standard_normal_{0.0, 1.0};
};

}  // namespace bmc

#endif  // BMC_RANDOM_HPP
