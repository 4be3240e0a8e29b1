#include "bmc/random.hpp"

#include <array>
#include <cmath>

namespace bmc {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::uint64_t a = mix64(seed);
  const std::uint64_t b = combine_ids(seed, stream_id);
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RandomStream RandomStream::substream(std::uint64_t child) const {
  return RandomStream(seed_, combine_ids(stream_id_, child));
}

double RandomStream::uniform() {
  // 53 random bits, shifted by half an ulp so that 0 and 1 are excluded.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return standard_normal_(engine_); }

double RandomStream::exponential() { return -std::log(uniform()); }

}  // namespace bmc
