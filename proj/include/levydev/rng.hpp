#pragma once

#include <cstdint>
#include <limits>

namespace levydev {

std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256** keyed by (seed, stream). Every replicate or increment gets its
// own stream, so results do not depend on how work is split across threads.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform_open();

 private:
  std::uint64_t s_[4];
};

}  // namespace levydev
