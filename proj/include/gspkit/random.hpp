#pragma once

#include <cstdint>

namespace gspkit {

// Counter-based generator: draw i of stream s under seed k is
//   splitmix64(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15)
// with key(k, s) = splitmix64(k ^ splitmix64(s + 0x632BE59BD9B4E019)).
// Streams are independent of each other and of evaluation order, so
// columns of a synthesized signal matrix can be generated in parallel.
//
// Normals use Box-Muller on two consecutive uniforms and return both
// variates in turn.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gspkit
