#pragma once

#include <cstdint>

namespace stabletilt {

/// Counter-derived random stream. Stream i of a master seed is seeded by
/// hashing (master_seed, i), so path i draws the same variates no matter how
/// work is scheduled across threads. The generator core is xoshiro256++ and
/// all distributions are implemented here, which keeps results bit-stable
/// across standard-library versions.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform01();

  /// Standard normal (Marsaglia polar, one spare cached).
  double normal();

  /// Exponential with rate 1.
  double exponential();

  /// Uniform sign, +1 or -1.
  double sign();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stabletilt
