#pragma once

#include <array>
#include <cstdint>

namespace csg {

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw,
/// SC'11). Chosen because streams are pure functions of (key, counter):
/// per-sample streams split by counter are reproducible across thread
/// counts and implementations.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// One logical random stream: key = seed, counter = (block, stream).
/// next_double yields 53-bit uniforms in [0, 1).
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double next_double();

private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int cursor_ = 4; // empty
};

} // namespace csg
