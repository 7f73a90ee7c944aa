#pragma once

#include <array>
#include <cstdint>

namespace rwlab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// A stream is identified by (key, stream id); blocks are addressed by a
/// 64-bit counter, so streams never overlap and need no shared state.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block bijection(Block counter, Key key);

  Philox4x32(std::uint64_t key, std::uint64_t stream_id);

  /// Next 64 uniformly distributed bits.
  std::uint64_t next_u64();

  /// Uniform double in the open interval (0, 1) with 53-bit resolution.
  double next_uniform();

 private:
  Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int buffered_words_ = 0;  // 64-bit words left in buffer_ (0..2)
};

/// Standard normal variates drawn from a Philox stream by Box-Muller.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream_id) : uniform_(seed, stream_id) {}

  double next();
  double next_uniform() { return uniform_.next_uniform(); }
  std::uint64_t next_u64() { return uniform_.next_u64(); }

 private:
  Philox4x32 uniform_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent seeds from a base seed.
std::uint64_t mix64(std::uint64_t x);

}  // namespace rwlab
