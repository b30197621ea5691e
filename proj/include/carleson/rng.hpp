#pragma once

#include <array>
#include <cstdint>

namespace carleson {

/// Philox4x32-10 block: maps (counter, key) to 128 random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based generator. The stream of a (seed, stream) pair is a pure
/// function of those two numbers, so any partition of work into substreams
/// reproduces bit-for-bit regardless of which thread draws it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller; uses only libm, no std distributions.
  double normal();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes a parent seed with a label into an independent child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace carleson
