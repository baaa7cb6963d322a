#pragma once

#include <cstdint>
#include <random>

namespace maxlin {

// Reproducible stream keyed by (seed, stream_id). Streams with different ids
// are seeded through std::seed_seq from both keys and never share state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1), 53 bits.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Seed for an independent family of streams (e.g. one per experiment repetition).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace maxlin
