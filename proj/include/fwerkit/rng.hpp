#ifndef FWERKIT_RNG_HPP
#define FWERKIT_RNG_HPP

#include <cstdint>

namespace fwerkit {

// Philox4x32-10 counter-based generator (Salmon et al. 2011). Each (seed,
// stream) pair is an independent stream, so resample i and replication r can
// draw from stream i or r and get identical values no matter which thread
// evaluates them or in what order.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint64_t next_u64() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
    std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
    ++counter_;
    std::uint32_t x0 = c0, x1 = c1, x2 = stream_lo_, x3 = stream_hi_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t m0 = 0xD2511F53ull * x0;
      const std::uint64_t m1 = 0xCD9E8D57ull * x2;
      const std::uint32_t y0 = static_cast<std::uint32_t>(m1 >> 32) ^ x1 ^ k0;
      const std::uint32_t y1 = static_cast<std::uint32_t>(m1);
      const std::uint32_t y2 = static_cast<std::uint32_t>(m0 >> 32) ^ x3 ^ k1;
      const std::uint32_t y3 = static_cast<std::uint32_t>(m0);
      x0 = y0; x1 = y1; x2 = y2; x3 = y3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    spare_ = (static_cast<std::uint64_t>(x2) << 32) | x3;
    have_spare_ = true;
    return (static_cast<std::uint64_t>(x0) << 32) | x1;
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw > limit);
    return draw % bound;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per pair.
  double next_gaussian();

 private:
  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
  double gauss_spare_ = 0.0;
  bool have_gauss_spare_ = false;
};

}  // namespace fwerkit

#endif
