#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace brwlab {

inline constexpr const char* kGeneratorName = "philox4x64-10";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based generator: 10 rounds of the Philox 4x64 bijection per block.
// Every (key, stream) pair is an independent stream of 2^66 values; state is
// four counter words plus a two-word key, so streams are cheap to derive and
// replay is exact across platforms. Known-answer blocks are pinned in tests.
class Rng {
 public:
  Rng() : Rng(0, 0) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    key_ = {splitmix64(seed), splitmix64(seed ^ 0x5851F42D4C957F2Dull)};
    ctr_ = {0, stream, 0, 0};
  }

  // Full-state construction, used by the known-answer tests.
  static Rng from_raw(const std::array<std::uint64_t, 2>& key,
                      const std::array<std::uint64_t, 4>& counter) {
    Rng r;
    r.key_ = key;
    r.ctr_ = counter;
    r.lane_ = 4;
    r.have_normal_ = false;
    return r;
  }

  std::uint64_t next_u64() {
    if (lane_ == 4) refill();
    return block_[lane_++];
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
  // inversions are safe without special cases.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller; the second member of each pair is cached.
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.28318530717958647692 * u2;
    cached_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

 private:
  void refill() {
    std::uint64_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
    std::uint64_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      unsigned __int128 p0 = static_cast<unsigned __int128>(0xD2E7470EE14C6C93ull) * c0;
      unsigned __int128 p1 = static_cast<unsigned __int128>(0xCA5A826395121157ull) * c2;
      std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
      std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
      std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
      std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += 0x9E3779B97F4A7C15ull;
      k1 += 0xBB67AE8584CAA73Bull;
    }
    block_ = {c0, c1, c2, c3};
    ++ctr_[0];
    lane_ = 0;
  }

  std::array<std::uint64_t, 2> key_{};
  std::array<std::uint64_t, 4> ctr_{};
  std::array<std::uint64_t, 4> block_{};
  int lane_ = 4;
  bool have_normal_ = false;
  double cached_normal_ = 0.0;
};

// Folds a path of identifiers (experiment id, cell, replicate, ...) into one
// stream id, so replicate streams are reproducible regardless of scheduling.
inline std::uint64_t derive_stream(std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = 0x8C62B1FDDDF2B0F1ull;
  for (std::uint64_t e : path) h = splitmix64(h ^ e);
  return h;
}

}  // namespace brwlab
