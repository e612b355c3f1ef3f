#pragma once

#include <cstdint>

namespace coop {

// splitmix64: fully specified 64-bit generator so seeded placement is
// reproducible across platforms and reimplementations in other languages.
// Reference sequence for seed 0: 0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, ...
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Bounded draw, defined as plain modulo so other implementations agree
  // bit-for-bit. The modulo bias is irrelevant at world-building scale.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace coop
