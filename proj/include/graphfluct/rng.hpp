#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace gf {

// Philox4x32-10 block function: maps (counter, key) to 128 random bits.
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key);

// Purpose tags for independent sub-streams under one seed.
enum class Stream : uint32_t {
  Graph = 1,
  Init = 2,
  Noise = 3,
  TieBreak = 4,
  Trial = 5,
  Spde = 6,
  Search = 7,
};

// Counter-based generator. Every (seed, stream, a, b) tuple names an independent
// sequence, so replica r or row i can be regenerated without touching the others.
class Rng {
 public:
  using result_type = uint64_t;

  Rng(uint64_t seed, Stream stream, uint64_t a = 0, uint64_t b = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  double normal() { return normal_(*this); }

 private:
  void refill();

  std::array<uint32_t, 2> key_{};
  uint64_t stream_id_ = 0;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

uint64_t mix64(uint64_t x);

}  // namespace gf
