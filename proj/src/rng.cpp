#include "graphfluct/rng.hpp"

namespace gf {

namespace {
constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t prod = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(prod >> 32);
  lo = static_cast<uint32_t>(prod);
}
}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed, Stream stream, uint64_t a, uint64_t b) {
  key_ = {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  stream_id_ = mix64(mix64(mix64(static_cast<uint64_t>(stream)) ^ a) ^ (b + 0x632BE59BD9B4E019ull));
}

void Rng::refill() {
  const std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
                                       static_cast<uint32_t>(stream_id_),
                                       static_cast<uint32_t>(stream_id_ >> 32)};
  buf_ = philox4x32_10(ctr, key_);
  ++block_;
  pos_ = 0;
}

Rng::result_type Rng::operator()() {
  if (pos_ >= 4) refill();
  const uint64_t v = (static_cast<uint64_t>(buf_[pos_ + 1]) << 32) | buf_[pos_];
  pos_ += 2;
  return v;
}

}  // namespace gf
