#include "nbldpc/rng.hpp"

#include <cmath>

namespace nbldpc {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(uint32_t c[4], const uint32_t k[2]) {
  uint64_t p0 = uint64_t(kPhiloxM0) * c[0];
  uint64_t p1 = uint64_t(kPhiloxM1) * c[2];
  uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
  uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
  uint32_t n0 = hi1 ^ c[1] ^ k[0];
  uint32_t n1 = lo1;
  uint32_t n2 = hi0 ^ c[3] ^ k[1];
  uint32_t n3 = lo0;
  c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
}

}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t stream_id) {
  key_[0] = uint32_t(seed);
  key_[1] = uint32_t(seed >> 32);
  ctr_hi_[0] = uint32_t(stream_id);
  ctr_hi_[1] = uint32_t(stream_id >> 32);
}

void RngStream::refill() {
  uint32_t c[4] = {uint32_t(block_), uint32_t(block_ >> 32), ctr_hi_[0], ctr_hi_[1]};
  uint32_t k[2] = {key_[0], key_[1]};
  for (int r = 0; r < 10; ++r) {
    philox_round(c, k);
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  buf_[0] = c[0]; buf_[1] = c[1]; buf_[2] = c[2]; buf_[3] = c[3];
  ++block_;
  buf_pos_ = 0;
}

uint32_t RngStream::next_u32() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

uint64_t RngStream::next_u64() {
  uint64_t lo = next_u32();
  uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RngStream::uniform01() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform01_open() {
  return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return gauss_spare_;
  }
  double u1 = uniform01_open();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  gauss_spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

}  // namespace nbldpc
