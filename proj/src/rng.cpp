#include "ldnet/rng.hpp"

#include <cmath>

namespace ldnet::rng {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(uint32_t* c, uint32_t k0, uint32_t k1) {
  uint64_t p0 = uint64_t(kMul0) * c[0];
  uint64_t p1 = uint64_t(kMul1) * c[2];
  uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
  uint32_t hi1 = uint64_t(p1) >> 32, lo1 = uint32_t(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

}  // namespace

Block philox4x32(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3,
                 uint32_t k0, uint32_t k1) {
  Block b{{c0, c1, c2, c3}};
  for (int r = 0; r < 10; ++r) {
    round_once(b.x, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return b;
}

std::pair<double, double> Stream::normal_pair(Draw purpose, uint32_t i0,
                                              uint32_t i1, uint32_t i2) const {
  Block b = philox4x32(static_cast<uint32_t>(purpose), i0, i1, i2,
                       uint32_t(seed_), uint32_t(seed_ >> 32));
  uint64_t w1 = (uint64_t(b.x[0]) << 32) | b.x[1];
  uint64_t w2 = (uint64_t(b.x[2]) << 32) | b.x[3];
  // u1 in (0,1], u2 in [0,1): r = 0 is reachable, log(0) is not.
  double u1 = (double(w1 >> 11) + 1.0) * 0x1.0p-53;
  double u2 = double(w2 >> 11) * 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

double Stream::normal(Draw purpose, uint32_t i0, uint32_t i1, uint32_t i2) const {
  return normal_pair(purpose, i0, i1, i2).first;
}

}  // namespace ldnet::rng
