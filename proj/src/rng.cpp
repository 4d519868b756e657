#include "lrdfield/rng.hpp"

#include <array>
#include <cmath>

#include "lrdfield/mathutil.hpp"

namespace lrdfield {

namespace {
constexpr uint32_t kWeylA = 0x9E3779B9u;
constexpr uint32_t kWeylB = 0xBB67AE85u;
constexpr uint32_t kMultA = 0xD2511F53u;
constexpr uint32_t kMultB = 0xCD9E8D57u;

inline void philox_round(std::array<uint32_t, 4>& ctr, const std::array<uint32_t, 2>& key) {
  uint64_t p0 = uint64_t(kMultA) * ctr[0];
  uint64_t p1 = uint64_t(kMultB) * ctr[2];
  uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
  uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}
}  // namespace

PhiloxStream::PhiloxStream(uint64_t seed, uint64_t stream) {
  key_ = {uint32_t(seed), uint32_t(seed >> 32)};
  counter_ = {0u, 0u, uint32_t(stream), uint32_t(stream >> 32)};
}

void PhiloxStream::next_block() {
  std::array<uint32_t, 4> ctr = counter_;
  std::array<uint32_t, 2> key = key_;
  for (int r = 0; r < 10; ++r) {
    philox_round(ctr, key);
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  block_ = ctr;
  if (++counter_[0] == 0u) ++counter_[1];
  pos_ = 0;
}

uint32_t PhiloxStream::next_u32() {
  if (pos_ >= 4) next_block();
  return block_[pos_++];
}

void PhiloxStream::skip_blocks(uint64_t n) {
  uint64_t c = (uint64_t(counter_[1]) << 32 | counter_[0]) + n;
  counter_[0] = uint32_t(c);
  counter_[1] = uint32_t(c >> 32);
  pos_ = 4;
}

double PhiloxStream::uniform() {
  return (next_u32() + 0.5) * (1.0 / 4294967296.0);
}

namespace {

// Marsaglia-Tsang ziggurat tables for the standard normal, 128 layers.
struct ZigguratTables {
  std::array<std::uint32_t, 128> kn;
  std::array<double, 128> wn;
  std::array<double, 128> fn;
  double r = 3.442619855899;

  ZigguratTables() {
    const double m1 = 2147483648.0;
    const double vn = 9.91256303526217e-3;
    double dn = r, tn = r;
    double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = std::uint32_t((dn / q) * m1);
    kn[1] = 0;
    wn[0] = q / m1;
    wn[127] = dn / m1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = std::uint32_t((dn / tn) * m1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m1;
    }
  }
};

const ZigguratTables& zig() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

double PhiloxStream::normal() {
  const ZigguratTables& t = zig();
  for (;;) {
    std::int32_t hz = std::int32_t(next_u32());
    int iz = hz & 127;
    std::uint32_t mag = std::uint32_t(hz < 0 ? -std::int64_t(hz) : std::int64_t(hz));
    if (mag < t.kn[iz]) return hz * t.wn[iz];
    if (iz == 0) {
      // tail beyond r
      double x, y;
      do {
        x = -std::log(uniform()) / t.r;
        y = -std::log(uniform());
      } while (y + y < x * x);
      return (hz > 0) ? t.r + x : -(t.r + x);
    }
    double x = hz * t.wn[iz];
    if (t.fn[iz] + uniform() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x)) return x;
  }
}

}  // namespace lrdfield
