#pragma once

// 4x4 matrices over F_2 packed into 16 bits: bit 4r+c holds entry (r, c).

#include "galdual/exactmat.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace galdual::gf2 {

using Mat = std::uint16_t;

inline constexpr Mat kIdentity = 0x8421;

constexpr int entry(Mat m, int r, int c) { return (m >> (4 * r + c)) & 1; }
constexpr unsigned row(Mat m, int r) { return (m >> (4 * r)) & 0xF; }

constexpr Mat mul(Mat a, Mat b) {
  Mat out = 0;
  for (int r = 0; r < 4; ++r) {
    unsigned acc = 0;
    for (int c = 0; c < 4; ++c)
      if (entry(a, r, c)) acc ^= row(b, c);
    out |= static_cast<Mat>(acc << (4 * r));
  }
  return out;
}

constexpr Mat transpose(Mat a) {
  Mat out = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (entry(a, r, c)) out |= static_cast<Mat>(1u << (4 * c + r));
  return out;
}

constexpr int rank(Mat a) {
  std::array<unsigned, 4> rows{row(a, 0), row(a, 1), row(a, 2), row(a, 3)};
  int rk = 0;
  for (int c = 0; c < 4; ++c) {
    int p = -1;
    for (int r = rk; r < 4; ++r)
      if ((rows[r] >> c) & 1) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(rows[rk], rows[p]);
    for (int r = 0; r < 4; ++r)
      if (r != rk && ((rows[r] >> c) & 1)) rows[r] ^= rows[rk];
    ++rk;
  }
  return rk;
}

constexpr bool invertible(Mat a) { return rank(a) == 4; }

// Gauss-Jordan on [a | I]; precondition: invertible.
constexpr Mat inverse(Mat a) {
  std::array<unsigned, 4> rows{row(a, 0), row(a, 1), row(a, 2), row(a, 3)};
  std::array<unsigned, 4> inv{1, 2, 4, 8};
  for (int c = 0; c < 4; ++c) {
    int p = c;
    while (!((rows[p] >> c) & 1)) ++p;
    std::swap(rows[c], rows[p]);
    std::swap(inv[c], inv[p]);
    for (int r = 0; r < 4; ++r)
      if (r != c && ((rows[r] >> c) & 1)) {
        rows[r] ^= rows[c];
        inv[r] ^= inv[c];
      }
  }
  Mat out = 0;
  for (int r = 0; r < 4; ++r) out |= static_cast<Mat>(inv[r] << (4 * r));
  return out;
}

inline Mat from_matrix(const ModMatrix& m) {
  if (m.size() != 4 || m.modulus() != 2) throw DimensionError("expected a 4x4 matrix over F_2");
  Mat out = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (m(r, c)) out |= static_cast<Mat>(1u << (4 * r + c));
  return out;
}

inline ModMatrix to_matrix(Mat m) {
  std::array<std::int64_t, 16> e{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) e[4 * r + c] = entry(m, r, c);
  return ModMatrix(Prime(2), 1, 4, e);
}

// All 20160 elements of GL_4(F_2), in increasing bit order.
inline const std::vector<Mat>& gl4() {
  static const std::vector<Mat> all = [] {
    std::vector<Mat> v;
    for (unsigned m = 0; m < 65536; ++m)
      if (invertible(static_cast<Mat>(m))) v.push_back(static_cast<Mat>(m));
    return v;
  }();
  return all;
}

}  // namespace galdual::gf2
