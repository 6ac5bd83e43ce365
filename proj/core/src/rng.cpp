#include "trigkernel/rng.hpp"

#include <algorithm>
#include <cmath>

namespace trigkernel {

namespace {
constexpr Eigen::Index kChunk = 512;
constexpr float kTwoPiF = 6.2831853071795864769f;
}  // namespace

// One u64 feeds one (u1, u2) pair: 24 bits each, u1 offset by half an ulp so
// log(u1) is finite.  The Box-Muller transform runs on Eigen float arrays,
// which vectorize sin/cos/log on this toolchain.
void Rng::fill_normal(float* out, Eigen::Index n) {
  Eigen::Array<float, kChunk, 1> u1, u2, r, c, s;
  Eigen::Index produced = 0;
  while (produced < n) {
    const Eigen::Index pairs = std::min<Eigen::Index>(kChunk, (n - produced + 1) / 2);
    for (Eigen::Index i = 0; i < pairs; ++i) {
      const std::uint64_t bits = next_u64();
      u1[i] = (static_cast<float>(bits >> 40) + 0.5f) * 0x1.0p-24f;
      u2[i] = static_cast<float>((bits >> 16) & 0xFFFFFFull) * 0x1.0p-24f;
    }
    r.head(pairs) = (-2.0f * u1.head(pairs).log()).sqrt();
    c.head(pairs) = (kTwoPiF * u2.head(pairs)).cos();
    s.head(pairs) = (kTwoPiF * u2.head(pairs)).sin();
    for (Eigen::Index i = 0; i < pairs && produced < n; ++i) {
      out[produced++] = r[i] * c[i];
      if (produced < n) out[produced++] = r[i] * s[i];
    }
  }
}

void Rng::fill_normal(double* out, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) out[i] = normal();
}

}  // namespace trigkernel
