#include "mr1l/czt.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace mr1l {

namespace {

// One table entry per distinct root of unity of order n, computed with a
// single std::polar call each so no rounding accumulates across butterflies.
std::vector<cdouble> twiddle_table(std::size_t n, int sign) {
  std::vector<cdouble> w(n / 2);
  const double step = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = std::polar(1.0, step * static_cast<double>(j));
  return w;
}

}  // namespace

void fft_pow2(std::vector<cdouble>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!std::has_single_bit(n))
    throw std::invalid_argument("fft_pow2 length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const std::vector<cdouble> w = twiddle_table(n, sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        cdouble u = a[start + j];
        cdouble v = a[start + j + len / 2] * w[j * stride];
        a[start + j] = u + v;
        a[start + j + len / 2] = u - v;
      }
    }
  }
}

std::vector<cdouble> czt_dft(const std::vector<cdouble>& in, int sign) {
  const std::size_t n = in.size();
  if (n == 0) return {};
  if (n == 1) return in;
  if (std::has_single_bit(n)) {
    std::vector<cdouble> a = in;
    fft_pow2(a, sign);
    return a;
  }

  // j*k = (j^2 + k^2 - (k-j)^2) / 2, so with w_j = exp(sign*pi*i*j^2/n) the
  // transform is out[k] = w_k * sum_j (in[j]*w_j) * conj-chirp(k-j): a linear
  // convolution embedded in a power-of-two cyclic one.
  std::vector<cdouble> chirp(n);  // chirp[j] = exp(sign*pi*i*j^2/n)
  const double step = sign * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    // j^2 mod 2n keeps the trig argument in [0, 2*pi) exactly.
    std::uint64_t r = (static_cast<std::uint64_t>(j) * j) % (2 * n);
    chirp[j] = std::polar(1.0, step * static_cast<double>(r));
  }

  std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<cdouble> a(m, cdouble{0.0, 0.0});
  std::vector<cdouble> b(m, cdouble{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) a[j] = in[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);

  fft_pow2(a, -1);
  fft_pow2(b, -1);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  fft_pow2(a, +1);

  std::vector<cdouble> out(n);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * inv_m * chirp[k];
  return out;
}

std::vector<cdouble> naive_dft(const std::vector<cdouble>& in, int sign) {
  const std::size_t n = in.size();
  std::vector<cdouble> out(n, cdouble{0.0, 0.0});
  if (n == 0) return out;
  const double step = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t r = (static_cast<std::uint64_t>(j) * k) % n;
      acc += in[j] * std::polar(1.0, step * static_cast<double>(r));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace mr1l
