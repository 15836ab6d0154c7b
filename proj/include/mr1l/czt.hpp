#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mr1l {

using cdouble = std::complex<double>;

// In-place radix-2 decimation-in-time transform; a.size() must be a power of
// two.  sign = -1 evaluates sum_j a[j] exp(-2*pi*i*j*k/n); sign = +1 the
// conjugate sum.  No normalisation factor is applied in either direction.
void fft_pow2(std::vector<cdouble>& a, int sign);

// out[k] = sum_j in[j] * exp(sign * 2*pi*i * j*k / n) for any length n >= 1.
// Power-of-two lengths go straight to fft_pow2; everything else runs through
// Bluestein's chirp transform, with chirp phases reduced mod 2n in integer
// arithmetic so the trig arguments stay small and accurate.
std::vector<cdouble> czt_dft(const std::vector<cdouble>& in, int sign);

// Direct O(n^2) evaluation of the same sum, used as a cross-check.  Phase
// products j*k are reduced mod n exactly before touching floating point.
std::vector<cdouble> naive_dft(const std::vector<cdouble>& in, int sign);

}  // namespace mr1l
