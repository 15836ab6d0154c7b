#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mr1l/czt.hpp"
#include "mr1l/ddreal.hpp"
#include "mr1l/freqset.hpp"

namespace mr1l {

// One-dimensional benchmark factor: real, even, 1-periodic, continuous,
// unit L2 norm. Its Fourier coefficients vanish at odd frequencies and
// decay like k^-4, so truncation onto hyperbolic-cross supports converges
// quickly while the function itself is cheap to evaluate pointwise.
double g3(double x);

// Tensor product over x in R^d (any reals; each axis is 1-periodic).
double g3d(const std::vector<double>& x);

// Fourier coefficient of g3 in closed form:
//   coeff(k) = C * (2*[k==0] - 12 / (pi (1-k^2)(9-k^2)))  for even k,
//   coeff(k) = 0                                          for odd k,
// with C = 4*sqrt(3*pi/(207*pi - 256)). The double-double variant carries
// ~31 digits for cancellation-sensitive sums of squares. |k| must stay
// below 2^26 so that k^2 is exact in a double.
double g3_coeff(std::int64_t k);
dd g3_coeff_dd(std::int64_t k);

// Product coefficient of the d-variate function at a frequency vector.
double g3d_coeff(std::span<const std::int32_t> k);

// Relative L2 distance between the d-variate function and the trigonometric
// polynomial given by `coeffs` on `support`:
//   sqrt( (1 - sum_{k in support} |coeff(k)|^2)           [truncation]
//         + sum_{k in support} |coeff(k) - coeffs[i]|^2 ) [in-support]
// The truncation term is accumulated in double-double precision: at large
// supports its true value drops to ~1e-19 and would cancel to noise in
// plain doubles. The function has unit norm, so no denominator is needed.
double g3d_rel_l2_error(const FrequencySet& support,
                        const std::vector<cdouble>& coeffs);

}  // namespace mr1l
