#include "mr1l/testfn.hpp"

#include <cmath>
#include <numbers>

#include "mr1l/errors.hpp"

namespace mr1l {

namespace {

const dd& norm_const_dd() {
  // C = 4*sqrt(3*pi/(207*pi - 256)); C^2 = 48*pi/(207*pi - 256).
  static const dd c = sqrt((dd{48.0} * dd_pi) /
                           (dd{207.0} * dd_pi - dd{256.0}));
  return c;
}

double norm_const() { return norm_const_dd().value(); }

}  // namespace

double g3(double x) {
  double frac = x - std::floor(x);
  double s = std::sin(2.0 * std::numbers::pi * frac);
  double sgn = frac > 0.5 ? 1.0 : (frac < 0.5 ? -1.0 : 0.0);
  return norm_const() * (2.0 + sgn * s * s * s);
}

double g3d(const std::vector<double>& x) {
  double prod = 1.0;
  for (double xi : x) prod *= g3(xi);
  return prod;
}

dd g3_coeff_dd(std::int64_t k) {
  if (k % 2 != 0) return dd{0.0};
  if (std::llabs(k) >= (1ll << 26))
    throw validation_error("frequency too large for an exact k^2 in double");
  const double k2 = static_cast<double>(k) * static_cast<double>(k);
  dd v = dd{-12.0} / (dd_pi * dd{1.0 - k2} * dd{9.0 - k2});
  if (k == 0) v += dd{2.0};
  return norm_const_dd() * v;
}

double g3_coeff(std::int64_t k) { return g3_coeff_dd(k).value(); }

double g3d_coeff(std::span<const std::int32_t> k) {
  double prod = 1.0;
  for (std::int32_t kt : k) prod *= g3_coeff(kt);
  return prod;
}

double g3d_rel_l2_error(const FrequencySet& support,
                        const std::vector<cdouble>& coeffs) {
  if (coeffs.size() != support.size())
    throw validation_error("coefficient count differs from the support");
  const std::uint32_t d = support.dim();
  dd inside{0.0};     // sum of squared true coefficients over the support
  double mismatch = 0.0;  // sum of squared in-support deviations
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto k = support[i];
    dd prod{1.0};
    double prod_d = 1.0;
    for (std::uint32_t t = 0; t < d; ++t) {
      dd c = g3_coeff_dd(k[t]);
      prod *= sqr(c);
      prod_d *= c.value();
    }
    inside += prod;
    mismatch += std::norm(cdouble{prod_d, 0.0} - coeffs[i]);
  }
  dd tail = dd{1.0} - inside;
  double t = tail.value();
  if (t < 0.0) t = 0.0;  // rounding residue of an exact-coefficient support
  return std::sqrt(t + mismatch);
}

}  // namespace mr1l
