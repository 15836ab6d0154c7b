#include "mr1l/czt.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

using namespace mr1l;

namespace {

std::vector<cdouble> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cdouble> v(n);
  for (auto& x : v) x = cdouble{u(rng), u(rng)};
  return v;
}

double max_abs_diff(const std::vector<cdouble>& a,
                    const std::vector<cdouble>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("two-point butterfly") {
  std::vector<cdouble> v{cdouble{3.0, 1.0}, cdouble{-1.0, 2.0}};
  for (int sign : {-1, +1}) {
    std::vector<cdouble> out = czt_dft(v, sign);
    CHECK(std::abs(out[0] - cdouble{2.0, 3.0}) < 1e-15);
    CHECK(std::abs(out[1] - cdouble{4.0, -1.0}) < 1e-15);
  }
}

TEST_CASE("length-four impulse gives fourth roots of unity") {
  std::vector<cdouble> v{cdouble{0, 0}, cdouble{1, 0}, cdouble{0, 0},
                         cdouble{0, 0}};
  std::vector<cdouble> out = czt_dft(v, -1);
  const std::vector<cdouble> expect{cdouble{1, 0}, cdouble{0, -1},
                                    cdouble{-1, 0}, cdouble{0, 1}};
  CHECK(max_abs_diff(out, expect) < 1e-15);
}

TEST_CASE("constant input concentrates in bin zero") {
  for (std::size_t n : {3u, 8u, 13u}) {
    std::vector<cdouble> v(n, cdouble{0.5, -0.25});
    std::vector<cdouble> out = czt_dft(v, -1);
    CHECK(std::abs(out[0] - cdouble{0.5 * n, -0.25 * n}) < 1e-12);
    for (std::size_t k = 1; k < n; ++k) CHECK(std::abs(out[k]) < 1e-12);
  }
}

TEST_CASE("empty and singleton inputs") {
  CHECK(czt_dft({}, -1).empty());
  std::vector<cdouble> one{cdouble{2.5, -1.5}};
  CHECK(czt_dft(one, +1)[0] == one[0]);
}

TEST_CASE("fft_pow2 rejects non power-of-two lengths") {
  std::vector<cdouble> v(6);
  CHECK_THROWS_AS(fft_pow2(v, -1), std::invalid_argument);
}

TEST_CASE("forward then backward recovers the signal") {
  for (std::size_t n : {5u, 16u, 100u, 997u}) {
    std::vector<cdouble> v = random_signal(n, 17 + n);
    std::vector<cdouble> back = czt_dft(czt_dft(v, -1), +1);
    for (auto& x : back) x /= static_cast<double>(n);
    CHECK(max_abs_diff(back, v) < 1e-12);
  }
}

TEST_CASE("chirp transform matches the direct sum") {
  for (std::size_t n : {2u,  3u,   4u,   5u,   6u,   7u,   9u,
                        11u, 16u,  17u,  31u,  97u,  101u, 257u,
                        360u, 719u, 997u, 1000u, 1009u}) {
    std::vector<cdouble> v = random_signal(n, 1000 + n);
    for (int sign : {-1, +1}) {
      double diff = max_abs_diff(czt_dft(v, sign), naive_dft(v, sign));
      INFO("n=" << n << " sign=" << sign);
      CHECK(diff < 1e-11);
    }
  }
}

TEST_CASE("transform is linear") {
  const std::size_t n = 251;
  std::vector<cdouble> x = random_signal(n, 1);
  std::vector<cdouble> y = random_signal(n, 2);
  const cdouble alpha{0.3, -1.2}, beta{-0.7, 0.4};
  std::vector<cdouble> mix(n);
  for (std::size_t i = 0; i < n; ++i) mix[i] = alpha * x[i] + beta * y[i];
  std::vector<cdouble> lhs = czt_dft(mix, -1);
  std::vector<cdouble> fx = czt_dft(x, -1), fy = czt_dft(y, -1);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(lhs[i] - (alpha * fx[i] + beta * fy[i])) < 1e-11);
}

TEST_CASE("energy scales by the length") {
  for (std::size_t n : {64u, 85u, 509u}) {
    std::vector<cdouble> v = random_signal(n, 9 * n);
    std::vector<cdouble> out = czt_dft(v, -1);
    double ein = 0.0, eout = 0.0;
    for (auto& x : v) ein += std::norm(x);
    for (auto& x : out) eout += std::norm(x);
    CHECK(eout == doctest::Approx(n * ein).epsilon(1e-12));
  }
}
