#include <doctest.h>

#include <random>
#include <sstream>

#include "mr1l/errors.hpp"
#include "mr1l/flatten.hpp"
#include "mr1l/freqset.hpp"
#include "mr1l/rank1.hpp"

using namespace mr1l;

namespace {

bool is_prime_td(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<BigInt> make_z(std::initializer_list<long> vs) {
  std::vector<BigInt> z;
  for (long v : vs) z.emplace_back(v);
  return z;
}

FrequencySet random_set(std::mt19937_64& rng, std::uint32_t d, std::size_t s,
                        std::int32_t R) {
  long double cube = 1.0L;
  for (std::uint32_t t = 0; t < d; ++t) cube *= 2 * R + 1;
  if (cube < static_cast<long double>(s)) s = static_cast<std::size_t>(cube);
  return random_cube_set(d, static_cast<std::uint32_t>(R), s, rng());
}

// Oracle: full-width inner products reduced at the end.
std::vector<std::uint64_t> image_oracle(const FrequencySet& I,
                                        const std::vector<BigInt>& z,
                                        std::uint64_t m) {
  std::vector<std::uint64_t> out(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) {
    BigInt acc = 0;
    for (std::uint32_t t = 0; t < I.dim(); ++t) acc += BigInt(I[i][t]) * z[t];
    out[i] = mod_word(acc, m);
  }
  return out;
}

}  // namespace

TEST_SUITE("rank1") {

TEST_CASE("modulus image, canonical alignment") {
  FrequencySet I(2, {0, 0, 2, 0, 0, 2});  // canonical order: (0,0),(0,2),(2,0)
  auto img = modulus_image(I, make_z({1, 5}), 25);
  CHECK(img == std::vector<std::uint64_t>{0, 10, 2});
  auto img3 = modulus_image(I, make_z({1, 5}), 3);
  CHECK(img3 == std::vector<std::uint64_t>{0, 1, 2});
}

TEST_CASE("modulus image equals full-width oracle") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 200; ++it) {
    std::uint32_t d = 1 + rng() % 4;
    FrequencySet I = random_set(rng, d, 2 + rng() % 30, 50);
    std::vector<BigInt> z;
    for (std::uint32_t t = 0; t < d; ++t)
      z.emplace_back(static_cast<unsigned long>(rng() % 1000000));
    std::uint64_t m = 1 + rng() % 100000;
    auto fast = modulus_image(I, z, m);
    CHECK(fast == image_oracle(I, z, m));
    auto big = modulus_image_big(I, z, BigInt(static_cast<unsigned long>(m)));
    for (std::size_t i = 0; i < fast.size(); ++i)
      CHECK(BigInt(static_cast<unsigned long>(fast[i])) == big[i]);
  }
}

TEST_CASE("flattened values match direct inner products") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 100; ++it) {
    std::uint32_t d = 1 + rng() % 5;
    FrequencySet I = random_set(rng, d, 1 + rng() % 20, 20);
    std::vector<BigInt> z;
    for (std::uint32_t t = 0; t < d; ++t) {
      // Mix word-size and wide components to hit both storage paths.
      BigInt c(static_cast<unsigned long>(rng() % 1000 + 1));
      if (it % 3 == 0) c <<= 40 + (rng() % 30);
      z.push_back(c);
    }
    FlattenedSet v(I, z);
    for (std::size_t i = 0; i < I.size(); ++i) {
      BigInt acc = 0;
      for (std::uint32_t t = 0; t < d; ++t) acc += BigInt(I[i][t]) * z[t];
      CHECK(v.value(i) == acc);
      std::uint64_t p = 2 + rng() % 10000;
      CHECK(v.residue(i, p) == mod_word(acc, p));
    }
  }
}

TEST_CASE("flattening handles the geometric wide path") {
  // d large enough that values exceed 62 bits and z is geometric.
  FrequencySet I = random_cube_set(12, 30, 50, 5);
  Rank1Lattice lat = build_mixed_radix(I);
  FlattenedSet v(I, lat.z);
  CHECK(!v.fits_word());
  for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{49}}) {
    BigInt acc = 0;
    for (std::uint32_t t = 0; t < 12; ++t) acc += BigInt(I[i][t]) * lat.z[t];
    CHECK(v.value(i) == acc);
    CHECK(v.residue(i, 101) == mod_word(acc, 101));
  }
  CHECK(v.spread() == v.max() - v.min() + 1);
}

TEST_CASE("reconstruction predicate") {
  FrequencySet I(2, {0, 0, 2, 0, 0, 2});
  Rank1Lattice good{make_z({1, 5}), BigInt(25), Rank1Lattice::Source::user};
  CHECK(is_reconstructing(I, good));
  Rank1Lattice bad{make_z({1, 5}), BigInt(2), Rank1Lattice::Source::user};
  CHECK(!is_reconstructing(I, bad));

  // Wide-modulus path agrees with the word path's semantics.
  FrequencySet J(1, {0, 1});
  Rank1Lattice wide_bad{make_z({0}), BigInt(1) << 63, Rank1Lattice::Source::user};
  wide_bad.z[0] = BigInt(1) << 63;
  CHECK(!is_reconstructing(J, wide_bad));
  Rank1Lattice wide_good = wide_bad;
  wide_good.z[0] = BigInt(1) << 40;
  CHECK(is_reconstructing(J, wide_good));
}

TEST_CASE("mixed-radix construction") {
  FrequencySet I(2, {-2, 0, 0, -2, 0, 0, 0, 2, 2, 0});
  Rank1Lattice lat = build_mixed_radix(I);
  CHECK(lat.source == Rank1Lattice::Source::mixed_radix);
  REQUIRE(lat.z.size() == 2);
  CHECK(lat.z[0] == 1);
  CHECK(lat.z[1] == 5);
  CHECK(lat.m == 25);
  CHECK(is_reconstructing(I, lat));

  // Width 128 per axis in three dimensions.
  FrequencySet W(3, {-64, -64, -64, 64, 64, 64, 0, 1, 2});
  Rank1Lattice lw = build_mixed_radix(W);
  CHECK(lw.z[0] == 1);
  CHECK(lw.z[1] == 129);
  CHECK(lw.z[2] == 16641);
  CHECK(lw.m == 2146689);
}

TEST_CASE("mixed-radix is always reconstructing") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 100; ++it) {
    std::uint32_t d = 1 + rng() % 6;
    FrequencySet I = random_set(rng, d, 1 + rng() % 50, 12);
    CHECK(is_reconstructing(I, build_mixed_radix(I)));
  }
}

TEST_CASE("coprime-factor construction") {
  FrequencySet I(2, {-1, 0, 0, 0, 1, 1});  // widths (2, 1) -> N = 2
  Rank1Lattice lat = build_crt(I);
  CHECK(lat.source == Rank1Lattice::Source::crt);
  CHECK(lat.m == 77);
  REQUIRE(lat.z.size() == 2);
  CHECK(lat.z[0] == 11);
  CHECK(lat.z[1] == 7);

  FrequencySet J(1, {0, 1, 2, 3, 4});  // width 4 -> q1 = 6 used as-is
  Rank1Lattice lj = build_crt(J);
  CHECK(lj.m == 6);
  CHECK(lj.z[0] == 1);
  CHECK(is_reconstructing(J, lj));
}

TEST_CASE("coprime-factor is reconstructing on random sets") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 60; ++it) {
    std::uint32_t d = 1 + rng() % 4;
    FrequencySet I = random_set(rng, d, 1 + rng() % 40, 10);
    CHECK(is_reconstructing(I, build_crt(I)));
  }
}

TEST_CASE("greedy modulus search basics") {
  FrequencySet I(3, {4, -2, 7});  // singleton
  Rank1Lattice lat = build_cbc(I);
  CHECK(lat.m == 2);
  for (const auto& c : lat.z) CHECK(c == 1);
  CHECK(is_reconstructing(I, lat));
}

TEST_CASE("greedy modulus search on random sets") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 200; ++it) {
    std::uint32_t d = 1 + rng() % 5;
    std::size_t s = 1 + rng() % 40;
    FrequencySet I = random_set(rng, d, s, 8);
    Rank1Lattice lat = build_cbc(I);
    CHECK(is_reconstructing(I, lat));
    CHECK(is_prime_td(lat.m.get_ui()));
    Expansion e = expansion(I);
    std::uint64_t n = static_cast<std::uint64_t>(e.n_max);
    std::uint64_t cap = 4 * std::max<std::uint64_t>(s * s, 2 * (n + 1));
    CHECK(lat.m.get_ui() <= cap);
    for (const auto& c : lat.z) {
      CHECK(c >= 1);
      CHECK(c < lat.m);
    }
  }
}

TEST_CASE("value spread and its a-priori bounds") {
  FrequencySet I(2, {0, 0, 2, 0, 0, 2});
  CHECK(value_spread(I, make_z({1, 5})) == 11);

  std::mt19937_64 rng(51);
  for (int it = 0; it < 80; ++it) {
    std::uint32_t d = 1 + rng() % 4;
    FrequencySet I2 = random_set(rng, d, 2 + rng() % 30, 9);
    if (expansion(I2).n_max < 1) continue;
    Rank1Lattice lat = build_cbc(I2);
    BigInt spread = value_spread(I2, lat.z);
    CHECK(spread <= spread_bound_dnm(I2, lat.m));
    CHECK(spread <= spread_bound_l1(I2, lat.m));
  }
}

TEST_CASE("node coordinates") {
  Rank1Lattice lat{make_z({1, 5}), BigInt(25), Rank1Lattice::Source::user};
  auto x0 = lattice_node(lat, BigInt(0));
  CHECK(x0 == std::vector<double>{0.0, 0.0});
  auto x1 = lattice_node(lat, BigInt(1));
  CHECK(x1[0] == doctest::Approx(0.04));
  CHECK(x1[1] == doctest::Approx(0.2));
  auto x6 = lattice_node(lat, BigInt(6));
  CHECK(x6[0] == doctest::Approx(6.0 / 25.0));
  CHECK(x6[1] == doctest::Approx(5.0 / 25.0));
}

TEST_CASE("lattice file round trip") {
  Rank1Lattice lat = build_mixed_radix(random_cube_set(9, 60, 40, 77));
  std::stringstream ss;
  write_lattice(ss, lat);
  Rank1Lattice back = read_lattice(ss);
  CHECK(back.source == lat.source);
  CHECK(back.m == lat.m);
  REQUIRE(back.z.size() == lat.z.size());
  for (std::size_t t = 0; t < lat.z.size(); ++t) CHECK(back.z[t] == lat.z[t]);

  std::stringstream bad("source mixed-radix\nz 1 2\n");
  CHECK_THROWS_AS(read_lattice(bad), validation_error);
}

}  // TEST_SUITE
