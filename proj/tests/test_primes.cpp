#include <doctest.h>

#include <cmath>
#include <random>

#include "mr1l/primes.hpp"

using namespace mr1l;

namespace {

// Independent primality oracle: plain trial division.
bool is_prime_td(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t nth_prime_td(std::uint64_t q) {
  std::uint64_t n = 1, found = 0;
  while (found < q) {
    ++n;
    if (is_prime_td(n)) ++found;
  }
  return n;
}

}  // namespace

TEST_SUITE("primes") {

TEST_CASE("indexing with sentinel") {
  auto& pi = PrimeIndexer::global();
  CHECK(pi.nth_prime(0) == 1);
  CHECK(pi.nth_prime(1) == 2);
  CHECK(pi.nth_prime(2) == 3);
  CHECK(pi.nth_prime(5) == 11);
  CHECK(pi.nth_prime(25) == 97);
}

TEST_CASE("indexing matches trial division") {
  auto& pi = PrimeIndexer::global();
  for (std::uint64_t q : {1ull, 7ull, 42ull, 168ull, 1000ull})
    CHECK(pi.nth_prime(q) == nth_prime_td(q));
}

TEST_CASE("least index at or above a size") {
  auto& pi = PrimeIndexer::global();
  CHECK(pi.least_index_geq(1) == 1);
  CHECK(pi.least_index_geq(2) == 1);
  CHECK(pi.least_index_geq(3) == 2);
  CHECK(pi.least_index_geq(6) == 4);  // 7 is the 4th prime
  CHECK(pi.least_index_geq(97) == 25);
  CHECK(pi.least_index_geq(98) == 26);

  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    std::uint64_t s = 1 + rng() % 100000;
    std::uint64_t q = pi.least_index_geq(s);
    CHECK(pi.nth_prime(q) >= s);
    CHECK(pi.nth_prime(q - 1) < s);
  }
}

TEST_CASE("next prime after") {
  auto& pi = PrimeIndexer::global();
  CHECK(pi.next_prime_after(1) == 2);
  CHECK(pi.next_prime_after(2) == 3);
  CHECK(pi.next_prime_after(7) == 11);
  CHECK(pi.next_prime_after(89) == 97);
}

TEST_CASE("exact integer log ceiling") {
  CHECK(ceil_log_base_minus1(5, BigInt(5)) == 0);
  CHECK(ceil_log_base_minus1(3, BigInt(11)) == 2);   // 3^2 < 11 <= 3^3
  CHECK(ceil_log_base_minus1(2, BigInt(1)) == -1);
  CHECK(ceil_log_base_minus1(2, BigInt(2)) == 0);
  CHECK(ceil_log_base_minus1(10, BigInt(1000)) == 2);
  CHECK(ceil_log_base_minus1(10, BigInt(1001)) == 3);

  // Against floating logs away from powers: c = ceil(log_b(v)) - 1 + adjust.
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    std::uint64_t b = 2 + rng() % 50;
    std::uint64_t v = 1 + rng() % 1000000;
    std::int64_t c = ceil_log_base_minus1(b, BigInt(static_cast<unsigned long>(v)));
    // Defining relation: smallest e with b^(e+1) >= v.
    auto powge = [&](std::int64_t e) {
      if (e + 1 < 0) return false;
      BigInt p = 1;
      for (std::int64_t i = 0; i < e + 1; ++i) p *= static_cast<unsigned long>(b);
      return p >= BigInt(static_cast<unsigned long>(v));
    };
    CHECK(powge(c));
    CHECK(!powge(c - 1));
  }
}

TEST_CASE("candidate windows") {
  CHECK(candidate_primes(3, BigInt(11)) ==
        std::vector<std::uint64_t>{3, 5, 7, 11, 13, 17, 19, 23});
  CHECK(candidate_primes(1, BigInt(1)) == std::vector<std::uint64_t>{2});
  CHECK(candidate_primes(5, BigInt(5)) == std::vector<std::uint64_t>{5});
  CHECK(candidate_count(2, BigInt(2)) == 1);
  CHECK_THROWS_AS(candidate_primes(4, BigInt(3)), validation_error);
}

TEST_CASE("largest candidate stays under the analytic ceiling") {
  CHECK(candidate_prime_bound(1, BigInt(1)) == 2.0);
  // 2.832 * 2 * ln(4.6) for the smallest nontrivial case.
  CHECK(candidate_prime_bound(2, BigInt(2)) ==
        doctest::Approx(2.832 * 2.0 * std::log(4.6)).epsilon(1e-12));

  std::mt19937_64 rng(13);
  for (int it = 0; it < 150; ++it) {
    std::uint64_t s = 2 + rng() % 400;
    std::uint64_t spread = s + rng() % 1000000000000ull;
    auto cand = candidate_primes(s, BigInt(static_cast<unsigned long>(spread)));
    CHECK(!cand.empty());
    CHECK(static_cast<double>(cand.back()) <=
          candidate_prime_bound(s, BigInt(static_cast<unsigned long>(spread))));
  }
}

TEST_CASE("window contents are consecutive primes") {
  auto w = PrimeIndexer::global().window(2, 6);
  CHECK(w == std::vector<std::uint64_t>{3, 5, 7, 11, 13, 17});
  for (std::uint64_t p : w) CHECK(is_prime_td(p));
}

}  // TEST_SUITE
