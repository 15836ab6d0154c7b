#pragma once

#include <cstdint>
#include <shared_mutex>
#include <vector>

#include "mr1l/bigint.hpp"

namespace mr1l {

// Grow-on-demand prime table with 1-based indexing shifted by one sentinel:
// index 0 -> 1, index 1 -> 2, index 2 -> 3, index 3 -> 5, ...
// The sentinel makes "the prime before the first real candidate" well defined
// when locating the start of a candidate window. Thread-safe; reads that
// stay within the already-sieved range take a shared lock only.
class PrimeIndexer {
 public:
  explicit PrimeIndexer(std::uint64_t limit_cap = (1ull << 33));

  // nth_prime(0) = 1 (sentinel), nth_prime(q) = q-th prime for q >= 1.
  std::uint64_t nth_prime(std::uint64_t q);

  // Smallest q with nth_prime(q) >= s, for s >= 1. s = 1 gives q = 1:
  // windows never start at the sentinel.
  std::uint64_t least_index_geq(std::uint64_t s);

  // Primes nth_prime(q), ..., nth_prime(q + count - 1). q >= 1.
  std::vector<std::uint64_t> window(std::uint64_t q, std::uint64_t count);

  // Smallest prime > x.
  std::uint64_t next_prime_after(std::uint64_t x);

  std::uint64_t limit_cap() const { return limit_cap_; }

  // Process-wide shared instance.
  static PrimeIndexer& global();

 private:
  void ensure_count(std::uint64_t n);
  void ensure_limit(std::uint64_t limit);
  void grow_to(std::uint64_t limit);  // caller holds unique lock

  std::uint64_t limit_cap_;
  std::uint64_t sieved_to_ = 0;
  std::vector<std::uint64_t> primes_;  // real primes only (2, 3, 5, ...)
  mutable std::shared_mutex mu_;
};

// Number of candidate primes the planner may scan for a set of `s` distinct
// integers spanning `spread` = max - min + 1 values: the window is wide
// enough that a halving prime always exists inside it.
// K = max(1, 2 (s-1) c) with c the least integer e such that b^{e+1} >= spread,
// b being the first prime >= s. Exact integer computation throughout.
std::uint64_t candidate_count(std::uint64_t s, const BigInt& spread);

// The c above, exposed for tests. May be -1 (spread = 1).
std::int64_t ceil_log_base_minus1(std::uint64_t base, const BigInt& value);

// Materialized candidate window for a set of size s with the given spread
// (small/test use; the planner streams instead). Requires 1 <= s <= spread.
std::vector<std::uint64_t> candidate_primes(std::uint64_t s, const BigInt& spread);

// Upper bound on the largest prime the scan can return for (s, spread):
// 2 when s = 1, else 2.832 s log_s(spread) ln(2.3 s log_s(spread)).
double candidate_prime_bound(std::uint64_t s, const BigInt& spread);

}  // namespace mr1l
