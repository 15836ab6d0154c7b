#include "mr1l/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

#include "mr1l/errors.hpp"

namespace mr1l {

PrimeIndexer::PrimeIndexer(std::uint64_t limit_cap) : limit_cap_(limit_cap) {}

PrimeIndexer& PrimeIndexer::global() {
  static PrimeIndexer instance;
  return instance;
}

// Simple segmented sieve filling primes_ for (sieved_to_, limit].
void PrimeIndexer::grow_to(std::uint64_t limit) {
  if (limit <= sieved_to_) return;
  if (limit > limit_cap_)
    throw validation_error("prime sieve limit " + std::to_string(limit) +
                           " exceeds configured cap " + std::to_string(limit_cap_));
  if (sieved_to_ < 2) {
    // Base segment, plain sieve.
    std::uint64_t base_limit = std::max<std::uint64_t>(limit, 1u << 16);
    std::vector<std::uint8_t> comp(base_limit + 1, 0);
    for (std::uint64_t p = 2; p * p <= base_limit; ++p)
      if (!comp[p])
        for (std::uint64_t m = p * p; m <= base_limit; m += p) comp[m] = 1;
    for (std::uint64_t n = 2; n <= base_limit; ++n)
      if (!comp[n]) primes_.push_back(n);
    sieved_to_ = base_limit;
    return;
  }
  // Extend by segments using the primes found so far; grow sqrt coverage first.
  while (sieved_to_ < limit) {
    std::uint64_t lo = sieved_to_ + 1;
    std::uint64_t hi = std::min(limit, sieved_to_ + std::max<std::uint64_t>(sieved_to_, 1u << 20));
    // Need all primes up to sqrt(hi) available; they are, because segments
    // at most double the range each time.
    std::vector<std::uint8_t> comp(hi - lo + 1, 0);
    for (std::uint64_t p : primes_) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t m = start; m <= hi; m += p) comp[m - lo] = 1;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (!comp[n - lo]) primes_.push_back(n);
    sieved_to_ = hi;
  }
}

void PrimeIndexer::ensure_limit(std::uint64_t limit) {
  {
    std::shared_lock lk(mu_);
    if (limit <= sieved_to_) return;
  }
  std::unique_lock lk(mu_);
  // Geometric growth amortizes repeated small extensions.
  std::uint64_t target = std::max(limit, sieved_to_ * 2);
  if (target > limit_cap_) target = std::max(limit, limit_cap_);
  grow_to(target);
}

void PrimeIndexer::ensure_count(std::uint64_t n) {
  {
    std::shared_lock lk(mu_);
    if (n <= primes_.size()) return;
  }
  std::unique_lock lk(mu_);
  while (primes_.size() < n) {
    // Overshoot using the prime counting estimate n ln n, then double on miss.
    double est = n < 6 ? 16.0
                       : static_cast<double>(n) *
                             (std::log(static_cast<double>(n)) +
                              std::log(std::log(static_cast<double>(n))) + 1.0);
    std::uint64_t target = std::max<std::uint64_t>(
        {static_cast<std::uint64_t>(est), sieved_to_ * 2, 1u << 16});
    grow_to(std::min(target, limit_cap_));
    if (sieved_to_ >= limit_cap_ && primes_.size() < n)
      throw validation_error("prime index " + std::to_string(n) +
                             " not reachable under sieve cap");
  }
}

std::uint64_t PrimeIndexer::nth_prime(std::uint64_t q) {
  if (q == 0) return 1;
  ensure_count(q);
  std::shared_lock lk(mu_);
  return primes_[q - 1];
}

std::uint64_t PrimeIndexer::least_index_geq(std::uint64_t s) {
  if (s <= 2) return 1;
  // Ensure the table reaches s, then binary search.
  ensure_limit(s);
  std::shared_lock lk(mu_);
  auto it = std::lower_bound(primes_.begin(), primes_.end(), s);
  if (it == primes_.end())
    throw internal_error("prime table ends below requested bound");
  return static_cast<std::uint64_t>(it - primes_.begin()) + 1;
}

std::vector<std::uint64_t> PrimeIndexer::window(std::uint64_t q, std::uint64_t count) {
  if (q == 0) throw validation_error("candidate windows start at index 1");
  if (count == 0) return {};
  ensure_count(q + count - 1);
  std::shared_lock lk(mu_);
  return {primes_.begin() + (q - 1), primes_.begin() + (q - 1 + count)};
}

std::uint64_t PrimeIndexer::next_prime_after(std::uint64_t x) {
  std::uint64_t q = least_index_geq(x + 1);
  return nth_prime(q);
}

std::int64_t ceil_log_base_minus1(std::uint64_t base, const BigInt& value) {
  if (base < 2) throw validation_error("log base must be >= 2");
  if (value < 1) throw validation_error("log argument must be >= 1");
  // Least e with base^(e+1) >= value, found by exact power iteration.
  BigInt pw = 1;
  std::int64_t e_plus_1 = 0;
  while (pw < value) {
    pw *= static_cast<unsigned long>(base);
    ++e_plus_1;
  }
  return e_plus_1 - 1;
}

std::uint64_t candidate_count(std::uint64_t s, const BigInt& spread) {
  if (s == 0) throw validation_error("candidate_count needs s >= 1");
  if (spread < BigInt(static_cast<unsigned long>(s)))
    throw validation_error("spread must be at least the set size");
  if (s == 1) return 1;
  std::uint64_t b = PrimeIndexer::global().nth_prime(
      PrimeIndexer::global().least_index_geq(s));
  std::int64_t c = ceil_log_base_minus1(b, spread);
  std::int64_t k = 2 * static_cast<std::int64_t>(s - 1) * c;
  return k < 1 ? 1 : static_cast<std::uint64_t>(k);
}

std::vector<std::uint64_t> candidate_primes(std::uint64_t s, const BigInt& spread) {
  std::uint64_t k = candidate_count(s, spread);
  std::uint64_t q = PrimeIndexer::global().least_index_geq(s);
  return PrimeIndexer::global().window(q, k);
}

double candidate_prime_bound(std::uint64_t s, const BigInt& spread) {
  if (s == 0) throw validation_error("candidate_prime_bound needs s >= 1");
  if (s == 1) return 2.0;
  constexpr double kC1 = 2.832;
  constexpr double kC2 = 2.3;
  double log_s_spread = log2_big(spread) / std::log2(static_cast<double>(s));
  double t = static_cast<double>(s) * log_s_spread;
  return kC1 * t * std::log(kC2 * t);
}

}  // namespace mr1l
