#pragma once

#include <cstdint>
#include <vector>

#include "mr1l/bigint.hpp"
#include "mr1l/freqset.hpp"

namespace mr1l {

// The exact inner products k·z for every k in I, computed once and then
// reduced modulo many candidate primes. Keeps a machine-word representation
// when every value fits in 62 bits; otherwise arbitrary-width values, built
// by divide-and-conquer digit evaluation when z is a geometric progression
// (the mixed-radix shape, whose components reach ~2^70000) and by
// multiply-accumulate otherwise.
class FlattenedSet {
 public:
  FlattenedSet(const FrequencySet& I, const std::vector<BigInt>& z);

  std::size_t size() const { return n_; }
  bool fits_word() const { return fits64_; }

  // Non-negative residue of value i modulo p (p >= 2, p < 2^62).
  std::uint64_t residue(std::size_t i, std::uint64_t p) const {
    if (fits64_) {
      std::int64_t r = v64_[i] % static_cast<std::int64_t>(p);
      return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
    }
    return mod_word(vbig_[i], p);
  }

  BigInt value(std::size_t i) const;
  const BigInt& min() const { return min_; }
  const BigInt& max() const { return max_; }
  BigInt spread() const { return max_ - min_ + 1; }

  // Spread of a subset of the values (indices need not be sorted).
  BigInt subset_spread(const std::vector<std::uint32_t>& idx) const;

  // True iff all values are pairwise distinct modulo `modulus`.
  bool distinct_mod(const BigInt& modulus) const;

 private:
  std::size_t n_ = 0;
  bool fits64_ = false;
  std::vector<std::int64_t> v64_;
  std::vector<BigInt> vbig_;
  BigInt min_, max_;
};

}  // namespace mr1l
