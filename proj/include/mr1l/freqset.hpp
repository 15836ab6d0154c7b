#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mr1l {

// A finite set of d-dimensional integer frequency vectors, stored flat
// (row-major, s rows of d components) in strictly increasing lexicographic
// order with no duplicates.
class FrequencySet {
 public:
  FrequencySet() = default;
  // Takes arbitrary row order, canonicalizes (sorts), rejects duplicates.
  FrequencySet(std::uint32_t dim, std::vector<std::int32_t> flat);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::span<const std::int32_t> operator[](std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  const std::vector<std::int32_t>& flat() const { return flat_; }

  bool contains(std::span<const std::int32_t> k) const;
  std::size_t index_of(std::span<const std::int32_t> k) const;  // size() if absent

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::int32_t> flat_;
};

struct Expansion {
  std::int64_t n_max = 0;        // widest per-axis range, max_t (hi_t - lo_t)
  std::vector<std::int32_t> lo;  // per-axis min
  std::vector<std::int32_t> hi;  // per-axis max
};

Expansion expansion(const FrequencySet& I);

// All even-frequency vectors k with prod_t max(1, |k_t|) <= R, in canonical
// order. `cap` bounds the cardinality (resource guard).
FrequencySet hyperbolic_cross_even(std::uint32_t d, std::uint64_t R,
                                   std::size_t cap = 4'000'000);

// s distinct vectors drawn uniformly without replacement from the integer
// cube [-R, R]^d, deterministically from `seed`. Canonical order on return.
FrequencySet random_cube_set(std::uint32_t d, std::uint32_t R, std::size_t s,
                             std::uint64_t seed);

// Text format: first line "d s", then s lines of d integers.
void write_freqset(std::ostream& os, const FrequencySet& I);
FrequencySet read_freqset(std::istream& is);

}  // namespace mr1l
