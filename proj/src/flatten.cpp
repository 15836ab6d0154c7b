#include "mr1l/flatten.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "mr1l/errors.hpp"

namespace mr1l {

namespace {

// z is a geometric progression 1, B, B^2, ... with a word-sized ratio?
// (The mixed-radix construction always has this shape; detecting it keeps
// the flattening cost quasi-linear instead of quadratic in d.)
bool geometric_ratio(const std::vector<BigInt>& z, std::uint64_t& ratio_out) {
  if (z.size() < 2) return false;
  if (z[0] != 1) return false;
  if (!z[1].fits_ulong_p()) return false;
  std::uint64_t b = z[1].get_ui();
  if (b < 2) return false;
  BigInt expect = z[1];
  for (std::size_t i = 2; i < z.size(); ++i) {
    expect *= static_cast<unsigned long>(b);
    if (z[i] != expect) return false;
  }
  ratio_out = b;
  return true;
}

// Memoized powers B^e for the divide-and-conquer evaluation; only O(log d)
// distinct exponents occur.
struct PowerCache {
  std::uint64_t base;
  std::unordered_map<std::uint64_t, BigInt> cache;
  const BigInt& get(std::uint64_t e) {
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    return cache.emplace(e, pow_big(base, e)).first->second;
  }
};

// Value of sum_{i in [lo,hi)} k[i] B^(i-lo) by splitting: low half plus
// B^(mid-lo) times high half. Balanced products keep GMP in its fast range.
BigInt digits_value(const std::int32_t* k, std::size_t lo, std::size_t hi,
                    PowerCache& pw) {
  if (hi - lo <= 8) {
    BigInt acc = 0;
    for (std::size_t i = hi; i-- > lo;) {
      acc *= static_cast<unsigned long>(pw.base);
      if (k[i] >= 0)
        acc += static_cast<unsigned long>(k[i]);
      else
        acc -= static_cast<unsigned long>(-static_cast<std::int64_t>(k[i]));
    }
    return acc;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  BigInt low = digits_value(k, lo, mid, pw);
  BigInt high = digits_value(k, mid, hi, pw);
  high *= pw.get(mid - lo);
  return low + high;
}

}  // namespace

FlattenedSet::FlattenedSet(const FrequencySet& I, const std::vector<BigInt>& z) {
  std::uint32_t d = I.dim();
  if (z.size() != d)
    throw validation_error("generating vector dimension does not match set");
  n_ = I.size();
  if (n_ == 0) throw validation_error("cannot flatten an empty set");

  // Worst-case |k.z| bound decides whether the word path is safe.
  Expansion e = expansion(I);
  BigInt bound = 0;
  for (std::uint32_t t = 0; t < d; ++t) {
    std::int64_t a = std::max<std::int64_t>(
        e.lo[t] < 0 ? -static_cast<std::int64_t>(e.lo[t]) : e.lo[t],
        e.hi[t] < 0 ? -static_cast<std::int64_t>(e.hi[t]) : e.hi[t]);
    BigInt term = z[t];
    term *= static_cast<unsigned long>(a);
    bound += term;
  }
  fits64_ = bound < (BigInt(1) << 62);

  if (fits64_) {
    std::vector<std::int64_t> z64(d);
    for (std::uint32_t t = 0; t < d; ++t) z64[t] = z[t].get_si();
    v64_.resize(n_);
    std::int64_t mn = 0, mx = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      auto row = I[i];
      std::int64_t v = 0;
      for (std::uint32_t t = 0; t < d; ++t) v += row[t] * z64[t];
      v64_[i] = v;
      if (i == 0) {
        mn = mx = v;
      } else {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    }
    min_ = BigInt(static_cast<long>(mn));
    max_ = BigInt(static_cast<long>(mx));
    return;
  }

  vbig_.resize(n_);
  std::uint64_t ratio = 0;
  if (geometric_ratio(z, ratio)) {
    PowerCache pw{ratio, {}};
    for (std::size_t i = 0; i < n_; ++i) {
      auto row = I[i];
      vbig_[i] = digits_value(row.data(), 0, d, pw);
    }
  } else {
    for (std::size_t i = 0; i < n_; ++i) {
      auto row = I[i];
      BigInt v = 0;
      for (std::uint32_t t = 0; t < d; ++t) {
        std::int32_t k = row[t];
        if (k > 0)
          mpz_addmul_ui(v.get_mpz_t(), z[t].get_mpz_t(), static_cast<unsigned long>(k));
        else if (k < 0)
          mpz_submul_ui(v.get_mpz_t(), z[t].get_mpz_t(),
                        static_cast<unsigned long>(-static_cast<std::int64_t>(k)));
      }
      vbig_[i] = std::move(v);
    }
  }
  min_ = max_ = vbig_[0];
  for (std::size_t i = 1; i < n_; ++i) {
    if (vbig_[i] < min_) min_ = vbig_[i];
    if (vbig_[i] > max_) max_ = vbig_[i];
  }
}

BigInt FlattenedSet::value(std::size_t i) const {
  if (fits64_) {
    BigInt v;
    mpz_set_si(v.get_mpz_t(), static_cast<long>(v64_[i]));
    return v;
  }
  return vbig_[i];
}

BigInt FlattenedSet::subset_spread(const std::vector<std::uint32_t>& idx) const {
  if (idx.empty()) throw validation_error("subset_spread of empty subset");
  if (fits64_) {
    std::int64_t mn = v64_[idx[0]], mx = mn;
    for (std::uint32_t i : idx) {
      mn = std::min(mn, v64_[i]);
      mx = std::max(mx, v64_[i]);
    }
    return BigInt(static_cast<long>(mx)) - BigInt(static_cast<long>(mn)) + 1;
  }
  const BigInt* mn = &vbig_[idx[0]];
  const BigInt* mx = mn;
  for (std::uint32_t i : idx) {
    if (vbig_[i] < *mn) mn = &vbig_[i];
    if (vbig_[i] > *mx) mx = &vbig_[i];
  }
  return *mx - *mn + 1;
}

bool FlattenedSet::distinct_mod(const BigInt& modulus) const {
  if (modulus < 2) return n_ <= 1;
  if (fits64_ && modulus < (BigInt(1) << 62)) {
    std::uint64_t m = modulus.get_ui();
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(n_ * 2);
    for (std::size_t i = 0; i < n_; ++i)
      if (!seen.insert(residue(i, m)).second) return false;
    return true;
  }
  std::vector<BigInt> res(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    mpz_mod(res[i].get_mpz_t(), value(i).get_mpz_t(), modulus.get_mpz_t());
  }
  std::sort(res.begin(), res.end());
  for (std::size_t i = 1; i < n_; ++i)
    if (res[i] == res[i - 1]) return false;
  return true;
}

}  // namespace mr1l
