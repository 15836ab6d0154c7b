#include "mr1l/freqset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mr1l/errors.hpp"

namespace mr1l {

namespace {

// Lexicographic compare of two rows of width d inside a flat array.
struct RowLess {
  const std::int32_t* base;
  std::uint32_t d;
  bool operator()(std::size_t a, std::size_t b) const {
    const std::int32_t* pa = base + a * d;
    const std::int32_t* pb = base + b * d;
    return std::lexicographical_compare(pa, pa + d, pb, pb + d);
  }
};

std::uint64_t hash_row(const std::int32_t* p, std::uint32_t d) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (std::uint32_t t = 0; t < d; ++t) {
    std::uint32_t v = static_cast<std::uint32_t>(p[t]);
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace

FrequencySet::FrequencySet(std::uint32_t dim, std::vector<std::int32_t> flat)
    : dim_(dim) {
  if (dim == 0) throw validation_error("frequency sets need dimension >= 1");
  if (flat.size() % dim != 0)
    throw validation_error("flat frequency data length is not a multiple of d");
  std::size_t s = flat.size() / dim;
  std::vector<std::size_t> order(s);
  for (std::size_t i = 0; i < s; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), RowLess{flat.data(), dim});
  flat_.resize(flat.size());
  for (std::size_t i = 0; i < s; ++i)
    std::copy_n(flat.data() + order[i] * dim, dim, flat_.data() + i * dim);
  for (std::size_t i = 1; i < s; ++i) {
    const std::int32_t* a = flat_.data() + (i - 1) * dim;
    const std::int32_t* b = flat_.data() + i * dim;
    if (std::equal(a, a + dim, b))
      throw validation_error("duplicate frequency vector in set");
  }
}

std::size_t FrequencySet::index_of(std::span<const std::int32_t> k) const {
  if (k.size() != dim_) return size();
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const std::int32_t* p = flat_.data() + mid * dim_;
    if (std::lexicographical_compare(p, p + dim_, k.data(), k.data() + dim_))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size()) {
    const std::int32_t* p = flat_.data() + lo * dim_;
    if (std::equal(p, p + dim_, k.data())) return lo;
  }
  return size();
}

bool FrequencySet::contains(std::span<const std::int32_t> k) const {
  return index_of(k) != size();
}

Expansion expansion(const FrequencySet& I) {
  Expansion e;
  std::uint32_t d = I.dim();
  e.lo.assign(d, 0);
  e.hi.assign(d, 0);
  if (I.size() == 0) return e;
  for (std::uint32_t t = 0; t < d; ++t) {
    e.lo[t] = e.hi[t] = I[0][t];
  }
  for (std::size_t i = 1; i < I.size(); ++i) {
    auto row = I[i];
    for (std::uint32_t t = 0; t < d; ++t) {
      e.lo[t] = std::min(e.lo[t], row[t]);
      e.hi[t] = std::max(e.hi[t], row[t]);
    }
  }
  for (std::uint32_t t = 0; t < d; ++t)
    e.n_max = std::max(e.n_max, static_cast<std::int64_t>(e.hi[t]) -
                                    static_cast<std::int64_t>(e.lo[t]));
  return e;
}

namespace {

void cross_recurse(std::uint32_t d, std::uint64_t budget, std::size_t cap,
                   std::vector<std::int32_t>& row, std::vector<std::int32_t>& out) {
  std::uint32_t t = static_cast<std::uint32_t>(row.size());
  if (t == d) {
    if (out.size() / d >= cap)
      throw validation_error("hyperbolic cross cardinality exceeds cap");
    out.insert(out.end(), row.begin(), row.end());
    return;
  }
  // Component values allowed under the remaining multiplicative budget,
  // ascending so the output is lexicographically sorted by construction.
  std::int64_t m = static_cast<std::int64_t>(budget / 2) * 2;  // largest even value <= budget
  for (std::int64_t v = -m; v <= m; v += 2) {
    std::uint64_t w = v == 0 ? 1 : static_cast<std::uint64_t>(v < 0 ? -v : v);
    row.push_back(static_cast<std::int32_t>(v));
    cross_recurse(d, budget / w, cap, row, out);
    row.pop_back();
  }
}

}  // namespace

FrequencySet hyperbolic_cross_even(std::uint32_t d, std::uint64_t R, std::size_t cap) {
  if (d == 0) throw validation_error("dimension must be >= 1");
  if (R == 0) throw validation_error("radius must be >= 1");
  std::vector<std::int32_t> out;
  std::vector<std::int32_t> row;
  row.reserve(d);
  cross_recurse(d, R, cap, row, out);
  return FrequencySet(d, std::move(out));
}

namespace {

// Deterministic bounded draw: rejection on the top of a 64-bit stream.
// (std::uniform_int_distribution is implementation-defined; this is not.)
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t zone = std::numeric_limits<std::uint64_t>::max() -
                       std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    std::uint64_t r = rng();
    if (r < zone) return r % n;
  }
}

}  // namespace

FrequencySet random_cube_set(std::uint32_t d, std::uint32_t R, std::size_t s,
                             std::uint64_t seed) {
  if (d == 0) throw validation_error("dimension must be >= 1");
  std::uint64_t side = 2ull * R + 1;
  // Cube cardinality, saturating: only its relation to 100 s matters.
  long double card = 1.0L;
  for (std::uint32_t t = 0; t < d && card < 1e30L; ++t) card *= side;
  if (card < static_cast<long double>(s))
    throw validation_error("cube holds fewer points than requested");
  std::mt19937_64 rng(seed);
  std::vector<std::int32_t> flat;
  flat.reserve(s * d);

  if (card >= 100.0L * static_cast<long double>(s) || card > 1e18L) {
    // Sparse regime: draw and reject duplicates via hashing.
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    std::vector<std::int32_t> row(d);
    std::size_t accepted = 0;
    while (accepted < s) {
      for (std::uint32_t t = 0; t < d; ++t)
        row[t] = static_cast<std::int32_t>(
            static_cast<std::int64_t>(draw_below(rng, side)) - R);
      std::uint64_t h = hash_row(row.data(), d);
      bool dup = false;
      for (std::size_t j : seen[h]) {
        if (std::equal(row.begin(), row.end(), flat.begin() + j * d)) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      seen[h].push_back(accepted);
      flat.insert(flat.end(), row.begin(), row.end());
      ++accepted;
    }
  } else {
    // Dense regime: sparse Fisher-Yates over linear cube indices, O(s) memory.
    std::uint64_t n = static_cast<std::uint64_t>(card);
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;
    auto at = [&](std::uint64_t i) {
      auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    for (std::size_t i = 0; i < s; ++i) {
      std::uint64_t j = i + draw_below(rng, n - i);
      std::uint64_t vi = at(i), vj = at(j);
      swapped[j] = vi;
      // Decode index vj into base-(2R+1) digits, one per axis.
      std::uint64_t x = vj;
      for (std::uint32_t t = 0; t < d; ++t) {
        flat.push_back(static_cast<std::int32_t>(
            static_cast<std::int64_t>(x % side) - R));
        x /= side;
      }
    }
  }
  return FrequencySet(d, std::move(flat));
}

void write_freqset(std::ostream& os, const FrequencySet& I) {
  os << I.dim() << ' ' << I.size() << '\n';
  for (std::size_t i = 0; i < I.size(); ++i) {
    auto row = I[i];
    for (std::uint32_t t = 0; t < I.dim(); ++t) {
      if (t) os << ' ';
      os << row[t];
    }
    os << '\n';
  }
}

FrequencySet read_freqset(std::istream& is) {
  std::uint32_t d = 0;
  std::size_t s = 0;
  if (!(is >> d >> s)) throw validation_error("frequency file: bad header");
  if (d == 0) throw validation_error("frequency file: dimension must be >= 1");
  std::vector<std::int32_t> flat;
  flat.reserve(s * d);
  for (std::size_t i = 0; i < s * d; ++i) {
    std::int64_t v;
    if (!(is >> v)) throw validation_error("frequency file: truncated data");
    if (v < INT32_MIN || v > INT32_MAX)
      throw validation_error("frequency file: component out of range");
    flat.push_back(static_cast<std::int32_t>(v));
  }
  return FrequencySet(d, std::move(flat));
}

}  // namespace mr1l
