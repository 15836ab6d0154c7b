#include "mr1l/rank1.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mr1l/errors.hpp"
#include "mr1l/flatten.hpp"
#include "mr1l/primes.hpp"

namespace mr1l {

const char* source_name(Rank1Lattice::Source s) {
  switch (s) {
    case Rank1Lattice::Source::mixed_radix: return "mixed-radix";
    case Rank1Lattice::Source::crt: return "crt";
    case Rank1Lattice::Source::cbc: return "cbc";
    case Rank1Lattice::Source::user: return "user";
  }
  return "user";
}

Rank1Lattice::Source source_from_name(const std::string& name) {
  if (name == "mixed-radix") return Rank1Lattice::Source::mixed_radix;
  if (name == "crt") return Rank1Lattice::Source::crt;
  if (name == "cbc") return Rank1Lattice::Source::cbc;
  if (name == "user") return Rank1Lattice::Source::user;
  throw validation_error("unknown lattice source: " + name);
}

namespace {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

std::vector<std::uint64_t> modulus_image(const FrequencySet& I,
                                         const std::vector<BigInt>& z,
                                         std::uint64_t modulus) {
  if (modulus < 1) throw validation_error("modulus must be >= 1");
  if (z.size() != I.dim())
    throw validation_error("generating vector dimension does not match set");
  std::uint32_t d = I.dim();
  std::vector<std::uint64_t> zm(d);
  for (std::uint32_t t = 0; t < d; ++t) zm[t] = mod_word(z[t], modulus);
  std::vector<std::uint64_t> out(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) {
    auto row = I[i];
    std::uint64_t acc = 0;
    for (std::uint32_t t = 0; t < d; ++t) {
      std::int64_t k = row[t];
      std::uint64_t km = static_cast<std::uint64_t>(
          ((k % static_cast<std::int64_t>(modulus)) + static_cast<std::int64_t>(modulus)) %
          static_cast<std::int64_t>(modulus));
      acc = (acc + mulmod_u64(km, zm[t], modulus)) % modulus;
    }
    out[i] = acc;
  }
  return out;
}

std::vector<BigInt> modulus_image_big(const FrequencySet& I,
                                      const std::vector<BigInt>& z,
                                      const BigInt& modulus) {
  if (modulus < 1) throw validation_error("modulus must be >= 1");
  if (z.size() != I.dim())
    throw validation_error("generating vector dimension does not match set");
  std::uint32_t d = I.dim();
  std::vector<BigInt> zm(d);
  for (std::uint32_t t = 0; t < d; ++t)
    mpz_mod(zm[t].get_mpz_t(), z[t].get_mpz_t(), modulus.get_mpz_t());
  std::vector<BigInt> out(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) {
    auto row = I[i];
    BigInt acc = 0;
    for (std::uint32_t t = 0; t < d; ++t) {
      std::int32_t k = row[t];
      if (k > 0)
        mpz_addmul_ui(acc.get_mpz_t(), zm[t].get_mpz_t(), static_cast<unsigned long>(k));
      else if (k < 0)
        mpz_submul_ui(acc.get_mpz_t(), zm[t].get_mpz_t(),
                      static_cast<unsigned long>(-static_cast<std::int64_t>(k)));
      mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), modulus.get_mpz_t());
    }
    out[i] = std::move(acc);
  }
  return out;
}

bool is_reconstructing(const FrequencySet& I, const Rank1Lattice& lat) {
  if (I.size() == 0) return true;
  if (lat.dim() != I.dim())
    throw validation_error("lattice dimension does not match set");
  if (lat.m < 1) throw validation_error("modulus must be >= 1");
  if (lat.m < (BigInt(1) << 62)) {
    std::uint64_t m = lat.m.get_ui();
    auto img = modulus_image(I, lat.z, m);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(img.size() * 2);
    for (std::uint64_t r : img)
      if (!seen.insert(r).second) return false;
    return true;
  }
  // Wide modulus: reduce exact inner products instead; identical predicate,
  // far cheaper at mixed-radix sizes.
  FlattenedSet values(I, lat.z);
  return values.distinct_mod(lat.m);
}

Rank1Lattice build_mixed_radix(const FrequencySet& I) {
  if (I.size() == 0) throw validation_error("cannot build a lattice for an empty set");
  Expansion e = expansion(I);
  std::uint64_t B = static_cast<std::uint64_t>(e.n_max) + 1;
  std::uint32_t d = I.dim();
  Rank1Lattice lat;
  lat.source = Rank1Lattice::Source::mixed_radix;
  lat.z.resize(d);
  lat.z[0] = 1;
  for (std::uint32_t t = 1; t < d; ++t) lat.z[t] = lat.z[t - 1] * static_cast<unsigned long>(B);
  lat.m = pow_big(B, d);
  return lat;
}

Rank1Lattice build_crt(const FrequencySet& I) {
  if (I.size() == 0) throw validation_error("cannot build a lattice for an empty set");
  Expansion e = expansion(I);
  std::uint32_t d = I.dim();
  std::uint64_t n = static_cast<std::uint64_t>(e.n_max);
  std::uint64_t q = static_cast<std::uint64_t>(d) * n + d + 1;
  std::vector<std::uint64_t> qs(d);
  qs[0] = q;
  for (std::uint32_t t = 1; t < d; ++t)
    qs[t] = PrimeIndexer::global().next_prime_after(qs[t - 1]);
  Rank1Lattice lat;
  lat.source = Rank1Lattice::Source::crt;
  lat.m = 1;
  for (std::uint32_t t = 0; t < d; ++t) lat.m *= static_cast<unsigned long>(qs[t]);
  lat.z.resize(d);
  for (std::uint32_t t = 0; t < d; ++t) lat.z[t] = lat.m / static_cast<unsigned long>(qs[t]);
  return lat;
}

namespace {

// Modular inverse for prime modulus via Fermat.
std::uint64_t inv_mod_prime(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, p);
    b = mulmod_u64(b, b, p);
    e >>= 1;
  }
  return r;
}

struct PrefixRep {
  std::uint64_t residue;  // parent prefix residue
  std::int64_t step;      // new component value
};

// Smallest z in [1, M) separating all representatives, or 0 if none exists.
std::uint64_t smallest_feasible_component(const std::vector<PrefixRep>& reps,
                                          std::uint64_t M,
                                          std::uint64_t direct_tries) {
  auto distinct_under = [&](std::uint64_t zc) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(reps.size() * 2);
    for (const auto& r : reps) {
      std::uint64_t cm = static_cast<std::uint64_t>(
          ((r.step % static_cast<std::int64_t>(M)) + static_cast<std::int64_t>(M)) %
          static_cast<std::int64_t>(M));
      std::uint64_t val = (r.residue + mulmod_u64(cm, zc, M)) % M;
      if (!seen.insert(val).second) return false;
    }
    return true;
  };
  std::uint64_t upto = std::min<std::uint64_t>(direct_tries, M - 1);
  for (std::uint64_t zc = 1; zc <= upto; ++zc)
    if (distinct_under(zc)) return zc;
  if (upto == M - 1) return 0;

  // Mark every z that makes some representative pair coincide:
  // r_i + c_i z = r_j + c_j z (mod M)  =>  z = (r_i - r_j) inv(c_j - c_i).
  // Pairs with equal steps never coincide (parents are distinct).
  std::vector<std::uint8_t> bad(M, 0);
  std::uint64_t marked = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      std::int64_t dc = reps[j].step - reps[i].step;
      if (dc == 0) continue;
      std::uint64_t dcm = static_cast<std::uint64_t>(
          ((dc % static_cast<std::int64_t>(M)) + static_cast<std::int64_t>(M)) %
          static_cast<std::int64_t>(M));
      if (dcm == 0) continue;
      std::uint64_t dr = (reps[i].residue + M - reps[j].residue) % M;
      std::uint64_t zbad = mulmod_u64(dr, inv_mod_prime(dcm, M), M);
      if (!bad[zbad] && ++marked == M) return 0;
      bad[zbad] = 1;
    }
  }
  for (std::uint64_t zc = upto + 1; zc < M; ++zc)
    if (!bad[zc]) return zc;
  return 0;
}

}  // namespace

Rank1Lattice build_cbc(const FrequencySet& I, const CbcOptions& opts) {
  if (I.size() == 0) throw validation_error("cannot build a lattice for an empty set");
  std::uint32_t d = I.dim();
  std::size_t s = I.size();
  Expansion e = expansion(I);
  std::uint64_t n = static_cast<std::uint64_t>(e.n_max);
  std::uint64_t walk_floor = std::max<std::uint64_t>(s, n);
  std::uint64_t cheap_zone = 4 * std::max<std::uint64_t>(walk_floor, 1);
  std::uint64_t abort_bound =
      4 * std::max<std::uint64_t>(static_cast<std::uint64_t>(s) * s, 2 * (n + 1));
  auto& primes = PrimeIndexer::global();

  std::uint64_t M = primes.next_prime_after(std::max<std::uint64_t>(walk_floor, 1));
  while (M <= abort_bound) {
    std::vector<std::uint64_t> zs;
    zs.reserve(d);
    std::vector<std::uint64_t> row_res(s, 0);   // prefix residues per row
    std::vector<std::uint32_t> gid(s, 0);       // prefix equality classes
    bool ok = true;
    for (std::uint32_t t = 0; t < d && ok; ++t) {
      // Distinct t+1 prefixes = distinct (group, component value) pairs.
      std::unordered_map<std::uint64_t, std::uint32_t> remap;
      remap.reserve(s * 2);
      std::vector<PrefixRep> reps;
      std::vector<std::uint32_t> new_gid(s);
      for (std::size_t i = 0; i < s; ++i) {
        std::int64_t c = I[i][t];
        std::uint64_t key = (static_cast<std::uint64_t>(gid[i]) << 33) ^
                            static_cast<std::uint64_t>(c + (1ll << 31));
        auto [it, inserted] = remap.emplace(key, static_cast<std::uint32_t>(reps.size()));
        if (inserted) reps.push_back({row_res[i], c});
        new_gid[i] = it->second;
      }
      std::uint64_t zc = smallest_feasible_component(reps, M, opts.direct_tries);
      if (zc == 0) {
        ok = false;
        break;
      }
      zs.push_back(zc);
      for (std::size_t i = 0; i < s; ++i) {
        std::int64_t c = I[i][t];
        std::uint64_t cm = static_cast<std::uint64_t>(
            ((c % static_cast<std::int64_t>(M)) + static_cast<std::int64_t>(M)) %
            static_cast<std::int64_t>(M));
        row_res[i] = (row_res[i] + mulmod_u64(cm, zc, M)) % M;
      }
      gid = std::move(new_gid);
    }
    if (ok) {
      Rank1Lattice lat;
      lat.source = Rank1Lattice::Source::cbc;
      lat.m = BigInt(static_cast<unsigned long>(M));
      lat.z.reserve(d);
      for (std::uint64_t zc : zs) lat.z.emplace_back(static_cast<unsigned long>(zc));
      return lat;
    }
    M = M <= cheap_zone
            ? primes.next_prime_after(M)
            : primes.next_prime_after(static_cast<std::uint64_t>(
                  static_cast<double>(M) * opts.escalation_ratio));
  }
  throw internal_error("component-by-component modulus search exhausted below " +
                       std::to_string(abort_bound));
}

BigInt value_spread(const FrequencySet& I, const std::vector<BigInt>& z) {
  FlattenedSet values(I, z);
  return values.spread();
}

BigInt spread_bound_dnm(const FrequencySet& I, const BigInt& m) {
  Expansion e = expansion(I);
  BigInt b = m;
  b *= static_cast<unsigned long>(I.dim());
  b *= static_cast<unsigned long>(e.n_max);
  return b;
}

BigInt spread_bound_l1(const FrequencySet& I, const BigInt& m) {
  std::uint64_t max_l1 = 0;
  for (std::size_t i = 0; i < I.size(); ++i) {
    auto row = I[i];
    std::uint64_t l1 = 0;
    for (std::uint32_t t = 0; t < I.dim(); ++t)
      l1 += static_cast<std::uint64_t>(row[t] < 0 ? -static_cast<std::int64_t>(row[t])
                                                  : row[t]);
    max_l1 = std::max(max_l1, l1);
  }
  BigInt b = m;
  b *= 2;
  b *= static_cast<unsigned long>(max_l1);
  return b;
}

std::vector<double> lattice_node(const Rank1Lattice& lat, const BigInt& j) {
  std::vector<double> x(lat.dim());
  double md = lat.m.get_d();
  BigInt r;
  for (std::uint32_t t = 0; t < lat.dim(); ++t) {
    r = lat.z[t] * j;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), lat.m.get_mpz_t());
    x[t] = r.get_d() / md;
  }
  return x;
}

void write_lattice(std::ostream& os, const Rank1Lattice& lat) {
  os << "source " << source_name(lat.source) << '\n';
  os << "M " << lat.m.get_str() << '\n';
  os << "z";
  for (const auto& c : lat.z) os << ' ' << c.get_str();
  os << '\n';
}

Rank1Lattice read_lattice(std::istream& is) {
  Rank1Lattice lat;
  bool have_m = false, have_z = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "source") {
      std::string v;
      ls >> v;
      lat.source = source_from_name(v);
    } else if (key == "M") {
      std::string v;
      ls >> v;
      lat.m = parse_big(v);
      have_m = true;
    } else if (key == "z") {
      std::string v;
      while (ls >> v) lat.z.push_back(parse_big(v));
      have_z = true;
    } else {
      throw validation_error("lattice file: unknown key " + key);
    }
  }
  if (!have_m || !have_z)
    throw validation_error("lattice file: missing M or z");
  if (lat.m < 1) throw validation_error("lattice file: modulus must be >= 1");
  return lat;
}

}  // namespace mr1l
