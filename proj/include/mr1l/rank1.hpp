#pragma once

#include <cstdint>
#include <vector>

#include "mr1l/bigint.hpp"
#include "mr1l/freqset.hpp"

namespace mr1l {

// Rank-1 lattice: nodes x_j = (j z mod M)/M, j = 0..M-1. Generating vector
// components and modulus are arbitrary-width (the mixed-radix construction
// reaches M = B^d with d in the thousands).
struct Rank1Lattice {
  enum class Source { mixed_radix, crt, cbc, user };

  std::vector<BigInt> z;
  BigInt m;
  Source source = Source::user;

  std::uint32_t dim() const { return static_cast<std::uint32_t>(z.size()); }
};

const char* source_name(Rank1Lattice::Source s);
Rank1Lattice::Source source_from_name(const std::string& name);

// Residues k·z mod modulus for every k in I, aligned with I's order.
// Accumulates component-wise modular products; no full-width inner product
// is formed when the modulus fits a machine word.
std::vector<std::uint64_t> modulus_image(const FrequencySet& I,
                                         const std::vector<BigInt>& z,
                                         std::uint64_t modulus);

// Same, for arbitrary-width moduli (slow path, small-scale use).
std::vector<BigInt> modulus_image_big(const FrequencySet& I,
                                      const std::vector<BigInt>& z,
                                      const BigInt& modulus);

// True iff k -> k·z mod M is injective on I, i.e. the single lattice can
// reproduce every coefficient supported on I from its own samples.
bool is_reconstructing(const FrequencySet& I, const Rank1Lattice& lat);

// Mixed-radix construction: B = N+1 (N the expansion of I), z = (1, B, ...,
// B^(d-1)), M = B^d. Components land in disjoint digit positions, so the
// lattice is reconstructing by construction.
Rank1Lattice build_mixed_radix(const FrequencySet& I);

// Coprime-factor construction: q_1 = d N + d + 1 (used as-is, prime or not),
// q_{t+1} = nextprime(q_t), M = prod q_t, z_t = M / q_t.
Rank1Lattice build_crt(const FrequencySet& I);

struct CbcOptions {
  // Candidate moduli walk consecutive primes while M <= 4 max(s, N), then
  // escalate geometrically; keeps the search near the optimum without
  // visiting millions of primes.
  double escalation_ratio = 1.18;
  // Small z_t values tried directly before enumerating colliding values.
  std::uint64_t direct_tries = 64;
};

// Greedy component-by-component search over prime moduli: for each candidate
// prime M, picks the smallest z_t in [1, M) keeping the prefix products
// injective. Fails over to the next modulus when a component is infeasible;
// errors above 4 max(s^2, 2(N+1)).
Rank1Lattice build_cbc(const FrequencySet& I, const CbcOptions& opts = {});

// Exact spread max(k·z) - min(k·z) + 1 over I.
BigInt value_spread(const FrequencySet& I, const std::vector<BigInt>& z);

// Cheap a-priori bounds on the spread (no inner products formed).
BigInt spread_bound_dnm(const FrequencySet& I, const BigInt& m);
BigInt spread_bound_l1(const FrequencySet& I, const BigInt& m);

// Node j of the lattice as doubles in [0,1)^d.
std::vector<double> lattice_node(const Rank1Lattice& lat, const BigInt& j);

// Text format, one "key value..." pair per line: source, M, z.
void write_lattice(std::ostream& os, const Rank1Lattice& lat);
Rank1Lattice read_lattice(std::istream& is);

}  // namespace mr1l
