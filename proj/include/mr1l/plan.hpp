#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mr1l/bigint.hpp"
#include "mr1l/flatten.hpp"
#include "mr1l/freqset.hpp"
#include "mr1l/rank1.hpp"

namespace mr1l {

enum class Variant { full, reduction };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct RoundInfo {
  std::uint64_t prime = 0;        // modulus selected this round
  std::uint32_t active_before = 0;
  std::uint32_t active_after = 0;
  std::uint64_t scanned = 0;      // candidates examined (incl. skipped ones)
  std::uint64_t window_start = 0; // prime index the scan started from
  std::uint64_t window_size = 0;  // candidates available to the scan
};

// A reconstructing single lattice (z, source_m) split into lattices of sizes
// `primes` sharing z. Frequency i is read off lattice assignment[i]; the
// full variant can additionally read it from any lattice whose recoverable
// list contains i.
struct MultiLatticePlan {
  Variant variant = Variant::full;
  std::vector<BigInt> z;
  BigInt source_m;
  BigInt spread;  // max(k.z) - min(k.z) + 1 over the set
  std::vector<std::uint64_t> primes;
  std::vector<std::uint32_t> assignment;
  std::vector<std::vector<std::uint32_t>> recoverable;
  std::vector<RoundInfo> rounds;

  std::size_t lattice_count() const { return primes.size(); }
  // Origin node is shared by every lattice, so it is evaluated once.
  std::uint64_t total_samples() const;
};

struct PlanOptions {
  unsigned threads = 0;  // 0 = resolve via environment (default 1)
};

// Split by collision counting against the whole set with one global
// candidate window; every chosen modulus must halve the still-colliding set.
MultiLatticePlan build_full(const FrequencySet& I, const Rank1Lattice& single,
                            const PlanOptions& opts = {});

// Split by peeling rounds: each round draws a fresh candidate window from
// the residual set's size and spread, and must make at least half of the
// residual frequencies collision-free within the residual.
MultiLatticePlan build_reduction(const FrequencySet& I, const Rank1Lattice& single,
                                 const PlanOptions& opts = {});

// Partition `active` into (collision-free, colliding) under modulus p, where
// an entry is collision-free iff its residue mod p occurs exactly once in
// all_residues (the full list, not just the active part).
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> survivors(
    const std::vector<std::uint32_t>& active,
    const std::vector<std::uint64_t>& all_residues, std::uint64_t p);

// Proven ceilings on sum(primes) for a set of size s with the given value
// spread; every constructed plan must come in under the bound of its variant.
double full_sample_bound(std::uint64_t s, const BigInt& spread);
double reduction_sample_bound(std::uint64_t s, const BigInt& spread);
// Source-agnostic ceiling using only d, the expansion n and the modulus.
double overall_sample_bound(std::uint64_t s, std::uint32_t d, std::uint64_t n,
                            const BigInt& m);

// Re-derives every structural guarantee of a plan from scratch (collision
// certificates, coverage, round halving, distinct moduli, length and sample
// bounds). Returns an empty string when all hold.
std::string verify_plan(const MultiLatticePlan& plan, const FrequencySet& I);

// Text format; recoverable lists are derivable and not serialized.
void write_plan(std::ostream& os, const MultiLatticePlan& plan);
MultiLatticePlan read_plan(std::istream& is);

// Rebuild the recoverable lists of a deserialized plan from I.
void recompute_recoverable(MultiLatticePlan& plan, const FrequencySet& I);

}  // namespace mr1l
