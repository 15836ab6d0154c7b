#include "mr1l/plan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mr1l/errors.hpp"
#include "mr1l/parallel.hpp"
#include "mr1l/primes.hpp"

namespace mr1l {

const char* variant_name(Variant v) {
  return v == Variant::full ? "full" : "reduction";
}

Variant variant_from_name(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "reduction") return Variant::reduction;
  throw validation_error("unknown plan variant: " + name);
}

std::uint64_t MultiLatticePlan::total_samples() const {
  std::uint64_t sum = 0;
  for (std::uint64_t p : primes) sum += p;
  return sum + 1 - primes.size();
}

namespace {

struct BitVec {
  std::vector<std::uint64_t> w;
  explicit BitVec(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= 1ull << (i & 63); }
  bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
};

std::size_t count_and_not(const BitVec& a, const BitVec& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.w.size(); ++i)
    c += static_cast<std::size_t>(std::popcount(a.w[i] & ~b.w[i]));
  return c;
}

// Collision-free flags for all values under modulus p: bit i set iff the
// residue of value i occurs exactly once across the whole set.
BitVec unique_flags(const FlattenedSet& values, std::uint64_t p) {
  std::size_t s = values.size();
  std::vector<std::uint64_t> res(s);
  for (std::size_t i = 0; i < s; ++i) res[i] = values.residue(i, p);
  BitVec out(s);
  if (p <= 16 * s + 64) {
    std::vector<std::uint32_t> cnt(p, 0);
    for (std::uint64_t r : res) ++cnt[r];
    for (std::size_t i = 0; i < s; ++i)
      if (cnt[res[i]] == 1) out.set(i);
  } else {
    std::unordered_map<std::uint64_t, std::uint32_t> cnt;
    cnt.reserve(s * 2);
    for (std::uint64_t r : res) ++cnt[r];
    for (std::size_t i = 0; i < s; ++i)
      if (cnt[res[i]] == 1) out.set(i);
  }
  return out;
}

// Residual-set evaluation for the peeling variant: which active entries are
// collision-free within the active subset under p.
void unique_in_subset(const FlattenedSet& values,
                      const std::vector<std::uint32_t>& active, std::uint64_t p,
                      std::vector<std::uint8_t>& flags_out,
                      std::uint32_t& count_out) {
  std::size_t n = active.size();
  std::vector<std::uint64_t> res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = values.residue(active[i], p);
  flags_out.assign(n, 0);
  std::uint32_t cnt_unique = 0;
  if (p <= 16 * n + 64) {
    std::vector<std::uint32_t> cnt(p, 0);
    for (std::uint64_t r : res) ++cnt[r];
    for (std::size_t i = 0; i < n; ++i)
      if (cnt[res[i]] == 1) {
        flags_out[i] = 1;
        ++cnt_unique;
      }
  } else {
    std::unordered_map<std::uint64_t, std::uint32_t> cnt;
    cnt.reserve(n * 2);
    for (std::uint64_t r : res) ++cnt[r];
    for (std::size_t i = 0; i < n; ++i)
      if (cnt[res[i]] == 1) {
        flags_out[i] = 1;
        ++cnt_unique;
      }
  }
  count_out = cnt_unique;
}

void validate_planner_inputs(const FrequencySet& I, const Rank1Lattice& single) {
  if (I.size() == 0) throw validation_error("cannot plan for an empty set");
  if (single.dim() != I.dim())
    throw validation_error("lattice dimension does not match set");
  if (single.m < 1) throw validation_error("modulus must be >= 1");
}

}  // namespace

MultiLatticePlan build_full(const FrequencySet& I, const Rank1Lattice& single,
                            const PlanOptions& opts) {
  validate_planner_inputs(I, single);
  unsigned threads = resolve_threads(opts.threads);
  std::size_t s = I.size();

  FlattenedSet values(I, single.z);
  if (!values.distinct_mod(single.m))
    throw not_reconstructing_error(
        "single lattice does not separate the frequency set");

  MultiLatticePlan plan;
  plan.variant = Variant::full;
  plan.z = single.z;
  plan.source_m = single.m;
  plan.spread = values.spread();

  std::uint64_t K = candidate_count(s, plan.spread);
  std::uint64_t q = PrimeIndexer::global().least_index_geq(s);

  // Candidate primes and their collision-free flags, filled on demand.
  // Flags are independent of the round (uniqueness is measured against the
  // whole set), so re-scans across rounds reuse them at popcount cost.
  std::vector<std::uint64_t> cand;
  std::vector<BitVec> flags;
  auto ensure_computed = [&](std::size_t upto) {  // positions [0, upto)
    upto = static_cast<std::size_t>(std::min<std::uint64_t>(upto, K));
    if (flags.size() >= upto) return;
    std::size_t from = flags.size();
    {
      auto fresh = PrimeIndexer::global().window(q + from, upto - from);
      cand.insert(cand.end(), fresh.begin(), fresh.end());
    }
    flags.resize(upto, BitVec(0));
    parallel_for(upto - from, threads, [&](std::size_t i) {
      flags[from + i] = unique_flags(values, cand[from + i]);
    });
  };

  BitVec active(s);
  for (std::size_t i = 0; i < s; ++i) active.set(i);
  std::size_t active_count = s;
  plan.assignment.assign(s, 0);
  std::unordered_set<std::uint64_t> chosen;
  const std::size_t block = std::max<std::size_t>(16, threads * 4);

  while (active_count > 0) {
    bool selected = false;
    std::uint64_t scanned = 0;
    for (std::uint64_t pos = 0; pos < K && !selected; ++pos) {
      if (pos >= flags.size()) ensure_computed(static_cast<std::size_t>(pos) + block);
      ++scanned;
      std::uint64_t p = cand[static_cast<std::size_t>(pos)];
      if (chosen.count(p)) continue;
      const BitVec& uniq = flags[static_cast<std::size_t>(pos)];
      std::size_t colliding_after = count_and_not(active, uniq);
      if (2 * colliding_after > active_count) continue;

      // Select p as the next modulus.
      std::uint32_t round = static_cast<std::uint32_t>(plan.primes.size());
      chosen.insert(p);
      plan.primes.push_back(p);
      std::vector<std::uint32_t> rec;
      for (std::size_t i = 0; i < s; ++i) {
        if (!uniq.get(i)) continue;
        rec.push_back(static_cast<std::uint32_t>(i));
        if (active.get(i)) plan.assignment[i] = round;
      }
      plan.recoverable.push_back(std::move(rec));
      for (std::size_t w = 0; w < active.w.size(); ++w) active.w[w] &= ~uniq.w[w];
      plan.rounds.push_back({p, static_cast<std::uint32_t>(active_count),
                             static_cast<std::uint32_t>(colliding_after), scanned,
                             q, K});
      active_count = colliding_after;
      selected = true;
    }
    if (!selected)
      throw candidate_exhausted_error(
          "no halving modulus among " + std::to_string(K) + " candidates");
  }
  return plan;
}

MultiLatticePlan build_reduction(const FrequencySet& I, const Rank1Lattice& single,
                                 const PlanOptions& opts) {
  validate_planner_inputs(I, single);
  unsigned threads = resolve_threads(opts.threads);
  std::size_t s = I.size();

  FlattenedSet values(I, single.z);
  if (!values.distinct_mod(single.m))
    throw not_reconstructing_error(
        "single lattice does not separate the frequency set");

  MultiLatticePlan plan;
  plan.variant = Variant::reduction;
  plan.z = single.z;
  plan.source_m = single.m;
  plan.spread = values.spread();
  plan.assignment.assign(s, 0);

  std::vector<std::uint32_t> active(s);
  for (std::size_t i = 0; i < s; ++i) active[i] = static_cast<std::uint32_t>(i);
  std::unordered_set<std::uint64_t> chosen;
  const std::size_t block = std::max<std::size_t>(16, threads * 4);

  while (!active.empty()) {
    std::size_t sl = active.size();
    BigInt spread_l = values.subset_spread(active);
    std::uint64_t K = candidate_count(sl, spread_l);
    std::uint64_t q = PrimeIndexer::global().least_index_geq(sl);

    // Speculatively evaluate candidate blocks in parallel, commit the first
    // acceptable position in ascending order.
    std::vector<std::uint64_t> cand;
    std::vector<std::vector<std::uint8_t>> flags;
    std::vector<std::uint32_t> uniq_counts;
    auto ensure_computed = [&](std::size_t upto) {
      upto = static_cast<std::size_t>(std::min<std::uint64_t>(upto, K));
      if (flags.size() >= upto) return;
      std::size_t from = flags.size();
      {
        auto fresh = PrimeIndexer::global().window(q + from, upto - from);
        cand.insert(cand.end(), fresh.begin(), fresh.end());
      }
      flags.resize(upto);
      uniq_counts.resize(upto, 0);
      parallel_for(upto - from, threads, [&](std::size_t i) {
        if (chosen.count(cand[from + i])) return;  // will be skipped anyway
        unique_in_subset(values, active, cand[from + i], flags[from + i],
                         uniq_counts[from + i]);
      });
    };

    bool selected = false;
    std::uint64_t scanned = 0;
    for (std::uint64_t pos = 0; pos < K && !selected; ++pos) {
      if (pos >= flags.size()) ensure_computed(static_cast<std::size_t>(pos) + block);
      ++scanned;
      std::uint64_t p = cand[static_cast<std::size_t>(pos)];
      if (chosen.count(p)) continue;
      std::uint32_t n_unique = uniq_counts[static_cast<std::size_t>(pos)];
      if (2ull * n_unique < sl) continue;

      std::uint32_t round = static_cast<std::uint32_t>(plan.primes.size());
      chosen.insert(p);
      plan.primes.push_back(p);
      const auto& fl = flags[static_cast<std::size_t>(pos)];
      std::vector<std::uint32_t> rec;
      std::vector<std::uint32_t> remaining;
      rec.reserve(n_unique);
      remaining.reserve(sl - n_unique);
      for (std::size_t i = 0; i < sl; ++i) {
        if (fl[i]) {
          plan.assignment[active[i]] = round;
          rec.push_back(active[i]);
        } else {
          remaining.push_back(active[i]);
        }
      }
      plan.recoverable.push_back(std::move(rec));
      plan.rounds.push_back({p, static_cast<std::uint32_t>(sl),
                             static_cast<std::uint32_t>(sl - n_unique), scanned, q, K});
      active = std::move(remaining);
      selected = true;
    }
    if (!selected)
      throw candidate_exhausted_error(
          "no acceptable modulus among " + std::to_string(K) +
          " residual candidates");
  }
  return plan;
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> survivors(
    const std::vector<std::uint32_t>& active,
    const std::vector<std::uint64_t>& all_residues, std::uint64_t p) {
  if (p < 2) throw validation_error("modulus must be >= 2");
  std::unordered_map<std::uint64_t, std::uint32_t> cnt;
  cnt.reserve(all_residues.size() * 2);
  for (std::uint64_t r : all_residues) ++cnt[r % p];
  std::vector<std::uint32_t> free_of, colliding;
  for (std::uint32_t i : active) {
    if (i >= all_residues.size())
      throw validation_error("active index out of range");
    if (cnt[all_residues[i] % p] == 1)
      free_of.push_back(i);
    else
      colliding.push_back(i);
  }
  return {std::move(free_of), std::move(colliding)};
}

double full_sample_bound(std::uint64_t s, const BigInt& spread) {
  if (s == 0) throw validation_error("bound needs s >= 1");
  if (s == 1) return 2.0;
  constexpr double kC1 = 2.832;
  constexpr double kC2 = 2.3;
  double l2 = log2_big(spread);
  double log_s = l2 / std::log2(static_cast<double>(s));
  return 2.0 * kC1 * static_cast<double>(s) * l2 *
         std::log(kC2 * static_cast<double>(s) * log_s);
}

double reduction_sample_bound(std::uint64_t s, const BigInt& spread) {
  if (s == 0) throw validation_error("bound needs s >= 1");
  if (s == 1) return 2.0;
  double l2 = log2_big(spread);
  return 8.0 * static_cast<double>(s) * l2 * std::log(2.0 * l2);
}

double overall_sample_bound(std::uint64_t s, std::uint32_t d, std::uint64_t n,
                            const BigInt& m) {
  if (s == 0 || d == 0 || n == 0) throw validation_error("bound needs s, d, n >= 1");
  if (s == 1) return 2.0;
  BigInt dnm = m;
  dnm *= static_cast<unsigned long>(d);
  dnm *= static_cast<unsigned long>(n);
  double l2 = log2_big(dnm);
  double s_over_logs = static_cast<double>(s) / std::log2(static_cast<double>(s));
  return 6.0 * static_cast<double>(s) * l2 * std::log(3.0 * s_over_logs * l2);
}

std::string verify_plan(const MultiLatticePlan& plan, const FrequencySet& I) {
  std::size_t s = I.size();
  std::size_t L = plan.lattice_count();
  auto fail = [](const std::string& m) { return m; };

  if (s == 0) return fail("empty set");
  if (L == 0) return fail("no lattices");
  if (plan.assignment.size() != s) return fail("assignment length mismatch");
  if (plan.recoverable.size() != L) return fail("recoverable length mismatch");
  if (plan.rounds.size() != L) return fail("round diagnostics length mismatch");

  std::size_t max_len =
      static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(s)))) + 1;
  if (L > max_len)
    return fail("plan has " + std::to_string(L) + " lattices, cap " +
                std::to_string(max_len));

  std::unordered_set<std::uint64_t> uniq_primes(plan.primes.begin(),
                                                plan.primes.end());
  if (uniq_primes.size() != L) return fail("repeated modulus");

  for (const auto& r : plan.rounds)
    if (2 * r.active_after > r.active_before)
      return fail("round did not halve: " + std::to_string(r.active_before) +
                  " -> " + std::to_string(r.active_after));

  FlattenedSet values(I, plan.z);
  if (values.spread() != plan.spread) return fail("recorded spread mismatch");
  if (!values.distinct_mod(plan.source_m)) return fail("single lattice not separating");

  // Collision certificates.
  if (plan.variant == Variant::full) {
    for (std::size_t l = 0; l < L; ++l) {
      BitVec uniq = unique_flags(values, plan.primes[l]);
      std::vector<std::uint8_t> in_rec(s, 0);
      for (std::uint32_t i : plan.recoverable[l]) {
        if (i >= s) return fail("recoverable index out of range");
        in_rec[i] = 1;
      }
      for (std::size_t i = 0; i < s; ++i)
        if (static_cast<bool>(in_rec[i]) != uniq.get(i))
          return fail("recoverable list disagrees with collision structure");
    }
  } else {
    // Residual membership: frequency i is active in rounds 0..assignment[i].
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<std::uint32_t> residual;
      for (std::size_t i = 0; i < s; ++i)
        if (plan.assignment[i] >= l) residual.push_back(static_cast<std::uint32_t>(i));
      std::vector<std::uint8_t> fl;
      std::uint32_t n_unique = 0;
      unique_in_subset(values, residual, plan.primes[l], fl, n_unique);
      if (2ull * n_unique < residual.size()) return fail("round below half coverage");
      for (std::size_t i = 0; i < residual.size(); ++i) {
        bool assigned_here = plan.assignment[residual[i]] == l;
        if (assigned_here != static_cast<bool>(fl[i]))
          return fail("assignment disagrees with residual collision structure");
      }
    }
  }

  // Coverage: every frequency assigned to a lattice that can recover it.
  for (std::size_t i = 0; i < s; ++i) {
    std::uint32_t l = plan.assignment[i];
    if (l >= L) return fail("assignment round out of range");
    const auto& rec = plan.recoverable[l];
    if (!std::binary_search(rec.begin(), rec.end(), static_cast<std::uint32_t>(i)))
      return fail("assigned lattice cannot recover its frequency");
  }

  // Sample bound of the variant.
  double bound = plan.variant == Variant::full
                     ? full_sample_bound(s, plan.spread)
                     : reduction_sample_bound(s, plan.spread);
  double sum = 0;
  for (std::uint64_t p : plan.primes) sum += static_cast<double>(p);
  if (sum > bound)
    return fail("sum of moduli " + std::to_string(sum) + " exceeds bound " +
                std::to_string(bound));
  return {};
}

void write_plan(std::ostream& os, const MultiLatticePlan& plan) {
  os << "variant " << variant_name(plan.variant) << '\n';
  os << "z";
  for (const auto& c : plan.z) os << ' ' << c.get_str();
  os << '\n';
  os << "source_M " << plan.source_m.get_str() << '\n';
  os << "spread " << plan.spread.get_str() << '\n';
  os << "primes";
  for (std::uint64_t p : plan.primes) os << ' ' << p;
  os << '\n';
  os << "assignment";
  for (std::uint32_t a : plan.assignment) os << ' ' << a;
  os << '\n';
  os << "rounds " << plan.rounds.size() << '\n';
  for (std::size_t l = 0; l < plan.rounds.size(); ++l) {
    const auto& r = plan.rounds[l];
    os << "round " << l << " prime " << r.prime << " before " << r.active_before
       << " after " << r.active_after << " scanned " << r.scanned << " window "
       << r.window_start << ' ' << r.window_size << '\n';
  }
}

MultiLatticePlan read_plan(std::istream& is) {
  MultiLatticePlan plan;
  bool have_variant = false, have_z = false, have_m = false, have_spread = false,
       have_primes = false, have_assignment = false;
  std::size_t expect_rounds = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "variant") {
      std::string v;
      ls >> v;
      plan.variant = variant_from_name(v);
      have_variant = true;
    } else if (key == "z") {
      std::string v;
      while (ls >> v) plan.z.push_back(parse_big(v));
      have_z = true;
    } else if (key == "source_M") {
      std::string v;
      ls >> v;
      plan.source_m = parse_big(v);
      have_m = true;
    } else if (key == "spread") {
      std::string v;
      ls >> v;
      plan.spread = parse_big(v);
      have_spread = true;
    } else if (key == "primes") {
      std::uint64_t p;
      while (ls >> p) plan.primes.push_back(p);
      have_primes = true;
    } else if (key == "assignment") {
      std::uint32_t a;
      while (ls >> a) plan.assignment.push_back(a);
      have_assignment = true;
    } else if (key == "rounds") {
      ls >> expect_rounds;
    } else if (key == "round") {
      std::size_t idx;
      std::string t1, t2, t3, t4, t5;
      RoundInfo r;
      if (!(ls >> idx >> t1 >> r.prime >> t2 >> r.active_before >> t3 >>
            r.active_after >> t4 >> r.scanned >> t5 >> r.window_start >>
            r.window_size) ||
          t1 != "prime" || t2 != "before" || t3 != "after" || t4 != "scanned" ||
          t5 != "window")
        throw validation_error("plan file: malformed round line");
      if (idx != plan.rounds.size())
        throw validation_error("plan file: round lines out of order");
      plan.rounds.push_back(r);
    } else {
      throw validation_error("plan file: unknown key " + key);
    }
  }
  if (!have_variant || !have_z || !have_m || !have_spread || !have_primes || !have_assignment)
    throw validation_error("plan file: missing required field");
  if (plan.rounds.size() != expect_rounds || expect_rounds != plan.primes.size())
    throw validation_error("plan file: round count mismatch");
  for (std::uint32_t a : plan.assignment)
    if (a >= plan.primes.size())
      throw validation_error("plan file: assignment entry out of range");
  return plan;
}

void recompute_recoverable(MultiLatticePlan& plan, const FrequencySet& I) {
  std::size_t s = I.size();
  if (plan.assignment.size() != s)
    throw validation_error("plan does not match the frequency set size");
  plan.recoverable.assign(plan.lattice_count(), {});
  if (plan.variant == Variant::reduction) {
    for (std::size_t i = 0; i < s; ++i)
      plan.recoverable[plan.assignment[i]].push_back(static_cast<std::uint32_t>(i));
    return;
  }
  FlattenedSet values(I, plan.z);
  for (std::size_t l = 0; l < plan.lattice_count(); ++l) {
    BitVec uniq = unique_flags(values, plan.primes[l]);
    for (std::size_t i = 0; i < s; ++i)
      if (uniq.get(i)) plan.recoverable[l].push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace mr1l
