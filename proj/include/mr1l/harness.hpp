#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mr1l/io.hpp"
#include "mr1l/plan.hpp"
#include "mr1l/rank1.hpp"

namespace mr1l {

enum class SetKind { hyperbolic, random_cube };

const char* set_kind_name(SetKind k);
SetKind set_kind_from_name(const std::string& name);

// Grid description for one experiment run.  A cell is one (dimension,
// expansion-or-size, seed) triple; cells whose frequency set would exceed
// `cap` points are skipped, so a rectangular grid may include corners that
// are only feasible in low dimensions.
struct ExperimentConfig {
  std::string experiment = "counts";  // counts | approx | roundtrip
  Variant variant = Variant::full;
  SetKind set = SetKind::hyperbolic;
  Rank1Lattice::Source source = Rank1Lattice::Source::mixed_radix;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint64_t> expansions;  // hyperbolic-cross R values
  std::vector<std::uint64_t> sizes;       // random-set cardinalities
  std::uint32_t cube_radius = 64;         // random sets live in [-r, r]^d
  std::uint32_t seeds = 1;                // seeds per cell for random draws
  std::uint64_t seed0 = 1;
  std::size_t cap = 200'000;
  unsigned threads = 0;   // 0 = resolve via environment, default 1
  bool timestamp = false; // add a generation-time comment to CSV output
};

// Key-value text format, one "key value" pair per line, '#' comments.
ExperimentConfig read_config(std::istream& is);
void write_config(std::ostream& os, const ExperimentConfig& c);

// Lattice-count measurements: how many samples the multi-lattice split
// needs, against the per-variant and source-agnostic ceilings.
struct CountsRow {
  std::uint32_t d = 0;
  SetKind set = SetKind::hyperbolic;
  std::uint64_t radius = 0;  // cross expansion R, or cube radius
  std::uint64_t s = 0;
  std::uint64_t seed = 0;
  Rank1Lattice::Source source = Rank1Lattice::Source::mixed_radix;
  Variant variant = Variant::full;
  double log2_m = 0.0;
  std::uint32_t lattices = 0;
  std::uint64_t total_samples = 0;
  double per_size = 0.0;       // total_samples / s
  double variant_bound = 0.0;  // full_ or reduction_sample_bound
  double overall_bound = 0.0;  // overall_sample_bound
};

// Approximation of the built-in tensor test function by bin averaging on a
// one-shot plan, reported as relative L2 error.
struct ApproxRow {
  std::uint32_t d = 0;
  std::uint64_t radius = 0;
  std::uint64_t s = 0;
  Rank1Lattice::Source source = Rank1Lattice::Source::mixed_radix;
  std::uint32_t lattices = 0;
  std::uint64_t total_samples = 0;
  double rel_l2_error = 0.0;
};

// Exact-recovery check on random polynomials: worst coefficient error per
// (plan variant, reconstruction method) pair.
struct RoundtripRow {
  std::uint32_t d = 0;
  SetKind set = SetKind::hyperbolic;
  std::uint64_t radius = 0;
  std::uint64_t s = 0;
  std::uint64_t seed = 0;
  Rank1Lattice::Source source = Rank1Lattice::Source::mixed_radix;
  Variant variant = Variant::full;
  std::string method;  // direct | average | peeling
  double max_err = 0.0;
};

std::vector<CountsRow> run_counts(const ExperimentConfig& c);
std::vector<ApproxRow> run_approx(const ExperimentConfig& c);
std::vector<RoundtripRow> run_roundtrip(const ExperimentConfig& c);

CsvTable counts_csv(const ExperimentConfig& c,
                    const std::vector<CountsRow>& rows);
CsvTable approx_csv(const ExperimentConfig& c,
                    const std::vector<ApproxRow>& rows);
CsvTable roundtrip_csv(const ExperimentConfig& c,
                       const std::vector<RoundtripRow>& rows);

// Dispatch on c.experiment; the CSV comments echo the configuration.
CsvTable run_experiment(const ExperimentConfig& c);

// Small representative grid of every experiment type, used by the CLI
// default run and by determinism checks.
std::vector<ExperimentConfig> default_suite();

// Concatenated canonical bodies of a config list run in order; two runs
// with different thread counts must produce identical strings.
std::string suite_csv_bodies(const std::vector<ExperimentConfig>& configs,
                             unsigned threads);

}  // namespace mr1l
