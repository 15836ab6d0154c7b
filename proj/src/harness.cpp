#include "mr1l/harness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "mr1l/errors.hpp"
#include "mr1l/parallel.hpp"
#include "mr1l/spectral.hpp"
#include "mr1l/testfn.hpp"

namespace mr1l {

const char* set_kind_name(SetKind k) {
  return k == SetKind::hyperbolic ? "hyperbolic" : "random-cube";
}

SetKind set_kind_from_name(const std::string& name) {
  if (name == "hyperbolic") return SetKind::hyperbolic;
  if (name == "random-cube") return SetKind::random_cube;
  throw validation_error("unknown set kind: " + name);
}

namespace {

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw validation_error("empty list entry");
    out.push_back(std::stoull(item));
  }
  return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

struct Cell {
  std::uint32_t d = 0;
  std::uint64_t param = 0;  // cross expansion R or random-set size
  std::uint64_t seed = 0;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& c, bool use_seeds) {
  const std::vector<std::uint64_t>& params =
      c.set == SetKind::hyperbolic ? c.expansions : c.sizes;
  if (c.dims.empty() || params.empty())
    throw validation_error("experiment grid is empty");
  std::uint32_t nseeds =
      use_seeds || c.set == SetKind::random_cube ? std::max(1u, c.seeds) : 1;
  std::vector<Cell> cells;
  for (std::uint32_t d : c.dims)
    for (std::uint64_t p : params)
      for (std::uint32_t i = 0; i < nseeds; ++i)
        cells.push_back({d, p, c.seed0 + i});
  return cells;
}

// Cells above the cardinality cap yield nullopt and are skipped; that lets a
// rectangular grid carry corners only feasible in low dimensions.
std::optional<FrequencySet> make_set(const ExperimentConfig& c,
                                     const Cell& cell) {
  if (c.set == SetKind::hyperbolic) {
    try {
      return hyperbolic_cross_even(cell.d, cell.param, c.cap);
    } catch (const validation_error&) {
      return std::nullopt;
    }
  }
  if (cell.param > c.cap) return std::nullopt;
  long double cube = 1.0L;
  for (std::uint32_t t = 0; t < cell.d && cube < 1e30L; ++t)
    cube *= 2 * c.cube_radius + 1;
  if (cube < static_cast<long double>(cell.param)) return std::nullopt;
  return random_cube_set(cell.d, c.cube_radius, cell.param, cell.seed);
}

Rank1Lattice make_source(Rank1Lattice::Source src, const FrequencySet& I) {
  switch (src) {
    case Rank1Lattice::Source::mixed_radix: return build_mixed_radix(I);
    case Rank1Lattice::Source::crt: return build_crt(I);
    case Rank1Lattice::Source::cbc: return build_cbc(I);
    case Rank1Lattice::Source::user: break;
  }
  throw validation_error("experiment source must name a construction");
}

// Outer cell parallelism when the grid is wide; inner planner parallelism
// when it is a few heavy cells. Results never depend on the split.
unsigned inner_threads(std::size_t cells, unsigned resolved) {
  return cells >= resolved ? 1 : resolved;
}

std::uint64_t poly_seed(std::uint64_t cell_seed) {
  return cell_seed ^ 0x9e3779b97f4a7c15ull;
}

}  // namespace

ExperimentConfig read_config(std::istream& is) {
  ExperimentConfig c;
  c.dims.clear();
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ls(line);
    std::string key, value, extra;
    ls >> key >> value;
    if (key.empty()) continue;
    if (value.empty())
      throw validation_error("config line without a value: " + line);
    if (ls >> extra)
      throw validation_error(
          "config line has trailing tokens (lists are comma-separated): " +
          line);
    if (key == "experiment") {
      if (value != "counts" && value != "approx" && value != "roundtrip")
        throw validation_error("unknown experiment: " + value);
      c.experiment = value;
    } else if (key == "variant") {
      c.variant = variant_from_name(value);
    } else if (key == "set") {
      c.set = set_kind_from_name(value);
    } else if (key == "source") {
      c.source = source_from_name(value);
    } else if (key == "dims") {
      for (std::uint64_t v : parse_u64_list(value))
        c.dims.push_back(static_cast<std::uint32_t>(v));
    } else if (key == "expansions") {
      c.expansions = parse_u64_list(value);
    } else if (key == "sizes") {
      c.sizes = parse_u64_list(value);
    } else if (key == "cube_radius") {
      c.cube_radius = static_cast<std::uint32_t>(std::stoull(value));
    } else if (key == "seeds") {
      c.seeds = static_cast<std::uint32_t>(std::stoull(value));
    } else if (key == "seed0") {
      c.seed0 = std::stoull(value);
    } else if (key == "cap") {
      c.cap = std::stoull(value);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(std::stoull(value));
    } else if (key == "timestamp") {
      c.timestamp = value == "1" || value == "true";
    } else {
      throw validation_error("config: unknown key " + key);
    }
  }
  return c;
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  os << "experiment " << c.experiment << '\n';
  os << "variant " << variant_name(c.variant) << '\n';
  os << "set " << set_kind_name(c.set) << '\n';
  os << "source " << source_name(c.source) << '\n';
  std::vector<std::uint64_t> dims(c.dims.begin(), c.dims.end());
  os << "dims " << join_u64(dims) << '\n';
  if (!c.expansions.empty()) os << "expansions " << join_u64(c.expansions) << '\n';
  if (!c.sizes.empty()) os << "sizes " << join_u64(c.sizes) << '\n';
  os << "cube_radius " << c.cube_radius << '\n';
  os << "seeds " << c.seeds << '\n';
  os << "seed0 " << c.seed0 << '\n';
  os << "cap " << c.cap << '\n';
  os << "threads " << c.threads << '\n';
  os << "timestamp " << (c.timestamp ? 1 : 0) << '\n';
}

std::vector<CountsRow> run_counts(const ExperimentConfig& c) {
  std::vector<Cell> cells = enumerate_cells(c, false);
  std::vector<std::optional<CountsRow>> slot(cells.size());
  const unsigned workers = resolve_threads(c.threads);
  const unsigned inner = inner_threads(cells.size(), workers);
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    std::optional<FrequencySet> I = make_set(c, cells[i]);
    if (!I) return;
    Rank1Lattice single = make_source(c.source, *I);
    MultiLatticePlan plan =
        (c.variant == Variant::full ? build_full : build_reduction)(
            *I, single, {inner});
    CountsRow r;
    r.d = cells[i].d;
    r.set = c.set;
    r.radius = c.set == SetKind::hyperbolic ? cells[i].param : c.cube_radius;
    r.s = I->size();
    r.seed = c.set == SetKind::random_cube ? cells[i].seed : 0;
    r.source = c.source;
    r.variant = c.variant;
    r.log2_m = log2_big(single.m);
    r.lattices = static_cast<std::uint32_t>(plan.lattice_count());
    r.total_samples = plan.total_samples();
    r.per_size =
        static_cast<double>(r.total_samples) / static_cast<double>(r.s);
    r.variant_bound = c.variant == Variant::full
                          ? full_sample_bound(r.s, plan.spread)
                          : reduction_sample_bound(r.s, plan.spread);
    Expansion e = expansion(*I);
    r.overall_bound = overall_sample_bound(
        r.s, r.d, static_cast<std::uint64_t>(e.n_max), single.m);
    slot[i] = r;
  });
  std::vector<CountsRow> rows;
  for (auto& s : slot)
    if (s) rows.push_back(std::move(*s));
  return rows;
}

std::vector<ApproxRow> run_approx(const ExperimentConfig& c) {
  if (c.variant != Variant::full)
    throw validation_error("the approximation experiment averages bins and "
                           "needs the one-shot variant");
  if (c.set != SetKind::hyperbolic)
    throw validation_error("the approximation experiment uses "
                           "hyperbolic-cross supports");
  std::vector<Cell> cells = enumerate_cells(c, false);
  std::vector<std::optional<ApproxRow>> slot(cells.size());
  const unsigned workers = resolve_threads(c.threads);
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    std::optional<FrequencySet> I = make_set(c, cells[i]);
    if (!I) return;
    Rank1Lattice single = make_source(c.source, *I);
    MultiLatticePlan plan =
        build_full(*I, single, {inner_threads(cells.size(), workers)});
    SampleSet samples = sample_on_plan(plan, [](const std::vector<double>& x) {
      return cdouble{g3d(x), 0.0};
    });
    std::vector<cdouble> coeffs = reconstruct_average(plan, *I, samples);
    ApproxRow r;
    r.d = cells[i].d;
    r.radius = cells[i].param;
    r.s = I->size();
    r.source = c.source;
    r.lattices = static_cast<std::uint32_t>(plan.lattice_count());
    r.total_samples = plan.total_samples();
    r.rel_l2_error = g3d_rel_l2_error(*I, coeffs);
    slot[i] = r;
  });
  std::vector<ApproxRow> rows;
  for (auto& s : slot)
    if (s) rows.push_back(std::move(*s));
  return rows;
}

std::vector<RoundtripRow> run_roundtrip(const ExperimentConfig& c) {
  std::vector<Cell> cells = enumerate_cells(c, true);
  std::vector<std::vector<RoundtripRow>> slot(cells.size());
  const unsigned workers = resolve_threads(c.threads);
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    std::optional<FrequencySet> I = make_set(c, cells[i]);
    if (!I) return;
    Rank1Lattice single = make_source(c.source, *I);
    TrigPolynomial p = random_polynomial(*I, poly_seed(cells[i].seed));
    MultiLatticePlan plan =
        (c.variant == Variant::full ? build_full : build_reduction)(
            *I, single, {inner_threads(cells.size(), workers)});
    SampleSet samples = sample_on_plan(plan, p);
    auto emit = [&](const char* method, const std::vector<cdouble>& got) {
      RoundtripRow r;
      r.d = cells[i].d;
      r.set = c.set;
      r.radius = c.set == SetKind::hyperbolic ? cells[i].param : c.cube_radius;
      r.s = I->size();
      r.seed = cells[i].seed;
      r.source = c.source;
      r.variant = c.variant;
      r.method = method;
      double m = 0.0;
      for (std::size_t j = 0; j < got.size(); ++j)
        m = std::max(m, std::abs(got[j] - p.coeffs[j]));
      r.max_err = m;
      slot[i].push_back(std::move(r));
    };
    if (c.variant == Variant::full) {
      emit("direct", reconstruct_direct(plan, *I, samples));
      emit("average", reconstruct_average(plan, *I, samples));
      emit("peeling", reconstruct_peeling(plan, *I, samples));
    } else {
      emit("peeling", reconstruct_peeling(plan, *I, samples));
    }
  });
  std::vector<RoundtripRow> rows;
  for (auto& s : slot)
    for (auto& r : s) rows.push_back(std::move(r));
  return rows;
}

namespace {

std::vector<std::string> config_comments(const ExperimentConfig& c) {
  std::ostringstream os;
  write_config(os, c);
  std::vector<std::string> out;
  std::string line;
  std::istringstream is(os.str());
  while (std::getline(is, line)) out.push_back(line);
  out.push_back("cells whose set would exceed cap are omitted");
  return out;
}

}  // namespace

CsvTable counts_csv(const ExperimentConfig& c,
                    const std::vector<CountsRow>& rows) {
  CsvTable t;
  t.comments = config_comments(c);
  t.header = {"d",      "set",     "radius",        "s",
              "seed",   "source",  "variant",       "log2_m",
              "lattices", "total_samples", "per_size",
              "variant_bound", "overall_bound"};
  for (const CountsRow& r : rows)
    t.rows.push_back({std::to_string(r.d), set_kind_name(r.set),
                      std::to_string(r.radius), std::to_string(r.s),
                      std::to_string(r.seed), source_name(r.source),
                      variant_name(r.variant), format_double(r.log2_m),
                      std::to_string(r.lattices),
                      std::to_string(r.total_samples),
                      format_double(r.per_size),
                      format_double(r.variant_bound),
                      format_double(r.overall_bound)});
  return t;
}

CsvTable approx_csv(const ExperimentConfig& c,
                    const std::vector<ApproxRow>& rows) {
  CsvTable t;
  t.comments = config_comments(c);
  t.header = {"d", "radius", "s", "source", "lattices", "total_samples",
              "rel_l2_error"};
  for (const ApproxRow& r : rows)
    t.rows.push_back({std::to_string(r.d), std::to_string(r.radius),
                      std::to_string(r.s), source_name(r.source),
                      std::to_string(r.lattices),
                      std::to_string(r.total_samples),
                      format_double(r.rel_l2_error)});
  return t;
}

CsvTable roundtrip_csv(const ExperimentConfig& c,
                       const std::vector<RoundtripRow>& rows) {
  CsvTable t;
  t.comments = config_comments(c);
  t.header = {"d",      "set",    "radius",  "s",      "seed",
              "source", "variant", "method", "max_err"};
  for (const RoundtripRow& r : rows)
    t.rows.push_back({std::to_string(r.d), set_kind_name(r.set),
                      std::to_string(r.radius), std::to_string(r.s),
                      std::to_string(r.seed), source_name(r.source),
                      variant_name(r.variant), r.method,
                      format_double(r.max_err)});
  return t;
}

CsvTable run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "counts") return counts_csv(c, run_counts(c));
  if (c.experiment == "approx") return approx_csv(c, run_approx(c));
  if (c.experiment == "roundtrip") return roundtrip_csv(c, run_roundtrip(c));
  throw validation_error("unknown experiment: " + c.experiment);
}

std::vector<ExperimentConfig> default_suite() {
  std::vector<ExperimentConfig> suite;

  ExperimentConfig counts_cross;
  counts_cross.experiment = "counts";
  counts_cross.variant = Variant::full;
  counts_cross.set = SetKind::hyperbolic;
  counts_cross.dims = {2, 3, 4, 5, 6, 7, 8, 9};
  counts_cross.expansions = {2, 4, 8, 16, 32, 64};
  counts_cross.cap = 5000;
  counts_cross.source = Rank1Lattice::Source::mixed_radix;
  suite.push_back(counts_cross);
  // The greedy component search slows sharply past ~1000 structured
  // frequencies, so its cross grid stays below that (random sets of the
  // same size are cheap; see the roundtrip configs).
  counts_cross.source = Rank1Lattice::Source::cbc;
  counts_cross.cap = 600;
  suite.push_back(counts_cross);
  counts_cross.variant = Variant::reduction;
  suite.push_back(counts_cross);

  ExperimentConfig counts_crt = counts_cross;
  counts_crt.variant = Variant::full;
  counts_crt.source = Rank1Lattice::Source::crt;
  counts_crt.dims = {2, 3};
  counts_crt.expansions = {2, 4, 8, 16};
  suite.push_back(counts_crt);

  ExperimentConfig counts_rand;
  counts_rand.experiment = "counts";
  counts_rand.set = SetKind::random_cube;
  counts_rand.dims = {2, 10, 100};
  counts_rand.sizes = {100, 1000};
  counts_rand.seeds = 2;
  counts_rand.cube_radius = 64;
  counts_rand.variant = Variant::full;
  counts_rand.source = Rank1Lattice::Source::mixed_radix;
  suite.push_back(counts_rand);
  counts_rand.variant = Variant::reduction;
  suite.push_back(counts_rand);

  ExperimentConfig approx;
  approx.experiment = "approx";
  approx.variant = Variant::full;
  approx.set = SetKind::hyperbolic;
  approx.source = Rank1Lattice::Source::mixed_radix;
  approx.dims = {2, 3};
  approx.expansions = {2, 4, 8, 16, 32};
  suite.push_back(approx);
  approx.dims = {2};
  approx.expansions = {64, 128};
  suite.push_back(approx);

  ExperimentConfig rt;
  rt.experiment = "roundtrip";
  rt.set = SetKind::random_cube;
  rt.dims = {2, 3, 6, 10};
  rt.sizes = {10, 100};
  rt.cube_radius = 64;
  rt.variant = Variant::full;
  rt.source = Rank1Lattice::Source::mixed_radix;
  suite.push_back(rt);
  rt.variant = Variant::reduction;
  rt.source = Rank1Lattice::Source::cbc;
  rt.dims = {2, 3, 6};
  suite.push_back(rt);

  ExperimentConfig rt_cross;
  rt_cross.experiment = "roundtrip";
  rt_cross.set = SetKind::hyperbolic;
  rt_cross.dims = {2, 4};
  rt_cross.expansions = {4, 8};
  rt_cross.variant = Variant::full;
  rt_cross.source = Rank1Lattice::Source::cbc;
  suite.push_back(rt_cross);

  return suite;
}

std::string suite_csv_bodies(const std::vector<ExperimentConfig>& configs,
                             unsigned threads) {
  std::string out;
  for (ExperimentConfig c : configs) {
    c.threads = threads;
    out += csv_body(run_experiment(c));
    out += '\n';
  }
  return out;
}

}  // namespace mr1l
