// Command-line front end: generate frequency sets, build single lattices and
// multi-lattice plans, sample functions on the plans, reconstruct Fourier
// coefficients, and run experiment grids from config files.
//
// Exit codes: 0 success, 2 invalid input (validation_error), 3 broken
// internal guarantee (internal_error).

#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mr1l/errors.hpp"
#include "mr1l/freqset.hpp"
#include "mr1l/harness.hpp"
#include "mr1l/io.hpp"
#include "mr1l/plan.hpp"
#include "mr1l/rank1.hpp"
#include "mr1l/spectral.hpp"
#include "mr1l/testfn.hpp"

namespace {

using namespace mr1l;

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw validation_error("cannot open input file: " + path);
  return is;
}

// Run `write` against the chosen sink; "-" or "" selects stdout.
void with_output(const std::string& path,
                 const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path);
  if (!os) throw validation_error("cannot open output file: " + path);
  write(os);
  os.flush();
  if (!os) throw validation_error("failed while writing: " + path);
}

FrequencySet load_freqset(const std::string& path) {
  std::ifstream is = open_input(path);
  return read_freqset(is);
}

MultiLatticePlan load_plan(const std::string& path) {
  std::ifstream is = open_input(path);
  return read_plan(is);
}

Rank1Lattice build_single(const FrequencySet& I, const std::string& source) {
  switch (source_from_name(source)) {
    case Rank1Lattice::Source::mixed_radix:
      return build_mixed_radix(I);
    case Rank1Lattice::Source::crt:
      return build_crt(I);
    case Rank1Lattice::Source::cbc:
      return build_cbc(I);
    default:
      throw validation_error("cannot build a lattice of source kind: " + source);
  }
}

// Column-aligned rendering of a CSV table for terminals.
void print_structured(std::ostream& os, const CsvTable& t) {
  for (const std::string& c : t.comments) os << "# " << c << '\n';
  std::vector<std::size_t> width(t.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  };
  widen(t.header);
  for (const auto& r : t.rows) widen(r);
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << "  ";
      os << row[i];
      if (i + 1 < row.size())
        os << std::string(width[i] - row[i].size(), ' ');
    }
    os << '\n';
  };
  emit(t.header);
  for (const auto& r : t.rows) emit(r);
}

struct GenfreqArgs {
  std::string kind = "hyperbolic";
  std::uint32_t dim = 2;
  std::uint64_t expansion = 0;
  std::uint64_t size = 0;
  std::uint32_t radius = 64;
  std::uint64_t seed = 1;
  std::uint64_t cap = 4'000'000;
  std::string out;
};

void run_genfreq(const GenfreqArgs& a) {
  FrequencySet I;
  switch (set_kind_from_name(a.kind)) {
    case SetKind::hyperbolic:
      if (a.expansion == 0)
        throw validation_error("hyperbolic sets need --expansion");
      I = hyperbolic_cross_even(a.dim, a.expansion,
                                static_cast<std::size_t>(a.cap));
      break;
    case SetKind::random_cube:
      if (a.size == 0) throw validation_error("random-cube sets need --size");
      I = random_cube_set(a.dim, a.radius, static_cast<std::size_t>(a.size),
                          a.seed);
      break;
  }
  std::cerr << "frequency set: d=" << I.dim() << " size=" << I.size() << '\n';
  with_output(a.out, [&](std::ostream& os) { write_freqset(os, I); });
}

struct LatticeArgs {
  std::string freq;
  std::string source = "mixed-radix";
  std::string out;
};

void run_lattice(const LatticeArgs& a) {
  FrequencySet I = load_freqset(a.freq);
  Rank1Lattice lat = build_single(I, a.source);
  if (!is_reconstructing(I, lat))
    throw internal_error("constructed lattice fails to separate the set");
  std::cerr << "single lattice: source=" << source_name(lat.source)
            << " log2(M)=" << format_double(log2_big(lat.m)) << '\n';
  with_output(a.out, [&](std::ostream& os) { write_lattice(os, lat); });
}

struct PlanArgs {
  std::string freq;
  std::string lattice;
  std::string source = "mixed-radix";
  std::string variant = "full";
  unsigned threads = 0;
  bool no_verify = false;
  std::string out;
};

void run_plan(const PlanArgs& a) {
  FrequencySet I = load_freqset(a.freq);
  Rank1Lattice single;
  if (!a.lattice.empty()) {
    std::ifstream is = open_input(a.lattice);
    single = read_lattice(is);
  } else {
    single = build_single(I, a.source);
  }
  PlanOptions opts;
  opts.threads = a.threads;
  Variant v = variant_from_name(a.variant);
  MultiLatticePlan plan = v == Variant::full ? build_full(I, single, opts)
                                             : build_reduction(I, single, opts);
  if (!a.no_verify) {
    std::string why = verify_plan(plan, I);
    if (!why.empty()) throw internal_error("plan verification failed: " + why);
  }
  std::cerr << "plan: lattices=" << plan.lattice_count()
            << " total_samples=" << plan.total_samples() << '\n';
  with_output(a.out, [&](std::ostream& os) { write_plan(os, plan); });
}

struct SampleArgs {
  std::string freq;
  std::string plan;
  std::string function = "g3";
  std::uint64_t poly_seed = 1;
  std::string coeffs_out;
  std::string out;
};

void run_sample(const SampleArgs& a) {
  FrequencySet I = load_freqset(a.freq);
  MultiLatticePlan plan = load_plan(a.plan);
  SampleSet s;
  if (a.function == "g3") {
    PointFunction f = [](const std::vector<double>& x) {
      return cdouble(g3d(x), 0.0);
    };
    s = sample_on_plan(plan, f);
    if (!a.coeffs_out.empty())
      throw validation_error("--coeffs-out only applies to --function poly");
  } else if (a.function == "poly") {
    TrigPolynomial p = random_polynomial(I, a.poly_seed);
    s = sample_on_plan(plan, p);
    if (!a.coeffs_out.empty())
      with_output(a.coeffs_out,
                  [&](std::ostream& os) { write_coeffs(os, p.coeffs); });
  } else {
    throw validation_error("unknown function (use g3 or poly): " + a.function);
  }
  std::cerr << "samples: lattices=" << s.samples.size()
            << " evaluations=" << s.evaluations << '\n';
  with_output(a.out, [&](std::ostream& os) { write_samples(os, s); });
}

struct ReconstructArgs {
  std::string freq;
  std::string plan;
  std::string samples;
  std::string method = "direct";
  std::string compare;
  bool g3_error = false;
  std::string out;
};

void run_reconstruct(const ReconstructArgs& a) {
  FrequencySet I = load_freqset(a.freq);
  MultiLatticePlan plan = load_plan(a.plan);
  recompute_recoverable(plan, I);
  std::ifstream ss = open_input(a.samples);
  SampleSet s = read_samples(ss);
  std::vector<cdouble> coeffs;
  if (a.method == "direct") {
    coeffs = reconstruct_direct(plan, I, s);
  } else if (a.method == "average") {
    coeffs = reconstruct_average(plan, I, s);
  } else if (a.method == "peeling") {
    coeffs = reconstruct_peeling(plan, I, s);
  } else {
    throw validation_error(
        "unknown method (use direct, average or peeling): " + a.method);
  }
  with_output(a.out, [&](std::ostream& os) { write_coeffs(os, coeffs); });
  if (!a.compare.empty()) {
    std::ifstream cs = open_input(a.compare);
    std::vector<cdouble> truth = read_coeffs(cs);
    if (truth.size() != coeffs.size())
      throw validation_error("comparison file has " +
                             std::to_string(truth.size()) +
                             " coefficients, expected " +
                             std::to_string(coeffs.size()));
    double max_err = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      max_err = std::max(max_err, std::abs(coeffs[i] - truth[i]));
    std::cout << "max_abs_error " << format_double(max_err) << '\n';
  }
  if (a.g3_error) {
    std::cout << "rel_l2_error "
              << format_double(g3d_rel_l2_error(I, coeffs)) << '\n';
  }
}

struct ExperimentArgs {
  std::string config;
  bool suite = false;
  std::string outdir;
  unsigned threads = 0;
  std::string format = "csv";
  std::string out;
};

void emit_table(const CsvTable& t, const std::string& format, bool timestamp,
                const std::string& out) {
  if (format == "csv") {
    with_output(out, [&](std::ostream& os) { write_csv(os, t, timestamp); });
  } else if (format == "structured") {
    with_output(out, [&](std::ostream& os) { print_structured(os, t); });
  } else {
    throw validation_error("unknown format (use csv or structured): " + format);
  }
}

void run_experiment_cmd(const ExperimentArgs& a) {
  if (a.suite != a.config.empty())
    throw validation_error("pass exactly one of --config or --suite");
  if (!a.config.empty()) {
    std::ifstream is = open_input(a.config);
    ExperimentConfig c = read_config(is);
    if (a.threads > 0) c.threads = a.threads;
    emit_table(run_experiment(c), a.format, c.timestamp, a.out);
    return;
  }
  std::vector<ExperimentConfig> configs = default_suite();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ExperimentConfig c = configs[i];
    if (a.threads > 0) c.threads = a.threads;
    CsvTable t = run_experiment(c);
    if (a.outdir.empty()) {
      emit_table(t, a.format, c.timestamp, a.out);
      std::cout << '\n';
    } else {
      std::string path = a.outdir + "/suite_" + std::to_string(i) + "_" +
                         c.experiment + ".csv";
      emit_table(t, a.format, c.timestamp, path);
      std::cerr << "wrote " << path << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiple rank-1 lattice sampling toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  GenfreqArgs ga;
  CLI::App* gen = app.add_subcommand(
      "genfreq", "generate a frequency set (hyperbolic cross or random cube)");
  gen->add_option("--kind", ga.kind, "hyperbolic | random-cube");
  gen->add_option("--dim,-d", ga.dim, "dimension")->required();
  gen->add_option("--expansion,-R", ga.expansion,
                  "hyperbolic cross expansion");
  gen->add_option("--size,-s", ga.size, "random set cardinality");
  gen->add_option("--radius", ga.radius, "random sets live in [-radius,radius]^d");
  gen->add_option("--seed", ga.seed, "random draw seed");
  gen->add_option("--cap", ga.cap, "refuse sets larger than this");
  gen->add_option("--output,-o", ga.out, "output file (default stdout)");
  gen->callback([&ga] { run_genfreq(ga); });

  LatticeArgs la;
  CLI::App* lat = app.add_subcommand(
      "lattice", "build a single reconstructing rank-1 lattice");
  lat->add_option("--freq,-f", la.freq, "frequency set file")->required();
  lat->add_option("--source", la.source, "mixed-radix | crt | cbc");
  lat->add_option("--output,-o", la.out, "output file (default stdout)");
  lat->callback([&la] { run_lattice(la); });

  PlanArgs pa;
  CLI::App* pl = app.add_subcommand(
      "plan", "split a single lattice into multiple small lattices");
  pl->add_option("--freq,-f", pa.freq, "frequency set file")->required();
  pl->add_option("--lattice,-l", pa.lattice,
                 "single lattice file (otherwise built from --source)");
  pl->add_option("--source", pa.source, "mixed-radix | crt | cbc");
  pl->add_option("--variant", pa.variant, "full | reduction");
  pl->add_option("--threads,-t", pa.threads,
                 "worker threads (0 = MR1L_THREADS env or 1)");
  pl->add_flag("--no-verify", pa.no_verify,
               "skip the structural re-check of the plan");
  pl->add_option("--output,-o", pa.out, "output file (default stdout)");
  pl->callback([&pa] { run_plan(pa); });

  SampleArgs sa;
  CLI::App* sm = app.add_subcommand(
      "sample", "evaluate a function at every node of a plan's lattices");
  sm->add_option("--freq,-f", sa.freq, "frequency set file")->required();
  sm->add_option("--plan,-p", sa.plan, "plan file")->required();
  sm->add_option("--function", sa.function,
                 "g3 (built-in test function) | poly (random polynomial)");
  sm->add_option("--poly-seed", sa.poly_seed, "random polynomial seed");
  sm->add_option("--coeffs-out", sa.coeffs_out,
                 "write the polynomial's true coefficients here");
  sm->add_option("--output,-o", sa.out, "output file (default stdout)");
  sm->callback([&sa] { run_sample(sa); });

  ReconstructArgs ra;
  CLI::App* rc = app.add_subcommand(
      "reconstruct", "recover Fourier coefficients from plan samples");
  rc->add_option("--freq,-f", ra.freq, "frequency set file")->required();
  rc->add_option("--plan,-p", ra.plan, "plan file")->required();
  rc->add_option("--samples,-s", ra.samples, "sample file")->required();
  rc->add_option("--method,-m", ra.method, "direct | average | peeling");
  rc->add_option("--compare", ra.compare,
                 "coefficient file to diff against (prints max_abs_error)");
  rc->add_flag("--g3-error", ra.g3_error,
               "print the relative L2 error against the built-in function");
  rc->add_option("--output,-o", ra.out, "output file (default stdout)");
  rc->callback([&ra] { run_reconstruct(ra); });

  ExperimentArgs ea;
  CLI::App* ex = app.add_subcommand(
      "experiment", "run an experiment grid from a config file");
  ex->add_option("--config,-c", ea.config, "experiment config file");
  ex->add_flag("--suite", ea.suite, "run the built-in default suite instead");
  ex->add_option("--outdir", ea.outdir,
                 "suite mode: write one CSV per config into this directory");
  ex->add_option("--threads,-t", ea.threads,
                 "override the config's thread count");
  ex->add_option("--format", ea.format, "csv | structured");
  ex->add_option("--output,-o", ea.out, "output file (default stdout)");
  ex->callback([&ea] { run_experiment_cmd(ea); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mr1l::internal_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const mr1l::validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
