#include "mr1l/harness.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

#include "mr1l/errors.hpp"
#include "mr1l/io.hpp"

using namespace mr1l;

TEST_CASE("shortest round-trip double formatting") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  for (double v : {3.450e-05, 1.0 / 3.0, 2.5e-10, 123456789.25}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv body is canonical and width-checked") {
  CsvTable t;
  t.comments = {"note"};
  t.header = {"a", "b"};
  t.rows = {{"1", "2"}, {"x", "y"}};
  CHECK(csv_body(t) == "a,b\n1,2\nx,y\n");
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "# note\na,b\n1,2\nx,y\n");
  t.rows.push_back({"lonely"});
  CHECK_THROWS_AS(csv_body(t), internal_error);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
}

TEST_CASE("config file round trip") {
  ExperimentConfig c;
  c.experiment = "roundtrip";
  c.variant = Variant::reduction;
  c.set = SetKind::random_cube;
  c.source = Rank1Lattice::Source::cbc;
  c.dims = {2, 5};
  c.sizes = {10, 100};
  c.cube_radius = 32;
  c.seeds = 3;
  c.seed0 = 17;
  c.cap = 1234;
  c.threads = 2;
  c.timestamp = true;
  std::stringstream ss;
  write_config(ss, c);
  ExperimentConfig back = read_config(ss);
  std::stringstream again;
  write_config(again, back);
  std::stringstream orig;
  write_config(orig, c);
  CHECK(again.str() == orig.str());

  std::stringstream bad("experiment counts\nwhatever 3\n");
  CHECK_THROWS_AS(read_config(bad), validation_error);
  std::stringstream bad2("experiment sommelier\n");
  CHECK_THROWS_AS(read_config(bad2), validation_error);
}

TEST_CASE("counts grid: frozen cell, bounds, and cap skipping") {
  ExperimentConfig c;
  c.experiment = "counts";
  c.variant = Variant::full;
  c.set = SetKind::hyperbolic;
  c.source = Rank1Lattice::Source::mixed_radix;
  c.dims = {2};
  c.expansions = {2, 4};
  std::vector<CountsRow> rows = run_counts(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].s == 5);
  CHECK(rows[0].lattices == 1);
  CHECK(rows[0].total_samples == 7);
  CHECK(rows[0].per_size == doctest::Approx(1.4));
  CHECK(rows[1].s == 13);
  for (const CountsRow& r : rows) {
    CHECK(static_cast<double>(r.total_samples) <= r.variant_bound);
    CHECK(r.log2_m > 0.0);
  }

  ExperimentConfig skip = c;
  skip.dims = {2, 9};
  skip.expansions = {2, 1024};
  skip.cap = 100;
  std::vector<CountsRow> kept = run_counts(skip);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].d == 2);
  CHECK(kept[0].radius == 2);
  CHECK(kept[1].d == 9);
  CHECK(kept[1].radius == 2);
  CHECK(kept[1].s == 19);
}

TEST_CASE("counts on random sets: seeds and reduction bound") {
  ExperimentConfig c;
  c.experiment = "counts";
  c.variant = Variant::reduction;
  c.set = SetKind::random_cube;
  c.source = Rank1Lattice::Source::mixed_radix;
  c.dims = {2};
  c.sizes = {50};
  c.seeds = 2;
  c.seed0 = 5;
  std::vector<CountsRow> rows = run_counts(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].seed == 5);
  CHECK(rows[1].seed == 6);
  for (const CountsRow& r : rows) {
    CHECK(r.s == 50);
    CHECK(static_cast<double>(r.total_samples) <= r.variant_bound);
  }
  std::vector<CountsRow> again = run_counts(c);
  REQUIRE(again.size() == 2);
  CHECK(again[0].total_samples == rows[0].total_samples);
  CHECK(again[1].total_samples == rows[1].total_samples);
}

TEST_CASE("approximation errors match the frozen two-dimensional series") {
  ExperimentConfig c;
  c.experiment = "approx";
  c.variant = Variant::full;
  c.set = SetKind::hyperbolic;
  c.source = Rank1Lattice::Source::mixed_radix;
  c.dims = {2};
  c.expansions = {2, 4};
  std::vector<ApproxRow> rows = run_approx(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].s == 5);
  CHECK(rows[0].total_samples == 7);
  CHECK(rows[0].rel_l2_error == doctest::Approx(8.314e-02).epsilon(0.01));
  CHECK(rows[1].s == 13);
  CHECK(rows[1].total_samples == 53);
  CHECK(rows[1].rel_l2_error == doctest::Approx(1.389e-02).epsilon(0.02));
}

TEST_CASE("roundtrip rows: methods per variant and exactness") {
  ExperimentConfig c;
  c.experiment = "roundtrip";
  c.set = SetKind::random_cube;
  c.source = Rank1Lattice::Source::mixed_radix;
  c.dims = {3};
  c.sizes = {40};
  c.seeds = 1;
  c.variant = Variant::full;
  std::vector<RoundtripRow> full_rows = run_roundtrip(c);
  REQUIRE(full_rows.size() == 3);
  CHECK(full_rows[0].method == "direct");
  CHECK(full_rows[1].method == "average");
  CHECK(full_rows[2].method == "peeling");
  for (const RoundtripRow& r : full_rows) CHECK(r.max_err < 1e-11);

  c.variant = Variant::reduction;
  std::vector<RoundtripRow> red_rows = run_roundtrip(c);
  REQUIRE(red_rows.size() == 1);
  CHECK(red_rows[0].method == "peeling");
  CHECK(red_rows[0].max_err < 1e-11);
}

TEST_CASE("csv bodies are independent of the thread count") {
  ExperimentConfig a;
  a.experiment = "counts";
  a.set = SetKind::hyperbolic;
  a.source = Rank1Lattice::Source::mixed_radix;
  a.dims = {2, 3, 4};
  a.expansions = {2, 4, 8};
  ExperimentConfig b;
  b.experiment = "roundtrip";
  b.set = SetKind::random_cube;
  b.source = Rank1Lattice::Source::cbc;
  b.dims = {2, 3};
  b.sizes = {20, 60};
  b.seeds = 2;
  std::vector<ExperimentConfig> configs{a, b};
  std::string one = suite_csv_bodies(configs, 1);
  std::string four = suite_csv_bodies(configs, 4);
  CHECK(one == four);
  CHECK(!one.empty());
}

TEST_CASE("default suite covers every experiment and stays well formed") {
  std::vector<ExperimentConfig> suite = default_suite();
  bool counts = false, approx = false, roundtrip = false;
  for (const ExperimentConfig& c : suite) {
    CHECK(!c.dims.empty());
    if (c.experiment == "counts") counts = true;
    if (c.experiment == "approx") approx = true;
    if (c.experiment == "roundtrip") roundtrip = true;
  }
  CHECK(counts);
  CHECK(approx);
  CHECK(roundtrip);
}

TEST_CASE("experiment dispatch honors the config and rejects junk") {
  ExperimentConfig c;
  c.experiment = "counts";
  c.set = SetKind::hyperbolic;
  c.source = Rank1Lattice::Source::mixed_radix;
  c.dims = {2};
  c.expansions = {2};
  CsvTable t = run_experiment(c);
  CHECK(t.header.size() == 13);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][9] == "7");  // total_samples of the five-point cross

  c.experiment = "nonsense";
  CHECK_THROWS_AS(run_experiment(c), validation_error);

  ExperimentConfig bad;
  bad.experiment = "approx";
  bad.variant = Variant::reduction;
  bad.set = SetKind::hyperbolic;
  bad.dims = {2};
  bad.expansions = {2};
  CHECK_THROWS_AS(run_approx(bad), validation_error);
}
