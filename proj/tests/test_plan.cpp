#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mr1l/errors.hpp"
#include "mr1l/plan.hpp"
#include "mr1l/primes.hpp"

using namespace mr1l;

namespace {

std::vector<BigInt> make_z(std::initializer_list<long> vs) {
  std::vector<BigInt> z;
  for (long v : vs) z.emplace_back(v);
  return z;
}

}  // namespace

TEST_SUITE("plan") {

TEST_CASE("survivors partition by residue multiplicity") {
  std::vector<std::uint32_t> active = {0, 1, 2};
  std::vector<std::uint64_t> residues = {0, 2, 10};
  auto [free3, coll3] = survivors(active, residues, 3);
  CHECK(free3 == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(coll3.empty());
  auto [free2, coll2] = survivors(active, residues, 2);
  CHECK(free2.empty());
  CHECK(coll2 == std::vector<std::uint32_t>{0, 1, 2});

  // Restricting active keeps counting against the full list.
  auto [f, c] = survivors({1}, {0, 5, 5, 7}, 10);
  CHECK(f.empty());
  CHECK(c == std::vector<std::uint32_t>{1});
}

TEST_CASE("tiny full split") {
  FrequencySet I(2, {0, 0, 2, 0, 0, 2});
  Rank1Lattice lat{make_z({1, 5}), BigInt(25), Rank1Lattice::Source::user};
  MultiLatticePlan plan = build_full(I, lat);
  CHECK(plan.variant == Variant::full);
  CHECK(plan.spread == 11);
  CHECK(plan.primes == std::vector<std::uint64_t>{3});
  CHECK(plan.assignment == std::vector<std::uint32_t>{0, 0, 0});
  CHECK(plan.total_samples() == 3);
  CHECK(verify_plan(plan, I).empty());
}

TEST_CASE("singleton set needs two samples") {
  FrequencySet I(2, {5, 7});
  Rank1Lattice lat{make_z({1, 1}), BigInt(1), Rank1Lattice::Source::user};
  for (auto build : {build_full, build_reduction}) {
    MultiLatticePlan plan = build(I, lat, {});
    CHECK(plan.primes == std::vector<std::uint64_t>{2});
    CHECK(plan.total_samples() == 2);
    CHECK(verify_plan(plan, I).empty());
  }
}

TEST_CASE("five-point cross splits into one lattice of seven") {
  FrequencySet I(2, {-2, 0, 0, -2, 0, 0, 0, 2, 2, 0});
  Rank1Lattice lat = build_mixed_radix(I);
  REQUIRE(lat.m == 25);
  MultiLatticePlan full = build_full(I, lat);
  CHECK(full.spread == 21);
  CHECK(full.primes == std::vector<std::uint64_t>{7});
  CHECK(full.total_samples() == 7);
  CHECK(full.rounds[0].scanned == 2);  // 5 rejected first
  CHECK(verify_plan(full, I).empty());

  MultiLatticePlan red = build_reduction(I, lat);
  CHECK(red.primes == std::vector<std::uint64_t>{7});
  CHECK(red.total_samples() == 7);
  CHECK(verify_plan(red, I).empty());
}

TEST_CASE("planner rejects non-separating lattices") {
  FrequencySet I(2, {0, 0, 2, 0, 0, 2});
  Rank1Lattice lat{make_z({1, 5}), BigInt(2), Rank1Lattice::Source::user};
  CHECK_THROWS_AS(build_full(I, lat), not_reconstructing_error);
  CHECK_THROWS_AS(build_reduction(I, lat), not_reconstructing_error);
}

TEST_CASE("structural guarantees on random instances") {
  std::mt19937_64 rng(61);
  for (int it = 0; it < 60; ++it) {
    std::uint32_t d = 1 + rng() % 4;
    std::size_t s = 1 + rng() % 200;
    if (d == 1) s = 1 + s % 21;  // the d=1 cube only holds 21 points
    FrequencySet I = random_cube_set(d, 10, s, rng());
    Rank1Lattice lat = it % 2 ? build_mixed_radix(I) : build_cbc(I);
    MultiLatticePlan plan =
        it % 3 ? build_full(I, lat) : build_reduction(I, lat);
    std::string msg = verify_plan(plan, I);
    INFO(msg);
    CHECK(msg.empty());
    CHECK(plan.lattice_count() <=
          static_cast<std::size_t>(std::log2(static_cast<double>(s))) + 1);
    double bound = plan.variant == Variant::full
                       ? full_sample_bound(s, plan.spread)
                       : reduction_sample_bound(s, plan.spread);
    CHECK(static_cast<double>(plan.total_samples()) <= bound);
  }
}

TEST_CASE("assignment is the first admitting lattice in full plans") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 20; ++it) {
    FrequencySet I = random_cube_set(3, 12, 150, rng());
    MultiLatticePlan plan = build_full(I, build_mixed_radix(I));
    for (std::size_t i = 0; i < I.size(); ++i) {
      for (std::uint32_t l = 0; l < plan.assignment[i]; ++l) {
        const auto& rec = plan.recoverable[l];
        CHECK(!std::binary_search(rec.begin(), rec.end(),
                                  static_cast<std::uint32_t>(i)));
      }
    }
  }
}

TEST_CASE("thread count does not change the result") {
  FrequencySet I = random_cube_set(4, 20, 500, 1234);
  Rank1Lattice lat = build_mixed_radix(I);
  for (auto build : {build_full, build_reduction}) {
    MultiLatticePlan p1 = build(I, lat, {1});
    MultiLatticePlan p4 = build(I, lat, {4});
    CHECK(p1.primes == p4.primes);
    CHECK(p1.assignment == p4.assignment);
    CHECK(p1.recoverable == p4.recoverable);
  }
}

TEST_CASE("reduction rounds recompute windows from the residual") {
  std::mt19937_64 rng(81);
  FrequencySet I = random_cube_set(2, 40, 300, rng());
  MultiLatticePlan plan = build_reduction(I, build_mixed_radix(I));
  REQUIRE(plan.rounds.size() >= 2);
  for (std::size_t l = 1; l < plan.rounds.size(); ++l) {
    // Residual shrinks, so candidate windows may restart at smaller primes.
    CHECK(plan.rounds[l].active_before == plan.rounds[l - 1].active_after);
    CHECK(plan.rounds[l].window_start ==
          PrimeIndexer::global().least_index_geq(plan.rounds[l].active_before));
  }
}

TEST_CASE("plan file round trip") {
  FrequencySet I = random_cube_set(3, 15, 80, 4321);
  for (auto build : {build_full, build_reduction}) {
    MultiLatticePlan plan = build(I, build_cbc(I, {}), {});
    std::stringstream ss;
    write_plan(ss, plan);
    MultiLatticePlan back = read_plan(ss);
    CHECK(back.variant == plan.variant);
    CHECK(back.source_m == plan.source_m);
    CHECK(back.spread == plan.spread);
    CHECK(back.primes == plan.primes);
    CHECK(back.assignment == plan.assignment);
    REQUIRE(back.rounds.size() == plan.rounds.size());
    for (std::size_t l = 0; l < plan.rounds.size(); ++l) {
      CHECK(back.rounds[l].prime == plan.rounds[l].prime);
      CHECK(back.rounds[l].scanned == plan.rounds[l].scanned);
    }
    CHECK(back.recoverable.empty());
    recompute_recoverable(back, I);
    CHECK(back.recoverable == plan.recoverable);
  }

  std::stringstream bad("variant full\nz 1\nsource_M 5\nspread 3\nprimes 3\nassignment 0\nrounds 2\n");
  CHECK_THROWS_AS(read_plan(bad), validation_error);
}

TEST_CASE("analytic sample ceilings") {
  CHECK(full_sample_bound(1, BigInt(1)) == 2.0);
  CHECK(reduction_sample_bound(1, BigInt(1)) == 2.0);
  // s=3, spread=11: 2 * 2.832 * 3 * log2(11) * ln(2.3 * 3 * log_3(11))
  double l2 = std::log2(11.0);
  double want = 2.0 * 2.832 * 3.0 * l2 * std::log(2.3 * 3.0 * (l2 / std::log2(3.0)));
  CHECK(full_sample_bound(3, BigInt(11)) == doctest::Approx(want).epsilon(1e-12));
  double want_r = 8.0 * 3.0 * l2 * std::log(2.0 * l2);
  CHECK(reduction_sample_bound(3, BigInt(11)) == doctest::Approx(want_r).epsilon(1e-12));
  // Source-agnostic form for s=5, d=2, n=4, M=25.
  double l2m = std::log2(2.0 * 4.0 * 25.0);
  double want_o = 6.0 * 5.0 * l2m * std::log(3.0 * (5.0 / std::log2(5.0)) * l2m);
  CHECK(overall_sample_bound(5, 2, 4, BigInt(25)) == doctest::Approx(want_o).epsilon(1e-12));
}

}  // TEST_SUITE
