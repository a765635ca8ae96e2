#include <doctest.h>

#include <cmath>

#include "rggld/errors.hpp"
#include "rggld/montecarlo.hpp"
#include "rggld/rates.hpp"

using namespace rggld;

namespace {

ModelParams plain(std::size_t n, double c, std::uint64_t seed) {
  ModelParams p;
  p.n = n;
  p.c = c;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("parallel_for visits each index once") {
  for (unsigned threads : {1u, 2u, 5u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("called on an empty range"); });
}

TEST_CASE("run_trials is reproducible and independent of the thread count") {
  const auto p = plain(300, 1.2, 99);
  const auto a = run_trials(p, 16, {1});
  const auto b = run_trials(p, 16, {4});
  const auto c = run_trials(p, 16, {1});
  REQUIRE(a.records.size() == 16);
  for (std::size_t t = 0; t < 16; ++t) {
    CHECK(a.records[t].isolated == b.records[t].isolated);
    CHECK(a.records[t].edges == b.records[t].edges);
    CHECK(a.records[t].edges == c.records[t].edges);
  }
  CHECK(a.mean_isolated == b.mean_isolated);
  CHECK(a.aggregate_degree_distribution == b.aggregate_degree_distribution);
  CHECK(std::abs(a.aggregate_degree_distribution.total() - 1.0) < 1e-12);

  const auto other = run_trials(plain(300, 1.2, 100), 16, {1});
  bool differs = false;
  for (std::size_t t = 0; t < 16; ++t) differs |= other.records[t].edges != a.records[t].edges;
  CHECK(differs);
}

TEST_CASE("trial graphs come from their own streams") {
  const auto p = plain(100, 1.0, 5);
  CHECK(sample_trial_graph(p, 3) == sample_trial_graph(p, 3));
  CHECK_FALSE(sample_trial_graph(p, 3) == sample_trial_graph(p, 4));
}

TEST_CASE("run_trials rejects empty work") {
  CHECK_THROWS_AS(run_trials(plain(100, 1.0, 1), 0), InvalidParameter);
  CHECK_THROWS_AS(estimate_tail_probability(plain(100, 1.0, 1), 0.3, 0), InvalidParameter);
}

TEST_CASE("isolated fraction concentrates at exp(-rho c) on the torus") {
  const auto p = plain(2000, 1.0 / std::numbers::pi, 321);
  const auto s = run_trials(p, 60);
  CHECK(std::abs(s.mean_isolated - std::exp(-1.0)) <= 3.0 * s.se_isolated + 1e-3);
}

TEST_CASE("tail estimate below the typical value is near one") {
  const auto p = plain(500, 1.0 / std::numbers::pi, 2);
  const auto est = estimate_tail_probability(p, 0.2, 50);
  CHECK(est.hits == 50);
  CHECK(est.p_hat == 1.0);
  REQUIRE(est.log_rate);
  CHECK(*est.log_rate == 0.0);
  CHECK(est.wilson_hi == doctest::Approx(1.0));

  const auto none = estimate_tail_probability(p, 0.99, 20);
  CHECK(none.hits == 0);
  CHECK_FALSE(none.log_rate);
  CHECK(none.wilson_lo == 0.0);
}

TEST_CASE("wilson_interval") {
  const auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.4038315).epsilon(1e-6));
  CHECK(hi == doctest::Approx(0.5961685).epsilon(1e-6));
  const auto [lo0, hi0] = wilson_interval(0, 10);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(0.2775328).epsilon(1e-6));
}

TEST_CASE("estimate_rate_slope") {
  const auto p = plain(0, 1.0 / std::numbers::pi, 11);
  const std::vector<std::size_t> ns{50, 100};
  const auto r1 = estimate_rate_slope(p, 0.5, ns, 200, {1});
  const auto r2 = estimate_rate_slope(p, 0.5, ns, 200, {3});
  REQUIRE(r1.estimates.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r1.estimates[i].n == ns[i]);
    CHECK(r1.estimates[i].hits == r2.estimates[i].hits);
  }
  CHECK(r1.xi1 == doctest::Approx(xi1(0.5, Intensity{2, p.c}).value()));
  // Tail at y > e^{-1} gets rarer as n grows.
  CHECK(r1.estimates[1].p_hat <= r1.estimates[0].p_hat);
}

TEST_CASE("coloured_typical_check") {
  SUBCASE("zero cross kernel") {
    ModelParams p;
    p.n = 400;
    p.seed = 4;
    p.colours = ColourModel{Kernel(2, {1.0, 0.0, 0.0, 1.0}), {0.5, 0.5}, {}};
    const std::vector<std::size_t> ladder{200};
    const auto report = coloured_typical_check(p, 10, ladder, {});
    for (const auto& cc : report.counts) {
      if (cc.own != cc.neighbour) {
        CHECK(cc.mean == 0.0);
        CHECK(cc.target == 0.0);
      }
    }
  }
  SUBCASE("conditional means within three standard errors") {
    ModelParams p;
    p.n = 1500;
    p.seed = 6;
    p.colours = ColourModel{Kernel(2, {1.0, 0.5, 0.5, 2.0}), {0.4, 0.6}, {}};
    const std::vector<std::size_t> ladder{300, 1200};
    const auto report = coloured_typical_check(p, 60, ladder, {});
    REQUIRE(report.counts.size() == 4);
    for (const auto& cc : report.counts) {
      CHECK(cc.target == doctest::Approx(rho(2) * p.colours->kernel(cc.own, cc.neighbour) *
                                         p.colours->nu[static_cast<std::size_t>(cc.neighbour)]));
      CHECK(std::abs(cc.mean - cc.target) <= 3.0 * cc.se + 0.01 * cc.target);
    }
    REQUIRE(report.ladder.size() == 2);
    for (const auto& lp : report.ladder) CHECK(lp.infinite == 0);
  }
}
