#include <doctest.h>

#include "rggld/errors.hpp"
#include "rggld/measures.hpp"
#include "rggld/rates.hpp"

using namespace rggld;

namespace {

ColouredGraph two_vertex_edge(Colour a, Colour b) {
  return ColouredGraph(Graph({{1}, {0}}), {a, b}, 2);
}

ColouredGraph random_coloured_graph(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  const auto cloud = sample_points(n, 2, rng);
  auto colours = sample_colours(n, std::vector{0.2, 0.5, 0.3}, rng);
  return build_coloured_rgg(cloud, std::move(colours), Kernel(3, {2, 1, 0.5, 1, 3, 1, 0.5, 1, 1}),
                            BoundaryMode::cube);
}

}  // namespace

TEST_CASE("degree_distribution") {
  CHECK(degree_distribution(Graph({{1, 2}, {0, 2}, {0, 1}})) == DegreeMeasure{{2, 1.0}});

  const auto path = degree_distribution(Graph({{1}, {0, 2}, {1}}));
  CHECK(path[1] == doctest::Approx(2.0 / 3.0));
  CHECK(path[2] == doctest::Approx(1.0 / 3.0));

  CHECK(degree_distribution(Graph(std::vector<std::vector<Vertex>>(5))) == DegreeMeasure{{0, 1.0}});
  CHECK_THROWS_AS(degree_distribution(Graph()), UndefinedMeasure);
}

TEST_CASE("mean degree times n is twice the edge count") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_coloured_graph(seed, 150).graph();
    std::int64_t weighted = 0;
    for (const auto& [k, count] : degree_counts(g)) weighted += k * count;
    CHECK(weighted == 2 * static_cast<std::int64_t>(g.edge_count()));
  }
}

TEST_CASE("empirical colour measure") {
  const ColouredGraph same(Graph(std::vector<std::vector<Vertex>>(4)), {1, 1, 1, 1}, 2);
  CHECK(empirical_colour_measure(same) == ColourMeasure{{1, 1.0}});

  const ColouredGraph aab(Graph(std::vector<std::vector<Vertex>>(3)), {0, 0, 1}, 2);
  const auto l1 = empirical_colour_measure(aab);
  CHECK(l1[0] == doctest::Approx(2.0 / 3.0));
  CHECK(l1[1] == doctest::Approx(1.0 / 3.0));

  // Counts sum to n exactly.
  const auto cg = random_coloured_graph(4, 97);
  std::int64_t total = 0;
  for (const auto& [a, count] : colour_counts(cg)) total += count;
  CHECK(total == 97);
}

TEST_CASE("empirical pair measure") {
  const auto ab = empirical_pair_measure(two_vertex_edge(0, 1));
  CHECK(ab == PairMeasure{{{0, 1}, 0.5}, {{1, 0}, 0.5}});
  CHECK(ab.total() == 1.0);

  CHECK(empirical_pair_measure(two_vertex_edge(0, 0)) == PairMeasure{{{0, 0}, 1.0}});

  const ColouredGraph edgeless(Graph(std::vector<std::vector<Vertex>>(3)), {0, 1, 0}, 2);
  CHECK(empirical_pair_measure(edgeless).empty());

  const auto cg = random_coloured_graph(9, 300);
  const auto counts = pair_counts(cg);
  std::int64_t total = 0;
  for (const auto& [p, count] : counts) {
    CHECK(count == counts.at({p.second, p.first}));
    total += count;
  }
  CHECK(total == 2 * static_cast<std::int64_t>(cg.graph().edge_count()));
}

TEST_CASE("empirical neighbourhood measure") {
  const auto m = empirical_neighbourhood_measure(two_vertex_edge(0, 1));
  CHECK(m == NeighbourhoodMeasure{{{0, {{1, 1}}}, 0.5}, {{1, {{0, 1}}}, 0.5}});

  const ColouredGraph edgeless(Graph(std::vector<std::vector<Vertex>>(3)), {0, 1, 0}, 2);
  const auto e = empirical_neighbourhood_measure(edgeless);
  CHECK(e[{0, {}}] == doctest::Approx(2.0 / 3.0));
  CHECK(e[{1, {}}] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("locality vectors are canonical") {
  LocalityVector a;
  a.increment(2, 0);
  a.increment(1);
  CHECK(a == LocalityVector{{1, 1}});
  CHECK(a.counts().size() == 1);
  CHECK(a[2] == 0);
  CHECK_THROWS_AS(a.increment(0, -1), InvalidMeasure);
}

TEST_CASE("h_map reproduces colour and pair measures") {
  SUBCASE("point mass at the empty vector") {
    const auto h = h_map(NeighbourhoodMeasure{{{1, {}}, 1.0}});
    CHECK(h.colours == ColourMeasure{{1, 1.0}});
    CHECK(h.pairs.empty());
  }
  SUBCASE("exact on sampled graphs") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto cg = random_coloured_graph(seed, 200);
      const auto h = h_map_counts(neighbourhood_counts(cg));
      REQUIRE(h.colours == colour_counts(cg));
      REQUIRE(h.pairs == pair_counts(cg));
      // The floating version agrees up to the single division by n.
      const auto hf = h_map(empirical_neighbourhood_measure(cg));
      const auto l2 = empirical_pair_measure(cg);
      for (const auto& [p, mass] : l2) CHECK(hf.pairs[p] == doctest::Approx(mass).epsilon(1e-12));
    }
  }
  SUBCASE("typical law has first moments rho C nu x nu") {
    const std::vector<double> nu{0.3, 0.7};
    const Kernel kernel(2, {1.0, 0.4, 0.4, 2.0});
    const auto h = h_map(typical_neighbourhood_measure(nu, kernel, 2, 1e-12));
    // Oracle: truncated Poisson moments, independent of the product enumeration.
    for (Colour a = 0; a < 2; ++a) {
      for (Colour b = 0; b < 2; ++b) {
        const double rate = rho(2) * kernel(a, b) * nu[static_cast<std::size_t>(b)];
        double truncated_mean = 0.0;
        double mass = 0.0;
        const PoissonLaw law(rate, 1e-12);
        for (Degree k = 0; k <= law.truncation(); ++k) {
          truncated_mean += static_cast<double>(k) * law.pmf(k);
          mass += law.pmf(k);
        }
        CHECK(std::abs(truncated_mean - rate) < 1e-9);
        const PoissonLaw other(rho(2) * kernel(a, 1 - b) * nu[static_cast<std::size_t>(1 - b)], 1e-12);
        double other_mass = 0.0;
        for (Degree k = 0; k <= other.truncation(); ++k) other_mass += other.pmf(k);
        const double expected = nu[static_cast<std::size_t>(a)] * truncated_mean * other_mass;
        CHECK(std::abs(h.pairs[{b, a}] - expected) < 1e-12);
        CHECK(std::abs(h.pairs[{b, a}] - rho(2) * kernel(a, b) * nu[static_cast<std::size_t>(a)] * nu[static_cast<std::size_t>(b)]) < 1e-9);
      }
    }
  }
}

TEST_CASE("consistency_check") {
  const auto mu = empirical_neighbourhood_measure(random_coloured_graph(3, 250));
  const auto h2 = h_map(mu).pairs;
  REQUIRE_FALSE(h2.empty());
  CHECK(consistency_check(h2, mu, 1e-12) == Consistency::consistent);
  CHECK(consistency_check(h2.scaled(2.0), mu, 1e-12) == Consistency::sub_consistent);

  PairMeasure reduced;
  bool first = true;
  for (const auto& [p, mass] : h2) {
    reduced.add(p, first ? 0.5 * mass : mass);
    first = false;
  }
  CHECK(consistency_check(reduced, mu, 1e-12) == Consistency::inconsistent);

  // Mass on a pair that mu never produces breaks equality but not domination.
  PairMeasure extra = h2;
  extra.add({7, 7}, 0.1);
  CHECK(consistency_check(extra, mu, 1e-12) == Consistency::sub_consistent);
  CHECK_THROWS_AS(consistency_check(h2, mu, -1.0), InvalidParameter);
}

TEST_CASE("SparseMeasure rejects negative mass and drops zeros") {
  DegreeMeasure m;
  CHECK_THROWS_AS(m.add(1, -0.1), InvalidMeasure);
  m.add(3, 0.0);
  CHECK(m.empty());
  m.add(1, 0.25);
  m.add(1, 0.25);
  CHECK(m[1] == 0.5);
  CHECK(m.total() == 0.5);
}
