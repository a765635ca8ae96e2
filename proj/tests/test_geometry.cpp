#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rggld/errors.hpp"
#include "rggld/geometry.hpp"
#include "rggld/montecarlo.hpp"

using namespace rggld;

namespace {

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

// O(n^2) reference: Euclidean or minimum-image distance, ties connected.
EdgeList brute_force(const PointCloud& cloud, double r, BoundaryMode mode) {
  EdgeList out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      double sum = 0.0;
      for (int k = 0; k < cloud.dimension(); ++k) {
        double diff = std::abs(cloud.point(i)[k] - cloud.point(j)[k]);
        if (mode == BoundaryMode::torus && diff > 0.5) diff = 1.0 - diff;
        sum += diff * diff;
      }
      if (sum <= r * r) out.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return out;
}

void check_graph_invariants(const Graph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto nb = g.neighbours(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      REQUIRE(nb[k] != v);
      if (k > 0) REQUIRE(nb[k - 1] < nb[k]);
      const auto back = g.neighbours(nb[k]);
      REQUIRE(std::binary_search(back.begin(), back.end(), static_cast<Vertex>(v)));
    }
  }
}

}  // namespace

TEST_CASE("sample_points") {
  CHECK(sample_points(0, 2, 9).empty());

  const auto cloud = sample_points(5, 3, 42);
  CHECK(cloud.size() == 5);
  CHECK(cloud.coordinates().size() == 15);
  for (double x : cloud.coordinates()) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(sample_points(5, 3, 42) == cloud);
  CHECK_FALSE(sample_points(5, 3, 43) == cloud);

  CHECK_THROWS_AS(sample_points(5, 0, 1), InvalidDimension);
}

TEST_CASE("radius_from_c") {
  CHECK(radius_from_c(100, 2, 1.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(radius_from_c(1000, 3, 1.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(radius_from_c(10, 2, 1000.0) == 1.0);
  CHECK_THROWS_AS(radius_from_c(10, 2, 0.0), InvalidParameter);
  CHECK_THROWS_AS(radius_from_c(10, 2, -1.0), InvalidParameter);
}

TEST_CASE("build_rgg small examples") {
  SUBCASE("ties at distance r are edges, distance 1 is not") {
    const auto cloud = PointCloud::from_points(2, {{0, 0}, {0, 0.5}, {0, 1}});
    const auto g = build_rgg(cloud, 0.6, BoundaryMode::cube);
    CHECK(g.edges() == EdgeList{{0, 1}, {1, 2}});
  }
  SUBCASE("wraparound only on the torus") {
    const auto cloud = PointCloud::from_points(2, {{0.05, 0.5}, {0.95, 0.5}});
    CHECK(build_rgg(cloud, 0.2, BoundaryMode::torus).edge_count() == 1);
    CHECK(build_rgg(cloud, 0.2, BoundaryMode::cube).edge_count() == 0);
  }
  SUBCASE("radius contract") {
    const auto cloud = sample_points(10, 2, 1);
    CHECK_THROWS_AS(build_rgg(cloud, 0.0, BoundaryMode::cube), InvalidRadius);
    CHECK_THROWS_AS(build_rgg(cloud, 1.5, BoundaryMode::cube), InvalidRadius);
  }
  SUBCASE("empty cloud") { CHECK(build_rgg(sample_points(0, 2, 1), 0.3, BoundaryMode::torus).vertex_count() == 0); }
}

TEST_CASE("cell grid equals brute force") {
  Rng rng(2024);
  for (int instance = 0; instance < 500; ++instance) {
    const auto n = static_cast<std::size_t>(rng.uniform() * 301);
    const int d = 1 + instance % 3;
    const auto mode = instance % 2 == 0 ? BoundaryMode::cube : BoundaryMode::torus;
    const double r = 0.005 + 0.995 * rng.uniform() * rng.uniform();
    const auto cloud = sample_points(n, d, rng);
    const auto g = build_rgg(cloud, r, mode);
    check_graph_invariants(g);
    REQUIRE(g.edges() == brute_force(cloud, r, mode));
  }
}

TEST_CASE("torus distance never exceeds cube distance") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const int d = 1 + i % 4;
    const auto cloud = sample_points(2, d, rng);
    CHECK(squared_distance(cloud.point(0), cloud.point(1), BoundaryMode::torus) <=
          squared_distance(cloud.point(0), cloud.point(1), BoundaryMode::cube));
  }
}

TEST_CASE("mean degree on the torus matches rho(d) c") {
  for (int d : {1, 2, 3}) {
    ModelParams params;
    params.d = d;
    params.n = 1000;
    params.c = 1.5;
    params.mode = BoundaryMode::torus;
    params.seed = 77 + static_cast<std::uint64_t>(d);
    const auto summary = run_trials(params, 200);
    const double target = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * params.c;
    CHECK(std::abs(summary.mean_degree - target) <= 3.0 * summary.se_degree);
  }
}

TEST_CASE("Graph validation") {
  CHECK_THROWS_AS(Graph({{1}, {}}), InvalidParameter);        // asymmetric
  CHECK_THROWS_AS(Graph(std::vector<std::vector<Vertex>>{{0}}), InvalidParameter);  // self-loop
  CHECK_THROWS_AS(Graph({{2, 1}, {0}, {0}}), InvalidParameter);  // unsorted
  const Graph path({{1}, {0, 2}, {1}});
  CHECK(path.edge_count() == 2);
  CHECK(path == Graph::from_edges(3, EdgeList{{1, 2}, {0, 1}}));
}

TEST_CASE("coloured RGG") {
  const std::size_t n = 200;
  const auto cloud = sample_points(n, 2, 11);

  SUBCASE("single colour reduces to the plain RGG") {
    const Kernel kernel(2, {1.3, 0.0, 0.0, 0.0});
    const auto cg = build_coloured_rgg(cloud, std::vector<Colour>(n, 0), kernel, BoundaryMode::cube);
    CHECK(cg.graph() == build_rgg(cloud, radius_from_c(n, 2, 1.3), BoundaryMode::cube));
  }

  SUBCASE("constant kernel ignores the colouring") {
    const Kernel kernel = Kernel::constant(3, 2.0);
    Rng a(1), b(2);
    const auto g1 = build_coloured_rgg(cloud, sample_colours(n, std::vector{0.2, 0.3, 0.5}, a), kernel,
                                       BoundaryMode::torus);
    const auto g2 = build_coloured_rgg(cloud, sample_colours(n, std::vector{0.6, 0.2, 0.2}, b), kernel,
                                       BoundaryMode::torus);
    CHECK(g1.graph() == g2.graph());
  }

  SUBCASE("zero cross kernel separates colours") {
    ModelParams params;
    params.n = n;
    params.colours = ColourModel{Kernel(2, {3.0, 0.0, 0.0, 3.0}), {0.5, 0.5}, {}};
    const auto cg = build_coloured_rgg(cloud, params, 3);
    CHECK(cg.graph().edge_count() > 0);
    for (auto [i, j] : cg.graph().edges()) CHECK(cg.colour(i) == cg.colour(j));
  }

  SUBCASE("deterministic given seeds") {
    ModelParams params;
    params.n = n;
    params.colours = ColourModel{Kernel(2, {1.0, 2.0, 2.0, 0.5}), {0.3, 0.7}, {}};
    const auto g1 = build_coloured_rgg(cloud, params, 8);
    const auto g2 = build_coloured_rgg(cloud, params, 8);
    CHECK(g1.colours() == g2.colours());
    CHECK(g1.graph() == g2.graph());
  }

  SUBCASE("kernel validation") {
    CHECK_THROWS_AS(Kernel(2, {1.0, 0.5, 0.4, 1.0}), InvalidKernel);
    CHECK_THROWS_AS(Kernel(2, {0.0, 0.0, 0.0, 0.0}), InvalidKernel);
    CHECK_THROWS_AS(Kernel(2, {1.0, -0.5, -0.5, 1.0}), InvalidKernel);
  }
}

TEST_CASE("model parameter validation") {
  ModelParams params;
  params.c = 0.0;
  CHECK_THROWS_AS(params.validate(), InvalidParameter);
  params.c = 1.0;
  params.d = 0;
  CHECK_THROWS_AS(params.validate(), InvalidDimension);
  params.d = 2;
  params.colours = ColourModel{Kernel::constant(2, 1.0), {0.5, 0.6}, {}};
  CHECK_THROWS_AS(params.validate(), InvalidParameter);
  CHECK(parse_boundary_mode("cube") == BoundaryMode::cube);
  CHECK_THROWS_AS(parse_boundary_mode("sphere"), InvalidParameter);
}
