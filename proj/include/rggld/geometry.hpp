#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rggld/rng.hpp"

namespace rggld {

using Colour = std::int32_t;
using Vertex = std::uint32_t;

enum class BoundaryMode { cube, torus };

std::string_view to_string(BoundaryMode mode);
BoundaryMode parse_boundary_mode(std::string_view text);

/// n points of [0,1]^d stored row-major.
class PointCloud {
 public:
  PointCloud(int dimension, std::vector<double> coordinates);

  static PointCloud from_points(int dimension, const std::vector<std::vector<double>>& points);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dimension_); }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dimension_), static_cast<std::size_t>(dimension_)};
  }
  std::span<const double> coordinates() const noexcept { return coords_; }

  bool operator==(const PointCloud&) const = default;

 private:
  int dimension_;
  std::vector<double> coords_;
};

/// Undirected simple graph in compressed adjacency form. Neighbour lists are
/// strictly increasing, symmetric and free of self-loops.
class Graph {
 public:
  Graph() = default;
  explicit Graph(const std::vector<std::vector<Vertex>>& adjacency);

  static Graph from_edges(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> edges);

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const Vertex> neighbours(std::size_t v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Edges as (i, j) with i < j, lexicographically sorted.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
};

class ColouredGraph {
 public:
  ColouredGraph(Graph graph, std::vector<Colour> colours, std::size_t colour_count);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<Colour>& colours() const noexcept { return colours_; }
  Colour colour(std::size_t v) const { return colours_[v]; }
  std::size_t colour_count() const noexcept { return colour_count_; }
  std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }

 private:
  Graph graph_;
  std::vector<Colour> colours_;
  std::size_t colour_count_;
};

/// Symmetric nonnegative connection kernel C over colours 0..k-1.
class Kernel {
 public:
  Kernel(std::size_t colours, std::vector<double> row_major);

  static Kernel constant(std::size_t colours, double value);

  std::size_t size() const noexcept { return size_; }
  double operator()(Colour a, Colour b) const {
    return values_[static_cast<std::size_t>(a) * size_ + static_cast<std::size_t>(b)];
  }
  double max() const;

 private:
  std::size_t size_;
  std::vector<double> values_;
};

struct ColourModel {
  Kernel kernel;
  std::vector<double> nu;
  std::vector<std::string> names;

  void validate() const;
};

struct ModelParams {
  int d = 2;
  std::size_t n = 0;
  double c = 1.0;
  std::optional<ColourModel> colours;
  BoundaryMode mode = BoundaryMode::torus;
  std::uint64_t seed = 1;

  void validate() const;
};

PointCloud sample_points(std::size_t n, int d, std::uint64_t seed);
PointCloud sample_points(std::size_t n, int d, Rng& rng);

/// (c/n)^{1/d}, clamped to 1.
double radius_from_c(std::size_t n, int d, double c);

double squared_distance(std::span<const double> x, std::span<const double> y, BoundaryMode mode);

/// Radius graph: {i,j} is an edge iff the distance is at most r.
/// Uses a uniform cell grid with cells no narrower than r.
Graph build_rgg(const PointCloud& cloud, double r, BoundaryMode mode);

std::vector<Colour> sample_colours(std::size_t n, std::span<const double> nu, Rng& rng);

/// Coloured radius graph with r(a,b) = (C(a,b)/n)^{1/d}; colours are supplied.
ColouredGraph build_coloured_rgg(const PointCloud& cloud, std::vector<Colour> colours, const Kernel& kernel,
                                 BoundaryMode mode);

/// Colours drawn i.i.d. from params.colours->nu using `seed`.
ColouredGraph build_coloured_rgg(const PointCloud& cloud, const ModelParams& params, std::uint64_t seed);

}  // namespace rggld
