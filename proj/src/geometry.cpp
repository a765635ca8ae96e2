#include "rggld/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rggld/errors.hpp"

namespace rggld {

std::string_view to_string(BoundaryMode mode) {
  return mode == BoundaryMode::cube ? "cube" : "torus";
}

BoundaryMode parse_boundary_mode(std::string_view text) {
  if (text == "cube") return BoundaryMode::cube;
  if (text == "torus") return BoundaryMode::torus;
  throw InvalidParameter("mode", "expected 'cube' or 'torus', got '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// PointCloud

PointCloud::PointCloud(int dimension, std::vector<double> coordinates)
    : dimension_(dimension), coords_(std::move(coordinates)) {
  if (dimension_ < 1) throw InvalidDimension("d", "dimension must be at least 1");
  if (coords_.size() % static_cast<std::size_t>(dimension_) != 0)
    throw InvalidParameter("points", "coordinate count is not a multiple of the dimension");
  // Sampled clouds live in [0,1); hand-built ones may touch the upper face.
  for (double x : coords_) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidParameter("points", "coordinate outside [0,1]");
  }
}

PointCloud PointCloud::from_points(int dimension, const std::vector<std::vector<double>>& points) {
  std::vector<double> flat;
  flat.reserve(points.size() * static_cast<std::size_t>(std::max(dimension, 0)));
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dimension)
      throw InvalidParameter("points", "point has wrong number of coordinates");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return PointCloud(dimension, std::move(flat));
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(const std::vector<std::vector<Vertex>>& adjacency) {
  const std::size_t n = adjacency.size();
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& list = adjacency[v];
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k] >= n) throw InvalidParameter("adjacency", "neighbour index out of range");
      if (list[k] == v) throw InvalidParameter("adjacency", "self-loop");
      if (k > 0 && list[k] <= list[k - 1]) throw InvalidParameter("adjacency", "neighbour list not strictly increasing");
      const auto& back = adjacency[list[k]];
      if (!std::binary_search(back.begin(), back.end(), static_cast<Vertex>(v)))
        throw InvalidParameter("adjacency", "adjacency is not symmetric");
    }
    offsets_[v + 1] = offsets_[v] + list.size();
  }
  targets_.reserve(offsets_[n]);
  for (const auto& list : adjacency) targets_.insert(targets_.end(), list.begin(), list.end());
}

Graph Graph::from_edges(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> edges) {
  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (auto [i, j] : edges) {
    if (i >= vertex_count || j >= vertex_count) throw InvalidParameter("edges", "vertex index out of range");
    if (i == j) throw InvalidParameter("edges", "self-loop");
    ++g.offsets_[i + 1];
    ++g.offsets_[j + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.resize(g.offsets_[vertex_count]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [i, j] : edges) {
    g.targets_[fill[i]++] = j;
    g.targets_[fill[j]++] = i;
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw InvalidParameter("edges", "duplicate edge");
  }
  return g;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    for (Vertex w : neighbours(v)) {
      if (w > v) out.emplace_back(static_cast<Vertex>(v), w);
    }
  }
  return out;
}

ColouredGraph::ColouredGraph(Graph graph, std::vector<Colour> colours, std::size_t colour_count)
    : graph_(std::move(graph)), colours_(std::move(colours)), colour_count_(colour_count) {
  if (colours_.size() != graph_.vertex_count())
    throw InvalidParameter("colours", "one colour per vertex required");
  for (Colour a : colours_) {
    if (a < 0 || static_cast<std::size_t>(a) >= colour_count_)
      throw InvalidParameter("colours", "colour index out of range");
  }
}

// ---------------------------------------------------------------------------
// Kernel and parameters

Kernel::Kernel(std::size_t colours, std::vector<double> row_major) : size_(colours), values_(std::move(row_major)) {
  if (size_ == 0) throw InvalidKernel("C", "kernel needs at least one colour");
  if (values_.size() != size_ * size_) throw InvalidKernel("C", "kernel is not square");
  bool positive = false;
  for (std::size_t a = 0; a < size_; ++a) {
    for (std::size_t b = 0; b < size_; ++b) {
      const double v = values_[a * size_ + b];
      if (!std::isfinite(v) || v < 0.0) throw InvalidKernel("C", "kernel entries must be finite and nonnegative");
      if (v != values_[b * size_ + a]) throw InvalidKernel("C", "kernel is not symmetric");
      positive = positive || v > 0.0;
    }
  }
  if (!positive) throw InvalidKernel("C", "kernel is identically zero");
}

Kernel Kernel::constant(std::size_t colours, double value) {
  return Kernel(colours, std::vector<double>(colours * colours, value));
}

double Kernel::max() const { return *std::max_element(values_.begin(), values_.end()); }

void ColourModel::validate() const {
  if (nu.size() != kernel.size()) throw InvalidParameter("nu", "colour law and kernel disagree on the number of colours");
  double total = 0.0;
  for (double p : nu) {
    if (!(p >= 0.0)) throw InvalidParameter("nu", "negative colour probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidParameter("nu", "colour law must sum to 1");
  if (!names.empty() && names.size() != nu.size()) throw InvalidParameter("names", "one name per colour required");
}

void ModelParams::validate() const {
  if (d < 1) throw InvalidDimension("d", "dimension must be at least 1");
  if (colours) {
    colours->validate();
  } else if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidParameter("c", "intensity must be positive");
  }
}

// ---------------------------------------------------------------------------
// Sampling

PointCloud sample_points(std::size_t n, int d, Rng& rng) {
  if (d < 1) throw InvalidDimension("d", "dimension must be at least 1");
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& x : coords) x = rng.uniform();
  return PointCloud(d, std::move(coords));
}

PointCloud sample_points(std::size_t n, int d, std::uint64_t seed) {
  Rng rng(seed);
  return sample_points(n, d, rng);
}

double radius_from_c(std::size_t n, int d, double c) {
  if (d < 1) throw InvalidDimension("d", "dimension must be at least 1");
  if (n < 1) throw InvalidParameter("n", "vertex count must be at least 1");
  if (!(c > 0.0)) throw InvalidParameter("c", "intensity must be positive");
  return std::min(1.0, std::pow(c / static_cast<double>(n), 1.0 / d));
}

std::vector<Colour> sample_colours(std::size_t n, std::span<const double> nu, Rng& rng) {
  if (nu.empty()) throw InvalidParameter("nu", "empty colour law");
  std::vector<double> cumulative(nu.size());
  std::partial_sum(nu.begin(), nu.end(), cumulative.begin());
  std::vector<Colour> colours(n);
  for (auto& colour : colours) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // Skip trailing zero-probability colours if rounding lands past the end.
    if (it == cumulative.end()) it = std::prev(it);
    while (nu[static_cast<std::size_t>(it - cumulative.begin())] == 0.0) --it;
    colour = static_cast<Colour>(it - cumulative.begin());
  }
  return colours;
}

double squared_distance(std::span<const double> x, std::span<const double> y, BoundaryMode mode) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double diff = std::abs(x[k] - y[k]);
    if (mode == BoundaryMode::torus) diff = std::min(diff, 1.0 - diff);
    sum += diff * diff;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Cell grid

namespace {

class CellGrid {
 public:
  CellGrid(const PointCloud& cloud, double cell_min, BoundaryMode mode)
      : cloud_(cloud), d_(cloud.dimension()), mode_(mode) {
    // floor(1/r) cells per axis, so each cell side is at least r; capped so the
    // grid never has many more cells than points.
    auto per_axis = static_cast<std::size_t>(std::floor(1.0 / cell_min));
    if (per_axis == 0) per_axis = 1;
    if (static_cast<double>(per_axis) * cell_min > 1.0 && per_axis > 1) --per_axis;
    const double cap = std::max(64.0, 4.0 * static_cast<double>(cloud.size()));
    while (per_axis > 1 && std::pow(static_cast<double>(per_axis), d_) > cap) {
      per_axis = std::max<std::size_t>(1, static_cast<std::size_t>(std::pow(cap, 1.0 / d_)));
      if (std::pow(static_cast<double>(per_axis), d_) > cap) --per_axis;
    }
    per_axis_ = per_axis;
    std::size_t cells = 1;
    for (int k = 0; k < d_; ++k) cells *= per_axis_;

    const std::size_t n = cloud.size();
    cell_of_.resize(n);
    start_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of_[i] = cell_index(cloud.point(i));
      ++start_[cell_of_[i] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members_[fill[cell_of_[i]]++] = static_cast<Vertex>(i);
  }

  // Calls visit(i, j, squared distance) once for every unordered pair i < j
  // lying in the same or adjacent cells.
  template <class Visit>
  void for_each_candidate_pair(Visit&& visit) const {
    const std::size_t n = cloud_.size();
    std::vector<std::size_t> neighbour_cells;
    std::vector<long> coord(static_cast<std::size_t>(d_));
    for (std::size_t i = 0; i < n; ++i) {
      adjacent_cells(cell_of_[i], coord, neighbour_cells);
      const auto pi = cloud_.point(i);
      for (std::size_t cell : neighbour_cells) {
        for (std::size_t k = start_[cell]; k < start_[cell + 1]; ++k) {
          const Vertex j = members_[k];
          if (j <= i) continue;
          visit(static_cast<Vertex>(i), j, squared_distance(pi, cloud_.point(j), mode_));
        }
      }
    }
  }

 private:
  std::size_t cell_index(std::span<const double> p) const {
    std::size_t index = 0;
    for (int k = d_ - 1; k >= 0; --k) {
      auto c = static_cast<std::size_t>(p[static_cast<std::size_t>(k)] * static_cast<double>(per_axis_));
      c = std::min(c, per_axis_ - 1);
      index = index * per_axis_ + c;
    }
    return index;
  }

  void adjacent_cells(std::size_t cell, std::vector<long>& coord, std::vector<std::size_t>& out) const {
    const auto m = static_cast<long>(per_axis_);
    for (int k = 0; k < d_; ++k) {
      coord[static_cast<std::size_t>(k)] = static_cast<long>(cell % per_axis_);
      cell /= per_axis_;
    }
    out.clear();
    std::size_t combos = 1;
    for (int k = 0; k < d_; ++k) combos *= 3;
    for (std::size_t combo = 0; combo < combos; ++combo) {
      std::size_t rest = combo;
      std::size_t index = 0;
      std::size_t stride = 1;
      bool inside = true;
      for (int k = 0; k < d_; ++k) {
        long c = coord[static_cast<std::size_t>(k)] + static_cast<long>(rest % 3) - 1;
        rest /= 3;
        if (c < 0 || c >= m) {
          if (mode_ == BoundaryMode::cube) {
            inside = false;
            break;
          }
          c = (c + m) % m;
        }
        index += static_cast<std::size_t>(c) * stride;
        stride *= per_axis_;
      }
      if (inside) out.push_back(index);
    }
    // With fewer than three cells per axis the torus wrap revisits cells.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  const PointCloud& cloud_;
  int d_;
  BoundaryMode mode_;
  std::size_t per_axis_ = 1;
  std::vector<std::size_t> cell_of_;
  std::vector<std::size_t> start_;
  std::vector<Vertex> members_;
};

}  // namespace

Graph build_rgg(const PointCloud& cloud, double r, BoundaryMode mode) {
  if (!(r > 0.0) || r > 1.0) throw InvalidRadius("r", "radius must lie in (0, 1]");
  std::vector<std::pair<Vertex, Vertex>> edges;
  const double r2 = r * r;
  CellGrid grid(cloud, r, mode);
  grid.for_each_candidate_pair([&](Vertex i, Vertex j, double d2) {
    if (d2 <= r2) edges.emplace_back(i, j);
  });
  return Graph::from_edges(cloud.size(), edges);
}

ColouredGraph build_coloured_rgg(const PointCloud& cloud, std::vector<Colour> colours, const Kernel& kernel,
                                 BoundaryMode mode) {
  const std::size_t n = cloud.size();
  const std::size_t k = kernel.size();
  if (colours.size() != n) throw InvalidParameter("colours", "one colour per vertex required");
  for (Colour a : colours) {
    if (a < 0 || static_cast<std::size_t>(a) >= k) throw InvalidParameter("colours", "colour index out of range");
  }

  std::vector<std::pair<Vertex, Vertex>> edges;
  if (n > 0) {
    std::vector<double> r2(k * k, 0.0);
    double r_max = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const double cab = kernel(static_cast<Colour>(a), static_cast<Colour>(b));
        if (cab > 0.0) {
          const double r = radius_from_c(n, cloud.dimension(), cab);
          r2[a * k + b] = r * r;
          r_max = std::max(r_max, r);
        }
      }
    }
    if (r_max > 0.0) {
      CellGrid grid(cloud, r_max, mode);
      grid.for_each_candidate_pair([&](Vertex i, Vertex j, double d2) {
        const double limit = r2[static_cast<std::size_t>(colours[i]) * k + static_cast<std::size_t>(colours[j])];
        if (limit > 0.0 && d2 <= limit) edges.emplace_back(i, j);
      });
    }
  }
  return ColouredGraph(Graph::from_edges(n, edges), std::move(colours), k);
}

ColouredGraph build_coloured_rgg(const PointCloud& cloud, const ModelParams& params, std::uint64_t seed) {
  if (!params.colours) throw InvalidParameter("C", "coloured model requires a kernel and colour law");
  params.colours->validate();
  Rng rng(seed);
  auto colours = sample_colours(cloud.size(), params.colours->nu, rng);
  return build_coloured_rgg(cloud, std::move(colours), params.colours->kernel, params.mode);
}

}  // namespace rggld
