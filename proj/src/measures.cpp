#include "rggld/measures.hpp"

#include <algorithm>
#include <set>

namespace rggld {

LocalityVector::LocalityVector(std::initializer_list<std::pair<const Colour, std::int64_t>> counts) {
  for (const auto& [b, count] : counts) increment(b, count);
}

void LocalityVector::increment(Colour b, std::int64_t by) {
  if (by < 0) throw InvalidMeasure("locality", "neighbour counts must be nonnegative");
  if (by == 0) return;
  counts_[b] += by;
}

std::int64_t LocalityVector::operator[](Colour b) const {
  auto it = counts_.find(b);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t LocalityVector::total() const {
  std::int64_t sum = 0;
  for (const auto& [b, count] : counts_) sum += count;
  return sum;
}

double mean(const DegreeMeasure& delta) {
  double sum = 0.0;
  for (const auto& [k, m] : delta) sum += static_cast<double>(k) * m;
  return sum;
}

namespace {

void require_vertices(std::size_t n) {
  if (n == 0) throw UndefinedMeasure("graph", "empirical measures are undefined on the empty graph");
}

}  // namespace

CountMap<Degree> degree_counts(const Graph& g) {
  require_vertices(g.vertex_count());
  CountMap<Degree> counts;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) ++counts[static_cast<Degree>(g.degree(v))];
  return counts;
}

DegreeMeasure degree_distribution(const Graph& g) {
  return normalise(degree_counts(g), static_cast<double>(g.vertex_count()));
}

CountMap<Colour> colour_counts(const ColouredGraph& cg) {
  require_vertices(cg.vertex_count());
  CountMap<Colour> counts;
  for (Colour a : cg.colours()) ++counts[a];
  return counts;
}

ColourMeasure empirical_colour_measure(const ColouredGraph& cg) {
  return normalise(colour_counts(cg), static_cast<double>(cg.vertex_count()));
}

CountMap<ColourPair> pair_counts(const ColouredGraph& cg) {
  require_vertices(cg.vertex_count());
  CountMap<ColourPair> counts;
  for (auto [i, j] : cg.graph().edges()) {
    ++counts[{cg.colour(i), cg.colour(j)}];
    ++counts[{cg.colour(j), cg.colour(i)}];
  }
  return counts;
}

PairMeasure empirical_pair_measure(const ColouredGraph& cg) {
  return normalise(pair_counts(cg), static_cast<double>(cg.vertex_count()));
}

CountMap<NeighbourhoodKey> neighbourhood_counts(const ColouredGraph& cg) {
  require_vertices(cg.vertex_count());
  CountMap<NeighbourhoodKey> counts;
  for (std::size_t v = 0; v < cg.vertex_count(); ++v) {
    NeighbourhoodKey key{cg.colour(v), {}};
    for (Vertex w : cg.graph().neighbours(v)) key.locality.increment(cg.colour(w));
    ++counts[key];
  }
  return counts;
}

NeighbourhoodMeasure empirical_neighbourhood_measure(const ColouredGraph& cg) {
  return normalise(neighbourhood_counts(cg), static_cast<double>(cg.vertex_count()));
}

Marginals h_map(const NeighbourhoodMeasure& mu) {
  Marginals out;
  for (const auto& [key, mass] : mu) {
    out.colours.add(key.colour, mass);
    for (const auto& [b, count] : key.locality.counts())
      out.pairs.add({b, key.colour}, mass * static_cast<double>(count));
  }
  return out;
}

CountMarginals h_map_counts(const CountMap<NeighbourhoodKey>& counts) {
  CountMarginals out;
  for (const auto& [key, count] : counts) {
    out.colours[key.colour] += count;
    for (const auto& [b, l] : key.locality.counts()) out.pairs[{b, key.colour}] += count * l;
  }
  return out;
}

std::string_view to_string(Consistency c) {
  switch (c) {
    case Consistency::consistent:
      return "consistent";
    case Consistency::sub_consistent:
      return "sub_consistent";
    case Consistency::inconsistent:
      return "inconsistent";
  }
  return "inconsistent";
}

Consistency consistency_check(const PairMeasure& varpi, const NeighbourhoodMeasure& mu, double tol) {
  if (!(tol >= 0.0)) throw InvalidParameter("tol", "tolerance must be nonnegative");
  const PairMeasure h2 = h_map(mu).pairs;
  std::set<ColourPair> keys;
  for (const auto& [k, m] : varpi) keys.insert(k);
  for (const auto& [k, m] : h2) keys.insert(k);

  bool equal = true;
  for (const auto& key : keys) {
    const double lhs = h2[key];
    const double rhs = varpi[key];
    if (lhs > rhs + tol) return Consistency::inconsistent;
    if (std::abs(lhs - rhs) > tol) equal = false;
  }
  return equal ? Consistency::consistent : Consistency::sub_consistent;
}

}  // namespace rggld
