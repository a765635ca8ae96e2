#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string_view>
#include <utility>

#include "rggld/errors.hpp"
#include "rggld/geometry.hpp"

namespace rggld {

using Degree = std::int64_t;
using ColourPair = std::pair<Colour, Colour>;

/// Sparse nonnegative measure on a countable index set. Zero masses are not
/// stored, so two measures with the same support compare structurally.
template <class Key>
class SparseMeasure {
 public:
  using key_type = Key;
  using map_type = std::map<Key, double>;

  SparseMeasure() = default;
  SparseMeasure(std::initializer_list<std::pair<const Key, double>> entries) {
    for (const auto& [k, m] : entries) add(k, m);
  }

  void add(const Key& key, double mass) {
    if (!(mass >= 0.0)) throw InvalidMeasure("mass", "masses must be nonnegative");
    if (mass == 0.0) return;
    mass_[key] += mass;
    total_ += mass;
  }

  double operator[](const Key& key) const {
    auto it = mass_.find(key);
    return it == mass_.end() ? 0.0 : it->second;
  }

  double total() const noexcept { return total_; }
  bool empty() const noexcept { return mass_.empty(); }
  std::size_t support_size() const noexcept { return mass_.size(); }
  const map_type& entries() const noexcept { return mass_; }
  auto begin() const { return mass_.begin(); }
  auto end() const { return mass_.end(); }

  bool is_probability(double tol = 1e-12) const { return std::abs(total_ - 1.0) <= tol; }

  SparseMeasure scaled(double factor) const {
    SparseMeasure out;
    for (const auto& [k, m] : mass_) out.add(k, m * factor);
    return out;
  }

  bool operator==(const SparseMeasure& other) const { return mass_ == other.mass_; }

 private:
  map_type mass_;
  double total_ = 0.0;
};

template <class Key>
using CountMap = std::map<Key, std::int64_t>;

template <class Key>
SparseMeasure<Key> normalise(const CountMap<Key>& counts, double denominator) {
  SparseMeasure<Key> out;
  for (const auto& [k, count] : counts) out.add(k, static_cast<double>(count) / denominator);
  return out;
}

/// Neighbour counts per colour. Colours with count zero are omitted.
class LocalityVector {
 public:
  LocalityVector() = default;
  LocalityVector(std::initializer_list<std::pair<const Colour, std::int64_t>> counts);

  void increment(Colour b, std::int64_t by = 1);
  std::int64_t operator[](Colour b) const;
  std::int64_t total() const;
  bool empty() const noexcept { return counts_.empty(); }
  const std::map<Colour, std::int64_t>& counts() const noexcept { return counts_; }

  auto operator<=>(const LocalityVector&) const = default;
  bool operator==(const LocalityVector&) const = default;

 private:
  std::map<Colour, std::int64_t> counts_;
};

struct NeighbourhoodKey {
  Colour colour = 0;
  LocalityVector locality;

  auto operator<=>(const NeighbourhoodKey&) const = default;
  bool operator==(const NeighbourhoodKey&) const = default;
};

using DegreeMeasure = SparseMeasure<Degree>;
using ColourMeasure = SparseMeasure<Colour>;
using PairMeasure = SparseMeasure<ColourPair>;
using NeighbourhoodMeasure = SparseMeasure<NeighbourhoodKey>;

double mean(const DegreeMeasure& delta);

CountMap<Degree> degree_counts(const Graph& g);
DegreeMeasure degree_distribution(const Graph& g);

CountMap<Colour> colour_counts(const ColouredGraph& cg);
ColourMeasure empirical_colour_measure(const ColouredGraph& cg);

/// Each edge {i,j} contributes one count at (X_i, X_j) and one at (X_j, X_i).
CountMap<ColourPair> pair_counts(const ColouredGraph& cg);
PairMeasure empirical_pair_measure(const ColouredGraph& cg);

CountMap<NeighbourhoodKey> neighbourhood_counts(const ColouredGraph& cg);
NeighbourhoodMeasure empirical_neighbourhood_measure(const ColouredGraph& cg);

/// (colour marginal, first-moment pair measure). The pair entry (b, a)
/// holds sum over l of mu(a, l) * l(b).
struct Marginals {
  ColourMeasure colours;
  PairMeasure pairs;
};

Marginals h_map(const NeighbourhoodMeasure& mu);

struct CountMarginals {
  CountMap<Colour> colours;
  CountMap<ColourPair> pairs;
};

/// Integer form of h_map, for exact comparison against empirical counts.
CountMarginals h_map_counts(const CountMap<NeighbourhoodKey>& counts);

enum class Consistency { consistent, sub_consistent, inconsistent };

std::string_view to_string(Consistency c);

Consistency consistency_check(const PairMeasure& varpi, const NeighbourhoodMeasure& mu, double tol);

}  // namespace rggld
