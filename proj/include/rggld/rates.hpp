#pragma once

#include <limits>
#include <stdexcept>

#include "rggld/geometry.hpp"
#include "rggld/measures.hpp"

namespace rggld {

/// Cumulative tail mass below which countable sums are cut off.
inline constexpr double kDefaultTail = 1e-14;

/// Volume of the Euclidean unit ball in dimension d.
double rho(int d);

/// Dimension and intensity of an uncoloured model; the limiting mean degree
/// is rho(d) * c.
struct Intensity {
  int d = 2;
  double c = 1.0;

  double mean_degree() const { return rho(d) * c; }
  void validate() const;
};

/// Extended real for rate values and relative entropies. Infinity is an
/// explicit state, never a large finite number.
class RateValue {
 public:
  explicit RateValue(double value) : value_(value) {}

  static RateValue infinity() { return RateValue(Tag{}); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  /// Throws std::logic_error when infinite.
  double value() const;

  /// IEEE view: +inf for the infinite state.
  double as_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  RateValue operator+(const RateValue& other) const;
  RateValue operator*(double factor) const;

 private:
  struct Tag {};
  explicit RateValue(Tag) : infinite_(true) {}

  double value_ = 0.0;
  bool infinite_ = false;
};

/// Poisson law with a truncation point K such that P(X > K) < tail.
class PoissonLaw {
 public:
  explicit PoissonLaw(double rate, double tail = kDefaultTail);

  double rate() const noexcept { return rate_; }
  Degree truncation() const noexcept { return truncation_; }

  double log_pmf(Degree k) const;
  double pmf(Degree k) const;

  /// pmf restricted to 0..truncation().
  DegreeMeasure measure() const;

 private:
  double rate_;
  Degree truncation_;
};

/// Sum over the support of p of p log(p/q), with 0 log 0 = 0. Infinite when
/// p charges a point where q vanishes. Not sign-restricted for measures that
/// are not probabilities.
template <class Key>
RateValue kl(const SparseMeasure<Key>& p, const SparseMeasure<Key>& q) {
  double sum = 0.0;
  for (const auto& [key, pm] : p) {
    const double qm = q[key];
    if (qm <= 0.0) return RateValue::infinity();
    sum += pm * std::log(pm / qm);
  }
  return RateValue(sum);
}

/// kl(delta, Poisson(rate)) evaluated pointwise (no truncation of the reference).
RateValue kl_poisson(const DegreeMeasure& delta, double rate);

/// Degree law with an explicit marker for infinite mean.
struct DegreeLaw {
  DegreeMeasure pmf;
  bool infinite_mean = false;
};

RateValue eta1(const DegreeMeasure& delta, const Intensity& intensity);
RateValue eta1(const DegreeLaw& delta, const Intensity& intensity);

/// The functional whose infimum over x >= <delta> defines eta1.
RateValue eta_at_x(const DegreeMeasure& delta, double x, const Intensity& intensity);

/// Unique a > 0 with a (1 - e^{-a}) = rho(d) c (1 - y), by bisection.
double solve_a(double y, const Intensity& intensity);

RateValue xi1(double y, const Intensity& intensity);

/// Minimiser of eta1 subject to delta(0) = y: mass y at 0 and a zero-truncated
/// Poisson(a) law carrying the remaining 1 - y.
DegreeMeasure optimal_conditional_delta(double y, const Intensity& intensity, double tail = kDefaultTail);

/// H(varpi || rho C omega x omega) + rho ||C omega x omega|| - ||varpi||.
RateValue hc_d(const PairMeasure& varpi, const ColourMeasure& omega, const Kernel& kernel, int d);

/// Product-Poisson reference law: colour a with probability mu1(a), then
/// independent l(b) ~ Poisson(varpi(a,b) / mu1(a)).
NeighbourhoodMeasure q_measure(const PairMeasure& varpi, const ColourMeasure& mu1, double tail = kDefaultTail);

/// log Q[varpi, mu1](key); -inf where Q vanishes.
double q_log_mass(const PairMeasure& varpi, const ColourMeasure& mu1, const NeighbourhoodKey& key);

/// Joint rate of (pair measure, neighbourhood measure); infinite unless the
/// pair is consistent within 1e-9.
RateValue rate_J(const PairMeasure& varpi, const NeighbourhoodMeasure& mu, const ColourMeasure& nu,
                 const Kernel& kernel, int d);

ColourMeasure colour_law(std::span<const double> nu);

/// rho(d) C nu x nu.
PairMeasure typical_pair_measure(std::span<const double> nu, const Kernel& kernel, int d);

/// Colour a ~ nu, then independent l(b) ~ Poisson(rho(d) C(a,b) nu(b)), truncated.
NeighbourhoodMeasure typical_neighbourhood_measure(std::span<const double> nu, const Kernel& kernel, int d,
                                                   double tail = kDefaultTail);

}  // namespace rggld
