#include "rggld/rates.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace rggld {

double rho(int d) {
  if (d < 1) throw InvalidDimension("d", "dimension must be at least 1");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * (d + 2));
}

void Intensity::validate() const {
  if (d < 1) throw InvalidDimension("d", "dimension must be at least 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("c", "intensity must be positive");
}

// ---------------------------------------------------------------------------
// RateValue

double RateValue::value() const {
  if (infinite_) throw std::logic_error("RateValue::value() called on an infinite rate");
  return value_;
}

RateValue RateValue::operator+(const RateValue& other) const {
  if (infinite_ || other.infinite_) return infinity();
  return RateValue(value_ + other.value_);
}

RateValue RateValue::operator*(double factor) const {
  if (infinite_) return factor == 0.0 ? RateValue(0.0) : infinity();
  return RateValue(value_ * factor);
}

// ---------------------------------------------------------------------------
// Poisson

PoissonLaw::PoissonLaw(double rate, double tail) : rate_(rate), truncation_(0) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidParameter("rate", "Poisson rate must be finite and nonnegative");
  if (!(tail > 0.0)) throw InvalidParameter("tail", "truncation tail must be positive");
  if (rate == 0.0) return;
  // For K + 2 > rate the pmf ratios beyond K are bounded by rate / (K + 2),
  // so the tail past K is at most pmf(K + 1) / (1 - rate / (K + 2)).
  auto k = static_cast<Degree>(std::floor(rate));
  while (true) {
    const double ratio = rate / static_cast<double>(k + 2);
    const double bound = pmf(k + 1) / (1.0 - ratio);
    if (bound < tail) break;
    ++k;
  }
  truncation_ = k;
}

double PoissonLaw::log_pmf(Degree k) const {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (rate_ == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const auto kd = static_cast<double>(k);
  return kd * std::log(rate_) - rate_ - std::lgamma(kd + 1.0);
}

double PoissonLaw::pmf(Degree k) const { return std::exp(log_pmf(k)); }

DegreeMeasure PoissonLaw::measure() const {
  DegreeMeasure out;
  for (Degree k = 0; k <= truncation_; ++k) out.add(k, pmf(k));
  return out;
}

RateValue kl_poisson(const DegreeMeasure& delta, double rate) {
  const PoissonLaw reference(rate);
  double sum = 0.0;
  for (const auto& [k, mass] : delta) {
    const double log_q = reference.log_pmf(k);
    if (std::isinf(log_q)) return RateValue::infinity();
    sum += mass * (std::log(mass) - log_q);
  }
  return RateValue(sum);
}

// ---------------------------------------------------------------------------
// Degree-distribution rates

namespace {

void require_probability(const DegreeMeasure& delta, const char* field) {
  if (!delta.is_probability(1e-12)) throw InvalidMeasure(field, "must be a probability measure");
  for (const auto& [k, m] : delta) {
    if (k < 0) throw InvalidMeasure(field, "degrees must be nonnegative");
  }
}

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

RateValue eta1(const DegreeMeasure& delta, const Intensity& intensity) {
  intensity.validate();
  require_probability(delta, "delta");
  const double lambda = intensity.mean_degree();
  const double m = mean(delta);
  const double first = m > 0.0 ? 0.5 * m * std::log(m / lambda) : 0.0;
  return RateValue(first - 0.5 * m + 0.5 * lambda) + kl_poisson(delta, m);
}

RateValue eta1(const DegreeLaw& delta, const Intensity& intensity) {
  if (delta.infinite_mean) return RateValue::infinity();
  return eta1(delta.pmf, intensity);
}

RateValue eta_at_x(const DegreeMeasure& delta, double x, const Intensity& intensity) {
  intensity.validate();
  require_probability(delta, "delta");
  const double m = mean(delta);
  if (!(x >= m)) throw DomainError("x", "x must be at least the mean of delta");
  const double lambda = intensity.mean_degree();
  return kl_poisson(delta, x) + RateValue(0.5 * x_log_x(x) - 0.5 * x * std::log(lambda) + 0.5 * lambda - 0.5 * x);
}

double solve_a(double y, const Intensity& intensity) {
  intensity.validate();
  if (!(y >= 0.0) || !(y < 1.0)) throw DomainError("y", "solve_a needs 0 <= y < 1");
  const double target = intensity.mean_degree() * (1.0 - y);
  // a -> a (1 - e^{-a}) is a strictly increasing bijection of (0, inf).
  auto f = [](double a) { return -a * std::expm1(-a); };
  double lo = 0.0;
  double hi = target + 1.0;
  while (f(hi) < target) hi *= 2.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RateValue xi1(double y, const Intensity& intensity) {
  intensity.validate();
  if (!(y >= 0.0) || !(y <= 1.0)) throw DomainError("y", "y must lie in [0, 1]");
  const double lambda = intensity.mean_degree();
  if (y == 1.0) return RateValue(0.5 * lambda);
  const double a = solve_a(y, intensity);
  const double rest = 1.0 - y;
  const double gap = a - lambda * rest;
  return RateValue(x_log_x(y) + lambda * y * (1.0 - 0.5 * y) -
                   rest * (std::log(lambda / a) - gap * gap / (2.0 * lambda * rest)));
}

DegreeMeasure optimal_conditional_delta(double y, const Intensity& intensity, double tail) {
  intensity.validate();
  if (!(y >= 0.0) || !(y <= 1.0)) throw DomainError("y", "y must lie in [0, 1]");
  DegreeMeasure out;
  if (y == 1.0) {
    out.add(0, 1.0);
    return out;
  }
  const double a = solve_a(y, intensity);
  const PoissonLaw law(a, tail);
  const double positive_mass = -std::expm1(-a);
  out.add(0, y);
  for (Degree k = 1; k <= law.truncation(); ++k) out.add(k, (1.0 - y) * law.pmf(k) / positive_mass);
  return out;
}

// ---------------------------------------------------------------------------
// Coloured rates

namespace {

void require_colour(Colour a, const Kernel& kernel, const char* field) {
  if (a < 0 || static_cast<std::size_t>(a) >= kernel.size())
    throw InvalidMeasure(field, "colour index outside the kernel");
}

// Range of entries (a, *) of a pair measure.
auto row(const PairMeasure& varpi, Colour a) {
  const auto& m = varpi.entries();
  return std::pair{m.lower_bound({a, std::numeric_limits<Colour>::min()}),
                   m.upper_bound({a, std::numeric_limits<Colour>::max()})};
}

// Appends weight * prod_b Poisson(rate_b)(l(b)) for all truncated l.
void add_product_poisson(Colour a, double weight, const std::vector<std::pair<Colour, double>>& rates, double tail,
                         NeighbourhoodMeasure& out) {
  std::vector<PoissonLaw> laws;
  laws.reserve(rates.size());
  for (const auto& [b, rate] : rates) laws.emplace_back(rate, tail);

  std::vector<Degree> l(rates.size(), 0);
  while (true) {
    double log_mass = std::log(weight);
    NeighbourhoodKey key{a, {}};
    for (std::size_t i = 0; i < rates.size(); ++i) {
      log_mass += laws[i].log_pmf(l[i]);
      key.locality.increment(rates[i].first, l[i]);
    }
    out.add(key, std::exp(log_mass));
    std::size_t i = 0;
    for (; i < rates.size(); ++i) {
      if (++l[i] <= laws[i].truncation()) break;
      l[i] = 0;
    }
    if (i == rates.size()) break;
  }
}

void require_q_inputs(const PairMeasure& varpi, const ColourMeasure& mu1) {
  for (const auto& [pair, mass] : varpi) {
    if (mu1[pair.first] <= 0.0)
      throw DegenerateInput("mu1", "reference law undefined: pair measure charges a colour with zero marginal");
  }
}

}  // namespace

RateValue hc_d(const PairMeasure& varpi, const ColourMeasure& omega, const Kernel& kernel, int d) {
  if (!omega.is_probability(1e-12)) throw InvalidMeasure("omega", "must be a probability measure");
  for (const auto& [a, m] : omega) require_colour(a, kernel, "omega");
  for (const auto& [pair, m] : varpi) {
    require_colour(pair.first, kernel, "varpi");
    require_colour(pair.second, kernel, "varpi");
    const double mirror = varpi[{pair.second, pair.first}];
    if (std::abs(m - mirror) > 1e-12 * std::max(1.0, m)) throw InvalidMeasure("varpi", "pair measure must be symmetric");
  }

  const double r = rho(d);
  PairMeasure reference;
  for (const auto& [a, wa] : omega) {
    for (const auto& [b, wb] : omega) reference.add({a, b}, r * kernel(a, b) * wa * wb);
  }
  return kl(varpi, reference) + RateValue(reference.total() - varpi.total());
}

double q_log_mass(const PairMeasure& varpi, const ColourMeasure& mu1, const NeighbourhoodKey& key) {
  const double weight = mu1[key.colour];
  if (weight <= 0.0) return -std::numeric_limits<double>::infinity();
  double log_mass = std::log(weight);
  auto [first, last] = row(varpi, key.colour);
  for (auto it = first; it != last; ++it) {
    const double rate = it->second / weight;
    const auto l = static_cast<double>(key.locality[it->first.second]);
    log_mass += -rate + l * std::log(rate) - std::lgamma(l + 1.0);
  }
  // Locality entries for colours b with varpi(a, b) = 0 have zero probability.
  for (const auto& [b, count] : key.locality.counts()) {
    if (varpi[{key.colour, b}] <= 0.0) return -std::numeric_limits<double>::infinity();
  }
  return log_mass;
}

NeighbourhoodMeasure q_measure(const PairMeasure& varpi, const ColourMeasure& mu1, double tail) {
  require_q_inputs(varpi, mu1);
  NeighbourhoodMeasure out;
  for (const auto& [a, weight] : mu1) {
    std::vector<std::pair<Colour, double>> rates;
    auto [first, last] = row(varpi, a);
    for (auto it = first; it != last; ++it) rates.emplace_back(it->first.second, it->second / weight);
    add_product_poisson(a, weight, rates, tail, out);
  }
  return out;
}

RateValue rate_J(const PairMeasure& varpi, const NeighbourhoodMeasure& mu, const ColourMeasure& nu,
                 const Kernel& kernel, int d) {
  if (!mu.is_probability(1e-12)) throw InvalidMeasure("mu", "must be a probability measure");
  if (consistency_check(varpi, mu, 1e-9) != Consistency::consistent) return RateValue::infinity();

  const ColourMeasure mu1 = h_map(mu).colours;
  double relative_entropy = 0.0;
  for (const auto& [key, mass] : mu) {
    const double log_q = q_log_mass(varpi, mu1, key);
    if (std::isinf(log_q)) return RateValue::infinity();
    relative_entropy += mass * (std::log(mass) - log_q);
  }
  return RateValue(relative_entropy) + kl(mu1, nu) + hc_d(varpi, mu1, kernel, d) * 0.5;
}

ColourMeasure colour_law(std::span<const double> nu) {
  ColourMeasure out;
  for (std::size_t a = 0; a < nu.size(); ++a) out.add(static_cast<Colour>(a), nu[a]);
  return out;
}

PairMeasure typical_pair_measure(std::span<const double> nu, const Kernel& kernel, int d) {
  if (nu.size() != kernel.size()) throw InvalidParameter("nu", "colour law and kernel disagree on the number of colours");
  const double r = rho(d);
  PairMeasure out;
  for (std::size_t a = 0; a < nu.size(); ++a) {
    for (std::size_t b = 0; b < nu.size(); ++b) {
      out.add({static_cast<Colour>(a), static_cast<Colour>(b)},
              r * kernel(static_cast<Colour>(a), static_cast<Colour>(b)) * nu[a] * nu[b]);
    }
  }
  return out;
}

NeighbourhoodMeasure typical_neighbourhood_measure(std::span<const double> nu, const Kernel& kernel, int d,
                                                   double tail) {
  if (nu.size() != kernel.size()) throw InvalidParameter("nu", "colour law and kernel disagree on the number of colours");
  const double r = rho(d);
  NeighbourhoodMeasure out;
  for (std::size_t a = 0; a < nu.size(); ++a) {
    if (nu[a] <= 0.0) continue;
    std::vector<std::pair<Colour, double>> rates;
    for (std::size_t b = 0; b < nu.size(); ++b) {
      const double rate = r * kernel(static_cast<Colour>(a), static_cast<Colour>(b)) * nu[b];
      if (rate > 0.0) rates.emplace_back(static_cast<Colour>(b), rate);
    }
    add_product_poisson(static_cast<Colour>(a), nu[a], rates, tail, out);
  }
  return out;
}

}  // namespace rggld
