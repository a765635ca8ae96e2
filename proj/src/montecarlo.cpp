#include "rggld/montecarlo.hpp"

#include <cmath>
#include <algorithm>
#include <thread>
#include <tuple>

#include "rggld/errors.hpp"
#include "rggld/rates.hpp"

namespace rggld {

std::size_t resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

constexpr std::uint64_t kPointLane = 0;
constexpr std::uint64_t kColourLane = 1;

void require_trials(std::size_t trials) {
  if (trials < 1) throw InvalidParameter("trials", "at least one trial is required");
}

void require_vertices(const ModelParams& params) {
  if (params.n < 1) throw InvalidParameter("n", "vertex count must be at least 1");
}

struct MeanAndError {
  double mean = 0.0;
  double se = 0.0;
};

// Summed in index order so the result does not depend on scheduling.
MeanAndError mean_and_error(const std::vector<double>& values) {
  MeanAndError out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return out;
}

std::int64_t isolated_count(const Graph& g) {
  std::int64_t count = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) count += g.degree(v) == 0 ? 1 : 0;
  return count;
}

ModelParams with_n(const ModelParams& params, std::size_t n) {
  ModelParams out = params;
  out.n = n;
  out.seed = splitmix64(params.seed ^ (0x5851f42d4c957f2dULL * static_cast<std::uint64_t>(n)));
  return out;
}

}  // namespace

Graph sample_trial_graph(const ModelParams& params, std::uint64_t trial) {
  if (params.colours) return sample_trial_coloured_graph(params, trial).graph();
  params.validate();
  require_vertices(params);
  Rng rng = Rng::stream(params.seed, trial, kPointLane);
  const PointCloud cloud = sample_points(params.n, params.d, rng);
  return build_rgg(cloud, radius_from_c(params.n, params.d, params.c), params.mode);
}

ColouredGraph sample_trial_coloured_graph(const ModelParams& params, std::uint64_t trial) {
  params.validate();
  require_vertices(params);
  if (!params.colours) throw InvalidParameter("C", "coloured model requires a kernel and colour law");
  Rng point_rng = Rng::stream(params.seed, trial, kPointLane);
  Rng colour_rng = Rng::stream(params.seed, trial, kColourLane);
  const PointCloud cloud = sample_points(params.n, params.d, point_rng);
  auto colours = sample_colours(params.n, params.colours->nu, colour_rng);
  return build_coloured_rgg(cloud, std::move(colours), params.colours->kernel, params.mode);
}

TrialSummary run_trials(const ModelParams& params, std::size_t trials, RunOptions options) {
  params.validate();
  require_vertices(params);
  require_trials(trials);

  std::vector<TrialRecord> records(trials);
  std::vector<CountMap<Degree>> degrees(trials);
  parallel_for(trials, options.threads, [&](std::size_t t) {
    const Graph g = sample_trial_graph(params, t);
    records[t] = {t, isolated_count(g), static_cast<std::int64_t>(g.edge_count())};
    degrees[t] = degree_counts(g);
  });

  const auto n = static_cast<double>(params.n);
  std::vector<double> isolated(trials);
  std::vector<double> mean_degree(trials);
  CountMap<Degree> pooled;
  for (std::size_t t = 0; t < trials; ++t) {
    isolated[t] = static_cast<double>(records[t].isolated) / n;
    mean_degree[t] = 2.0 * static_cast<double>(records[t].edges) / n;
    for (const auto& [k, count] : degrees[t]) pooled[k] += count;
  }

  TrialSummary summary;
  summary.n = params.n;
  summary.trials = trials;
  summary.seed = params.seed;
  const auto iso = mean_and_error(isolated);
  const auto deg = mean_and_error(mean_degree);
  summary.mean_isolated = iso.mean;
  summary.se_isolated = iso.se;
  summary.mean_degree = deg.mean;
  summary.se_degree = deg.se;
  summary.aggregate_degree_distribution = normalise(pooled, n * static_cast<double>(trials));
  summary.records = std::move(records);
  return summary;
}

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials, double z) {
  const auto t = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double centre = (p + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TailEstimate estimate_tail_probability(const ModelParams& params, double y, std::size_t trials, RunOptions options) {
  params.validate();
  require_vertices(params);
  require_trials(trials);
  if (!(y >= 0.0) || !(y <= 1.0)) throw DomainError("y", "threshold must lie in [0, 1]");

  std::vector<std::int64_t> isolated(trials);
  parallel_for(trials, options.threads,
               [&](std::size_t t) { isolated[t] = isolated_count(sample_trial_graph(params, t)); });

  // D(0) >= y, compared on counts with slack for the rounding of y * n.
  const double threshold = y * static_cast<double>(params.n) - 1e-9;
  TailEstimate est;
  est.y = y;
  est.n = params.n;
  est.trials = trials;
  for (std::int64_t count : isolated) est.hits += static_cast<double>(count) >= threshold ? 1 : 0;
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(trials);
  if (est.hits > 0) est.log_rate = -std::log(est.p_hat) / static_cast<double>(params.n);
  std::tie(est.wilson_lo, est.wilson_hi) = wilson_interval(est.hits, trials);
  return est;
}

SlopeReport estimate_rate_slope(const ModelParams& params, double y, std::span<const std::size_t> n_list,
                                std::size_t trials, RunOptions options) {
  params.validate();
  if (params.colours) throw InvalidParameter("C", "the slope probe uses the uncoloured model");
  SlopeReport report;
  report.y = y;
  report.xi1 = xi1(y, Intensity{params.d, params.c}).value();
  for (std::size_t n : n_list) report.estimates.push_back(estimate_tail_probability(with_n(params, n), y, trials, options));
  return report;
}

namespace {

struct ColouredTrial {
  std::vector<double> conditional_mean;  // k*k, NaN when colour a is absent
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::vector<std::size_t> colour_count;
};

ColouredTrial neighbour_statistics(const ColouredGraph& cg) {
  const std::size_t k = cg.colour_count();
  ColouredTrial out{std::vector<double>(k * k, std::nan("")), std::vector<double>(k * k, 0.0),
                    std::vector<double>(k * k, 0.0), std::vector<std::size_t>(k, 0)};
  std::vector<std::int64_t> local(k);
  for (std::size_t v = 0; v < cg.vertex_count(); ++v) {
    std::fill(local.begin(), local.end(), 0);
    for (Vertex w : cg.graph().neighbours(v)) ++local[static_cast<std::size_t>(cg.colour(w))];
    const auto a = static_cast<std::size_t>(cg.colour(v));
    ++out.colour_count[a];
    for (std::size_t b = 0; b < k; ++b) {
      const auto l = static_cast<double>(local[b]);
      out.sum[a * k + b] += l;
      out.sum_sq[a * k + b] += l * l;
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    if (out.colour_count[a] == 0) continue;
    for (std::size_t b = 0; b < k; ++b)
      out.conditional_mean[a * k + b] = out.sum[a * k + b] / static_cast<double>(out.colour_count[a]);
  }
  return out;
}

}  // namespace

ColouredReport coloured_typical_check(const ModelParams& params, std::size_t trials,
                                      std::span<const std::size_t> n_ladder, RunOptions options) {
  params.validate();
  require_vertices(params);
  require_trials(trials);
  if (!params.colours) throw InvalidParameter("C", "coloured model requires a kernel and colour law");
  const ColourModel& model = *params.colours;
  const std::size_t k = model.kernel.size();
  const double r = rho(params.d);

  std::vector<ColouredTrial> per_trial(trials);
  parallel_for(trials, options.threads,
               [&](std::size_t t) { per_trial[t] = neighbour_statistics(sample_trial_coloured_graph(params, t)); });

  ColouredReport report;
  report.n = params.n;
  report.trials = trials;
  report.seed = params.seed;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      ConditionalCount cc;
      cc.own = static_cast<Colour>(a);
      cc.neighbour = static_cast<Colour>(b);
      cc.target = r * model.kernel(cc.own, cc.neighbour) * model.nu[b];
      std::vector<double> means;
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const auto& tr : per_trial) {
        const double m = tr.conditional_mean[a * k + b];
        if (!std::isnan(m)) means.push_back(m);
        sum += tr.sum[a * k + b];
        sum_sq += tr.sum_sq[a * k + b];
        cc.samples += tr.colour_count[a];
      }
      const auto me = mean_and_error(means);
      cc.mean = me.mean;
      cc.se = me.se;
      if (cc.samples > 0) {
        const double pooled_mean = sum / static_cast<double>(cc.samples);
        cc.variance = sum_sq / static_cast<double>(cc.samples) - pooled_mean * pooled_mean;
      }
      report.counts.push_back(cc);
    }
  }

  const ColourMeasure nu = colour_law(model.nu);
  for (std::size_t n : n_ladder) {
    const ModelParams rung = with_n(params, n);
    std::vector<double> rates(trials, std::nan(""));
    parallel_for(trials, options.threads, [&](std::size_t t) {
      const ColouredGraph cg = sample_trial_coloured_graph(rung, t);
      const RateValue value = rate_J(empirical_pair_measure(cg), empirical_neighbourhood_measure(cg), nu,
                                     model.kernel, params.d);
      if (value.is_finite()) rates[t] = value.value();
    });
    LadderPoint point;
    point.n = n;
    point.trials = trials;
    std::vector<double> finite;
    for (double v : rates) {
      if (std::isnan(v)) {
        ++point.infinite;
      } else {
        finite.push_back(v);
      }
    }
    const auto me = mean_and_error(finite);
    point.mean_rate = me.mean;
    point.se_rate = me.se;
    report.ladder.push_back(point);
  }
  return report;
}

}  // namespace rggld
