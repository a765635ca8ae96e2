#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rggld/geometry.hpp"
#include "rggld/measures.hpp"

namespace rggld {

struct RunOptions {
  unsigned threads = 0;  // 0: one per logical core
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::int64_t isolated = 0;
  std::int64_t edges = 0;
};

struct TrialSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean_isolated = 0.0;  // fraction of isolated vertices
  double se_isolated = 0.0;
  double mean_degree = 0.0;
  double se_degree = 0.0;
  DegreeMeasure aggregate_degree_distribution;
  std::vector<TrialRecord> records;
};

struct TailEstimate {
  double y = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  std::optional<double> log_rate;  // -log(p_hat)/n; empty when hits == 0
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

struct SlopeReport {
  double y = 0.0;
  double xi1 = 0.0;
  std::vector<TailEstimate> estimates;
};

/// Neighbour counts of colour `neighbour` seen from vertices of colour `own`.
struct ConditionalCount {
  Colour own = 0;
  Colour neighbour = 0;
  double target = 0.0;    // rho(d) C(own, neighbour) nu(neighbour)
  double mean = 0.0;      // average over trials of the per-graph conditional mean
  double se = 0.0;        // standard error across trials
  double variance = 0.0;  // pooled per-vertex variance
  std::size_t samples = 0;
};

struct LadderPoint {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_rate = 0.0;
  double se_rate = 0.0;
  std::size_t infinite = 0;
};

struct ColouredReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<ConditionalCount> counts;
  std::vector<LadderPoint> ladder;
};

std::size_t resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) on a worker pool. Each index is visited
/// exactly once; callers write results into per-index slots.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body);

/// Points of trial t come from stream (seed, t, 0), colours from (seed, t, 1).
Graph sample_trial_graph(const ModelParams& params, std::uint64_t trial);
ColouredGraph sample_trial_coloured_graph(const ModelParams& params, std::uint64_t trial);

TrialSummary run_trials(const ModelParams& params, std::size_t trials, RunOptions options = {});

TailEstimate estimate_tail_probability(const ModelParams& params, double y, std::size_t trials,
                                       RunOptions options = {});

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials, double z = 1.959963984540054);

/// One tail estimate per n; the radius follows n through radius_from_c.
SlopeReport estimate_rate_slope(const ModelParams& params, double y, std::span<const std::size_t> n_list,
                                std::size_t trials, RunOptions options = {});

ColouredReport coloured_typical_check(const ModelParams& params, std::size_t trials,
                                      std::span<const std::size_t> n_ladder, RunOptions options = {});

}  // namespace rggld

#include "rggld/detail/parallel_for.hpp"
