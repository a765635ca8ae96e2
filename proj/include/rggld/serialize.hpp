#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "rggld/geometry.hpp"
#include "rggld/measures.hpp"
#include "rggld/montecarlo.hpp"
#include "rggld/rates.hpp"

namespace rggld {

inline constexpr int kSchemaVersion = 1;

// Measure keys: degree and colour as integers, a colour pair as [a, b], a
// neighbourhood key as [a, [[b, count], ...]].
nlohmann::json key_to_json(Degree k);
nlohmann::json key_to_json(Colour a);
nlohmann::json key_to_json(const ColourPair& p);
nlohmann::json key_to_json(const NeighbourhoodKey& key);

void key_from_json(const nlohmann::json& j, Degree& k);
void key_from_json(const nlohmann::json& j, Colour& a);
void key_from_json(const nlohmann::json& j, ColourPair& p);
void key_from_json(const nlohmann::json& j, NeighbourhoodKey& key);

/// {"entries": [[key, mass], ...], "total": mass}
template <class Key>
nlohmann::json measure_to_json(const SparseMeasure<Key>& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [k, mass] : m) entries.push_back({key_to_json(k), mass});
  return {{"entries", std::move(entries)}, {"total", m.total()}};
}

template <class Key>
SparseMeasure<Key> measure_from_json(const nlohmann::json& j) {
  SparseMeasure<Key> out;
  for (const auto& entry : j.at("entries")) {
    if (!entry.is_array() || entry.size() != 2) throw InvalidMeasure("entries", "each entry must be [key, mass]");
    Key k{};
    key_from_json(entry[0], k);
    out.add(k, entry[1].get<double>());
  }
  return out;
}

/// One row per support point: key columns, then mass.
void write_measure_csv(std::ostream& out, const DegreeMeasure& m);
void write_measure_csv(std::ostream& out, const ColourMeasure& m);
void write_measure_csv(std::ostream& out, const PairMeasure& m);
void write_measure_csv(std::ostream& out, const NeighbourhoodMeasure& m);

/// null for +inf; callers add an "infinite" flag next to it.
nlohmann::json rate_to_json(const RateValue& v);

nlohmann::json params_to_json(const ModelParams& params);

nlohmann::json summary_to_json(const TrialSummary& s);
nlohmann::json tail_to_json(const TailEstimate& t);
nlohmann::json slope_to_json(const SlopeReport& r);
nlohmann::json coloured_to_json(const ColouredReport& r);

// CSV headers are fixed:
//   trials:   n,trial,isolated,edges
//   tails:    y,n,trials,hits,p_hat,log_rate,wilson_lo,wilson_hi
//   coloured: own,neighbour,target,mean,se,variance,samples
void write_trials_csv(std::ostream& out, const TrialSummary& s);
void write_tails_csv(std::ostream& out, std::span<const TailEstimate> tails);
void write_coloured_csv(std::ostream& out, const ColouredReport& r);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace rggld
