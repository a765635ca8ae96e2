#include "rggld/serialize.hpp"

#include <charconv>
#include <cmath>

namespace rggld {

using nlohmann::json;

json key_to_json(Degree k) { return k; }
json key_to_json(Colour a) { return a; }
json key_to_json(const ColourPair& p) { return json::array({p.first, p.second}); }

json key_to_json(const NeighbourhoodKey& key) {
  json locality = json::array();
  for (const auto& [b, count] : key.locality.counts()) locality.push_back({b, count});
  return json::array({key.colour, std::move(locality)});
}

void key_from_json(const json& j, Degree& k) { k = j.get<Degree>(); }
void key_from_json(const json& j, Colour& a) { a = j.get<Colour>(); }

void key_from_json(const json& j, ColourPair& p) {
  if (!j.is_array() || j.size() != 2) throw InvalidMeasure("entries", "pair key must be [a, b]");
  p = {j[0].get<Colour>(), j[1].get<Colour>()};
}

void key_from_json(const json& j, NeighbourhoodKey& key) {
  if (!j.is_array() || j.size() != 2 || !j[1].is_array())
    throw InvalidMeasure("entries", "neighbourhood key must be [a, [[b, count], ...]]");
  key.colour = j[0].get<Colour>();
  key.locality = {};
  for (const auto& item : j[1]) {
    if (!item.is_array() || item.size() != 2) throw InvalidMeasure("entries", "locality entry must be [b, count]");
    key.locality.increment(item[0].get<Colour>(), item[1].get<std::int64_t>());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_measure_csv(std::ostream& out, const DegreeMeasure& m) {
  out << "degree,mass\n";
  for (const auto& [k, mass] : m) out << k << ',' << format_double(mass) << '\n';
}

void write_measure_csv(std::ostream& out, const ColourMeasure& m) {
  out << "colour,mass\n";
  for (const auto& [a, mass] : m) out << a << ',' << format_double(mass) << '\n';
}

void write_measure_csv(std::ostream& out, const PairMeasure& m) {
  out << "a,b,mass\n";
  for (const auto& [p, mass] : m) out << p.first << ',' << p.second << ',' << format_double(mass) << '\n';
}

void write_measure_csv(std::ostream& out, const NeighbourhoodMeasure& m) {
  // Locality vectors are written as b:count pairs separated by ';'.
  out << "colour,locality,mass\n";
  for (const auto& [key, mass] : m) {
    out << key.colour << ',';
    bool first = true;
    for (const auto& [b, count] : key.locality.counts()) {
      if (!first) out << ';';
      out << b << ':' << count;
      first = false;
    }
    out << ',' << format_double(mass) << '\n';
  }
}

json rate_to_json(const RateValue& v) {
  if (v.is_infinite()) return nullptr;
  return v.value();
}

json params_to_json(const ModelParams& params) {
  json j{{"d", params.d}, {"n", params.n}, {"mode", std::string(to_string(params.mode))}, {"seed", params.seed}};
  if (params.colours) {
    const auto& model = *params.colours;
    json kernel = json::array();
    for (std::size_t a = 0; a < model.kernel.size(); ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < model.kernel.size(); ++b)
        row.push_back(model.kernel(static_cast<Colour>(a), static_cast<Colour>(b)));
      kernel.push_back(std::move(row));
    }
    j["C"] = std::move(kernel);
    j["nu"] = model.nu;
    if (!model.names.empty()) j["colour_names"] = model.names;
    j["rho_d"] = rho(params.d);
  } else {
    j["c"] = params.c;
    j["rho_d_c"] = rho(params.d) * params.c;
  }
  return j;
}

json summary_to_json(const TrialSummary& s) {
  return {{"n", s.n},
          {"trials", s.trials},
          {"seed", s.seed},
          {"mean_isolated", s.mean_isolated},
          {"se_isolated", s.se_isolated},
          {"mean_degree", s.mean_degree},
          {"se_degree", s.se_degree},
          {"aggregate_degree_distribution", measure_to_json(s.aggregate_degree_distribution)}};
}

json tail_to_json(const TailEstimate& t) {
  return {{"y", t.y},
          {"n", t.n},
          {"trials", t.trials},
          {"hits", t.hits},
          {"p_hat", t.p_hat},
          {"log_rate", t.log_rate ? json(*t.log_rate) : json(nullptr)},
          {"log_rate_defined", t.log_rate.has_value()},
          {"wilson_ci", json::array({t.wilson_lo, t.wilson_hi})}};
}

json slope_to_json(const SlopeReport& r) {
  json estimates = json::array();
  for (const auto& e : r.estimates) estimates.push_back(tail_to_json(e));
  return {{"y", r.y}, {"xi1", r.xi1}, {"estimates", std::move(estimates)}};
}

json coloured_to_json(const ColouredReport& r) {
  json counts = json::array();
  for (const auto& c : r.counts) {
    counts.push_back({{"own", c.own},
                      {"neighbour", c.neighbour},
                      {"target", c.target},
                      {"mean", c.mean},
                      {"se", c.se},
                      {"variance", c.variance},
                      {"samples", c.samples}});
  }
  json ladder = json::array();
  for (const auto& p : r.ladder) {
    ladder.push_back({{"n", p.n},
                      {"trials", p.trials},
                      {"mean_rate_J", p.mean_rate},
                      {"se_rate_J", p.se_rate},
                      {"infinite", p.infinite}});
  }
  return {{"n", r.n}, {"trials", r.trials}, {"seed", r.seed}, {"counts", std::move(counts)}, {"ladder", std::move(ladder)}};
}

void write_trials_csv(std::ostream& out, const TrialSummary& s) {
  out << "n,trial,isolated,edges\n";
  for (const auto& r : s.records) out << s.n << ',' << r.trial << ',' << r.isolated << ',' << r.edges << '\n';
}

void write_tails_csv(std::ostream& out, std::span<const TailEstimate> tails) {
  out << "y,n,trials,hits,p_hat,log_rate,wilson_lo,wilson_hi\n";
  for (const auto& t : tails) {
    out << format_double(t.y) << ',' << t.n << ',' << t.trials << ',' << t.hits << ',' << format_double(t.p_hat) << ','
        << (t.log_rate ? format_double(*t.log_rate) : std::string()) << ',' << format_double(t.wilson_lo) << ','
        << format_double(t.wilson_hi) << '\n';
  }
}

void write_coloured_csv(std::ostream& out, const ColouredReport& r) {
  out << "own,neighbour,target,mean,se,variance,samples\n";
  for (const auto& c : r.counts) {
    out << c.own << ',' << c.neighbour << ',' << format_double(c.target) << ',' << format_double(c.mean) << ','
        << format_double(c.se) << ',' << format_double(c.variance) << ',' << c.samples << '\n';
  }
}

}  // namespace rggld
