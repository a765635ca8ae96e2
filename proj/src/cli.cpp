#include "rggld/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rggld/acceptance.hpp"
#include "rggld/errors.hpp"
#include "rggld/geometry.hpp"
#include "rggld/measures.hpp"
#include "rggld/montecarlo.hpp"
#include "rggld/rates.hpp"
#include "rggld/serialize.hpp"

namespace rggld::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string rate_kind;
  int d = 2;
  std::optional<double> c;
  std::size_t n = 0;
  std::string kernel_text;
  std::string kernel_file;
  std::string nu_text;
  std::string mode = "torus";
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::optional<double> y;
  std::string n_list = "50,100";
  std::string n_ladder = "500,2000";
  std::string out;
  std::string format;
  unsigned threads = 0;
  std::string delta_text;
  std::optional<double> delta_poisson;
  std::optional<double> x;
  std::string omega_text;
  std::string varpi_text;
  std::string input_file;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t\r") + 1);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& field, const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidParameter(field, "cannot parse '" + text + "' as a number");
  return v;
}

long long to_integer(const std::string& field, const std::string& text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidParameter(field, "cannot parse '" + text + "' as an integer");
  return v;
}

std::vector<double> parse_vector(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(field, item));
  if (out.empty()) throw InvalidParameter(field, "empty list");
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& field, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    const long long v = to_integer(field, item);
    if (v < 1) throw InvalidParameter(field, "entries must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw InvalidParameter(field, "empty list");
  return out;
}

// "k:mass,k:mass,..."
DegreeMeasure parse_degree_measure(const std::string& field, const std::string& text) {
  DegreeMeasure out;
  for (const auto& item : split(text, ',')) {
    const auto kv = split(item, ':');
    if (kv.size() != 2) throw InvalidParameter(field, "expected k:mass entries");
    out.add(to_integer(field, kv[0]), to_double(field, kv[1]));
  }
  return out;
}

// "a,b:mass;a,b:mass;..."
PairMeasure parse_pair_measure(const std::string& field, const std::string& text) {
  PairMeasure out;
  for (const auto& item : split(text, ';')) {
    const auto kv = split(item, ':');
    if (kv.size() != 2) throw InvalidParameter(field, "expected a,b:mass entries");
    const auto ab = split(kv[0], ',');
    if (ab.size() != 2) throw InvalidParameter(field, "expected a,b:mass entries");
    out.add({static_cast<Colour>(to_integer(field, ab[0])), static_cast<Colour>(to_integer(field, ab[1]))},
            to_double(field, kv[1]));
  }
  return out;
}

Kernel kernel_from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.size();
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (row.size() != k) throw InvalidKernel("C", "kernel must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Kernel(k, std::move(flat));
}

// Rows separated by ';' (inline) or newlines (CSV file), entries by ','.
Kernel parse_kernel(const RunConfig& cfg) {
  std::vector<std::vector<double>> rows;
  if (!cfg.kernel_file.empty()) {
    std::ifstream in(cfg.kernel_file);
    if (!in) throw InvalidParameter("C-file", "cannot open '" + cfg.kernel_file + "'");
    if (cfg.kernel_file.ends_with(".json")) {
      json j;
      try {
        in >> j;
        rows = j.get<std::vector<std::vector<double>>>();
      } catch (const json::exception& e) {
        throw InvalidParameter("C-file", e.what());
      }
    } else {
      std::string line;
      while (std::getline(in, line)) {
        if (!split(line, ',').empty()) rows.push_back(parse_vector("C-file", line));
      }
    }
  } else if (!cfg.kernel_text.empty()) {
    for (const auto& row : split(cfg.kernel_text, ';')) rows.push_back(parse_vector("C", row));
  } else {
    throw InvalidParameter("C", "a kernel is required (--C or --C-file)");
  }
  return kernel_from_rows(rows);
}

ColourModel parse_colour_model(const RunConfig& cfg) {
  ColourModel model{parse_kernel(cfg), {}, {}};
  if (cfg.nu_text.empty()) {
    model.nu.assign(model.kernel.size(), 1.0 / static_cast<double>(model.kernel.size()));
  } else {
    model.nu = parse_vector("nu", cfg.nu_text);
  }
  model.validate();
  return model;
}

bool has_kernel(const RunConfig& cfg) { return !cfg.kernel_text.empty() || !cfg.kernel_file.empty(); }

void require_dimension(const RunConfig& cfg) {
  if (cfg.d < 1) throw InvalidDimension("d", "dimension must be at least 1");
}

double require_c(const RunConfig& cfg) {
  if (!cfg.c) throw InvalidParameter("c", "intensity is required");
  if (!(*cfg.c > 0.0) || !std::isfinite(*cfg.c)) throw InvalidParameter("c", "intensity must be positive");
  return *cfg.c;
}

double require_y(const RunConfig& cfg) {
  if (!cfg.y) throw InvalidParameter("y", "threshold is required");
  if (!(*cfg.y >= 0.0) || !(*cfg.y <= 1.0)) throw DomainError("y", "must lie in [0, 1]");
  return *cfg.y;
}

void require_trials(const RunConfig& cfg) {
  if (cfg.trials < 1) throw InvalidParameter("trials", "at least one trial is required");
}

ModelParams model_params(const RunConfig& cfg, bool need_n) {
  require_dimension(cfg);
  ModelParams p;
  p.d = cfg.d;
  p.n = cfg.n;
  p.mode = parse_boundary_mode(cfg.mode);
  p.seed = cfg.seed;
  if (has_kernel(cfg)) {
    p.colours = parse_colour_model(cfg);
  } else {
    p.c = require_c(cfg);
  }
  if (need_n && p.n < 1) throw InvalidParameter("n", "vertex count must be at least 1");
  p.validate();
  return p;
}

enum class Format { json, csv };

Format resolve_format(const RunConfig& cfg) {
  if (cfg.format == "json") return Format::json;
  if (cfg.format == "csv") return Format::csv;
  if (!cfg.format.empty()) throw InvalidParameter("format", "expected 'csv' or 'json'");
  return cfg.out.ends_with(".csv") ? Format::csv : Format::json;
}

json envelope(const std::string& command, json params) {
  return {{"schema", kSchemaVersion}, {"command", command}, {"params", std::move(params)}};
}

void write_text(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw InvalidParameter("out", "cannot open '" + cfg.out + "' for writing");
  file << text;
}

void emit_json(const RunConfig& cfg, const json& record, std::ostream& out) {
  write_text(cfg, record.dump(2) + "\n", out);
}

// CSV bodies carry no parameters; when written to a file the replay record
// goes to a sidecar <out>.params.json.
void emit_csv(const RunConfig& cfg, const std::string& body, const json& record, std::ostream& out) {
  write_text(cfg, body, out);
  if (!cfg.out.empty()) {
    std::ofstream sidecar(cfg.out + ".params.json", std::ios::binary);
    if (!sidecar) throw InvalidParameter("out", "cannot write parameter sidecar");
    sidecar << record.dump(2) << "\n";
  }
}

json intensity_json(const RunConfig& cfg, double c) {
  return {{"d", cfg.d}, {"c", c}, {"rho_d", rho(cfg.d)}, {"rho_d_c", rho(cfg.d) * c}};
}

json rate_record(const std::string& kind, json params, json input, const RateValue& value, json aux) {
  json record = envelope("rate " + kind, std::move(params));
  record["input"] = std::move(input);
  record["value"] = rate_to_json(value);
  record["infinite"] = value.is_infinite();
  record["aux"] = std::move(aux);
  return record;
}

void run_rate(const RunConfig& cfg, std::ostream& out) {
  require_dimension(cfg);
  const std::string& kind = cfg.rate_kind;
  if (kind == "eta1") {
    const double c = require_c(cfg);
    const Intensity in{cfg.d, c};
    DegreeMeasure delta;
    std::optional<Degree> truncation;
    if (cfg.delta_poisson) {
      const PoissonLaw law(*cfg.delta_poisson);
      delta = law.measure();
      truncation = law.truncation();
    } else if (!cfg.delta_text.empty()) {
      delta = parse_degree_measure("delta", cfg.delta_text);
    } else {
      throw InvalidParameter("delta", "either --delta or --delta-poisson is required");
    }
    json aux{{"mean", mean(delta)}, {"truncation_k", truncation ? json(*truncation) : json(nullptr)}};
    if (cfg.x) aux["eta_at_x"] = rate_to_json(eta_at_x(delta, *cfg.x, in));
    emit_json(cfg, rate_record(kind, intensity_json(cfg, c), {{"delta", measure_to_json(delta)}}, eta1(delta, in), aux),
              out);
  } else if (kind == "xi1") {
    const double c = require_c(cfg);
    const double y = require_y(cfg);
    const Intensity in{cfg.d, c};
    json aux{{"a", nullptr}, {"truncation_k", nullptr}};
    if (y < 1.0) {
      const double a = solve_a(y, in);
      aux["a"] = a;
      aux["truncation_k"] = PoissonLaw(a).truncation();
    }
    emit_json(cfg, rate_record(kind, intensity_json(cfg, c), {{"y", y}}, xi1(y, in), aux), out);
  } else if (kind == "hcd") {
    const Kernel kernel = parse_kernel(cfg);
    if (cfg.omega_text.empty()) throw InvalidParameter("omega", "colour measure is required");
    if (cfg.varpi_text.empty()) throw InvalidParameter("varpi", "pair measure is required");
    const ColourMeasure omega = colour_law(parse_vector("omega", cfg.omega_text));
    const PairMeasure varpi = parse_pair_measure("varpi", cfg.varpi_text);
    const json params{{"d", cfg.d}, {"rho_d", rho(cfg.d)}, {"colours", kernel.size()}};
    emit_json(cfg,
              rate_record(kind, params, {{"varpi", measure_to_json(varpi)}, {"omega", measure_to_json(omega)}},
                          hc_d(varpi, omega, kernel, cfg.d), json::object()),
              out);
  } else if (kind == "J") {
    const ColourModel model = parse_colour_model(cfg);
    PairMeasure varpi;
    NeighbourhoodMeasure mu;
    std::string source = "typical";
    if (!cfg.input_file.empty()) {
      std::ifstream in(cfg.input_file);
      if (!in) throw InvalidParameter("input", "cannot open '" + cfg.input_file + "'");
      try {
        json j;
        in >> j;
        varpi = measure_from_json<ColourPair>(j.at("varpi"));
        mu = measure_from_json<NeighbourhoodKey>(j.at("mu"));
      } catch (const json::exception& e) {
        throw InvalidParameter("input", e.what());
      }
      source = cfg.input_file;
    } else {
      varpi = typical_pair_measure(model.nu, model.kernel, cfg.d);
      mu = typical_neighbourhood_measure(model.nu, model.kernel, cfg.d);
    }
    ModelParams p;
    p.d = cfg.d;
    p.colours = model;
    json params = params_to_json(p);
    for (const char* unused : {"n", "mode", "seed"}) params.erase(unused);
    const json aux{{"consistency", std::string(to_string(consistency_check(varpi, mu, 1e-9)))},
                   {"mu_support", mu.support_size()}};
    emit_json(cfg,
              rate_record(kind, params, {{"source", source}, {"varpi", measure_to_json(varpi)}},
                          rate_J(varpi, mu, colour_law(model.nu), model.kernel, cfg.d), aux),
              out);
  } else {
    throw InvalidParameter("rate", "unknown rate '" + kind + "' (expected eta1, xi1, hcd or J)");
  }
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
  require_trials(cfg);
  const ModelParams p = model_params(cfg, true);
  const auto summary = run_trials(p, cfg.trials, {cfg.threads});
  json record = envelope("simulate", params_to_json(p));
  record["summary"] = summary_to_json(summary);
  if (resolve_format(cfg) == Format::csv) {
    std::ostringstream body;
    write_trials_csv(body, summary);
    emit_csv(cfg, body.str(), record, out);
  } else {
    json rows = json::array();
    for (const auto& r : summary.records) rows.push_back({{"trial", r.trial}, {"isolated", r.isolated}, {"edges", r.edges}});
    record["trials"] = std::move(rows);
    emit_json(cfg, record, out);
  }
}

void run_tail(const RunConfig& cfg, std::ostream& out) {
  require_trials(cfg);
  const double y = require_y(cfg);
  const ModelParams p = model_params(cfg, true);
  const auto estimate = estimate_tail_probability(p, y, cfg.trials, {cfg.threads});
  json record = envelope("tail", params_to_json(p));
  record["estimate"] = tail_to_json(estimate);
  if (!p.colours) record["xi1"] = rate_to_json(xi1(y, Intensity{p.d, p.c}));
  if (resolve_format(cfg) == Format::csv) {
    std::ostringstream body;
    write_tails_csv(body, std::span(&estimate, 1));
    emit_csv(cfg, body.str(), record, out);
  } else {
    emit_json(cfg, record, out);
  }
}

void run_slope(const RunConfig& cfg, std::ostream& out) {
  require_trials(cfg);
  const double y = require_y(cfg);
  const ModelParams p = model_params(cfg, false);
  const auto n_list = parse_counts("n-list", cfg.n_list);
  const auto report = estimate_rate_slope(p, y, n_list, cfg.trials, {cfg.threads});
  json params = params_to_json(p);
  params.erase("n");
  params["n_list"] = n_list;
  json record = envelope("slope", std::move(params));
  record["report"] = slope_to_json(report);
  if (resolve_format(cfg) == Format::csv) {
    std::ostringstream body;
    write_tails_csv(body, report.estimates);
    emit_csv(cfg, body.str(), record, out);
  } else {
    emit_json(cfg, record, out);
  }
}

void run_coloured(const RunConfig& cfg, std::ostream& out) {
  require_trials(cfg);
  if (!has_kernel(cfg)) throw InvalidParameter("C", "a kernel is required (--C or --C-file)");
  const ModelParams p = model_params(cfg, true);
  const auto ladder = parse_counts("n-ladder", cfg.n_ladder);
  const auto report = coloured_typical_check(p, cfg.trials, ladder, {cfg.threads});
  json params = params_to_json(p);
  params["n_ladder"] = ladder;
  json record = envelope("coloured", std::move(params));
  record["report"] = coloured_to_json(report);
  if (resolve_format(cfg) == Format::csv) {
    std::ostringstream body;
    write_coloured_csv(body, report);
    emit_csv(cfg, body.str(), record, out);
  } else {
    emit_json(cfg, record, out);
  }
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  AcceptanceOptions options;
  options.threads = cfg.threads;
  options.seed = cfg.seed;
  std::size_t failed = 0;
  json results = json::array();
  run_acceptance(options, [&](const CriterionResult& r) {
    out << format_result_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
    results.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  });
  out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  if (!cfg.out.empty()) {
    json record = envelope("verify", {{"seed", cfg.seed}});
    record["results"] = std::move(results);
    std::ofstream file(cfg.out, std::ios::binary);
    file << record.dump(2) << "\n";
  }
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv)) {
    std::uint64_t v = 0;
    const std::string text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size()) return v;
  }
  return 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.seed = default_seed();

  CLI::App app{"Random geometric graph large-deviation toolkit", "rggld"};
  app.require_subcommand(1);

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--d", cfg.d, "Dimension (>= 1)");
    sub->add_option("--c", cfg.c, "Intensity c with n r^d = c (uncoloured)");
    sub->add_option("--n", cfg.n, "Vertex count");
    sub->add_option("--C", cfg.kernel_text, "Kernel rows, e.g. '1,0.5;0.5,1'");
    sub->add_option("--C-file", cfg.kernel_file, "Kernel file (.json nested array or CSV rows)");
    sub->add_option("--nu", cfg.nu_text, "Colour law, e.g. '0.5,0.5' (default uniform)");
    sub->add_option("--mode", cfg.mode, "Boundary mode: cube or torus");
    sub->add_option("--seed", cfg.seed, std::string("Seed (default $") + kSeedEnv + " or 1)");
    sub->add_option("--threads", cfg.threads, "Worker threads (0: logical cores)");
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json (default from --out extension, else json)");
  };

  auto* simulate = app.add_subcommand("simulate", "Sample RGGs and report isolated vertices and edges");
  add_model(simulate);
  simulate->add_option("--trials", cfg.trials, "Number of graphs");

  auto* rate = app.add_subcommand("rate", "Evaluate a rate function");
  rate->add_option("kind", cfg.rate_kind, "eta1 | xi1 | hcd | J")->required();
  add_model(rate);
  rate->add_option("--y", cfg.y, "Isolated fraction (xi1)");
  rate->add_option("--delta", cfg.delta_text, "Degree law 'k:mass,...' (eta1)");
  rate->add_option("--delta-poisson", cfg.delta_poisson, "Use a truncated Poisson degree law (eta1)");
  rate->add_option("--x", cfg.x, "Also evaluate eta^x at this x (eta1)");
  rate->add_option("--omega", cfg.omega_text, "Colour measure 'w0,w1,...' (hcd)");
  rate->add_option("--varpi", cfg.varpi_text, "Pair measure 'a,b:mass;...' (hcd)");
  rate->add_option("--input", cfg.input_file, "JSON file with varpi and mu measures (J)");

  auto* tail = app.add_subcommand("tail", "Estimate P(D(0) >= y) by plain Monte Carlo");
  add_model(tail);
  tail->add_option("--y", cfg.y, "Threshold");
  tail->add_option("--trials", cfg.trials, "Number of graphs");

  auto* slope = app.add_subcommand("slope", "Tail estimates over a list of n");
  add_model(slope);
  slope->add_option("--y", cfg.y, "Threshold");
  slope->add_option("--n-list", cfg.n_list, "Comma-separated vertex counts");
  slope->add_option("--trials", cfg.trials, "Graphs per n");

  auto* coloured = app.add_subcommand("coloured", "Check the typical neighbourhood law of coloured RGGs");
  add_model(coloured);
  coloured->add_option("--trials", cfg.trials, "Number of graphs");
  coloured->add_option("--n-ladder", cfg.n_ladder, "Vertex counts at which rate_J is evaluated");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--seed", cfg.seed, "Seed");
  verify->add_option("--threads", cfg.threads, "Worker threads (0: logical cores)");
  verify->add_option("--out", cfg.out, "Write results as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) run_simulate(cfg, out);
    if (rate->parsed()) run_rate(cfg, out);
    if (tail->parsed()) run_tail(cfg, out);
    if (slope->parsed()) run_slope(cfg, out);
    if (coloured->parsed()) run_coloured(cfg, out);
    if (verify->parsed()) return run_verify(cfg, out);
  } catch (const Error& e) {
    err << "error: invalid --" << e.field() << ": " << e.what() << "\n"
        << "Run with --help for usage.\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace rggld::cli
