#include "quantcap/cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quantcap/channel.hpp"
#include "quantcap/quantizer_design.hpp"
#include "quantcap/solver.hpp"
#include "quantcap/sweep.hpp"
#include "quantcap/version.hpp"

namespace quantcap {

namespace {

using ordered_json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string snr_spec;
  std::vector<double> snr_db;
  double power = std::numeric_limits<double>::quiet_NaN();
  double noise_var = 1.0;
  int bits = 0;
  std::vector<double> thresholds;
  SolverOptions opts;
  int multistart = 1;
  bool curve = false;
  int which = 0;
  std::string scheme;
  std::string format = "csv";
  std::string out_path;
};

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> parse_snr_spec(const std::string& spec) {
  const auto first = spec.find(':');
  try {
    if (first == std::string::npos) return {std::stod(spec)};
    const auto second = spec.find(':', first + 1);
    if (second == std::string::npos)
      throw std::invalid_argument("expected <value> or <start:stop:step>");
    const double a = std::stod(spec.substr(0, first));
    const double b = std::stod(spec.substr(first + 1, second - first - 1));
    const double step = std::stod(spec.substr(second + 1));
    if (!(step > 0.0) || b < a)
      throw std::invalid_argument("range needs stop >= start and step > 0");
    std::vector<double> points;
    const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
    for (int i = 0; i <= n; ++i) points.push_back(a + i * step);
    return points;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("invalid --snr-db specification: " + spec);
  }
}

// Resolves the channel per SNR point; exactly one of --snr-db and --power
// must pin the parameters.
std::vector<ChannelParams> resolve_channels(RunConfig& cfg) {
  const bool have_snr = !cfg.snr_spec.empty();
  const bool have_power = !std::isnan(cfg.power);
  if (have_snr == have_power)
    throw std::invalid_argument("exactly one of --snr-db and --power is required");
  std::vector<ChannelParams> channels;
  if (have_snr) {
    cfg.snr_db = parse_snr_spec(cfg.snr_spec);
    for (double db : cfg.snr_db)
      channels.push_back(ChannelParams::from_snr_db(db, cfg.noise_var));
  } else {
    const ChannelParams p(cfg.power, cfg.noise_var);
    cfg.snr_db = {p.snr_db()};
    channels.push_back(p);
  }
  return channels;
}

QuantizerSpec quantizer_for(const RunConfig& cfg, const ChannelParams& params) {
  if (!cfg.thresholds.empty()) {
    if (cfg.bits != 0)
      throw std::invalid_argument("--thresholds and --bits are mutually exclusive");
    return QuantizerSpec(cfg.thresholds);
  }
  if (cfg.bits < 1 || cfg.bits > 3)
    throw std::invalid_argument("--bits must be 1, 2 or 3 (or pass --thresholds)");
  if (cfg.bits == 1) return QuantizerSpec({0.0});
  // Midpoint (maximum-likelihood) thresholds of the uniform-PAM benchmark.
  return benchmark_pair(1 << cfg.bits, params).quantizer;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  j["snr_db"] = cfg.snr_db;
  j["noise_var"] = cfg.noise_var;
  if (!std::isnan(cfg.power)) j["power"] = cfg.power;
  if (cfg.bits != 0) j["bits"] = cfg.bits;
  if (!cfg.thresholds.empty()) j["thresholds"] = cfg.thresholds;
  if (!cfg.scheme.empty()) j["scheme"] = cfg.scheme;
  if (cfg.which != 0) j["which"] = cfg.which;
  if (cfg.curve) j["curve"] = true;
  if (cfg.multistart != 1) j["multistart"] = cfg.multistart;
  j["kkt_tol"] = cfg.opts.kkt_tol;
  j["grid_step"] = cfg.opts.grid_step;
  j["format"] = cfg.format;
  return j;
}

std::string render_json(const RunConfig& cfg, ordered_json results) {
  ordered_json doc;
  doc["meta"] = {{"version", kVersion}, {"config", config_json(cfg)}};
  doc["results"] = std::move(results);
  return doc.dump(2) + "\n";
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + cfg.out_path);
  f << text;
}

// ---- capacity ----

int cmd_capacity(RunConfig& cfg, std::ostream& out) {
  const std::vector<ChannelParams> channels = resolve_channels(cfg);
  std::vector<CapacityResult> results;
  std::vector<QuantizerSpec> quantizers;
  for (const ChannelParams& params : channels) {
    QuantizerSpec qz = quantizer_for(cfg, params);
    results.push_back(capacity(params, qz, cfg.opts));
    quantizers.push_back(std::move(qz));
  }

  if (cfg.format == "json") {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const CapacityResult& r = results[i];
      ordered_json o;
      o["snr_db"] = cfg.snr_db[i];
      o["power"] = channels[i].power;
      o["noise_var"] = channels[i].noise_var;
      o["thresholds"] = quantizers[i].thresholds();
      o["capacity"] = r.capacity;
      o["gamma"] = r.gamma;
      o["kkt_slack"] = r.kkt_slack;
      o["power_used"] = r.power_used;
      o["outer_iters"] = r.outer_iters;
      o["converged"] = r.converged;
      o["points"] = r.distribution.points;
      o["probs"] = r.distribution.probs;
      arr.push_back(std::move(o));
    }
    emit(cfg, render_json(cfg, std::move(arr)), out);
  } else {
    std::size_t max_points = 0, max_thresholds = 0;
    for (const auto& r : results) max_points = std::max(max_points, r.distribution.points.size());
    for (const auto& q : quantizers) max_thresholds = std::max(max_thresholds, q.thresholds().size());
    std::vector<std::string> header = {"snr_db",     "capacity",    "gamma",
                                       "kkt_slack",  "power_used",  "outer_iters",
                                       "converged"};
    for (std::size_t i = 1; i <= max_thresholds; ++i) header.push_back("q" + std::to_string(i));
    for (std::size_t i = 1; i <= max_points; ++i) {
      header.push_back("x" + std::to_string(i));
      header.push_back("p" + std::to_string(i));
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const CapacityResult& r = results[i];
      std::vector<std::string> row = {fmt6(cfg.snr_db[i]),    fmt6(r.capacity),
                                      fmt6(r.gamma),          fmt6(r.kkt_slack),
                                      fmt6(r.power_used),     std::to_string(r.outer_iters),
                                      r.converged ? "true" : "false"};
      for (std::size_t c = 0; c < max_thresholds; ++c)
        row.push_back(c < quantizers[i].thresholds().size()
                          ? fmt6(quantizers[i].thresholds()[c])
                          : "");
      for (std::size_t c = 0; c < max_points; ++c) {
        if (c < r.distribution.points.size()) {
          row.push_back(fmt6(r.distribution.points[c]));
          row.push_back(fmt6(r.distribution.probs[c]));
        } else {
          row.push_back("");
          row.push_back("");
        }
      }
      rows.push_back(std::move(row));
    }
    emit(cfg, to_csv(header, rows), out);
  }

  for (const auto& r : results)
    if (!r.converged) return 2;
  return 0;
}

// ---- optimize ----

int cmd_optimize(RunConfig& cfg, std::ostream& out) {
  if (cfg.bits != 2 && cfg.bits != 3)
    throw std::invalid_argument("--bits must be 2 or 3 for optimize");
  if (cfg.curve && cfg.bits != 2)
    throw std::invalid_argument("--curve requires --bits 2");
  const std::vector<ChannelParams> channels = resolve_channels(cfg);

  bool all_converged = true;
  ordered_json jarr = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const ChannelParams& params = channels[i];
    if (cfg.bits == 2) {
      const TwoBitSweepResult sweep =
          two_bit_sweep(params, default_q_grid(params), cfg.opts);
      all_converged = all_converged && sweep.best.converged;
      if (cfg.format == "json") {
        ordered_json o;
        o["snr_db"] = cfg.snr_db[i];
        o["scheme"] = "2bit-opt";
        o["value"] = sweep.best.capacity;
        o["q1"] = sweep.best_q;
        o["points"] = sweep.best.distribution.points;
        o["probs"] = sweep.best.distribution.probs;
        o["gamma"] = sweep.best.gamma;
        o["kkt_slack"] = sweep.best.kkt_slack;
        o["converged"] = sweep.best.converged;
        if (cfg.curve) {
          ordered_json curve = ordered_json::array();
          for (const QSweepPoint& p : sweep.curve)
            curve.push_back({{"q", p.q}, {"capacity", p.capacity}});
          o["curve"] = std::move(curve);
        }
        jarr.push_back(std::move(o));
      } else {
        rows.push_back({fmt6(cfg.snr_db[i]), "2bit-opt", fmt6(sweep.best.capacity),
                        sweep.best.converged ? "true" : "false", fmt6(sweep.best_q), "",
                        ""});
        if (cfg.curve)
          for (const QSweepPoint& p : sweep.curve)
            rows.push_back({fmt6(cfg.snr_db[i]), "2bit-curve", fmt6(p.capacity),
                            p.converged ? "true" : "false", fmt6(p.q), "", ""});
      }
    } else {
      const ThreeBitOptimizeResult opt =
          three_bit_optimize(params, cfg.opts, cfg.multistart);
      all_converged = all_converged && opt.result.converged;
      if (cfg.format == "json") {
        ordered_json o;
        o["snr_db"] = cfg.snr_db[i];
        o["scheme"] = "3bit-opt";
        o["value"] = opt.result.capacity;
        o["q1"] = opt.quantizer.q1;
        o["q2"] = opt.quantizer.q2;
        o["q3"] = opt.quantizer.q3;
        o["points"] = opt.result.distribution.points;
        o["probs"] = opt.result.distribution.probs;
        o["gamma"] = opt.result.gamma;
        o["kkt_slack"] = opt.result.kkt_slack;
        o["rounds"] = opt.rounds;
        o["local_optimum_caveat"] = opt.local_optimum_caveat;
        o["converged"] = opt.result.converged;
        jarr.push_back(std::move(o));
      } else {
        rows.push_back({fmt6(cfg.snr_db[i]), "3bit-opt", fmt6(opt.result.capacity),
                        opt.result.converged ? "true" : "false", fmt6(opt.quantizer.q1),
                        fmt6(opt.quantizer.q2), fmt6(opt.quantizer.q3)});
      }
    }
  }

  if (cfg.format == "json")
    emit(cfg, render_json(cfg, std::move(jarr)), out);
  else
    emit(cfg, to_csv({"snr_db", "scheme", "value", "converged", "q1", "q2", "q3"}, rows),
         out);
  return all_converged ? 0 : 2;
}

// ---- benchmark ----

int cmd_benchmark(RunConfig& cfg, std::ostream& out) {
  if (cfg.bits < 1 || cfg.bits > 3)
    throw std::invalid_argument("--bits must be 1, 2 or 3 for benchmark");
  const std::vector<ChannelParams> channels = resolve_channels(cfg);
  const int k = 1 << cfg.bits;
  const std::string scheme = std::to_string(cfg.bits) + "bit-bench";

  ordered_json jarr = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const BenchmarkScheme bench = benchmark_pair(k, channels[i]);
    const double mi =
        mutual_information(bench.input, bench.quantizer, channels[i].noise_std());
    if (cfg.format == "json") {
      ordered_json o;
      o["snr_db"] = cfg.snr_db[i];
      o["scheme"] = scheme;
      o["value"] = mi;
      o["thresholds"] = bench.quantizer.thresholds();
      o["points"] = bench.input.points;
      o["probs"] = bench.input.probs;
      jarr.push_back(std::move(o));
    } else {
      std::vector<std::string> row = {fmt6(cfg.snr_db[i]), scheme, fmt6(mi)};
      for (double q : bench.quantizer.thresholds())
        if (q > 0.0) row.push_back(fmt6(q));
      rows.push_back(std::move(row));
    }
  }

  if (cfg.format == "json") {
    emit(cfg, render_json(cfg, std::move(jarr)), out);
  } else {
    std::vector<std::string> header = {"snr_db", "scheme", "value"};
    for (int i = 1; i <= k / 2 - (k == 2 ? 1 : 0); ++i)
      header.push_back("q" + std::to_string(i));
    for (auto& row : rows) row.resize(header.size(), "");
    emit(cfg, to_csv(header, rows), out);
  }
  return 0;
}

// ---- tables ----

int cmd_tables(RunConfig& cfg, std::ostream& out) {
  if (cfg.which < 1 || cfg.which > 4)
    throw std::invalid_argument("--which must be 1, 2, 3 or 4");
  const std::vector<TableCell> cells = reproduce_table(cfg.which, {}, cfg.opts);

  bool failed = false;
  for (const TableCell& c : cells)
    if (c.gated && !c.ok) failed = true;

  auto status_of = [](const TableCell& c) {
    if (!c.has_reference || !c.gated) return std::string(c.ok ? "unchecked" : "unchecked");
    return std::string(c.ok ? "ok" : "fail");
  };

  if (cfg.format == "json") {
    ordered_json jarr = ordered_json::array();
    for (const TableCell& c : cells) {
      ordered_json o;
      o["table"] = c.table;
      o["scheme"] = c.scheme;
      o["param"] = c.param;
      if (c.infeasible)
        o["value"] = nullptr;
      else
        o["value"] = c.value;
      if (!c.has_reference)
        o["reference"] = nullptr;
      else if (c.ref_infeasible)
        o["reference"] = nullptr;
      else
        o["reference"] = c.reference;
      o["ref_infeasible"] = c.ref_infeasible;
      if (c.has_reference && !c.ref_infeasible && !c.infeasible)
        o["abs_diff"] = std::abs(c.value - c.reference);
      else
        o["abs_diff"] = nullptr;
      o["tolerance"] = c.tolerance;
      o["status"] = status_of(c);
      o["converged"] = c.converged;
      jarr.push_back(std::move(o));
    }
    emit(cfg, render_json(cfg, std::move(jarr)), out);
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const TableCell& c : cells) {
      std::vector<std::string> row;
      row.push_back(std::to_string(c.table));
      row.push_back(c.scheme);
      row.push_back(fmt6(c.param));
      row.push_back(c.infeasible ? "-" : fmt6(c.value));
      if (!c.has_reference)
        row.push_back("");
      else
        row.push_back(c.ref_infeasible ? "-" : fmt6(c.reference));
      row.push_back(c.has_reference && !c.ref_infeasible && !c.infeasible
                        ? fmt6(std::abs(c.value - c.reference))
                        : "");
      row.push_back(fmt6(c.tolerance));
      row.push_back(status_of(c));
      row.push_back(c.converged ? "true" : "false");
      rows.push_back(std::move(row));
    }
    emit(cfg,
         to_csv({"table", "scheme", "param", "value", "reference", "abs_diff",
                 "tolerance", "status", "converged"},
                rows),
         out);
  }
  return failed ? 3 : 0;
}

// ---- sweep ----

int cmd_sweep(RunConfig& cfg, std::ostream& out) {
  const bool have_scheme = !cfg.scheme.empty();
  const bool have_thresholds = !cfg.thresholds.empty();
  if (have_scheme == have_thresholds)
    throw std::invalid_argument("sweep needs exactly one of --scheme and --thresholds");
  if (have_scheme) {
    const auto& labels = scheme_labels();
    if (std::find(labels.begin(), labels.end(), cfg.scheme) == labels.end())
      throw std::invalid_argument("unknown scheme: " + cfg.scheme);
  }
  const std::vector<ChannelParams> channels = resolve_channels(cfg);

  bool all_converged = true;
  ordered_json jarr = ordered_json::array();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> aux_keys;

  for (std::size_t i = 0; i < channels.size(); ++i) {
    std::string scheme;
    double value = 0.0;
    bool converged = true;
    std::map<std::string, double> aux;
    if (have_scheme) {
      scheme = cfg.scheme;
      const SchemeEval ev = evaluate_scheme(cfg.scheme, cfg.snr_db[i], cfg.opts);
      value = ev.value;
      converged = ev.converged;
      aux = ev.aux;
    } else {
      scheme = "fixed";
      const CapacityResult r =
          capacity(channels[i], QuantizerSpec(cfg.thresholds), cfg.opts);
      value = r.capacity;
      converged = r.converged;
      int idx = 1;
      for (double q : cfg.thresholds) aux["q" + std::to_string(idx++)] = q;
    }
    all_converged = all_converged && converged;
    for (const auto& [key, _] : aux)
      if (std::find(aux_keys.begin(), aux_keys.end(), key) == aux_keys.end())
        aux_keys.push_back(key);

    if (cfg.format == "json") {
      ordered_json o;
      o["snr_db"] = cfg.snr_db[i];
      o["scheme"] = scheme;
      o["value"] = value;
      o["converged"] = converged;
      ordered_json ja = ordered_json::object();
      for (const auto& [key, v] : aux) ja[key] = v;
      o["aux"] = std::move(ja);
      jarr.push_back(std::move(o));
    } else {
      std::vector<std::string> row = {fmt6(cfg.snr_db[i]), scheme, fmt6(value),
                                      converged ? "true" : "false"};
      for (const std::string& key : aux_keys)
        row.push_back(aux.count(key) ? fmt6(aux.at(key)) : "");
      rows.push_back(std::move(row));
    }
  }

  if (cfg.format == "json") {
    emit(cfg, render_json(cfg, std::move(jarr)), out);
  } else {
    std::vector<std::string> header = {"snr_db", "scheme", "value", "converged"};
    std::sort(aux_keys.begin(), aux_keys.end());
    for (const std::string& key : aux_keys) header.push_back(key);
    for (auto& row : rows) row.resize(header.size(), "");
    emit(cfg, to_csv(header, rows), out);
  }
  return all_converged ? 0 : 2;
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--snr-db", cfg.snr_spec, "SNR in dB: value or start:stop:step");
  sub->add_option("--power", cfg.power, "average power constraint P (linear)");
  sub->add_option("--noise-var", cfg.noise_var, "noise variance (default 1)");
  sub->add_option("--kkt-tol", cfg.opts.kkt_tol, "KKT certification tolerance, bits");
  sub->add_option("--grid-step", cfg.opts.grid_step,
                  "candidate grid step, units of sigma");
  sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out_path, "write the document to this path");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity of the AWGN channel under K-bin output quantization"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* cap = app.add_subcommand(
      "capacity", "capacity of a fixed quantizer (certified input optimization)");
  add_common_options(cap, cfg);
  cap->add_option("--bits", cfg.bits, "1|2|3: midpoint-threshold quantizer preset");
  cap->add_option("--thresholds", cfg.thresholds, "explicit threshold list")
      ->delimiter(',');

  CLI::App* opt = app.add_subcommand(
      "optimize", "optimize symmetric 2-bit or 3-bit quantizer thresholds");
  add_common_options(opt, cfg);
  opt->add_option("--bits", cfg.bits, "2|3");
  opt->add_flag("--curve", cfg.curve, "emit the full (q, capacity) 2-bit curve");
  opt->add_option("--multistart", cfg.multistart,
                  "number of deterministic 3-bit starting points");

  CLI::App* bench =
      app.add_subcommand("benchmark", "uniform-PAM / ML-threshold benchmark scheme");
  add_common_options(bench, cfg);
  bench->add_option("--bits", cfg.bits, "1|2|3");

  CLI::App* tab = app.add_subcommand("tables", "reproduce a reference table");
  add_common_options(tab, cfg);
  tab->add_option("--which", cfg.which, "table id, 1..4");

  CLI::App* sw = app.add_subcommand("sweep", "capacity versus SNR for a scheme");
  add_common_options(sw, cfg);
  sw->add_option("--scheme", cfg.scheme,
                 "1bit-opt|2bit-opt|2bit-bench|3bit-opt|3bit-bench|unquantized");
  sw->add_option("--thresholds", cfg.thresholds, "fixed quantizer to sweep")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    cfg.opts.validate();
    if (cap->parsed()) {
      cfg.command = "capacity";
      return cmd_capacity(cfg, out);
    }
    if (opt->parsed()) {
      cfg.command = "optimize";
      return cmd_optimize(cfg, out);
    }
    if (bench->parsed()) {
      cfg.command = "benchmark";
      return cmd_benchmark(cfg, out);
    }
    if (tab->parsed()) {
      cfg.command = "tables";
      return cmd_tables(cfg, out);
    }
    cfg.command = "sweep";
    return cmd_sweep(cfg, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace quantcap
