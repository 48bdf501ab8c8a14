#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgain/amplifier.hpp"
#include "qgain/bures.hpp"
#include "qgain/errors.hpp"
#include "qgain/estimators.hpp"
#include "qgain/fisher.hpp"
#include "qgain/montecarlo.hpp"
#include "qgain/params.hpp"
#include "qgain/selftest.hpp"

namespace {

using nlohmann::json;
using namespace qgain;

constexpr const char* kVersion = "1.0.0";

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// A table cell: a number (formatted to 12 significant digits) or a token
// such as "inf-at-boundary".
struct Cell {
  bool is_number;
  double value;
  std::string token;
};

Cell num(double v) { return {true, v, {}}; }
Cell tok(std::string t) { return {false, 0.0, std::move(t)}; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw numeric_error("cannot open output file: " + path);
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    f << (c ? "," : "") << csv_escape(table.columns[c]);
  f << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      f << (c ? "," : "");
      f << (row[c].is_number ? fmt12(row[c].value) : csv_escape(row[c].token));
    }
    f << "\n";
  }
}

void write_json_table(const std::string& path, const Table& table) {
  json data = json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    json column = json::array();
    for (const auto& row : table.rows) {
      if (row[c].is_number)
        column.push_back(std::stod(fmt12(row[c].value)));  // same 12-digit rounding as CSV
      else
        column.push_back(row[c].token);
    }
    data[table.columns[c]] = std::move(column);
  }
  json doc = {{"columns", table.columns}, {"data", std::move(data)}};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw numeric_error("cannot open output file: " + path);
  f << doc.dump(2) << "\n";
}

void emit(const std::string& path, const std::string& format, const Table& table,
          const json& config, int warnings, const json& summary) {
  if (format == "csv")
    write_csv(path, table);
  else
    write_json_table(path, table);
  json meta = {{"artifact_version", kVersion},
               {"config", config},
               {"columns", table.columns},
               {"rows", table.rows.size()},
               {"warnings", warnings},
               {"summary", summary}};
  std::ofstream f(path + ".meta.json", std::ios::binary);
  if (!f) throw numeric_error("cannot open sidecar file: " + path + ".meta.json");
  f << meta.dump(2) << "\n";
  std::cout << "wrote " << path << " (" << table.rows.size() << " rows, " << warnings
            << " warnings); sidecar " << path << ".meta.json\n";
}

std::vector<double> linear_grid(double lo, double hi, int steps, const char* what) {
  if (steps < 2) throw domain_error(std::string(what) + ": steps must be >= 2");
  if (!(lo <= hi)) throw domain_error(std::string(what) + ": min must be <= max");
  std::vector<double> grid(steps);
  for (int i = 0; i < steps; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
  grid.back() = hi;  // land exactly on the endpoint
  return grid;
}

// ---------------------------------------------------------------- qfi-curve

struct QfiCurveConfig {
  double gain_min = 1.0, gain_max = 5.0;
  int steps = 0;
  double photons = 6.0;
  int modes = 9;
  std::string grid_kind = "gain";
  std::string out, format = "csv";
};

int run_qfi_curve(const QfiCurveConfig& cfg) {
  if (cfg.gain_min < 1.0) throw domain_error("qfi-curve: --gain-min must be >= 1");
  std::vector<double> gains;
  if (cfg.grid_kind == "gain") {
    gains = linear_grid(cfg.gain_min, cfg.gain_max, cfg.steps, "qfi-curve");
  } else {
    double tau_lo = Gain::from_gain(cfg.gain_min).tau();
    double tau_hi = Gain::from_gain(cfg.gain_max).tau();
    for (double tau : linear_grid(tau_lo, tau_hi, cfg.steps, "qfi-curve"))
      gains.push_back(Gain::from_tau(tau).g());
  }

  Table table;
  table.columns = {"G", "qfi_nds", "qfi_coherent", "fi_homodyne", "fi_heterodyne",
                   "inv_mse_coherent_counting"};
  int warnings = 0;
  DetectorSpec unit{1.0};
  for (double G : gains) {
    Gain g = Gain::from_gain(G);
    std::vector<Cell> row;
    row.push_back(num(G));
    if (G <= 1.0) {
      row.push_back(tok("inf-at-boundary"));
      row.push_back(tok("inf-at-boundary"));
      warnings += 2;
    } else {
      row.push_back(num(qfi_nds(cfg.photons, cfg.modes, g).value));
      row.push_back(num(qfi_coherent(cfg.photons, cfg.modes, g).value));
    }
    row.push_back(num(fi_homodyne(cfg.photons, cfg.modes, g).value));
    row.push_back(num(fi_heterodyne(cfg.photons, cfg.modes, g).value));
    double mse = mse_coherent_analytic(cfg.photons, cfg.modes, g, unit).total;
    if (mse > 0.0) {
      row.push_back(num(1.0 / mse));
    } else {
      row.push_back(tok("inf-at-boundary"));
      ++warnings;
    }
    table.rows.push_back(std::move(row));
  }

  json config = {{"subcommand", "qfi-curve"}, {"gain_min", cfg.gain_min},
                 {"gain_max", cfg.gain_max}, {"steps", cfg.steps},
                 {"photons", cfg.photons},   {"modes", cfg.modes},
                 {"grid", cfg.grid_kind},    {"out", cfg.out},
                 {"format", cfg.format}};
  emit(cfg.out, cfg.format, table, config, warnings, json::object());
  return 0;
}

// --------------------------------------------------------------- mc-validate

struct McValidateConfig {
  double gain = 2.0;
  double photons = 20.0;
  int modes = 20;
  std::vector<long long> n_vec;
  std::vector<double> energy_vec;
  double eta = 1.0;
  long long trials = 100000;
  std::uint64_t seed = 12345;
  int threads = 1;
  std::string probe = "both";
  std::string out, format = "csv";
};

int run_mc_validate(const McValidateConfig& cfg) {
  if (cfg.trials < 1000) throw domain_error("mc-validate: --trials must be >= 1000");
  if (cfg.threads < 1) throw domain_error("mc-validate: --threads must be >= 1");
  Gain g = Gain::from_gain(cfg.gain);
  DetectorSpec det = make_detector(cfg.eta);

  std::vector<long long> n_vec = cfg.n_vec;
  if (n_vec.empty() && (cfg.probe == "number" || cfg.probe == "both")) {
    long long per_mode = static_cast<long long>(cfg.photons) / cfg.modes;
    if (cfg.modes < 1 || per_mode * cfg.modes != static_cast<long long>(cfg.photons) ||
        static_cast<double>(static_cast<long long>(cfg.photons)) != cfg.photons)
      throw domain_error("mc-validate: --photons must split evenly over --modes for a "
                         "number probe; give --n-vec for uneven splits");
    n_vec.assign(cfg.modes, per_mode);
  }
  std::vector<double> energy_vec = cfg.energy_vec;
  if (energy_vec.empty() && (cfg.probe == "coherent" || cfg.probe == "both")) {
    if (cfg.modes < 1) throw domain_error("mc-validate: --modes must be >= 1");
    energy_vec.assign(cfg.modes, cfg.photons / cfg.modes);
  }

  Table table;
  table.columns = {"G", "probe_kind", "empirical_mse", "analytic_mse",
                   "bias", "stderr_mean", "stderr_mse", "z_score_mse"};
  std::uint64_t row_seed = cfg.seed;
  auto add_row = [&](const ProbeSpec& probe, const char* kind) {
    ProbeTotals totals = probe_totals(probe);
    TrialPlan plan{probe, g, det, cfg.trials, row_seed++};
    EstimatorStats stats = run_estimator_trials(plan, cfg.threads);
    double analytic = std::string(kind) == "number"
                          ? mse_number_analytic(totals.photons, totals.modes, g, det).total
                          : mse_coherent_analytic(totals.photons, totals.modes, g, det).total;
    double z = (stats.empirical_mse - analytic) / stats.stderr_mse;
    table.rows.push_back({num(cfg.gain), tok(kind), num(stats.empirical_mse), num(analytic),
                          num(stats.bias), num(stats.stderr_mean), num(stats.stderr_mse),
                          num(z)});
  };
  if (cfg.probe == "number" || cfg.probe == "both")
    add_row(NumberState{n_vec}, "number");
  if (cfg.probe == "coherent" || cfg.probe == "both")
    add_row(CoherentState{energy_vec}, "coherent");
  if (table.rows.empty()) throw domain_error("mc-validate: unknown --probe kind");

  // --threads deliberately absent: the sidecar records the run's defining
  // config, and results must not depend on the worker count
  json config = {{"subcommand", "mc-validate"},
                 {"gain", cfg.gain},
                 {"photons", cfg.photons},
                 {"modes", cfg.modes},
                 {"n_vec", cfg.n_vec},
                 {"energy_vec", cfg.energy_vec},
                 {"eta", cfg.eta},
                 {"trials", cfg.trials},
                 {"seed", cfg.seed},
                 {"probe", cfg.probe},
                 {"out", cfg.out},
                 {"format", cfg.format}};
  emit(cfg.out, cfg.format, table, config, 0, json::object());
  return 0;
}

// ----------------------------------------------------------- threshold-curve

struct ThresholdConfig {
  double eta_min = 0.0, eta_max = 0.0;
  int steps = 0;
  int modes = 20;
  std::string out, format = "csv";
};

int run_threshold_curve(const ThresholdConfig& cfg) {
  if (!(cfg.eta_min > 0.0) || !(cfg.eta_max < 1.0))
    throw domain_error("threshold-curve: eta grid must lie strictly inside (0, 1)");
  std::vector<double> etas = linear_grid(cfg.eta_min, cfg.eta_max, cfg.steps, "threshold-curve");

  Table table;
  table.columns = {"eta_d", "threshold_gain"};
  int warnings = 0;
  bool monotone = true;
  double prev = 0.0;
  bool have_prev = false;
  DetectorSpec det{0.5};
  for (double eta : etas) {
    det.eta_d = eta;
    std::vector<Cell> row{num(eta)};
    try {
      double g_star = threshold_gain(det, cfg.modes);
      if (have_prev && g_star > prev) monotone = false;
      prev = g_star;
      have_prev = true;
      row.push_back(num(g_star));
    } catch (const numeric_error&) {
      row.push_back(tok("bracket-failure"));
      ++warnings;
    }
    table.rows.push_back(std::move(row));
  }
  std::cout << "threshold monotone non-increasing in eta_d: " << (monotone ? "yes" : "NO")
            << "\n";

  json config = {{"subcommand", "threshold-curve"}, {"eta_min", cfg.eta_min},
                 {"eta_max", cfg.eta_max},          {"steps", cfg.steps},
                 {"modes", cfg.modes},              {"out", cfg.out},
                 {"format", cfg.format}};
  emit(cfg.out, cfg.format, table, config, warnings,
       json{{"monotone_nonincreasing", monotone}});
  return 0;
}

// ----------------------------------------------------------------- bures

struct BuresConfig {
  double photons = 2.0;
  int modes = 1;
  double gain = 2.0;
  double gain_min = 1.0, gain_max = 4.5;
  int steps = 0;
  std::string out, format = "csv";
};

int run_bures(const BuresConfig& cfg) {
  Gain g = Gain::from_gain(cfg.gain);
  Table table;
  table.columns = {"G", "G_prime", "nu", "min_fidelity_quantum", "ecb_distance",
                   "min_fidelity_classical"};
  for (double gp : linear_grid(cfg.gain_min, cfg.gain_max, cfg.steps, "bures")) {
    GainPair pair(g, Gain::from_gain(gp));
    EcbResult q = min_fidelity_quantum(cfg.photons, cfg.modes, pair);
    double c = min_fidelity_classical(cfg.photons, cfg.modes, pair);
    if (c < q.min_fidelity - 1e-12)
      throw numeric_error("bures: classical minimum fidelity fell below the quantum "
                          "minimum at G' = " + std::to_string(gp));
    table.rows.push_back({num(cfg.gain), num(gp), num(pair.nu), num(q.min_fidelity),
                          num(q.ecb_distance), num(c)});
  }
  json config = {{"subcommand", "bures"}, {"photons", cfg.photons}, {"modes", cfg.modes},
                 {"gain", cfg.gain},      {"gain_min", cfg.gain_min},
                 {"gain_max", cfg.gain_max}, {"steps", cfg.steps},
                 {"out", cfg.out},        {"format", cfg.format}};
  emit(cfg.out, cfg.format, table, config, 0, json::object());
  return 0;
}

// --------------------------------------------------------------- selftest

int run_selftest_cmd(const std::string& out, double perturbation) {
  SelftestOptions options;
  options.qfi_nds_perturbation = perturbation;
  SelftestReport report = run_selftest(options);
  for (const auto& check : report.checks)
    std::cout << (check.passed ? "PASS" : "FAIL") << " " << check.name << " — "
              << check.detail << "\n";
  std::cout << "lemma cases: " << report.lemma_cases << "\n";
  if (!out.empty()) {
    json doc = {{"lemma_cases", report.lemma_cases},
                {"all_passed", report.all_passed()},
                {"checks", json::array()}};
    for (const auto& check : report.checks)
      doc["checks"].push_back({{"name", check.name},
                               {"passed", check.passed},
                               {"detail", check.detail}});
    std::ofstream f(out, std::ios::binary);
    if (!f) throw numeric_error("cannot open output file: " + out);
    f << doc.dump(2) << "\n";
  }
  return report.all_passed() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gain-sensing bounds, fidelities, and Monte Carlo validation for "
               "quantum-limited amplifiers"};
  app.require_subcommand(1);

  QfiCurveConfig qc;
  CLI::App* qfi = app.add_subcommand("qfi-curve",
                                     "Information bounds vs gain (quantum, coherent, "
                                     "homodyne, heterodyne, counting)");
  qfi->add_option("--gain-min", qc.gain_min)->required();
  qfi->add_option("--gain-max", qc.gain_max)->required();
  qfi->add_option("--steps", qc.steps)->required();
  qfi->add_option("--photons", qc.photons);
  qfi->add_option("--modes", qc.modes);
  qfi->add_option("--grid", qc.grid_kind)->check(CLI::IsMember({"gain", "tau"}));
  qfi->add_option("--out", qc.out)->required();
  qfi->add_option("--format", qc.format)->check(CLI::IsMember({"csv", "json"}));

  McValidateConfig mc;
  CLI::App* mcv = app.add_subcommand("mc-validate",
                                     "Monte Carlo check of the counting estimator "
                                     "against its analytic error");
  mcv->add_option("--gain", mc.gain);
  mcv->add_option("--photons", mc.photons);
  mcv->add_option("--modes", mc.modes);
  mcv->add_option("--n-vec", mc.n_vec)->delimiter(',');
  mcv->add_option("--energy-vec", mc.energy_vec)->delimiter(',');
  mcv->add_option("--eta", mc.eta);
  mcv->add_option("--trials", mc.trials);
  mcv->add_option("--seed", mc.seed);
  mcv->add_option("--threads", mc.threads);
  mcv->add_option("--probe", mc.probe)->check(CLI::IsMember({"number", "coherent", "both"}));
  mcv->add_option("--out", mc.out)->required();
  mcv->add_option("--format", mc.format)->check(CLI::IsMember({"csv", "json"}));

  ThresholdConfig tc;
  CLI::App* thr = app.add_subcommand("threshold-curve",
                                     "Gain beyond which single-photon counting beats "
                                     "the coherent bound, vs detector efficiency");
  thr->add_option("--eta-min", tc.eta_min)->required();
  thr->add_option("--eta-max", tc.eta_max)->required();
  thr->add_option("--steps", tc.steps)->required();
  thr->add_option("--modes", tc.modes);
  thr->add_option("--out", tc.out)->required();
  thr->add_option("--format", tc.format)->check(CLI::IsMember({"csv", "json"}));

  BuresConfig bc;
  CLI::App* bur = app.add_subcommand("bures",
                                     "Energy-constrained Bures distance and minimum "
                                     "fidelities between two gains");
  bur->add_option("--photons", bc.photons);
  bur->add_option("--modes", bc.modes);
  bur->add_option("--gain", bc.gain);
  bur->add_option("--gain-min", bc.gain_min)->required();
  bur->add_option("--gain-max", bc.gain_max)->required();
  bur->add_option("--steps", bc.steps)->required();
  bur->add_option("--out", bc.out)->required();
  bur->add_option("--format", bc.format)->check(CLI::IsMember({"csv", "json"}));

  std::string selftest_out;
  double perturbation = 0.0;
  CLI::App* st = app.add_subcommand("selftest", "Built-in consistency checks");
  st->add_option("--out", selftest_out);
  st->add_option("--perturb-qfi-nds", perturbation)->group("");  // test hook, hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (qfi->parsed()) return run_qfi_curve(qc);
    if (mcv->parsed()) return run_mc_validate(mc);
    if (thr->parsed()) return run_threshold_curve(tc);
    if (bur->parsed()) return run_bures(bc);
    if (st->parsed()) return run_selftest_cmd(selftest_out, perturbation);
  } catch (const domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
