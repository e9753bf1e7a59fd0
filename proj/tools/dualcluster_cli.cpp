// Command-line front end for the dualcluster shared library. Every
// subcommand goes through the C API; outputs are deterministic CSV or
// JSON-lines bodies plus a JSON run manifest next to each output file.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualcluster.h"

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

[[noreturn]] void die(dc_status st) {
  std::cerr << "error: " << dc_last_error() << "\n";
  std::exit(st);
}

void check(dc_status st) {
  if (st != DC_OK) die(st);
}

struct PotentialSpec {
  std::string text = "gaussian{lambda=1}";
  dc_potential* handle = nullptr;
  std::string table_file;

  void open() {
    std::string name = text;
    std::map<std::string, std::string> kv;
    const auto brace = text.find('{');
    if (brace != std::string::npos) {
      if (text.back() != '}') {
        std::cerr << "error: malformed potential spec '" << text << "'\n";
        std::exit(DC_ERR_USAGE);
      }
      name = text.substr(0, brace);
      std::string body = text.substr(brace + 1, text.size() - brace - 2);
      std::istringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
          std::cerr << "error: malformed potential parameter '" << item << "'\n";
          std::exit(DC_ERR_USAGE);
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
    auto num = [&](const std::string& key, double fallback) {
      auto it = kv.find(key);
      return it == kv.end() ? fallback : std::stod(it->second);
    };
    if (name == "gaussian") {
      check(dc_potential_gaussian(num("lambda", 1.0), &handle));
    } else if (name == "zero") {
      check(dc_potential_zero(&handle));
    } else if (name == "tabulated") {
      auto it = kv.find("file");
      if (it == kv.end()) {
        std::cerr << "error: tabulated potential needs file=...\n";
        std::exit(DC_ERR_USAGE);
      }
      table_file = it->second;
      check(dc_potential_tabulated(table_file.c_str(), num("eta", 4.0), num("R", 1.0),
                                   num("c", 1.0), &handle));
    } else {
      std::cerr << "error: unknown potential '" << name << "'\n";
      std::exit(DC_ERR_USAGE);
    }
  }

  ~PotentialSpec() { dc_potential_free(handle); }
};

// Sink that writes either to a file or to stdout; remembers enough to emit
// the manifest when the output is a real file.
struct Output {
  std::string path;  // empty: stdout
  std::ofstream file;
  std::ostream* os = &std::cout;

  void open() {
    if (path.empty()) return;
    file.open(path);
    if (!file) {
      std::cerr << "error: cannot open output file " << path << "\n";
      std::exit(DC_ERR_IO);
    }
    os = &file;
  }
};

struct ManifestInfo {
  std::string command;
  json parameters;
  std::uint64_t seed = 0;
  int shards = 1;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::string>> input_files;
  std::vector<std::string> assumptions;
};

void write_manifest(const ManifestInfo& m, const Output& out) {
  if (out.path.empty()) return;
  json doc;
  doc["tool"] = "dualcluster";
  doc["version"] = dc_version();
  doc["command"] = m.command;
  doc["parameters"] = m.parameters;
  doc["seed"] = m.seed;
  doc["shards"] = m.shards;
  doc["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - m.t0).count();
  json hashes = json::object();
  for (const auto& [label, path] : m.input_files) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(path)));
    hashes[label] = buf;
  }
  doc["input_hashes"] = hashes;
  if (!m.assumptions.empty()) doc["unchecked_assumptions"] = m.assumptions;
  doc["output"] = out.path;
  // one record per line (JSON-lines) so manifests stay machine-readable
  std::ofstream mf(out.path + ".manifest.json");
  mf << doc.dump() << "\n";
}

// Tabulated potentials cannot prove the integrability and continuity their
// transforms rely on; runs record that as an assumption.
void note_potential_assumptions(ManifestInfo& m, const PotentialSpec& pot) {
  if (!pot.table_file.empty()) {
    m.input_files.emplace_back("potential_table", pot.table_file);
    m.assumptions.push_back(
        "tabulated potential: vhat assumed integrable and continuous (spot checks only)");
  }
}

const char* regime_word(int regime) {
  switch (regime) {
    case 0: return "finite-clusters";
    case 1: return "critical";
    default: return "infinite-clusters";
  }
}

int threads_from_env(int requested) {
  if (const char* s = std::getenv("DUALCLUSTER_THREADS")) {
    const long cap = std::strtol(s, nullptr, 10);
    if (cap >= 1 && requested > cap) return static_cast<int>(cap);
  }
  return requested;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-space cluster expansion toolkit"};
  auto* config_opt =
      app.set_config("--config", "", "plain key=value configuration file; flags override");
  app.require_subcommand(1);

  // ---- atlas ----
  auto* atlas = app.add_subcommand("atlas", "enumerate valid cluster graphs");
  int atlas_n = 0;
  std::uint64_t atlas_limit = 0;
  int atlas_ceiling = 9;
  Output atlas_out;
  atlas->add_option("--n", atlas_n, "graph order")->required();
  atlas->add_option("--limit", atlas_limit, "stop after this many graphs (0 = all)");
  atlas->add_option("--ceiling", atlas_ceiling, "enumeration ceiling");
  atlas->add_option("--out", atlas_out.path, "output file (default stdout)");

  // ---- qn ----
  auto* qn = app.add_subcommand("qn", "cluster weights q_n");
  PotentialSpec qn_pot;
  int qn_d = 2, qn_nmax = 5, qn_shards = 1, qn_ceiling = 9;
  double qn_lb = 1.0;
  std::string qn_mode = "cycles-only";
  std::uint64_t qn_samples = 1000000, qn_seed = 1, qn_budget = 0;
  bool qn_force_mc = false;
  Output qn_out;
  qn->add_option("--potential", qn_pot.text, "potential spec, e.g. gaussian{lambda=1}");
  qn->add_option("--d", qn_d, "dimension")->required();
  qn->add_option("--lambda-beta", qn_lb, "thermal wavelength");
  qn->add_option("--mode", qn_mode, "full | cycles-only")
      ->check(CLI::IsMember({"full", "cycles-only"}));
  qn->add_option("--n-max", qn_nmax, "largest order")->required();
  qn->add_option("--samples", qn_samples, "Monte Carlo samples per block");
  qn->add_option("--seed", qn_seed, "random seed");
  qn->add_option("--shards", qn_shards, "worker threads (results are shard-invariant)");
  qn->add_option("--budget", qn_budget, "max graphs per order in full mode (0 = all)");
  qn->add_option("--ceiling", qn_ceiling, "enumeration ceiling");
  qn->add_flag("--force-mc", qn_force_mc, "Monte Carlo blocks even when closed forms apply");
  qn->add_option("--out", qn_out.path, "CSV output (default stdout)");

  // ---- critical ----
  auto* critical = app.add_subcommand("critical", "critical density rho_c");
  PotentialSpec cr_pot;
  int cr_d = 2, cr_nmax = 8, cr_shards = 1;
  double cr_lb = 1.0;
  std::string cr_weights = "cycles-only";
  std::uint64_t cr_samples = 1000000, cr_seed = 1;
  Output cr_out;
  critical->add_option("--potential", cr_pot.text, "potential spec");
  critical->add_option("--d", cr_d, "dimension")->required();
  critical->add_option("--lambda-beta", cr_lb, "thermal wavelength");
  critical->add_option("--weights", cr_weights, "cycles-only | full")
      ->check(CLI::IsMember({"full", "cycles-only"}));
  critical->add_option("--n-max", cr_nmax, "weight table order for full mode");
  critical->add_option("--samples", cr_samples, "Monte Carlo samples per block");
  critical->add_option("--seed", cr_seed, "random seed");
  critical->add_option("--shards", cr_shards, "worker threads");
  critical->add_option("--out", cr_out.path, "CSV output");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "chemical potential at given density");
  PotentialSpec so_pot;
  int so_d = 2, so_nmax = 8, so_shards = 1;
  double so_lb = 1.0, so_rho = 0.0;
  std::string so_weights = "cycles-only";
  std::uint64_t so_samples = 1000000, so_seed = 1;
  Output so_out;
  solve->add_option("--potential", so_pot.text, "potential spec");
  solve->add_option("--d", so_d, "dimension")->required();
  solve->add_option("--rho", so_rho, "number density")->required();
  solve->add_option("--lambda-beta", so_lb, "thermal wavelength");
  solve->add_option("--weights", so_weights, "cycles-only | full")
      ->check(CLI::IsMember({"full", "cycles-only"}));
  solve->add_option("--n-max", so_nmax, "weight table order for full mode");
  solve->add_option("--samples", so_samples, "Monte Carlo samples per block");
  solve->add_option("--seed", so_seed, "random seed");
  solve->add_option("--shards", so_shards, "worker threads");
  solve->add_option("--out", so_out.path, "CSV output");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "rho grid of solved states");
  PotentialSpec sw_pot;
  int sw_d = 2, sw_nmax = 8, sw_shards = 1, sw_points = 0;
  double sw_lb = 1.0, sw_min = 0.0, sw_max = 0.0;
  std::string sw_weights = "cycles-only";
  std::uint64_t sw_samples = 1000000, sw_seed = 1;
  Output sw_out;
  sweep->add_option("--potential", sw_pot.text, "potential spec");
  sweep->add_option("--d", sw_d, "dimension")->required();
  sweep->add_option("--rho-min", sw_min, "first density")->required();
  sweep->add_option("--rho-max", sw_max, "last density")->required();
  sweep->add_option("--points", sw_points, "grid points")->required();
  sweep->add_option("--lambda-beta", sw_lb, "thermal wavelength");
  sweep->add_option("--weights", sw_weights, "cycles-only | full")
      ->check(CLI::IsMember({"full", "cycles-only"}));
  sweep->add_option("--n-max", sw_nmax, "weight table order for full mode");
  sweep->add_option("--samples", sw_samples, "Monte Carlo samples per block");
  sweep->add_option("--seed", sw_seed, "random seed");
  sweep->add_option("--shards", sw_shards, "worker threads");
  sweep->add_option("--out", sw_out.path, "CSV output");

  // ---- oracle ----
  auto* orc = app.add_subcommand("oracle", "finite-volume ground truth");
  orc->require_subcommand(1);
  PotentialSpec or_pot;
  int or_d = 1, or_N = 3, or_resolution = 4096, or_zmax = 64, or_shards = 1, or_n = 3;
  double or_L = 8.0, or_beta = 1.0, or_lb = 1.0, or_rho = 0.5;
  std::uint64_t or_samples = 4000000, or_seed = 1;
  bool or_unfolded = false, or_allow_n4 = false;
  std::vector<double> or_ladder;
  Output or_out;
  for (auto* sub : {orc->add_subcommand("direct", "configurational integral"),
                    orc->add_subcommand("momentum", "constrained momentum sums"),
                    orc->add_subcommand("recurrence", "finite-volume recurrence residual"),
                    orc->add_subcommand("limit-factor", "finite-size factor vs its limit")}) {
    sub->add_option("--potential", or_pot.text, "potential spec");
    sub->add_option("--d", or_d, "dimension");
    sub->add_option("--beta", or_beta, "inverse temperature for the periodized factor");
    sub->add_option("--lambda-beta", or_lb, "thermal wavelength");
    sub->add_option("--out", or_out.path, "JSON-lines output (default stdout)");
  }
  auto* orc_direct = orc->get_subcommand("direct");
  orc_direct->add_option("--N", or_N, "particles")->required();
  orc_direct->add_option("--L", or_L, "box side")->required();
  orc_direct->add_option("--resolution", or_resolution, "grid points per axis");
  orc_direct->add_option("--samples", or_samples, "Monte Carlo samples (d=2)");
  orc_direct->add_option("--seed", or_seed, "random seed");
  orc_direct->add_option("--shards", or_shards, "worker threads");
  auto* orc_mom = orc->get_subcommand("momentum");
  orc_mom->add_option("--N", or_N, "particles")->required();
  orc_mom->add_option("--L", or_L, "box side")->required();
  orc_mom->add_option("--zmax", or_zmax, "lattice cutoff");
  orc_mom->add_flag("--unfolded", or_unfolded, "use the unfolded fast path for E-hat");
  orc_mom->add_flag("--allow-n4", or_allow_n4, "enable the N=4 triple lattice sum");
  auto* orc_rec = orc->get_subcommand("recurrence");
  orc_rec->add_option("--N", or_N, "particles")->required();
  orc_rec->add_option("--L", or_L, "box side")->required();
  orc_rec->add_option("--resolution", or_resolution, "grid points per axis");
  orc_rec->add_option("--zmax", or_zmax, "lattice cutoff");
  auto* orc_lf = orc->get_subcommand("limit-factor");
  orc_lf->add_option("--n", or_n, "cluster order in the factor")->required();
  orc_lf->add_option("--rho", or_rho, "density along the ladder")->required();
  orc_lf->add_option("--L", or_ladder, "ladder of box sides")->required()->expected(-1);

  // ---- lemma-check ----
  auto* lemma = app.add_subcommand("lemma-check", "assignment construction spot checks");
  int lc_n = 8, lc_d = 2;
  std::uint64_t lc_trials = 200, lc_seed = 1;
  std::string lc_dump;
  lemma->add_option("--n", lc_n, "largest graph order")->required();
  lemma->add_option("--trials", lc_trials, "valid graphs to sample")->required();
  lemma->add_option("--seed", lc_seed, "random seed")->required();
  lemma->add_option("--d", lc_d, "momentum dimension");
  lemma->add_option("--dump", lc_dump, "write sample assignments to this file");

  // let --config (and any future global flags) appear after the subcommand
  for (auto* sub : app.get_subcommands(nullptr)) {
    sub->fallthrough();
    for (auto* nested : sub->get_subcommands(nullptr)) nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : DC_ERR_USAGE;
  }

  auto note_config = [&](ManifestInfo& m) {
    if (config_opt->count()) m.input_files.emplace_back("config", config_opt->as<std::string>());
  };

  if (*atlas) {
    ManifestInfo m;
    m.command = "atlas";
    m.parameters = {{"n", atlas_n}, {"limit", atlas_limit}, {"ceiling", atlas_ceiling}};
    note_config(m);
    std::uint64_t count = 0;
    if (atlas_out.path.empty()) {
      check(dc_atlas_stream(
          atlas_n, atlas_ceiling, atlas_limit,
          [](const char* line, void*) {
            std::fputs(line, stdout);
            std::fputc('\n', stdout);
            return 1;
          },
          nullptr, &count));
      std::cerr << "n=" << atlas_n << " graphs=" << count << "\n";
    } else {
      check(dc_atlas_write(atlas_n, atlas_ceiling, atlas_limit, atlas_out.path.c_str(),
                           &count));
      std::cout << "n=" << atlas_n << " graphs=" << count << "\n";
    }
    write_manifest(m, atlas_out);
    return 0;
  }

  if (*qn) {
    qn_pot.open();
    qn_shards = threads_from_env(qn_shards);
    ManifestInfo m;
    m.command = "qn";
    m.parameters = {{"potential", qn_pot.text}, {"d", qn_d},       {"lambda_beta", qn_lb},
                    {"mode", qn_mode},          {"n_max", qn_nmax}, {"samples", qn_samples},
                    {"budget", qn_budget},      {"ceiling", qn_ceiling},
                    {"force_mc", qn_force_mc}};
    m.seed = qn_seed;
    m.shards = qn_shards;
    note_potential_assumptions(m, qn_pot);
    note_config(m);
    std::vector<dc_weight_row> rows(static_cast<size_t>(qn_nmax));
    check(dc_qn_table(qn_pot.handle, qn_d, qn_lb, qn_nmax, qn_mode == "cycles-only" ? 1 : 0,
                      qn_force_mc ? 1 : 0, qn_samples, qn_seed, qn_shards, qn_budget,
                      qn_ceiling, rows.data()));
    qn_out.open();
    *qn_out.os << "n,mode,value,error,graphs\n";
    for (const auto& r : rows) {
      *qn_out.os << r.n << ',' << (r.mode == 1 ? "cycles-only" : "full") << ',' << fmt(r.value)
                 << ',' << fmt(r.error) << ',' << r.graphs << "\n";
    }
    write_manifest(m, qn_out);
    return 0;
  }

  auto run_solve_like = [&](const std::string& cmd, PotentialSpec& pot, int d, double lb,
                            const std::string& weights, int nmax, std::uint64_t samples,
                            std::uint64_t seed, int shards, const std::vector<double>& rhos,
                            Output& out, bool echo) {
    pot.open();
    shards = threads_from_env(shards);
    ManifestInfo m;
    m.command = cmd;
    m.parameters = {{"potential", pot.text}, {"d", d},        {"lambda_beta", lb},
                    {"weights", weights},    {"n_max", nmax}, {"samples", samples},
                    {"rho", rhos}};
    m.seed = seed;
    m.shards = shards;
    note_potential_assumptions(m, pot);
    note_config(m);
    std::vector<dc_solve_row> rows(rhos.size());
    check(dc_sweep(pot.handle, d, lb, rhos.data(), rhos.size(),
                   weights == "cycles-only" ? 1 : 0, nmax, samples, seed, shards, rows.data()));
    out.open();
    *out.os << "rho,mu,regime,rho_c,excess,d2f_drho2,dp_drho\n";
    for (const auto& r : rows) {
      *out.os << fmt(r.rho) << ',' << fmt(r.mu) << ',' << regime_word(r.regime) << ','
              << fmt(r.rho_c) << ',' << fmt(r.excess) << ',' << fmt(r.d2f_drho2) << ','
              << fmt(r.dp_drho) << "\n";
    }
    if (echo && !out.path.empty()) {
      for (const auto& r : rows) {
        std::cout << "rho=" << fmt(r.rho) << " mu=" << fmt(r.mu) << " regime="
                  << regime_word(r.regime) << " rho_c=" << fmt(r.rho_c)
                  << " excess=" << fmt(r.excess) << " bounds="
                  << (r.bounds_pass ? "pass" : "fail") << "\n";
      }
    }
    write_manifest(m, out);
  };

  if (*critical) {
    cr_pot.open();
    cr_shards = threads_from_env(cr_shards);
    ManifestInfo m;
    m.command = "critical";
    m.parameters = {{"potential", cr_pot.text}, {"d", cr_d},        {"lambda_beta", cr_lb},
                    {"weights", cr_weights},    {"n_max", cr_nmax}, {"samples", cr_samples}};
    m.seed = cr_seed;
    m.shards = cr_shards;
    note_potential_assumptions(m, cr_pot);
    note_config(m);
    double rc = 0.0;
    check(dc_critical_density(cr_pot.handle, cr_d, cr_lb, cr_weights == "cycles-only" ? 1 : 0,
                              cr_nmax, cr_samples, cr_seed, cr_shards, &rc));
    std::cout << "rho_c=" << fmt(rc) << "\n";
    if (!cr_out.path.empty()) {
      cr_out.open();
      *cr_out.os << "d,lambda_beta,weights,rho_c\n";
      *cr_out.os << cr_d << ',' << fmt(cr_lb) << ',' << cr_weights << ',' << fmt(rc) << "\n";
      write_manifest(m, cr_out);
    }
    return 0;
  }

  if (*solve) {
    run_solve_like("solve", so_pot, so_d, so_lb, so_weights, so_nmax, so_samples, so_seed,
                   so_shards, {so_rho}, so_out, true);
    return 0;
  }

  if (*sweep) {
    if (sw_points < 2 || sw_max <= sw_min) {
      std::cerr << "error: sweep needs points >= 2 and rho-max > rho-min\n";
      return DC_ERR_USAGE;
    }
    std::vector<double> rhos(static_cast<size_t>(sw_points));
    for (int i = 0; i < sw_points; ++i)
      rhos[static_cast<size_t>(i)] = sw_min + (sw_max - sw_min) * i / (sw_points - 1);
    run_solve_like("sweep", sw_pot, sw_d, sw_lb, sw_weights, sw_nmax, sw_samples, sw_seed,
                   sw_shards, rhos, sw_out, false);
    return 0;
  }

  if (*orc) {
    or_pot.open();
    or_shards = threads_from_env(or_shards);
    ManifestInfo m;
    m.command = "oracle";
    m.seed = or_seed;
    m.shards = or_shards;
    note_potential_assumptions(m, or_pot);
    note_config(m);
    or_out.open();
    json line;
    if (*orc_direct) {
      dc_oracle_result r{};
      check(dc_oracle_direct(or_pot.handle, or_d, or_N, or_L, or_beta, or_lb, or_resolution,
                             or_samples, or_seed, or_shards, &r));
      line = {{"task", "direct"}, {"N", or_N},           {"L", or_L},
              {"d", or_d},        {"value", r.value},    {"error", r.error},
              {"method", r.method}, {"seconds", r.seconds}};
      m.parameters = {{"potential", or_pot.text}, {"N", or_N}, {"L", or_L}, {"d", or_d},
                      {"resolution", or_resolution}, {"samples", or_samples}};
      *or_out.os << line.dump() << "\n";
    } else if (*orc_mom) {
      dc_oracle_result r{};
      check(dc_oracle_momentum(or_pot.handle, or_d, or_N, or_L, or_beta, or_lb, or_zmax,
                               or_unfolded ? 0 : 1, or_allow_n4 ? 1 : 0, &r));
      line = {{"task", "momentum"}, {"N", or_N},        {"L", or_L},
              {"d", or_d},          {"value", r.value}, {"error", r.error},
              {"method", r.method}, {"seconds", r.seconds}};
      m.parameters = {{"potential", or_pot.text}, {"N", or_N}, {"L", or_L}, {"d", or_d},
                      {"zmax", or_zmax}, {"unfolded", or_unfolded}};
      *or_out.os << line.dump() << "\n";
    } else if (*orc_rec) {
      dc_recurrence_report r{};
      const auto rec_t0 = std::chrono::steady_clock::now();
      check(dc_oracle_recurrence(or_pot.handle, or_d, or_N, or_L, or_beta, or_lb,
                                 or_resolution, or_zmax, &r));
      const double rec_secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - rec_t0).count();
      line = {{"task", "recurrence"},
              {"N", or_N},
              {"L", or_L},
              {"d", or_d},
              {"value", r.residual_rel},
              {"error", r.lhs_error_rel + r.rhs_error_rel},
              {"method", "recurrence"},
              {"seconds", rec_secs},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"residual_exceeds_errors", r.residual_exceeds_errors != 0},
              {"note", r.note}};
      m.parameters = {{"potential", or_pot.text}, {"N", or_N}, {"L", or_L}, {"d", or_d},
                      {"resolution", or_resolution}, {"zmax", or_zmax}};
      *or_out.os << line.dump() << "\n";
    } else {
      std::vector<dc_limit_factor_row> rows(or_ladder.size());
      int monotone = 0;
      const auto lf_t0 = std::chrono::steady_clock::now();
      check(dc_oracle_limit_factor(or_pot.handle, or_d, or_n, or_rho, or_ladder.data(),
                                   or_ladder.size(), or_beta, rows.data(), &monotone));
      const double lf_secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - lf_t0).count();
      m.parameters = {{"potential", or_pot.text}, {"n", or_n}, {"rho", or_rho},
                      {"ladder", or_ladder}, {"d", or_d}};
      for (const auto& r : rows) {
        json row = {{"task", "limit-factor"}, {"N", r.N},     {"L", r.L},
                    {"d", or_d},              {"value", r.lhs}, {"error", 0.0},
                    {"method", "limit-factor"},
                    {"lhs", r.lhs},           {"rhs", r.rhs}, {"gap", r.gap}};
        *or_out.os << row.dump() << "\n";
      }
      json summary = {{"task", "limit-factor-summary"}, {"gap_monotone", monotone != 0},
                      {"seconds", lf_secs}};
      *or_out.os << summary.dump() << "\n";
    }
    write_manifest(m, or_out);
    return 0;
  }

  if (*lemma) {
    ManifestInfo m;
    m.command = "lemma-check";
    m.parameters = {{"n", lc_n}, {"trials", lc_trials}, {"d", lc_d}};
    m.seed = lc_seed;
    note_config(m);
    dc_lemma_report rep{};
    const dc_status st = dc_lemma_check(lc_n, lc_trials, lc_seed, lc_d,
                                        lc_dump.empty() ? nullptr : lc_dump.c_str(), &rep);
    std::cout << "valid_graphs_checked=" << rep.valid_graphs_checked
              << " bridged_graphs_rejected=" << rep.bridged_graphs_rejected
              << " constraint_violations=" << rep.constraint_violations
              << " zero_edge_vectors=" << rep.zero_edge_vectors
              << " missed_bridges=" << rep.missed_bridges << "\n";
    if (!lc_dump.empty()) {
      Output dump_out;
      dump_out.path = lc_dump;
      write_manifest(m, dump_out);
    }
    if (st != DC_OK) die(st);
    return 0;
  }

  return 0;
}
