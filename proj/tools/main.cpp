// glwire: spectral analysis, bifurcation coefficients, reduced dynamics,
// full PDE evolution and phase-slip detection for the 1D wire model, driven
// entirely by reproducible text inputs and outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "glwire/amplitude.hpp"
#include "glwire/bifurcation.hpp"
#include "glwire/collision.hpp"
#include "glwire/io.hpp"
#include "glwire/psc.hpp"
#include "glwire/spectral.hpp"
#include "glwire/tdgl.hpp"
#include "glwire/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace glwire;

namespace {

Bc parse_bc(const std::string& s) {
  if (s == "dirichlet") return Bc::Dirichlet;
  if (s == "neumann") return Bc::Neumann;
  throw InvalidInput("bc must be 'dirichlet' or 'neumann', got '" + s + "'");
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

// Echo of the fully resolved configuration, written into every manifest.
using ConfigEcho = std::map<std::string, std::string>;

void write_manifest(const std::string& out_dir, const std::string& command,
                    const ConfigEcho& cfg,
                    const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
  json m;
  m["tool"] = kToolVersion;
  m["command"] = command;
  m["config"] = cfg;
  m["outputs"] = outputs;
  if (!extra.empty()) m["results"] = extra;
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  out << m.dump(2) << "\n";
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InvalidInput("cannot create out_dir '" + out_dir + "'");
}

// --- config-file merge -----------------------------------------------------
//
// A config file holds `key=value` lines (comments start with '#'). Keys must
// name options of the chosen subcommand; values from the command line win.
// The merge happens by synthesizing an argument list with the file-derived
// flags first.

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos)
      line = line.substr(0, pos);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                             line.back() == '\t'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config file: expected key=value, got '" + line + "'");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> merge_config_args(CLI::App& app,
                                           std::vector<std::string> args) {
  std::string sub_name, config_path;
  size_t sub_pos = std::string::npos;
  for (size_t i = 0; i < args.size(); ++i) {
    if (sub_name.empty() && !args[i].empty() && args[i][0] != '-') {
      sub_name = args[i];
      sub_pos = i;
    }
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty() || sub_name.empty()) return args;

  CLI::App* sub = app.get_subcommand_no_throw(sub_name);
  if (sub == nullptr) return args;  // CLI11 will report the bad subcommand

  // options given on the command line win; their keys are not injected
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) continue;
    auto eq = a.find('=');
    given.insert(eq == std::string::npos ? a.substr(2) : a.substr(2, eq - 2));
  }

  std::vector<std::string> injected;
  for (auto& [key, value] : read_config_file(config_path)) {
    if (key == "config")
      throw InvalidInput("config file: nested 'config' keys are not allowed");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw InvalidInput("config file: unknown key '" + key + "' for '" +
                         sub_name + "'");
    if (given.count(key)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") injected.push_back("--" + key);
      else if (value != "false" && value != "0")
        throw InvalidInput("config file: flag '" + key + "' must be true/false");
    } else {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  args.insert(args.begin() + sub_pos + 1, injected.begin(), injected.end());
  return args;
}

// --- shared option bundles ---------------------------------------------------

struct CommonOpts {
  int n = 128;
  std::string bc = "dirichlet";
  std::string out_dir = "out";
  std::string config;
  int workers = 1;

  void attach(CLI::App* sub, bool with_workers = false) {
    sub->add_option("--n", n, "collocation nodes")->capture_default_str();
    sub->add_option("--bc", bc, "boundary condition: dirichlet|neumann")
        ->capture_default_str();
    sub->add_option("--out_dir", out_dir, "output directory")
        ->capture_default_str();
    sub->add_option("--config", config, "key=value config file");
    if (with_workers)
      sub->add_option("--workers", workers, "concurrent scan workers")
          ->capture_default_str();
  }

  Grid grid() const { return Grid::chebyshev(n, parse_bc(bc)); }

  ConfigEcho echo() const {
    return {{"n", std::to_string(n)},
            {"bc", bc},
            {"out_dir", out_dir},
            {"workers", std::to_string(workers)}};
  }
};

// --- subcommands -------------------------------------------------------------

struct SpectrumCmd {
  CommonOpts common;
  double current = 0.0;
  int k = 6;

  void run() const {
    if (current < 0.0) throw InvalidInput("I must be nonnegative");
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();
    auto ps = eigenpairs(grid, current, k);
    std::vector<std::vector<std::string>> rows;
    for (int j = 0; j < k; ++j) {
      rows.push_back({format_g17(current), std::to_string(j + 1),
                      format_g17(ps[j].lambda.real()),
                      format_g17(ps[j].lambda.imag()),
                      format_g17(ps[j].residual)});
    }
    write_csv(fs::path(common.out_dir) / "spectrum.csv",
              {"I", "j", "re_lambda", "im_lambda", "residual"}, rows);
    ConfigEcho cfg = common.echo();
    cfg["I"] = format_g17(current);
    cfg["k"] = std::to_string(k);
    write_manifest(common.out_dir, "spectrum", cfg, {"spectrum.csv"});
  }
};

struct ScanCmd {
  CommonOpts common;
  double lo = 0.5, hi = 20.0;
  int scan_n = 41;
  int k = 6;
  bool asymptotic = false;

  void run() const {
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();
    SpectrumScan scan =
        scan_spectrum(grid, lo, hi, scan_n, k, common.workers);
    std::vector<std::string> header = {"I", "j", "re_lambda", "im_lambda",
                                       "residual"};
    if (asymptotic) {
      header.push_back("re_asym");
      header.push_back("im_asym");
    }
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < scan.currents.size(); ++i) {
      for (int j = 0; j < k; ++j) {
        std::vector<std::string> row = {
            format_g17(scan.currents[i]), std::to_string(j + 1),
            format_g17(scan.tracks[j][i].real()),
            format_g17(scan.tracks[j][i].imag()),
            format_g17(scan.residuals[j][i])};
        if (asymptotic) {
          Complex a = large_I_asymptotic(std::max(scan.currents[i], 1e-9));
          row.push_back(format_g17(a.real()));
          row.push_back(format_g17(a.imag()));
        }
        rows.push_back(std::move(row));
      }
    }
    write_csv(fs::path(common.out_dir) / "scan.csv", header, rows);
    json extra;
    extra["collisions"] = json::array();
    for (auto& [ell, ic] : scan.collisions)
      extra["collisions"].push_back({{"ell", ell}, {"I_c", ic}});
    ConfigEcho cfg = common.echo();
    cfg["bracket_lo"] = format_g17(lo);
    cfg["bracket_hi"] = format_g17(hi);
    cfg["scan_n"] = std::to_string(scan_n);
    cfg["k"] = std::to_string(k);
    cfg["asymptotic"] = asymptotic ? "true" : "false";
    write_manifest(common.out_dir, "spectrum-scan", cfg, {"scan.csv"}, extra);
  }
};

struct CollideCmd {
  CommonOpts common;
  double lo = 10.0, hi = 14.0;
  int ell = 1;
  bool expand = false;

  void run() const {
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();
    double ic = find_collision(grid, ell, lo, hi);

    std::vector<std::string> outputs;
    json extra;
    extra["I_c"] = ic;
    extra["ell"] = ell;

    if (expand) {
      CollisionExpansion ex = expansion_coefficients(grid, ic, ell);
      json rep;
      rep["I_c"] = ex.I_c;
      rep["lambda0"] = cjson(ex.lambda0);
      rep["a1"] = cjson(ex.a1);
      rep["b"] = cjson(ex.b);
      rep["theta1"] = cjson(ex.theta1);
      rep["theta2"] = cjson(ex.theta2);
      rep["d1"] = cjson(ex.d1);
      rep["d2"] = cjson(ex.d2);
      rep["d3"] = cjson(ex.d3);
      std::ofstream out(fs::path(common.out_dir) / "expansion.json");
      out << rep.dump(2) << "\n";
      outputs.push_back("expansion.json");

      // split.csv: predicted and numeric pair across the collision
      std::vector<std::vector<std::string>> rows;
      const int k = 2 * ell;
      for (int s = -20; s <= 20; ++s) {
        double delta = 0.02 * s;
        if (std::abs(delta) < 2e-3) continue;
        auto [hi_br, lo_br] = lambda_split(ex, delta > 0 ? 1.0 : -1.0,
                                           std::abs(delta));
        auto ps = eigenpairs(grid, ex.I_c + delta, k);
        rows.push_back({format_g17(ex.I_c + delta), format_g17(delta),
                        format_g17(hi_br.real()), format_g17(hi_br.imag()),
                        format_g17(lo_br.real()), format_g17(lo_br.imag()),
                        format_g17(ps[k - 2].lambda.real()),
                        format_g17(ps[k - 2].lambda.imag()),
                        format_g17(ps[k - 1].lambda.real()),
                        format_g17(ps[k - 1].lambda.imag())});
      }
      write_csv(fs::path(common.out_dir) / "split.csv",
                {"I", "delta", "re_pred_a", "im_pred_a", "re_pred_b",
                 "im_pred_b", "re_num_lo", "im_num_lo", "re_num_hi",
                 "im_num_hi"},
                rows);
      outputs.push_back("split.csv");
    }

    ConfigEcho cfg = common.echo();
    cfg["bracket_lo"] = format_g17(lo);
    cfg["bracket_hi"] = format_g17(hi);
    cfg["ell"] = std::to_string(ell);
    cfg["expand"] = expand ? "true" : "false";
    write_manifest(common.out_dir, "collide", cfg, outputs, extra);
  }
};

struct ChiScanCmd {
  CommonOpts common;
  double lo = 5.0, hi = 25.0;
  int scan_n = 41;

  void run() const {
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();
    std::vector<std::vector<std::string>> rows;
    int skipped = 0;
    for (int i = 0; i < scan_n; ++i) {
      double current = lo + (hi - lo) * i / (scan_n - 1);
      try {
        BifCoeffs c = chi_coefficients(grid, current);
        rows.push_back({format_g17(current), format_g17(c.chi11.real()),
                        format_g17(c.chi11.imag()), format_g17(c.chi12.real()),
                        format_g17(c.chi12.imag()),
                        format_g17(c.chi_hat.real()),
                        format_g17(c.chi_tilde.real()), format_g17(c.omega)});
      } catch (const DegenerateNormalization&) {
        ++skipped;  // inside the near-collision exclusion zone
      }
    }
    write_csv(fs::path(common.out_dir) / "chi_scan.csv",
              {"I", "re_chi11", "im_chi11", "re_chi12", "im_chi12",
               "re_chi_hat", "re_chi_tilde", "omega"},
              rows);
    ConfigEcho cfg = common.echo();
    cfg["bracket_lo"] = format_g17(lo);
    cfg["bracket_hi"] = format_g17(hi);
    cfg["scan_n"] = std::to_string(scan_n);
    json extra;
    extra["skipped_near_collision"] = skipped;
    write_manifest(common.out_dir, "chi-scan", cfg, {"chi_scan.csv"}, extra);
  }
};

struct BranchCmd {
  CommonOpts common;
  double current = 7.0;
  double eps = 0.01;

  void run() const {
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();
    BifCoeffs c = chi_coefficients(grid, current);
    BranchPrediction p = predict_branch(c, eps);

    auto regime_name = [](Regime r) {
      switch (r) {
        case Regime::NtoS_stable: return "N_to_S_stable";
        case Regime::NtoS_unstable: return "N_to_S_unstable";
        default: return "N_to_P_stable";
      }
    };
    json rep;
    rep["I"] = current;
    rep["eps"] = eps;
    rep["regime"] = regime_name(p.regime);
    rep["amplitude"] = p.amplitude;
    rep["frequency"] = p.frequency;
    rep["period"] = std::isinf(p.period) ? json() : json(p.period);
    rep["stable"] = p.stable;
    rep["lambda1"] = cjson(c.lambda1);
    rep["chi11"] = cjson(c.chi11);
    rep["chi12"] = cjson(c.chi12);
    rep["omega"] = c.omega;
    if (std::abs(c.lambda1.imag()) > 1e-4 && c.chi11.real() < 0.0 && eps > 0) {
      BranchPrediction u = unstable_periodic_prediction(c, eps);
      rep["unstable_periodic"] = {{"amplitude", u.amplitude},
                                  {"frequency", u.frequency},
                                  {"period", u.period}};
    }
    std::ofstream out(fs::path(common.out_dir) / "branch.json");
    out << rep.dump(2) << "\n";

    ConfigEcho cfg = common.echo();
    cfg["I"] = format_g17(current);
    cfg["eps"] = format_g17(eps);
    write_manifest(common.out_dir, "branch", cfg, {"branch.json"});
  }
};

struct ReduceCmd {
  CommonOpts common;
  std::string system = "rg";
  double current = 20.0;
  double eps = 0.01;
  double t_end = 400.0;
  double dt = 0.01;
  int stride = 10;

  void run() const {
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();
    BifCoeffs c = chi_coefficients(grid, current);

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    double halving = 0.0;
    bool blew_up = false;

    if (system == "alpha") {
      AlphaState init{{0.2, 0.03}, {0.12, -0.07}, 0.0};
      auto res = integrate_alpha(init, c.chi11, c.chi12, t_end, dt, stride);
      header = {"t", "re_alpha1", "im_alpha1", "re_alpha2", "im_alpha2"};
      for (const auto& s : res.samples)
        rows.push_back({format_g17(s.tau), format_g17(s.a1.real()),
                        format_g17(s.a1.imag()), format_g17(s.a2.real()),
                        format_g17(s.a2.imag())});
      halving = res.step_halving_error;
      blew_up = res.blew_up;
    } else if (system == "rg") {
      double a0 = 0.6 * eps / c.chi_tilde.real();
      RGState init{a0, 0.5 * a0, 0.0};
      auto res = integrate_rg(init, eps, c.chi_tilde, c.chi_hat, c.chi11,
                              t_end, dt, stride);
      header = {"t", "A", "gamma"};
      for (const auto& s : res.samples)
        rows.push_back(
            {format_g17(s.t), format_g17(s.A), format_g17(s.gamma)});
      halving = res.step_halving_error;
      blew_up = res.blew_up;
    } else if (system == "polar") {
      PolarState init{0.25 * std::sqrt(eps / c.chi_tilde.real()), 0.0, 0.0};
      auto res = integrate_polar(init, eps, std::abs(c.lambda1.imag()),
                                 c.chi_tilde, t_end, dt, stride);
      header = {"t", "R", "theta"};
      for (const auto& s : res.samples)
        rows.push_back(
            {format_g17(s.t), format_g17(s.R), format_g17(s.theta)});
      halving = res.step_halving_error;
      blew_up = res.blew_up;
    } else {
      throw InvalidInput("reduce: system must be alpha|rg|polar, got '" +
                         system + "'");
    }

    write_csv(fs::path(common.out_dir) / "reduce.csv", header, rows);
    ConfigEcho cfg = common.echo();
    cfg["system"] = system;
    cfg["I"] = format_g17(current);
    cfg["eps"] = format_g17(eps);
    cfg["t_end"] = format_g17(t_end);
    cfg["dt"] = format_g17(dt);
    cfg["stride"] = std::to_string(stride);
    json extra;
    extra["step_halving_error"] = halving;
    extra["blew_up"] = blew_up;
    write_manifest(common.out_dir, "reduce", cfg, {"reduce.csv"}, extra);
  }
};

struct SimulateCmd {
  CommonOpts common;
  double current = 20.0;
  double gamma_offset = 0.01;
  double dt = 1e-3;
  double t_end = 100.0;
  std::string init = "u1";
  std::uint64_t seed = 0;
  int stride = 100;
  bool linear = false;

  void run() const {
    ensure_out_dir(common.out_dir);
    SimConfig cfg;
    cfg.n = common.n;
    cfg.bc = parse_bc(common.bc);
    cfg.current = current;
    cfg.gamma_offset = gamma_offset;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.init = init;
    cfg.seed = seed;
    cfg.stride = stride;
    cfg.nonlinear = !linear;

    Trajectory traj = simulate(cfg);
    SimReport rep = analyze(traj);

    json files = json::array();
    std::vector<std::string> outputs;
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
      const Snapshot& s = traj.snapshots[i];
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%06zu.csv", i);
      SnapshotData data;
      Vec phi = electric_potential(traj.grid, s.state);
      for (int k = 0; k < traj.grid.n(); ++k) {
        data.x.push_back(traj.grid.nodes()(k));
        data.psi.push_back(s.state.psi(k));
        data.phi.push_back(phi(k));
      }
      write_snapshot_csv(fs::path(common.out_dir) / name, data);
      outputs.push_back(name);
      files.push_back({{"file", name},
                       {"t", s.state.t},
                       {"l2_norm", s.obs.l2_norm},
                       {"h1_norm", s.obs.h1_norm},
                       {"re_psi0", s.obs.psi_at_0.real()},
                       {"im_psi0", s.obs.psi_at_0.imag()},
                       {"current_dev", s.obs.current_dev}});
    }

    json traj_json;
    traj_json["tool"] = kToolVersion;
    traj_json["n"] = common.n;
    traj_json["bc"] = common.bc;
    traj_json["I"] = current;
    traj_json["gamma"] = traj.gamma;
    traj_json["gamma_offset"] = gamma_offset;
    traj_json["dt"] = dt;
    traj_json["stride"] = stride;
    traj_json["aborted"] = traj.aborted;
    traj_json["snapshots"] = files;
    traj_json["report"] = {{"amplitude_max", rep.amplitude_max},
                           {"psi0_amplitude", rep.psi0_amplitude},
                           {"period", rep.period},
                           {"period_std", rep.period_std},
                           {"crossings", rep.crossings},
                           {"current_dev_max", rep.current_dev_max},
                           {"final_max_abs", rep.final_max_abs},
                           {"steady", rep.steady}};
    std::ofstream tj(fs::path(common.out_dir) / "trajectory.json");
    tj << traj_json.dump(2) << "\n";
    outputs.push_back("trajectory.json");

    ConfigEcho cecho = common.echo();
    cecho["I"] = format_g17(current);
    cecho["gamma_offset"] = format_g17(gamma_offset);
    cecho["dt"] = format_g17(dt);
    cecho["t_end"] = format_g17(t_end);
    cecho["init"] = init;
    cecho["seed"] = std::to_string(seed);
    cecho["stride"] = std::to_string(stride);
    cecho["linear"] = linear ? "true" : "false";
    write_manifest(common.out_dir, "simulate", cecho, outputs,
                   traj_json["report"]);
  }
};

struct PscCmd {
  CommonOpts common;
  std::string traj_path;
  double threshold = 0.0;
  double current = -1.0;

  void run() const {
    ensure_out_dir(common.out_dir);
    json extra;
    std::vector<std::string> outputs;

    if (!traj_path.empty()) {
      std::ifstream in(traj_path);
      if (!in) throw InvalidInput("psc: cannot open '" + traj_path + "'");
      json tj = json::parse(in);
      Grid grid = Grid::chebyshev(tj.at("n").get<int>(),
                                  parse_bc(tj.at("bc").get<std::string>()));
      Trajectory traj{grid};
      traj.current = tj.at("I").get<double>();
      traj.gamma = tj.at("gamma").get<double>();
      traj.dt = tj.at("dt").get<double>();
      traj.aborted = tj.at("aborted").get<bool>();
      fs::path base = fs::path(traj_path).parent_path();
      for (const auto& f : tj.at("snapshots")) {
        SnapshotData data =
            read_snapshot_csv(base / f.at("file").get<std::string>());
        WireState s;
        s.t = f.at("t").get<double>();
        s.current = traj.current;
        s.gamma = traj.gamma;
        s.psi.resize(grid.n());
        for (int k = 0; k < grid.n(); ++k) s.psi(k) = data.psi[k];
        Observables obs;
        obs.psi_at_0 = grid.interpolate_at(s.psi, 0.0);
        traj.snapshots.push_back({std::move(s), obs});
      }

      auto events = detect_pscs(traj, threshold);
      std::vector<std::vector<std::string>> rows;
      for (const auto& e : events)
        rows.push_back({format_g17(e.t), format_g17(e.x),
                        std::to_string(e.winding), format_g17(e.min_abs_psi)});
      write_csv(fs::path(common.out_dir) / "psc.csv",
                {"t", "x", "winding", "min_abs_psi"}, rows);
      outputs.push_back("psc.csv");
      extra["events"] = events.size();
    }

    if (current >= 0.0) {
      Grid grid = common.grid();
      extra["re_u1_slope_at_0"] = leading_mode_slope_at_zero(grid, current);
    }
    if (traj_path.empty() && current < 0.0)
      throw InvalidInput("psc: provide --traj and/or --I");

    ConfigEcho cfg = common.echo();
    cfg["traj"] = traj_path;
    cfg["threshold"] = format_g17(threshold);
    if (current >= 0.0) cfg["I"] = format_g17(current);
    write_manifest(common.out_dir, "psc", cfg, outputs, extra);
  }
};

struct PhaseDiagramCmd {
  CommonOpts common;
  double lo = 0.5, hi = 20.0;
  int scan_n = 40;

  void run() const {
    ensure_out_dir(common.out_dir);
    Grid grid = common.grid();

    // collision current from the tracked scan
    SpectrumScan scan = scan_spectrum(grid, lo, hi, scan_n, 2, common.workers);
    double ic = -1.0;
    for (auto& [ell, v] : scan.collisions)
      if (ell == 1) ic = v;

    // I_k from the sign change of Re chi11 below the collision
    double ik = -1.0;
    if (ic > 0) {
      double prev_i = -1.0, prev_chi = 0.0;
      for (int s = 0; s <= 40; ++s) {
        double current = lo + (std::min(ic - 0.05, hi) - lo) * s / 40.0;
        double chi;
        try {
          chi = chi_coefficients(grid, current).chi11.real();
        } catch (const DegenerateNormalization&) {
          continue;
        }
        if (prev_i > 0 && prev_chi < 0.0 && chi > 0.0) {
          ik = find_Ik(grid, prev_i, current);
          break;
        }
        prev_i = current;
        prev_chi = chi;
      }
    }

    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < scan.currents.size(); ++i) {
      double current = scan.currents[i];
      std::string regime = "S_stable";
      if (ik > 0 && current > ik) regime = "S_unstable";
      if (ic > 0 && current > ic) regime = "P";
      rows.push_back({format_g17(current),
                      format_g17(scan.tracks[0][i].real()), regime});
    }
    write_csv(fs::path(common.out_dir) / "phase_diagram.csv",
              {"I", "gamma1", "regime"}, rows);

    json extra;
    extra["I_c"] = ic > 0 ? json(ic) : json();
    extra["I_k"] = ik > 0 ? json(ik) : json();
    ConfigEcho cfg = common.echo();
    cfg["bracket_lo"] = format_g17(lo);
    cfg["bracket_hi"] = format_g17(hi);
    cfg["scan_n"] = std::to_string(scan_n);
    write_manifest(common.out_dir, "phase-diagram", cfg,
                   {"phase_diagram.csv"}, extra);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D superconducting-wire workbench: spectra, collisions, "
               "bifurcation coefficients, reduced dynamics, PDE runs and "
               "phase-slip detection"};
  app.require_subcommand(1);

  SpectrumCmd spectrum;
  auto* sub_spectrum = app.add_subcommand("spectrum", "eigenvalues at one current");
  spectrum.common.attach(sub_spectrum);
  sub_spectrum->add_option("--I", spectrum.current, "applied current")
      ->capture_default_str();
  sub_spectrum->add_option("--k", spectrum.k, "number of eigenpairs")
      ->capture_default_str();

  ScanCmd scan;
  auto* sub_scan = app.add_subcommand("spectrum-scan",
                                      "eigenvalue tracks over a current range");
  scan.common.attach(sub_scan, true);
  sub_scan->add_option("--bracket_lo", scan.lo, "scan range start")
      ->capture_default_str();
  sub_scan->add_option("--bracket_hi", scan.hi, "scan range end")
      ->capture_default_str();
  sub_scan->add_option("--scan_n", scan.scan_n, "scan samples")
      ->capture_default_str();
  sub_scan->add_option("--k", scan.k, "tracked eigenvalues")
      ->capture_default_str();
  sub_scan->add_flag("--asymptotic", scan.asymptotic,
                     "add large-current asymptotic columns");

  CollideCmd collide;
  auto* sub_collide =
      app.add_subcommand("collide", "locate an eigenvalue collision");
  collide.common.attach(sub_collide);
  sub_collide->add_option("--bracket_lo", collide.lo, "bracket start")
      ->capture_default_str();
  sub_collide->add_option("--bracket_hi", collide.hi, "bracket end")
      ->capture_default_str();
  sub_collide->add_option("--ell", collide.ell, "pair index (1 = leading)")
      ->capture_default_str();
  sub_collide->add_flag("--expand", collide.expand,
                        "also compute the collision expansion");

  ChiScanCmd chi;
  auto* sub_chi = app.add_subcommand("chi-scan",
                                     "cubic coefficients over a current range");
  chi.common.attach(sub_chi, true);
  sub_chi->add_option("--bracket_lo", chi.lo, "scan range start")
      ->capture_default_str();
  sub_chi->add_option("--bracket_hi", chi.hi, "scan range end")
      ->capture_default_str();
  sub_chi->add_option("--scan_n", chi.scan_n, "scan samples")
      ->capture_default_str();

  BranchCmd branch;
  auto* sub_branch =
      app.add_subcommand("branch", "bifurcating branch prediction");
  branch.common.attach(sub_branch);
  sub_branch->add_option("--I", branch.current, "applied current")
      ->capture_default_str();
  sub_branch->add_option("--eps", branch.eps, "distance past the transition")
      ->capture_default_str();

  ReduceCmd reduce;
  auto* sub_reduce =
      app.add_subcommand("reduce", "integrate the reduced amplitude systems");
  reduce.common.attach(sub_reduce);
  sub_reduce->add_option("--system", reduce.system, "alpha|rg|polar")
      ->capture_default_str();
  sub_reduce->add_option("--I", reduce.current, "applied current")
      ->capture_default_str();
  sub_reduce->add_option("--eps", reduce.eps, "bifurcation parameter")
      ->capture_default_str();
  sub_reduce->add_option("--t_end", reduce.t_end, "integration time")
      ->capture_default_str();
  sub_reduce->add_option("--dt", reduce.dt, "step size")
      ->capture_default_str();
  sub_reduce->add_option("--stride", reduce.stride, "output stride")
      ->capture_default_str();

  SimulateCmd sim;
  auto* sub_sim = app.add_subcommand("simulate", "full PDE evolution");
  sim.common.attach(sub_sim);
  sub_sim->add_option("--I", sim.current, "applied current")
      ->capture_default_str();
  sub_sim->add_option("--gamma_offset", sim.gamma_offset,
                      "Gamma - Re lambda_1")
      ->capture_default_str();
  sub_sim->add_option("--dt", sim.dt, "time step")->capture_default_str();
  sub_sim->add_option("--t_end", sim.t_end, "final time")
      ->capture_default_str();
  sub_sim->add_option("--init", sim.init,
                      "u1|v1v2|random_pt|random|file:<path>, optional :scale")
      ->capture_default_str();
  sub_sim->add_option("--seed", sim.seed, "random seed")
      ->capture_default_str();
  sub_sim->add_option("--stride", sim.stride, "snapshot stride (steps)")
      ->capture_default_str();
  sub_sim->add_flag("--linear", sim.linear, "disable the nonlinearity");

  PscCmd psc;
  auto* sub_psc =
      app.add_subcommand("psc", "detect phase-slip centers in a trajectory");
  psc.common.attach(sub_psc);
  sub_psc->add_option("--traj", psc.traj_path, "trajectory.json from simulate");
  sub_psc->add_option("--threshold", psc.threshold,
                      "detection threshold (<= 0: auto)")
      ->capture_default_str();
  sub_psc->add_option("--I", psc.current,
                      "also report Re u1'(0) at this current");

  PhaseDiagramCmd phase;
  auto* sub_phase = app.add_subcommand("phase-diagram",
                                       "transition curve and regime labels");
  phase.common.attach(sub_phase, true);
  sub_phase->add_option("--bracket_lo", phase.lo, "current range start")
      ->capture_default_str();
  sub_phase->add_option("--bracket_hi", phase.hi, "current range end")
      ->capture_default_str();
  sub_phase->add_option("--scan_n", phase.scan_n, "scan samples")
      ->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config_args(app, args);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(int(cargs.size()), cargs.data());

    if (*sub_spectrum) spectrum.run();
    if (*sub_scan) scan.run();
    if (*sub_collide) collide.run();
    if (*sub_chi) chi.run();
    if (*sub_branch) branch.run();
    if (*sub_reduce) reduce.run();
    if (*sub_sim) sim.run();
    if (*sub_psc) psc.run();
    if (*sub_phase) phase.run();
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
