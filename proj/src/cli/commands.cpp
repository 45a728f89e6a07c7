#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "cli/config.hpp"
#include "cli/manifest.hpp"
#include "vqnac/berry.hpp"
#include "vqnac/dynamics.hpp"
#include "vqnac/error.hpp"
#include "vqnac/nac.hpp"
#include "vqnac/oracle.hpp"
#include "vqnac/response.hpp"
#include "vqnac/shotcost.hpp"
#include "vqnac/spline.hpp"
#include "vqnac/ssvqe.hpp"

namespace vqnac::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
  const RunOptions& opt;
  ConfigFile cfg;
  RunManifest manifest;
  std::uint64_t seed = 7;
  std::ostream& log;
  bool flagged = false;

  Measurement measurement() const {
    if (opt.mode == "shots") return Measurement::with_shots(opt.shots, seed);
    return Measurement::exact();
  }
  bool shots() const { return opt.mode == "shots"; }
  void warn(const std::string& w) {
    manifest.warnings.push_back(w);
    log << "warning: " << w << '\n';
  }
  std::ofstream open(const std::string& name) {
    std::ofstream f(fs::path(opt.out_dir) / name);
    if (!f) throw ConfigError(opt.out_dir + "/" + name + ": cannot open for writing");
    f.precision(17);
    manifest.add_output(name);
    return f;
  }
};

std::string csv_text(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::vector<double> grid_values(const json& j, const std::string& where) {
  if (!j.contains("grid")) throw ConfigError(where + ": missing 'grid'");
  const json& g = j["grid"];
  check_keys(g, {"param", "values", "start", "stop", "points"}, where + ".grid");
  if (g.contains("values")) return get_numbers(g, "values", where + ".grid");
  const double a = get_number(g, "start", where + ".grid");
  const double b = get_number(g, "stop", where + ".grid");
  const int n = get_int(g, "points", where + ".grid");
  if (n < 1) throw ConfigError(where + ".grid.points: must be >= 1");
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

// ---------------------------------------------------------------- nac-scan

void cmd_nac_scan(Context& ctx) {
  const json& j = ctx.cfg.root;
  const std::string W = ctx.cfg.path.string();
  check_keys(j, {"family", "family_args", "ansatz", "ssvqe", "grid", "R_base", "pairs", "quantities", "masses",
                 "oracle", "fd_step", "fd_step2", "seed", "surface_table"},
             W);
  FamilySpec fam = family_from(ctx.cfg, j, W);
  const HamiltonianFamily& f = fam.family;
  ctx.manifest.add_fixture(fam.id);
  AnsatzSpec ans = ansatz_from(ctx.cfg, j, f.n_qubits(), W);
  ctx.manifest.add_fixture(ans.id);
  SsvqeConfig scfg = ssvqe_from(j, ctx.seed, W);
  try {
    scfg.validate(f.n_qubits());
  } catch (const Error& e) {
    throw ConfigError(W + ".ssvqe: " + e.what());
  }
  const int M = scfg.levels();
  const int param = j.contains("grid") ? get_int(j["grid"], "param", W + ".grid", 0) : 0;
  if (param < 0 || param >= f.n_params()) throw ConfigError(W + ".grid.param: out of range");
  const std::vector<double> xs = grid_values(j, W);
  Eigen::VectorXd base = Eigen::VectorXd::Zero(f.n_params());
  if (j.contains("R_base")) {
    const auto b = get_numbers(j, "R_base", W);
    if (static_cast<int>(b.size()) != f.n_params()) throw ConfigError(W + ".R_base: need one value per parameter");
    for (int i = 0; i < f.n_params(); ++i) base[i] = b[static_cast<std::size_t>(i)];
  }
  std::vector<std::pair<int, int>> pairs;
  if (j.contains("pairs")) {
    for (const auto& p : j["pairs"]) {
      if (!p.is_array() || p.size() != 2) throw ConfigError(W + ".pairs: expected [k, l] entries");
      const int k = p[0].get<int>(), l = p[1].get<int>();
      if (k < 0 || l < 0 || k >= M || l >= M || k == l) throw ConfigError(W + ".pairs: invalid pair");
      pairs.emplace_back(k, l);
    }
  } else {
    for (int k = 0; k < M; ++k) {
      for (int l = k + 1; l < M; ++l) pairs.emplace_back(k, l);
    }
  }
  std::vector<std::string> quantities{"one_nac"};
  if (j.contains("quantities")) {
    quantities.clear();
    for (const auto& q : j["quantities"]) {
      const std::string s = q.get<std::string>();
      if (s != "one_nac" && s != "two_nac" && s != "dboc") throw ConfigError(W + ".quantities: unknown '" + s + "'");
      quantities.push_back(s);
    }
  }
  auto wants = [&](const std::string& q) { return std::find(quantities.begin(), quantities.end(), q) != quantities.end(); };
  std::vector<double> masses(static_cast<std::size_t>(f.n_params()), 1.0);
  if (j.contains("masses")) {
    masses = get_numbers(j, "masses", W);
    if (static_cast<int>(masses.size()) != f.n_params()) throw ConfigError(W + ".masses: need one mass per parameter");
  }
  const bool with_oracle = j.value("oracle", false) && f.n_qubits() <= oracle::kMaxDenseQubits;
  const double h1 = get_number(j, "fd_step", W, 1e-4);
  const double h2 = get_number(j, "fd_step2", W, 1e-3);
  const bool surface = j.value("surface_table", true) && M >= 2 && f.n_params() == 1 && xs.size() >= 4;

  std::vector<Eigen::VectorXd> path;
  for (double x : xs) {
    Eigen::VectorXd R = base;
    R[param] = x;
    path.push_back(R);
  }
  const std::vector<EigensolveResult> results = continue_along_path(f, path, ans.circuit, scfg);
  const Objective obj = make_objective(ans.circuit, scfg);
  Measurement meas = ctx.measurement();
  const std::string mode = ctx.opt.mode;

  std::ofstream nac = ctx.open("nac_scan.csv");
  nac << "R,k,l,I,re,im,gap,mode,seed,quantity,oracle_re,oracle_im\n";
  std::ofstream en = ctx.open("energies.csv");
  en << "R,level,energy,exact,converged,grad_norm,sign_flip\n";
  auto row = [&](double x, int k, int l, int I, cplx v, double gap, const std::string& q, cplx o) {
    nac << x << ',' << k << ',' << l << ',' << I << ',' << v.real() << ',' << v.imag() << ',' << gap << ',' << mode
        << ',' << ctx.seed << ',' << q << ',' << o.real() << ',' << o.imag() << '\n';
  };
  const cplx no_oracle(kNaN, kNaN);

  SurfaceTable table;
  table.length_unit = f.length_unit();
  table.energy_unit = f.energy_unit();
  table.provenance = ctx.shots() ? "vqe-shots" : "vqe-exact";
  std::vector<double> sign(static_cast<std::size_t>(M), 1.0);
  std::vector<State> prev_states;

  for (std::size_t p = 0; p < results.size(); ++p) {
    const EigensolveResult& r = results[p];
    const double x = xs[p];
    if (!r.converged) {
      ctx.flagged = true;
      ctx.warn("SSVQE not converged at R = " + std::to_string(x) + " (gradient " + std::to_string(r.grad_norm) + ")");
    }
    Eigen::VectorXd exact_e;
    if (f.n_qubits() <= oracle::kMaxDenseQubits) exact_e = oracle::exact_spectrum(f.eval(r.R)).eigenvalues;
    for (int k = 0; k < M; ++k) {
      en << x << ',' << k << ',' << r.energies[k] << ',' << (exact_e.size() > k ? exact_e[k] : kNaN) << ','
         << r.converged << ',' << r.grad_norm << ',' << r.sign_flip << '\n';
    }
    SolvedPoint sp{ans.circuit, scfg, r};
    std::vector<State> states;
    for (int k = 0; k < M; ++k) states.push_back(level_state(ans.circuit, r, scfg, k));
    if (!prev_states.empty()) {
      for (int k = 0; k < M; ++k) {
        if (std::real(inner_product(prev_states[static_cast<std::size_t>(k)], states[static_cast<std::size_t>(k)])) < 0.0) {
          sign[static_cast<std::size_t>(k)] = -sign[static_cast<std::size_t>(k)];
        }
      }
    }
    prev_states = states;
    auto vec = [&](int k) { return states[static_cast<std::size_t>(k)].amplitudes(); };

    double d01 = kNaN;
    if (wants("one_nac")) {
      for (auto [k, l] : pairs) {
        const double gap = r.energies[k] - r.energies[l];
        for (int I = 0; I < f.n_params(); ++I) {
          cplx v(kNaN, kNaN);
          try {
            v = one_nac(sp, f, I, k, l, meas);
          } catch (const NearDegeneracyError& e) {
            ctx.flagged = true;
            ctx.warn(std::string("R = ") + std::to_string(x) + ": " + e.what());
          }
          cplx o = no_oracle;
          if (with_oracle) {
            try {
              o = oracle::fd_nac(f, r.R, I, k, l, 1, h1, vec(k), vec(l));
            } catch (const OracleInvalid&) {
            }
          }
          row(x, k, l, I, v, gap, "one_nac", o);
          if (k == 0 && l == 1 && I == 0) d01 = v.real() * sign[0] * sign[1];
        }
      }
    }
    if (wants("two_nac") || wants("dboc")) {
      ThetaResponse resp;
      bool ok = true;
      try {
        resp = solve_theta_response(obj, r, f, r.R, true);
      } catch (const NumericalError& e) {
        ok = false;
        ctx.flagged = true;
        ctx.warn(std::string("R = ") + std::to_string(x) + ": " + e.what());
      }
      if (ok && resp.truncated > 0 && p == 0) {
        ctx.log << "note: Hessian pseudo-inverse truncated " << resp.truncated << " direction(s)\n";
      }
      if (wants("two_nac")) {
        for (auto [k, l] : pairs) {
          const double gap = r.energies[k] - r.energies[l];
          for (int I = 0; I < f.n_params(); ++I) {
            const cplx v = ok ? two_nac(sp, resp, I, k, l, meas) : cplx(kNaN, kNaN);
            cplx o = no_oracle;
            if (with_oracle) {
              try {
                o = oracle::fd_nac(f, r.R, I, k, l, 2, h2, vec(k), vec(l));
              } catch (const OracleInvalid&) {
              }
            }
            row(x, k, l, I, v, gap, "two_nac", o);
          }
        }
      }
      if (wants("dboc")) {
        for (int k = 0; k < M; ++k) {
          const double v = ok ? dboc(sp, resp, masses, k, meas) : kNaN;
          cplx o = no_oracle;
          if (with_oracle) {
            try {
              double s = 0.0;
              for (int I = 0; I < f.n_params(); ++I) {
                s += oracle::fd_nac(f, r.R, I, k, k, 2, h2, vec(k), vec(k)).real() / (2.0 * masses[static_cast<std::size_t>(I)]);
              }
              o = s;
            } catch (const OracleInvalid&) {
            }
          }
          row(x, k, k, -1, v, 0.0, "dboc", o);
        }
      }
    }
    if (surface) {
      table.R.push_back(x);
      table.E0.push_back(r.energies[0]);
      table.E1.push_back(r.energies[1]);
      table.d01.push_back(d01);
    }
  }
  nac.close();
  en.close();
  if (surface && wants("one_nac")) {
    bool finite = true;
    for (double d : table.d01) finite = finite && std::isfinite(d);
    try {
      if (!finite) throw InputError("coupling missing at some grid points");
      save_surface_table(table, (fs::path(ctx.opt.out_dir) / "surface.csv").string());
      ctx.manifest.add_output("surface.csv");
      ctx.manifest.add_output("surface.csv.units.json");
    } catch (const InputError& e) {
      ctx.warn(std::string("surface table not written: ") + e.what());
    }
  }
}

// ---------------------------------------------------------------- berry-sweep

void cmd_berry_sweep(Context& ctx) {
  const json& j = ctx.cfg.root;
  const std::string W = ctx.cfg.path.string();
  check_keys(j, {"family", "family_args", "deltas", "K", "methods", "ansatz", "ssvqe", "overlap", "loop_param", "seed",
                 "max_jump"},
             W);
  const int K = get_int(j, "K", W, 100);
  if (K < 3) throw ConfigError(W + ".K: need K >= 3");
  std::vector<BerryMethod> methods{BerryMethod::line_integral, BerryMethod::fukui_hatsugai};
  if (j.contains("methods")) {
    methods.clear();
    for (const auto& m : j["methods"]) {
      try {
        methods.push_back(parse_berry_method(m.get<std::string>()));
      } catch (const InputError& e) {
        throw ConfigError(W + ".methods: " + e.what());
      }
    }
  }
  BerryOptions bo;
  try {
    bo.overlap = parse_overlap_mode(get_string(j, "overlap", W, ctx.shots() ? "hadamard" : "direct"));
  } catch (const InputError& e) {
    throw ConfigError(W + ".overlap: " + e.what());
  }
  bo.max_jump = get_number(j, "max_jump", W, bo.max_jump);
  const std::string family_name = j.value("family", std::string("builtin:twisted_spin"));
  const bool spin = family_name == "builtin:twisted_spin";
  std::vector<double> deltas{kNaN};
  if (spin) deltas = get_numbers(j, "deltas", W);
  SsvqeConfig scfg = ssvqe_from(j, ctx.seed, W);

  std::ofstream out = ctx.open("berry_sweep.csv");
  out << "Delta,K,method,Pi_C,endpoint_overlap,mismatch,stable,oracle,converged,max_jump,diagnostics\n";
  Measurement meas = ctx.measurement();
  for (double delta : deltas) {
    HamiltonianFamily f;
    if (spin) {
      f = builtin_twisted_spin_family(delta);
      ctx.manifest.add_fixture("builtin:twisted_spin");
    } else {
      FamilySpec fs_ = family_from(ctx.cfg, j, W);
      f = fs_.family;
      ctx.manifest.add_fixture(fs_.id);
    }
    AnsatzSpec ans = ansatz_from(ctx.cfg, j, f.n_qubits(), W);
    ctx.manifest.add_fixture(ans.id);
    try {
      scfg.validate(f.n_qubits());
    } catch (const Error& e) {
      throw ConfigError(W + ".ssvqe: " + e.what());
    }
    const int lp = get_int(j, "loop_param", W, 0);
    if (lp < 0 || lp >= f.n_params()) throw ConfigError(W + ".loop_param: out of range");
    const std::vector<Eigen::VectorXd> loop = angle_loop(K, f.n_params(), lp);
    for (BerryMethod m : methods) {
      bo.method = m;
      LoopResult lr = berry_phase(f, loop, ans.circuit, scfg, bo, meas);
      std::string diag = lr.diagnostics;
      if (K < 10) diag = "coarse discretization (K = " + std::to_string(K) + "); " + diag;
      if (!lr.all_converged) {
        ctx.flagged = true;
        ctx.warn("SSVQE not converged on the loop for Delta = " + std::to_string(delta));
      }
      if (!lr.stable) ctx.warn("Berry phase unstable for Delta = " + std::to_string(delta) + ": " + lr.diagnostics);
      out << delta << ',' << K << ',' << to_string(m) << ',' << lr.pi_c << ',' << std::abs(lr.endpoint_overlap) << ','
          << lr.mismatch << ',' << (lr.stable ? 1 : 0) << ',' << lr.oracle << ',' << (lr.all_converged ? 1 : 0) << ','
          << lr.max_jump << ',' << csv_text(diag) << '\n';
      ctx.log << "Delta " << delta << " " << to_string(m) << ": Pi_C = " << lr.pi_c << (lr.stable ? "" : " (unstable)")
              << '\n';
    }
  }
}

// ---------------------------------------------------------------- fssh

void cmd_fssh(Context& ctx) {
  const json& j = ctx.cfg.root;
  const std::string W = ctx.cfg.path.string();
  check_keys(j, {"surface", "R0", "kinetic_energy", "zero_point_surface", "active", "dt_fs", "t_max_fs", "mass",
                 "trajectories", "velocity_sign", "substeps", "energy_tol", "write_trajectories", "record_every", "seed"},
             W);
  const fs::path sp = ctx.cfg.resolve(get_string(j, "surface", W));
  if (!fs::exists(sp)) throw ConfigError(W + ".surface: file not found: " + sp.string());
  const SurfaceTable table = load_surface_table(sp.string());
  ctx.manifest.add_fixture(sp.string());
  const SurfaceSplines s = spline_fit(table);
  FsshConfig fc;
  fc.mass = get_number(j, "mass", W, fc.mass);
  if (j.contains("R0") && j["R0"].is_string()) {
    const std::string v = j["R0"].get<std::string>();
    if (v != "minimum") throw ConfigError(W + ".R0: expected a number or \"minimum\"");
    fc.R0 = surface_minimum(table, get_int(j, "zero_point_surface", W, 0));
  } else {
    fc.R0 = get_number(j, "R0", W);
  }
  if (j.contains("kinetic_energy") && j["kinetic_energy"].is_string()) {
    if (j["kinetic_energy"].get<std::string>() != "zero_point") {
      throw ConfigError(W + ".kinetic_energy: expected a number or \"zero_point\"");
    }
    fc.kinetic_energy = harmonic_zero_point(table, fc.mass, get_int(j, "zero_point_surface", W, 0));
  } else {
    fc.kinetic_energy = get_number(j, "kinetic_energy", W, 0.0);
  }
  fc.active = get_int(j, "active", W, 1);
  fc.dt_fs = get_number(j, "dt_fs", W, fc.dt_fs);
  fc.t_max_fs = get_number(j, "t_max_fs", W, fc.t_max_fs);
  fc.velocity_sign = get_int(j, "velocity_sign", W, 0);
  fc.substeps = get_int(j, "substeps", W, fc.substeps);
  fc.energy_tol = get_number(j, "energy_tol", W, fc.energy_tol);
  fc.record_every = get_int(j, "record_every", W, 1);
  fc.seed = ctx.seed;
  try {
    fc.validate();
  } catch (const InputError& e) {
    throw ConfigError(W + ": " + e.what());
  }
  const int n = get_int(j, "trajectories", W, 1);
  if (n < 1) throw ConfigError(W + ".trajectories: must be >= 1");
  const int n_write = std::min(n, get_int(j, "write_trajectories", W, 1));
  const EnsembleSummary es = fssh_ensemble(s, fc, n, true);

  std::ofstream ens = ctx.open("fssh_ensemble.csv");
  ens << "trajectory,seed,velocity_sign,accepted_hops,frustrated_hops,final_active,final_t,final_R,dissociated,"
         "max_norm_drift,max_energy_drift\n";
  for (std::size_t i = 0; i < es.trajectories.size(); ++i) {
    const Trajectory& t = es.trajectories[i];
    const TrajectoryState& last = t.states.back();
    ens << i << ',' << t.seed << ',' << t.velocity_sign << ',' << t.accepted_hops << ',' << t.frustrated_hops << ','
        << last.active << ',' << last.t_fs << ',' << last.R << ',' << (t.dissociated ? 1 : 0) << ',' << t.max_norm_drift
        << ',' << t.max_energy_drift << '\n';
    if (static_cast<int>(i) < n_write) {
      char name[64];
      std::snprintf(name, sizeof name, "trajectory_%04zu.csv", i);
      write_trajectory_csv(t, (fs::path(ctx.opt.out_dir) / name).string());
      ctx.manifest.add_output(name);
    }
  }
  std::ofstream sum = ctx.open("fssh_summary.csv");
  sum << "trajectories,hopped,hop_fraction,predicted,sigma,dissociated,population0,population1,R0,kinetic_energy,dt_fs\n";
  sum << es.n_trajectories << ',' << es.hopped << ',' << es.hop_fraction << ',' << es.predicted << ',' << es.sigma << ','
      << es.dissociated << ',' << es.final_population[0] << ',' << es.final_population[1] << ',' << fc.R0 << ','
      << fc.kinetic_energy << ',' << fc.dt_fs << '\n';
  ctx.log << "hop fraction " << es.hop_fraction << " (quadrature " << es.predicted << " +- " << es.sigma << ")\n";
}

// ---------------------------------------------------------------- shot-cost

void cmd_shot_cost(Context& ctx) {
  const json& j = ctx.cfg.root;
  const std::string W = ctx.cfg.path.string();
  check_keys(j, {"base", "sweep", "seed"}, W);
  const CostInput base = cost_input_from(j.contains("base") ? j["base"] : json::object(), W + ".base");
  if (!j.contains("sweep")) throw ConfigError(W + ": missing 'sweep'");
  const json& sw = j["sweep"];
  check_keys(sw, {"dimension", "values"}, W + ".sweep");
  const std::string dim = get_string(sw, "dimension", W + ".sweep");
  const std::vector<double> values = get_numbers(sw, "values", W + ".sweep");
  std::ofstream out = ctx.open("shot_cost.csv");
  out << "dimension,value,one_nac_analytic,one_nac_fd,one_nac_fd_h_opt,two_nac_analytic,two_nac_fd,two_nac_fd_h_opt,"
         "berry_analytic,berry_fd\n";
  for (double v : values) {
    CostInput c = base;
    if (dim == "N_x") c.N_x = static_cast<int>(v);
    else if (dim == "N_theta") c.N_theta = static_cast<int>(v);
    else if (dim == "N_H") c.N_H = static_cast<int>(v);
    else if (dim == "K") c.K = static_cast<int>(v);
    else if (dim == "epsilon") c.epsilon = v;
    else if (dim == "delta") c.delta = v;
    else if (dim == "gap") c.gap = v;
    else if (dim == "T") c.T = v;
    else throw ConfigError(W + ".sweep.dimension: unsupported '" + dim + "'");
    try {
      c.validate();
    } catch (const InputError& e) {
      throw ConfigError(W + ".sweep: value " + std::to_string(v) + ": " + e.what());
    }
    const FdCount one_fd = shots_one_nac_fd(c);
    const FdCount two_fd = shots_two_nac_fd(c, two_nac_fd_optimal_step(c.epsilon, c.M4));
    out << dim << ',' << v << ',' << shots_one_nac_analytic(c).count << ',' << one_fd.regime_count << ','
        << one_fd.h_opt << ',' << shots_two_nac(c, CostRoute::analytic).count << ','
        << shots_two_nac(c, CostRoute::fd).count << ',' << two_fd.h_opt << ','
        << shots_berry(c, CostRoute::analytic).count << ',' << shots_berry(c, CostRoute::fd).count << '\n';
  }
}

}  // namespace

int run_command(const RunOptions& opt, std::ostream& log, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<Context> ctx;
  int code = kExitOk;
  try {
    if (opt.mode != "exact" && opt.mode != "shots") throw ConfigError("--mode must be exact or shots");
    if (opt.mode == "shots" && opt.shots < 1) throw ConfigError("--shots must be positive");
    ctx.emplace(Context{opt, load_config(opt.config_path), {}, 7, log});
    const json& root = ctx->cfg.root;
    if (opt.seed) {
      ctx->seed = *opt.seed;
    } else if (root.contains("seed")) {
      if (!root["seed"].is_number_unsigned()) throw ConfigError(opt.config_path + ".seed: expected a non-negative integer");
      ctx->seed = root["seed"].get<std::uint64_t>();
    }
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw ConfigError(opt.out_dir + ": cannot create output directory: " + ec.message());
    RunManifest& m = ctx->manifest;
    m.command = opt.command;
    m.config_path = opt.config_path;
    m.seed = ctx->seed;
    m.output_dir = opt.out_dir;
    m.version = tool_version();
    m.mode = opt.mode;
    m.shots = opt.mode == "shots" ? opt.shots : 0;
    m.allow_unconverged = opt.allow_unconverged;
    if (opt.command == "nac-scan") cmd_nac_scan(*ctx);
    else if (opt.command == "berry-sweep") cmd_berry_sweep(*ctx);
    else if (opt.command == "fssh") cmd_fssh(*ctx);
    else if (opt.command == "shot-cost") cmd_shot_cost(*ctx);
    else throw ConfigError("unknown command '" + opt.command + "'");
    if (ctx->flagged && !opt.allow_unconverged) {
      err << "error: non-convergence flagged (see warnings); rerun with --allow-unconverged to accept\n";
      code = kExitNumerical;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitConfig;
  } catch (const LoadError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitConfig;
  } catch (const InputError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    code = kExitNumerical;
  }
  if (ctx && !ctx->manifest.command.empty()) {
    ctx->manifest.exit_code = code;
    ctx->manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
      ctx->manifest.write();
    } catch (const std::exception& e) {
      err << "could not write manifest: " << e.what() << '\n';
    }
  }
  return code;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Variational nonadiabatic-coupling and Berry-phase toolkit"};
  app.require_subcommand(1);
  RunOptions opt;
  std::uint64_t seed = 0;
  for (const char* name : {"nac-scan", "berry-sweep", "fssh", "shot-cost"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON config file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--mode", opt.mode, "exact or shots")->check(CLI::IsMember({"exact", "shots"}));
    sub->add_option("--shots", opt.shots, "shots per measured term");
    sub->add_flag("--allow-unconverged", opt.allow_unconverged, "exit 0 despite flagged non-convergence");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  CLI::App* used = app.get_subcommands().front();
  opt.command = used->get_name();
  if (used->count("--seed") > 0) opt.seed = seed;
  return run_command(opt, std::cout, std::cerr);
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("vqnac");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace vqnac::cli
