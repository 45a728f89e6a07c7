#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../unit/random_circuit.hpp"
#include "vqnac/berry.hpp"
#include "vqnac/dynamics.hpp"
#include "vqnac/error.hpp"
#include "vqnac/family.hpp"
#include "vqnac/nac.hpp"
#include "vqnac/oracle.hpp"
#include "vqnac/response.hpp"
#include "vqnac/shotcost.hpp"
#include "vqnac/spline.hpp"
#include "vqnac/ssvqe.hpp"

using namespace vqnac;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

Eigen::VectorXd at(double x) {
  Eigen::VectorXd R(1);
  R << x;
  return R;
}

double angular_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

SsvqeConfig levels(std::vector<double> w, std::vector<std::string> refs, int restarts = 4) {
  SsvqeConfig cfg;
  cfg.weights = std::move(w);
  cfg.references = std::move(refs);
  cfg.restarts = restarts;
  return cfg;
}

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", x);
  return b;
}

// ---------------------------------------------------------------------------

void berry_quantization(Check& c, std::ostringstream& info) {
  const auto t0 = Clock::now();
  const ParamCircuit circ = build_ansatz("a_gate", 2, 1);
  const auto loop = angle_loop(100);
  const std::vector<std::pair<double, double>> cases{{-2.0, 0.0}, {-1.5, 0.0}, {-0.5, M_PI},
                                                     {0.0, M_PI}, {1.0, M_PI},  {2.0, M_PI}};
  double worst = 0, worst_fh = 0;
  for (auto [delta, expected] : cases) {
    const HamiltonianFamily f = builtin_twisted_spin_family(delta);
    SsvqeConfig cfg = levels({1.0}, {"01"});
    Measurement m;
    BerryOptions bo;
    const LoopResult li = berry_phase(f, loop, circ, cfg, bo, m);
    bo.method = BerryMethod::fukui_hatsugai;
    const LoopResult fh = berry_phase(f, loop, circ, cfg, bo, m);
    const double e1 = angular_distance(li.pi_c, expected), e2 = angular_distance(fh.pi_c, expected);
    const double e3 = angular_distance(fh.pi_c, oracle::exact_berry(f, loop));
    worst = std::max({worst, e1, e2});
    worst_fh = std::max(worst_fh, e3);
    c.require(e1 < 2e-2 && e2 < 2e-2, "Delta " + std::to_string(delta) + " off by " + fmt(std::max(e1, e2)));
    c.require(e3 < 1e-3, "FH vs exact_berry at Delta " + std::to_string(delta) + " off by " + fmt(e3));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.require(secs < 120, "runtime " + std::to_string(secs) + " s");
  info << "max |Pi_C - target| " << fmt(worst) << ", FH vs exact " << fmt(worst_fh) << ", " << fmt(secs) << " s";
}

void energy_fidelity(Check& c, std::ostringstream& info) {
  struct Case {
    std::string name;
    HamiltonianFamily f;
    ParamCircuit circ;
    SsvqeConfig cfg;
    std::vector<double> xs;
  };
  PauliSum tfim(4);
  for (const char* s : {"ZZII", "IZZI", "IIZZ"}) tfim.add(1.0, parse_pauli(s));
  for (const char* s : {"XIII", "IXII", "IIXI", "IIIX"}) tfim.add(0.7, parse_pauli(s));
  tfim.add(0.3, parse_pauli("ZIII"));
  tfim.add(-0.2, parse_pauli("IIIZ"));
  std::vector<Case> cases;
  cases.push_back({"rotor", builtin_rotor(), build_ansatz("ry_cnot", 1, 0), levels({1.0, 0.5}, {"0", "1"}),
                   {-2.0, 0.0, 1.3}});
  cases.push_back({"crossing/ry_cnot", builtin_avoided_crossing(0.1), build_ansatz("ry_cnot", 2, 4),
                   levels({1.0, 0.5}, {"00", "01"}), {-0.8, 0.0, 0.6}});
  cases.push_back({"crossing/so4", builtin_avoided_crossing(0.1), build_ansatz("so4", 2, 0),
                   levels({4, 3, 2, 1}, {"00", "01", "10", "11"}, 8), {-0.5, 0.3}});
  cases.push_back({"tfim4/so4", builtin_constant(tfim), build_ansatz("so4", 4, 0),
                   levels({1.0, 0.5}, {"0000", "0001"}), {0.0}});
  double worst = 0, worst_bound = 0;
  for (const auto& cs : cases) {
    for (double x : cs.xs) {
      const EigensolveResult r = run_ssvqe(cs.f, at(x), cs.circ, cs.cfg);
      const Eigen::VectorXd e = oracle::exact_spectrum(cs.f.eval(at(x))).eigenvalues;
      double weighted = 0, weighted_exact = 0;
      for (int k = 0; k < cs.cfg.levels(); ++k) {
        worst = std::max(worst, std::abs(r.energies[k] - e[k]));
        weighted += cs.cfg.weights[k] * r.energies[k];
        weighted_exact += cs.cfg.weights[k] * e[k];
      }
      worst_bound = std::max({worst_bound, e[0] - r.energies[0], weighted_exact - weighted});
      c.require(std::abs(r.energies[0] - e[0]) < 1e-7, cs.name + " level error at R = " + std::to_string(x));
    }
  }
  c.require(worst < 1e-7, "max energy error " + fmt(worst));
  c.require(worst_bound < 1e-12, "variational bound violated by " + fmt(worst_bound));
  info << "max |E - E_exact| " << fmt(worst) << ", bound violation " << fmt(std::max(0.0, worst_bound));
}

struct CrossingPoint {
  HamiltonianFamily f;
  SolvedPoint sp;
  ThetaResponse resp;
  Eigen::VectorXcd v0, v1;
};

CrossingPoint solve_crossing(double x, const std::string& ansatz, const std::optional<Eigen::VectorXd>& warm) {
  CrossingPoint p{builtin_avoided_crossing(0.1), {}, {}, {}, {}};
  p.sp.circuit = ansatz == "so4" ? build_ansatz("so4", 2, 0) : build_ansatz("ry_cnot", 2, 4);
  p.sp.cfg = levels({1.0, 0.5}, {"00", "01"}, 6);
  const Objective obj = make_objective(p.sp.circuit, p.sp.cfg);
  p.sp.result = newton_refine(obj, p.f, at(x), run_ssvqe(p.f, at(x), p.sp.circuit, p.sp.cfg, warm));
  p.resp = solve_theta_response(obj, p.sp.result, p.f, at(x));
  p.v0 = level_state(p.sp.circuit, p.sp.result, p.sp.cfg, 0).amplitudes();
  p.v1 = level_state(p.sp.circuit, p.sp.result, p.sp.cfg, 1).amplitudes();
  return p;
}

cplx fd2(const CrossingPoint& p, double x, int k, int l, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const cplx c1 = oracle::fd_nac(p.f, at(x), 0, k, l, 2, 2e-3, a, b);
  const cplx c2 = oracle::fd_nac(p.f, at(x), 0, k, l, 2, 1e-3, a, b);
  return (4.0 * c2 - c1) / 3.0;
}

void one_nac_correctness(Check& c, std::ostringstream& info) {
  const auto t0 = Clock::now();
  const HamiltonianFamily rotor = builtin_rotor();
  const ParamCircuit rc = build_ansatz("ry_cnot", 1, 0);
  const SsvqeConfig rcfg = levels({1.0, 0.5}, {"0", "1"});
  double worst_rotor = 0;
  for (int i = 0; i <= 12; ++i) {
    const double x = -3.0 + 0.5 * i;
    SolvedPoint sp{rc, rcfg, run_ssvqe(rotor, at(x), rc, rcfg)};
    Measurement m;
    worst_rotor = std::max(worst_rotor, std::abs(std::abs(one_nac(sp, rotor, 0, 0, 1, m)) - 0.5));
  }
  c.require(worst_rotor < 1e-6, "rotor |d01| off by " + fmt(worst_rotor));
  double worst = 0;
  for (const char* ansatz : {"ry_cnot", "so4"}) {
    std::optional<Eigen::VectorXd> warm;
    for (double x : {-1.0, -0.6, -0.3, 0.3, 0.6, 1.0}) {
      const CrossingPoint p = solve_crossing(x, ansatz, warm);
      warm = p.sp.result.theta_star;
      Measurement m;
      const cplx d = one_nac(p.sp, p.f, 0, 0, 1, m);
      const cplx fd = oracle::fd_nac(p.f, at(x), 0, 0, 1, 1, 1e-4, p.v0, p.v1);
      worst = std::max(worst, std::abs(d - fd));
    }
  }
  c.require(worst < 1e-5, "avoided crossing vs fd_nac off by " + fmt(worst));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.require(secs < 60, "runtime " + std::to_string(secs) + " s");
  info << "rotor " << fmt(worst_rotor) << ", crossing " << fmt(worst) << ", " << fmt(secs) << " s";
}

void two_nac_correctness(Check& c, std::ostringstream& info) {
  const HamiltonianFamily rotor = builtin_rotor();
  const ParamCircuit rc = build_ansatz("ry_cnot", 1, 0);
  const SsvqeConfig rcfg = levels({1.0, 0.5}, {"0", "1"});
  double off = 0, diag = 0, db = 0;
  for (double x : {-1.0, 0.0, 0.8}) {
    SolvedPoint sp{rc, rcfg, run_ssvqe(rotor, at(x), rc, rcfg)};
    const ThetaResponse resp = solve_theta_response(make_objective(rc, rcfg), sp.result, rotor, at(x));
    Measurement m;
    off = std::max(off, std::abs(two_nac(sp, resp, 0, 0, 1, m)));
    // two_nac returns -<chi|d^2 chi>
    diag = std::max(diag, std::abs(-two_nac(sp, resp, 0, 0, 0, m) - cplx(-0.25, 0)));
    db = std::max(db, std::abs(dboc(sp, resp, {1.0}, 0, m) - 0.125));
  }
  c.require(off < 1e-5, "rotor off-diagonal " + fmt(off));
  c.require(diag < 1e-5, "rotor diagonal " + fmt(diag));
  c.require(db < 1e-5, "rotor DBOC " + fmt(db));
  double worst = 0;
  for (const char* ansatz : {"ry_cnot", "so4"}) {
    std::optional<Eigen::VectorXd> warm;
    for (double x : {-0.8, -0.3, 0.0, 0.4, 0.9}) {
      const CrossingPoint p = solve_crossing(x, ansatz, warm);
      warm = p.sp.result.theta_star;
      Measurement m;
      worst = std::max(worst, std::abs(two_nac(p.sp, p.resp, 0, 0, 1, m) - fd2(p, x, 0, 1, p.v0, p.v1)));
      worst = std::max(worst, std::abs(two_nac(p.sp, p.resp, 0, 0, 0, m) - fd2(p, x, 0, 0, p.v0, p.v0)));
      worst = std::max(worst, std::abs(two_nac(p.sp, p.resp, 0, 1, 1, m) - fd2(p, x, 1, 1, p.v1, p.v1)));
    }
  }
  c.require(worst < 1e-4, "avoided crossing vs order-2 fd_nac off by " + fmt(worst));
  std::mt19937_64 rng(51);
  double shortcut = 0;
  for (int t = 0; t < 50; ++t) {
    const ParamCircuit circ = fuzz::random_circuit(2, 4, rng);
    const Eigen::VectorXd ang = circ.gate_angles(fuzz::random_vector(circ.n_theta(), rng));
    const int a = static_cast<int>(rng() % circ.n_pgates());
    Measurement m;
    const cplx v = overlap_second_deriv(basis_state(2, "01"), circ, ang, a, a, m);
    shortcut = std::max(shortcut, std::abs(v - cplx(-circ.g(a) * circ.g(a), 0)));
  }
  c.require(shortcut == 0.0, "diagonal shortcut deviates by " + fmt(shortcut));
  info << "rotor " << fmt(std::max({off, diag, db})) << ", crossing " << fmt(worst) << ", shortcut "
       << fmt(shortcut);
}

void decomposition_equivalence(Check& c, std::ostringstream& info) {
  std::mt19937_64 rng(61);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 2;
    const ParamCircuit circ = fuzz::random_circuit(n, 3 + t % 3, rng);
    const Eigen::VectorXd th = fuzz::random_vector(circ.n_theta(), rng);
    const Eigen::VectorXd ang = circ.gate_angles(th);
    const int a = static_cast<int>(rng() % circ.n_pgates());
    const int b = static_cast<int>(rng() % circ.n_pgates());
    const PauliSum A = fuzz::random_observable(n, 4, rng);
    const std::uint64_t ki = rng() % (1u << n);
    const std::uint64_t li = (ki + 1 + rng() % ((1u << n) - 1)) % (1u << n);
    const State k = basis_state_index(n, ki), l = basis_state_index(n, li);
    Measurement m;
    auto upd = [&](cplx x, cplx y) { worst = std::max(worst, std::abs(x - y)); };
    upd(transition_amplitude(circ, th, A, k, l, m), transition_amplitude_direct(circ, th, A, k, l));
    upd(overlap_first_deriv_gate(circ, ang, k, l, a, m), overlap_first_direct(circ, ang, k, l, a));
    upd(overlap_first_deriv_gate(circ, ang, k, k, a, m), overlap_first_direct(circ, ang, k, k, a));
    upd(overlap_second_deriv(k, circ, ang, a, b, m), overlap_second_direct(circ, ang, k, k, a, b));
    upd(pair_second_deriv(circ, ang, k, l, a, b, m), overlap_second_direct(circ, ang, k, l, a, b));
    const Eigen::VectorXd th2 = fuzz::random_vector(circ.n_theta(), rng);
    upd(overlap_estimate(circ, k, th, th2, OverlapMode::hadamard, m),
        inner_product(circ.prepare(th, k), circ.prepare(th2, k)));
  }
  c.require(worst < 1e-10, "max deviation " + fmt(worst));
  info << "200 draws, max deviation " << fmt(worst);
}

void shot_noise(Check& c, std::ostringstream& info) {
  const ParamCircuit circ = build_ansatz("ry_cnot", 2, 1);
  Eigen::VectorXd th(4);
  th << 0.3, -0.8, 1.1, 0.5;
  const PauliSum A = PauliSum::from_strings({{0.7, "ZI"}, {-0.4, "XX"}, {0.25, "YZ"}});
  const State k = basis_state(2, "00"), l = basis_state(2, "01");
  const cplx exact = transition_amplitude_direct(circ, th, A, k, l);
  const long long shots = 8192;
  auto var = [&](cplx phase) {
    const State s = circ.prepare(th, superpose(k, l, phase));
    double v = 0;
    for (const auto& t : A.terms()) {
      const double e = pauli_expectation(s, t.pauli);
      v += t.coeff * t.coeff * (1 - e * e);
    }
    return v / shots;
  };
  const double se_re = 0.5 * std::sqrt(var(1.0) + var(-1.0));
  const double se_im = 0.5 * std::sqrt(var(cplx(0, 1)) + var(cplx(0, -1)));
  int inside = 0;
  for (int t = 0; t < 200; ++t) {
    Measurement m = Measurement::with_shots(shots, 5000 + t);
    const cplx v = transition_amplitude(circ, th, A, k, l, m);
    if (std::abs(v.real() - exact.real()) < 5 * se_re && std::abs(v.imag() - exact.imag()) < 5 * se_im) ++inside;
  }
  c.require(inside >= 198, std::to_string(inside) + "/200 within 5 SE");
  info << inside << "/200 trials within 5 SE (SE re " << fmt(se_re) << ", im " << fmt(se_im) << ")";
}

void response_fidelity(Check& c, std::ostringstream& info) {
  const HamiltonianFamily f = builtin_avoided_crossing(0.1);
  const ParamCircuit circ = build_ansatz("so4", 2, 0);
  const SsvqeConfig cfg = levels({4, 3, 2, 1}, {"00", "01", "10", "11"}, 8);
  const Objective obj = make_objective(circ, cfg);
  double w1 = 0, w2 = 0;
  int trunc = 0;
  for (double x : {-0.5, 0.3}) {
    const EigensolveResult r = newton_refine(obj, f, at(x), run_ssvqe(f, at(x), circ, cfg));
    const ThetaResponse resp = solve_theta_response(obj, r, f, at(x));
    trunc += resp.truncated;
    auto solve = [&](double h) {
      return newton_refine(obj, f, at(x + h), run_ssvqe(f, at(x + h), circ, cfg, r.theta_star)).theta_star;
    };
    const Eigen::VectorXd d1 = (solve(1e-4) - solve(-1e-4)) / 2e-4;
    auto d2 = [&](double h) { return Eigen::VectorXd((solve(h) - 2 * r.theta_star + solve(-h)) / (h * h)); };
    const Eigen::VectorXd d2r = (4 * d2(1e-3) - d2(2e-3)) / 3;
    for (int a = 0; a < circ.n_theta(); ++a) {
      w1 = std::max(w1, std::abs(resp.first(a, 0) - d1[a]));
      w2 = std::max(w2, std::abs(resp.second[a](0, 0) - d2r[a]));
    }
  }
  c.require(trunc == 0, "non-redundant fixture truncated");
  c.require(w1 < 1e-5, "first-order response off by " + fmt(w1));
  c.require(w2 < 1e-4, "second-order response off by " + fmt(w2));
  // redundant ansatz
  double nac_err = 0;
  int red_trunc = 0;
  for (double x : {-0.6, 0.5}) {
    const CrossingPoint p = solve_crossing(x, "ry_cnot", std::nullopt);
    red_trunc = std::max(red_trunc, p.resp.truncated);
    Measurement m;
    nac_err = std::max(nac_err, std::abs(two_nac(p.sp, p.resp, 0, 0, 1, m) - fd2(p, x, 0, 1, p.v0, p.v1)));
    nac_err = std::max(nac_err, std::abs(one_nac(p.sp, p.f, 0, 0, 1, m) -
                                         oracle::fd_nac(p.f, at(x), 0, 0, 1, 1, 1e-4, p.v0, p.v1)));
  }
  c.require(red_trunc > 0, "redundant ansatz did not report truncation");
  c.require(nac_err < 1e-4, "redundant ansatz NAC off by " + fmt(nac_err));
  info << "first " << fmt(w1) << ", second " << fmt(w2) << "; redundant: truncated " << red_trunc << ", NAC "
       << fmt(nac_err);
}

void fssh_properties(Check& c, std::ostringstream& info) {
  const auto t0 = Clock::now();
  const std::string dir = VQNAC_FIXTURE_DIR;
  const SurfaceSplines crossing = spline_fit(load_surface_table(dir + "/crossing.csv"));
  FsshConfig cfg;
  cfg.R0 = -8.0;
  cfg.kinetic_energy = 0.05;
  cfg.active = 1;
  cfg.dt_fs = 0.05;
  cfg.t_max_fs = 100.0;
  cfg.velocity_sign = 1;
  cfg.energy_tol = 1e-5;
  cfg.seed = 11;
  const EnsembleSummary e = fssh_ensemble(crossing, cfg, 500, true);
  double norm_rate = 0, energy_rate = 0;
  for (const auto& t : e.trajectories) {
    const double ksteps = std::max(1.0, (t.states.size() - 1) / 1000.0);
    norm_rate = std::max(norm_rate, t.max_norm_drift / ksteps);
    energy_rate = std::max(energy_rate, t.max_energy_drift / ksteps);
  }
  c.require(norm_rate < 1e-6, "norm drift " + fmt(norm_rate) + " per 1e3 steps");
  c.require(energy_rate < 1e-6, "energy drift " + fmt(energy_rate) + " per 1e3 steps");
  const double z = std::abs(e.hop_fraction - e.predicted) / e.sigma;
  c.require(z < 3.0, "hop fraction " + fmt(e.hop_fraction) + " vs " + fmt(e.predicted) + " (" + fmt(z) + " sigma)");
  const SurfaceSplines flat = spline_fit(load_surface_table(dir + "/harmonic_uncoupled.csv"));
  FsshConfig zc;
  zc.R0 = 0.5;
  zc.kinetic_energy = 0.01;
  zc.dt_fs = 0.05;
  zc.t_max_fs = 100.0;
  const EnsembleSummary z0 = fssh_ensemble(flat, zc, 100, false);
  c.require(z0.hopped == 0, "zero coupling produced hops");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.require(secs < 120, "runtime " + std::to_string(secs) + " s");
  info << "norm " << fmt(norm_rate) << ", energy " << fmt(energy_rate) << " per 1e3 steps; hops "
       << fmt(e.hop_fraction) << " vs " << fmt(e.predicted) << " +- " << fmt(e.sigma) << "; " << fmt(secs) << " s";
}

void shot_cost_scaling(Check& c, std::ostringstream& info) {
  CostInput base;
  base.N_H = 5;
  base.N_theta = 6;
  base.N_x = 2;
  base.K = 100;
  base.epsilon = 1e-3;
  base.delta = 0.05;
  base.dH_norm = {1.0, 0.7};
  base.A = {0.4, 0.9};
  base.gap = 0.3;
  base.M3 = 2.0;
  base.M4 = 3.0;
  CostInput wide = base;
  wide.N_x = 4;
  wide.dH_norm = {1.0, 0.7, 1.0, 0.7};
  wide.A = {0.4, 0.9, 0.4, 0.9};
  c.require(shots_one_nac_analytic(wide).count == shots_one_nac_analytic(base).count, "1-NAC analytic depends on N_x");
  c.require(std::abs(shots_one_nac_fd(wide).count / shots_one_nac_fd(base).count - 2.0) < 1e-12,
            "1-NAC fd not linear in N_x");
  const double h2 = two_nac_fd_optimal_step(base.epsilon, base.M4);
  c.require(std::abs(shots_two_nac_fd(wide, h2).count / shots_two_nac_fd(base, h2).count - 4.0) < 1e-12,
            "2-NAC fd not quadratic in N_x");
  CostInput half = base;
  half.epsilon /= 2;
  auto r4 = [](double a, double b) { return std::abs(a / b - 4.0) < 1e-12; };
  c.require(r4(shots_one_nac_analytic(half).count, shots_one_nac_analytic(base).count), "1-NAC analytic eps scaling");
  c.require(r4(shots_one_nac_fd(half).regime_count, shots_one_nac_fd(base).regime_count), "1-NAC fd eps scaling");
  c.require(r4(shots_two_nac(half, CostRoute::analytic).count, shots_two_nac(base, CostRoute::analytic).count),
            "2-NAC analytic eps scaling");
  c.require(r4(shots_two_nac(half, CostRoute::fd).count, shots_two_nac(base, CostRoute::fd).count),
            "2-NAC fd eps scaling");
  c.require(r4(shots_berry(half, CostRoute::analytic).count, shots_berry(base, CostRoute::analytic).count),
            "Berry analytic eps scaling");
  c.require(r4(shots_berry(half, CostRoute::fd).count, shots_berry(base, CostRoute::fd).count),
            "Berry fd eps scaling");
  c.require(shots_one_nac_fd(base).h_opt == std::sqrt(2 * base.epsilon / base.M3), "1-NAC h_opt");
  c.require(shots_two_nac_fd(base, h2).h_opt == std::sqrt(3 * base.epsilon / base.M4), "2-NAC h_opt");
  info << "N_x and epsilon scalings, optimal steps " << fmt(shots_one_nac_fd(base).h_opt) << " and "
       << fmt(shots_two_nac_fd(base, h2).h_opt);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&, std::ostringstream&)>>> criteria{
      {"Berry-phase quantization", berry_quantization},
      {"SSVQE energy fidelity", energy_fidelity},
      {"1-NAC correctness", one_nac_correctness},
      {"2-NAC/DBOC correctness", two_nac_correctness},
      {"Measurement-decomposition equivalence", decomposition_equivalence},
      {"Shot-noise behavior", shot_noise},
      {"Response-equation fidelity", response_fidelity},
      {"FSSH properties", fssh_properties},
      {"Shot-cost scaling", shot_cost_scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    std::ostringstream info;
    try {
      criteria[i].second(c, info);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), info.str().c_str(),
                c.ok ? "" : " | ", c.detail.str().c_str());
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
