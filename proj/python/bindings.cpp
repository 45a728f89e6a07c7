#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli/commands.hpp"
#include "vqnac/ansatz.hpp"
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

namespace py = pybind11;
using namespace vqnac;

namespace {

Measurement make_measurement(std::optional<long long> shots, std::uint64_t seed) {
  return shots ? Measurement::with_shots(*shots, seed) : Measurement::exact();
}

SolvedPoint solve_point(const HamiltonianFamily& f, const Eigen::VectorXd& R, const ParamCircuit& c,
                        const SsvqeConfig& cfg, bool refine) {
  EigensolveResult r = run_ssvqe(f, R, c, cfg);
  if (refine) r = newton_refine(make_objective(c, cfg), f, R, r);
  return SolvedPoint{c, cfg, r};
}

}  // namespace

PYBIND11_MODULE(_vqnac, m) {
  m.attr("__version__") = VQNAC_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<LoadError>(m, "LoadError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<NearDegeneracyError>(m, "NearDegeneracyError", base.ptr());
  py::register_exception<OracleInvalid>(m, "OracleInvalid", base.ptr());
  py::register_exception<GaugeMismatchError>(m, "GaugeMismatchError", base.ptr());
  py::register_exception<StepTooLargeError>(m, "StepTooLargeError", input.ptr());

  py::class_<PauliSum>(m, "PauliSum")
      .def(py::init(&PauliSum::from_strings), py::arg("terms"))
      .def_property_readonly("n_qubits", &PauliSum::n_qubits)
      .def("__len__", &PauliSum::size)
      .def("one_norm", &PauliSum::one_norm)
      .def("coeff", [](const PauliSum& h, const std::string& p) { return h.coeff_of(parse_pauli(p)); })
      .def("scaled", &PauliSum::scaled)
      .def("__add__", [](const PauliSum& a, const PauliSum& b) { return a + b; })
      .def("matrix", [](const PauliSum& h) { return oracle::dense_matrix(h); })
      .def("terms",
           [](const PauliSum& h) {
             std::vector<std::pair<double, std::string>> out;
             for (const auto& t : h.terms()) out.emplace_back(t.coeff, t.pauli.to_string());
             return out;
           })
      .def("__repr__", &PauliSum::to_string);

  py::class_<HamiltonianFamily>(m, "HamiltonianFamily")
      .def_property_readonly("n_qubits", &HamiltonianFamily::n_qubits)
      .def_property_readonly("n_params", &HamiltonianFamily::n_params)
      .def_property_readonly("name", &HamiltonianFamily::name)
      .def("eval", &HamiltonianFamily::eval, py::arg("R"))
      .def("deriv", &HamiltonianFamily::deriv, py::arg("R"), py::arg("I"), py::arg("order") = 1)
      .def("to_json", [](const HamiltonianFamily& f) { return family_to_json(f); })
      .def_static("from_json", [](const std::string& s) { return parse_family_json(s); })
      .def_static("load", &load_family)
      .def_static("builtin", &builtin_family, py::arg("name"), py::arg("delta") = 0.0, py::arg("gap_half") = 0.1);

  m.def("number_operator", &number_operator);
  m.def("spin_squared_operator", &spin_squared_operator);

  py::class_<ParamCircuit>(m, "ParamCircuit")
      .def_property_readonly("n_qubits", &ParamCircuit::n_qubits)
      .def_property_readonly("n_theta", &ParamCircuit::n_theta)
      .def_property_readonly("n_gates", &ParamCircuit::n_pgates)
      .def_property_readonly("kind", &ParamCircuit::kind)
      .def_static("load", &load_circuit)
      .def(
          "state",
          [](const ParamCircuit& c, const Eigen::VectorXd& theta, const std::string& ref) {
            return Eigen::VectorXcd(prepare_state(c, theta, basis_state(c.n_qubits(), ref)).amplitudes());
          },
          py::arg("theta"), py::arg("reference"));
  m.def("build_ansatz", py::overload_cast<const std::string&, int, int>(&build_ansatz), py::arg("kind"),
        py::arg("n_qubits"), py::arg("depth"));

  py::class_<OptOptions>(m, "OptOptions")
      .def(py::init<>())
      .def_readwrite("grad_tol", &OptOptions::grad_tol)
      .def_readwrite("max_iter", &OptOptions::max_iter);

  py::class_<SsvqeConfig>(m, "SsvqeConfig")
      .def(py::init<>())
      .def_readwrite("weights", &SsvqeConfig::weights)
      .def_readwrite("references", &SsvqeConfig::references)
      .def_readwrite("optimizer", &SsvqeConfig::optimizer)
      .def_readwrite("beta_S", &SsvqeConfig::beta_S)
      .def_readwrite("beta_N", &SsvqeConfig::beta_N)
      .def_readwrite("N0", &SsvqeConfig::N0)
      .def_readwrite("restarts", &SsvqeConfig::restarts)
      .def_readwrite("seed", &SsvqeConfig::seed);

  py::class_<EigensolveResult>(m, "EigensolveResult")
      .def_readonly("theta", &EigensolveResult::theta_star)
      .def_readonly("energies", &EigensolveResult::energies)
      .def_readonly("converged", &EigensolveResult::converged)
      .def_readonly("grad_norm", &EigensolveResult::grad_norm)
      .def_readonly("iterations", &EigensolveResult::iterations)
      .def_readonly("sign_flip", &EigensolveResult::sign_flip)
      .def_readonly("max_jump", &EigensolveResult::max_jump)
      .def_readonly("message", &EigensolveResult::message);

  m.def(
      "run_ssvqe",
      [](const HamiltonianFamily& f, const Eigen::VectorXd& R, const ParamCircuit& c, const SsvqeConfig& cfg,
         std::optional<Eigen::VectorXd> theta0) { return run_ssvqe(f, R, c, cfg, theta0); },
      py::arg("family"), py::arg("R"), py::arg("circuit"), py::arg("config"), py::arg("theta0") = py::none());
  m.def("continue_along_path", &continue_along_path, py::arg("family"), py::arg("path"), py::arg("circuit"),
        py::arg("config"));

  py::class_<SolvedPoint>(m, "SolvedPoint")
      .def_readonly("result", &SolvedPoint::result)
      .def_readonly("circuit", &SolvedPoint::circuit)
      .def_readonly("config", &SolvedPoint::cfg)
      .def("state", [](const SolvedPoint& sp, int level) {
        return Eigen::VectorXcd(level_state(sp.circuit, sp.result, sp.cfg, level).amplitudes());
      });
  m.def("solve", &solve_point, py::arg("family"), py::arg("R"), py::arg("circuit"), py::arg("config"),
        py::arg("refine") = true);

  py::class_<ThetaResponse>(m, "ThetaResponse")
      .def_readonly("first", &ThetaResponse::first)
      .def_readonly("second", &ThetaResponse::second)
      .def_readonly("truncated", &ThetaResponse::truncated)
      .def_readonly("condition_number", &ThetaResponse::condition_number)
      .def_readonly("residual_first", &ThetaResponse::residual_first);
  m.def(
      "theta_response",
      [](const SolvedPoint& sp, const HamiltonianFamily& f, bool with_second) {
        return solve_theta_response(make_objective(sp.circuit, sp.cfg), sp.result, f, sp.result.R, with_second);
      },
      py::arg("point"), py::arg("family"), py::arg("with_second") = true);

  m.def(
      "one_nac",
      [](const SolvedPoint& sp, const HamiltonianFamily& f, int I, int k, int l, std::optional<long long> shots,
         std::uint64_t seed) {
        Measurement meas = make_measurement(shots, seed);
        return one_nac(sp, f, I, k, l, meas);
      },
      py::arg("point"), py::arg("family"), py::arg("I"), py::arg("k"), py::arg("l"), py::arg("shots") = py::none(),
      py::arg("seed") = 7);
  m.def(
      "two_nac",
      [](const SolvedPoint& sp, const ThetaResponse& resp, int I, int k, int l, std::optional<long long> shots,
         std::uint64_t seed) {
        Measurement meas = make_measurement(shots, seed);
        return two_nac(sp, resp, I, k, l, meas);
      },
      py::arg("point"), py::arg("response"), py::arg("I"), py::arg("k"), py::arg("l"), py::arg("shots") = py::none(),
      py::arg("seed") = 7);
  m.def(
      "dboc",
      [](const SolvedPoint& sp, const ThetaResponse& resp, const std::vector<double>& masses, int k,
         std::optional<long long> shots, std::uint64_t seed) {
        Measurement meas = make_measurement(shots, seed);
        return dboc(sp, resp, masses, k, meas);
      },
      py::arg("point"), py::arg("response"), py::arg("masses"), py::arg("k"), py::arg("shots") = py::none(),
      py::arg("seed") = 7);

  py::class_<LoopResult>(m, "LoopResult")
      .def_readonly("pi_c", &LoopResult::pi_c)
      .def_readonly("line_integral", &LoopResult::line_integral)
      .def_readonly("endpoint_overlap", &LoopResult::endpoint_overlap)
      .def_readonly("mismatch", &LoopResult::mismatch)
      .def_readonly("stable", &LoopResult::stable)
      .def_readonly("oracle", &LoopResult::oracle)
      .def_readonly("all_converged", &LoopResult::all_converged)
      .def_readonly("diagnostics", &LoopResult::diagnostics);
  m.def(
      "berry_phase",
      [](const HamiltonianFamily& f, int K, const ParamCircuit& c, const SsvqeConfig& cfg, const std::string& method,
         const std::string& overlap, std::optional<long long> shots, std::uint64_t seed) {
        BerryOptions opt;
        opt.method = parse_berry_method(method);
        opt.overlap = parse_overlap_mode(overlap);
        Measurement meas = make_measurement(shots, seed);
        return berry_phase(f, angle_loop(K, f.n_params()), c, cfg, opt, meas);
      },
      py::arg("family"), py::arg("K"), py::arg("circuit"), py::arg("config"), py::arg("method") = "line_integral",
      py::arg("overlap") = "direct", py::arg("shots") = py::none(), py::arg("seed") = 7);

  py::module_ orc = m.def_submodule("oracle");
  orc.def("spectrum", [](const PauliSum& H) {
    const auto sp = oracle::exact_spectrum(H);
    return py::make_tuple(sp.eigenvalues, sp.eigenvectors);
  });
  orc.def(
      "fd_nac",
      [](const HamiltonianFamily& f, const Eigen::VectorXd& R, int I, int k, int l, int order, double h) {
        return oracle::fd_nac(f, R, I, k, l, order, h);
      },
      py::arg("family"), py::arg("R"), py::arg("I"), py::arg("k"), py::arg("l"), py::arg("order") = 1,
      py::arg("h") = 1e-4);
  orc.def("exact_berry", [](const HamiltonianFamily& f, int K) { return oracle::exact_berry(f, angle_loop(K, f.n_params())); });

  py::class_<CostInput>(m, "CostInput")
      .def(py::init<>())
      .def_readwrite("N_H", &CostInput::N_H)
      .def_readwrite("N_theta", &CostInput::N_theta)
      .def_readwrite("N_x", &CostInput::N_x)
      .def_readwrite("K", &CostInput::K)
      .def_readwrite("epsilon", &CostInput::epsilon)
      .def_readwrite("delta", &CostInput::delta)
      .def_readwrite("H_norm", &CostInput::H_norm)
      .def_readwrite("dH_norm", &CostInput::dH_norm)
      .def_readwrite("A", &CostInput::A)
      .def_readwrite("gap", &CostInput::gap)
      .def_readwrite("T", &CostInput::T)
      .def_readwrite("T00", &CostInput::T00)
      .def_readwrite("M3", &CostInput::M3)
      .def_readwrite("M4", &CostInput::M4);
  py::module_ cost = m.def_submodule("shotcost");
  cost.def("hoeffding", &hoeffding_shots);
  cost.def("one_nac_analytic", [](const CostInput& in) { return shots_one_nac_analytic(in).count; });
  cost.def("one_nac_fd", [](const CostInput& in) { return shots_one_nac_fd(in).count; });
  cost.def("two_nac", [](const CostInput& in, bool fd) {
    return shots_two_nac(in, fd ? CostRoute::fd : CostRoute::analytic).count;
  }, py::arg("input"), py::arg("fd") = false);
  cost.def("berry", [](const CostInput& in, bool fd) {
    return shots_berry(in, fd ? CostRoute::fd : CostRoute::analytic).count;
  }, py::arg("input"), py::arg("fd") = false);

  py::class_<FsshConfig>(m, "FsshConfig")
      .def(py::init<>())
      .def_readwrite("R0", &FsshConfig::R0)
      .def_readwrite("kinetic_energy", &FsshConfig::kinetic_energy)
      .def_readwrite("active", &FsshConfig::active)
      .def_readwrite("dt_fs", &FsshConfig::dt_fs)
      .def_readwrite("t_max_fs", &FsshConfig::t_max_fs)
      .def_readwrite("mass", &FsshConfig::mass)
      .def_readwrite("seed", &FsshConfig::seed)
      .def_readwrite("velocity_sign", &FsshConfig::velocity_sign)
      .def_readwrite("energy_tol", &FsshConfig::energy_tol);
  py::class_<SurfaceSplines>(m, "Surfaces")
      .def("energy", &SurfaceSplines::energy, py::arg("surface"), py::arg("R_bohr"), py::arg("order") = 0)
      .def("coupling", &SurfaceSplines::coupling);
  m.def("load_surfaces", [](const std::string& path) { return spline_fit(load_surface_table(path)); });
  py::class_<EnsembleSummary>(m, "EnsembleSummary")
      .def_readonly("n_trajectories", &EnsembleSummary::n_trajectories)
      .def_readonly("hopped", &EnsembleSummary::hopped)
      .def_readonly("hop_fraction", &EnsembleSummary::hop_fraction)
      .def_readonly("predicted", &EnsembleSummary::predicted)
      .def_readonly("sigma", &EnsembleSummary::sigma)
      .def_readonly("final_population", &EnsembleSummary::final_population);
  m.def(
      "fssh_ensemble",
      [](const SurfaceSplines& s, const FsshConfig& cfg, int n) { return fssh_ensemble(s, cfg, n, false); },
      py::arg("surfaces"), py::arg("config"), py::arg("trajectories"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) { return cli::cli_main(args); },
      py::arg("args"));
}
