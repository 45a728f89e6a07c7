#include "vqnac/spline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vqnac/error.hpp"

namespace vqnac {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw InputError("spline knots and values differ in length");
  if (n < 4) throw InputError("spline needs at least 4 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw InputError("spline data must be finite");
    if (i > 0 && !(x_[i] > x_[i - 1])) throw InputError("spline grid must be strictly increasing");
  }
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
  auto h = [&](Eigen::Index i) { return x_[static_cast<std::size_t>(i + 1)] - x_[static_cast<std::size_t>(i)]; };
  auto slope = [&](Eigen::Index i) {
    return (y_[static_cast<std::size_t>(i + 1)] - y_[static_cast<std::size_t>(i)]) / h(i);
  };
  // continuous third derivative across the second and penultimate knots
  A(0, 0) = h(1);
  A(0, 1) = -(h(0) + h(1));
  A(0, 2) = h(0);
  A(N - 1, N - 3) = h(N - 2);
  A(N - 1, N - 2) = -(h(N - 3) + h(N - 2));
  A(N - 1, N - 1) = h(N - 3);
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    A(i, i - 1) = h(i - 1);
    A(i, i) = 2.0 * (h(i - 1) + h(i));
    A(i, i + 1) = h(i);
    b[i] = 6.0 * (slope(i) - slope(i - 1));
  }
  const Eigen::VectorXd m = A.partialPivLu().solve(b);
  m_.assign(m.data(), m.data() + N);
}

std::size_t CubicSpline::interval(double x) const {
  const double slack = 1e-12 * std::max(1.0, x_.back() - x_.front());
  if (x < x_.front() - slack || x > x_.back() + slack) {
    throw InputError("spline evaluated outside its grid at " + std::to_string(x));
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::eval(double x, int order) const {
  if (x_.empty()) throw InputError("spline is empty");
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - x;
  const double b = x - x_[i];
  const double mi = m_[i], mj = m_[i + 1];
  const double ci = y_[i] / h - mi * h / 6.0;
  const double cj = y_[i + 1] / h - mj * h / 6.0;
  switch (order) {
    case 0: return mi * a * a * a / (6.0 * h) + mj * b * b * b / (6.0 * h) + ci * a + cj * b;
    case 1: return -mi * a * a / (2.0 * h) + mj * b * b / (2.0 * h) - ci + cj;
    case 2: return mi * a / h + mj * b / h;
    case 3: return (mj - mi) / h;
    default: throw InputError("spline derivative order must be 0..3");
  }
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

void SurfaceTable::validate() const {
  const std::size_t n = R.size();
  if (E0.size() != n || E1.size() != n || d01.size() != n) throw InputError("surface table columns differ in length");
  if (n < 4) throw InputError("surface table needs at least 4 grid points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(R[i]) || !std::isfinite(E0[i]) || !std::isfinite(E1[i]) || !std::isfinite(d01[i])) {
      throw InputError("surface table row " + std::to_string(i) + " has a non-finite value");
    }
    if (i > 0 && !(R[i] > R[i - 1])) throw InputError("surface table grid must be strictly increasing");
    if (E1[i] < E0[i] - 1e-12) throw InputError("surface table row " + std::to_string(i) + " has E1 < E0");
  }
  bohr_per_length();
  hartree_per_energy();
}

double SurfaceTable::bohr_per_length() const {
  const std::string u = lower(length_unit);
  if (u == "bohr" || u == "a0" || u == "au") return 1.0;
  if (u == "angstrom" || u == "a" || u == "ang") return kBohrPerAngstrom;
  throw InputError("unknown length unit '" + length_unit + "'");
}

double SurfaceTable::hartree_per_energy() const {
  const std::string u = lower(energy_unit);
  if (u == "hartree" || u == "eh" || u == "au") return 1.0;
  if (u == "ev") return 1.0 / kEvPerHartree;
  throw InputError("unknown energy unit '" + energy_unit + "'");
}

std::string units_sidecar_path(const std::string& table_path) { return table_path + ".units.json"; }

SurfaceTable load_surface_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path + ": cannot open surface table");
  SurfaceTable t;
  std::string line;
  if (!std::getline(in, line)) throw LoadError(path + ": empty file");
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r'; }), line.end());
  if (line != "R,E0,E1,d01") throw LoadError(path + ": header must be R,E0,E1,d01");
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw LoadError(path + ": line " + std::to_string(row) + ": not a number '" + cell + "'");
      }
    }
    if (v.size() != 4) throw LoadError(path + ": line " + std::to_string(row) + ": expected 4 columns");
    t.R.push_back(v[0]);
    t.E0.push_back(v[1]);
    t.E1.push_back(v[2]);
    t.d01.push_back(v[3]);
  }
  const std::string side = units_sidecar_path(path);
  std::ifstream us(side);
  if (!us) throw LoadError(side + ": units sidecar missing");
  try {
    const nlohmann::json j = nlohmann::json::parse(us);
    t.length_unit = j.at("length").get<std::string>();
    t.energy_unit = j.value("energy", std::string("hartree"));
    t.provenance = j.value("provenance", std::string("exact"));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(side + ": " + e.what());
  }
  try {
    t.validate();
  } catch (const InputError& e) {
    throw LoadError(path + ": " + e.what());
  }
  return t;
}

void save_surface_table(const SurfaceTable& t, const std::string& path) {
  t.validate();
  std::ofstream out(path);
  if (!out) throw LoadError(path + ": cannot write surface table");
  out.precision(17);
  out << "R,E0,E1,d01\n";
  for (std::size_t i = 0; i < t.R.size(); ++i) out << t.R[i] << ',' << t.E0[i] << ',' << t.E1[i] << ',' << t.d01[i] << '\n';
  std::ofstream side(units_sidecar_path(path));
  nlohmann::json j = {{"length", t.length_unit}, {"energy", t.energy_unit}, {"provenance", t.provenance}};
  side << j.dump(2) << '\n';
}

double SurfaceSplines::energy(int surface, double R_bohr, int order) const {
  if (surface == 0) return E0.eval(R_bohr, order);
  if (surface == 1) return E1.eval(R_bohr, order);
  throw InputError("surface index must be 0 or 1");
}

SurfaceSplines spline_fit(const SurfaceTable& table) {
  table.validate();
  const double L = table.bohr_per_length();
  const double En = table.hartree_per_energy();
  std::vector<double> r(table.R.size()), e0(r.size()), e1(r.size()), d(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = table.R[i] * L;
    e0[i] = table.E0[i] * En;
    e1[i] = table.E1[i] * En;
    d[i] = table.d01[i] / L;
  }
  SurfaceSplines s;
  s.E0 = CubicSpline(r, e0);
  s.E1 = CubicSpline(r, e1);
  s.d01 = CubicSpline(r, d);
  s.length_scale = L;
  return s;
}

}  // namespace vqnac
