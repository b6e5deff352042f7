#include "fraclap/solvers.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <json.hpp>

namespace fraclap {
namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

DirichletSolution solve_dirichlet_problem(const FractionalProblemSpec& spec) {
  if (!(spec.s > 0.0 && spec.s < 1.0))
    throw std::invalid_argument("solve_dirichlet_problem: s in (0,1)");
  DirichletSolution sol;
  auto mesh = std::make_shared<TriMesh>(uniform_square_mesh(spec.M));
  sol.mesh = mesh;

  sol.v = solve_dirichlet_lift(*mesh, spec.g, spec.solver);

  const std::size_t prisms =
      static_cast<std::size_t>(mesh->num_triangles()) * spec.M;
  const double Y = spec.Y > 0.0 ? spec.Y : default_truncation_height(prisms);
  const GradedInterval axis = graded_interval(spec.M, spec.s, Y, spec.gamma_safety);
  const CylinderMesh cyl = tensor_cylinder(*mesh, axis);
  sol.num_prisms = cyl.num_prisms();

  sol.ext = solve_truncated_extension(cyl, spec.f, spec.s, spec.solver);
  sol.w = sol.ext.trace;
  sol.u = sol.v + sol.w;
  return sol;
}

NeumannSolution solve_neumann_problem(const FractionalProblemSpec& spec,
                                      const EigenBasis* basis) {
  if (!(spec.s > 0.0 && spec.s < 1.0))
    throw std::invalid_argument("solve_neumann_problem: s in (0,1)");
  NeumannSolution sol;
  std::shared_ptr<const TriMesh> mesh;
  if (basis) {
    if (basis->rep != EigenBasis::Rep::Fem || basis->kind != LaplaceKind::Neumann)
      throw std::invalid_argument("solve_neumann_problem: basis must be discrete Neumann");
    mesh = basis->mesh;
  } else {
    mesh = std::make_shared<TriMesh>(uniform_square_mesh(spec.M));
  }
  sol.mesh = mesh;

  const double area = mesh->total_area();
  const double int_f = integrate(*mesh, spec.f);
  const double int_g = integrate_boundary(*mesh, spec.g.value);
  if (std::abs(int_f + int_g) > 1e-10)
    throw CompatibilityViolation("solvability requires int f + int_boundary g = 0, got " +
                                 std::to_string(int_f + int_g));

  sol.v = solve_neumann_lift(*mesh, spec.g, int_f / area, spec.solver);

  EigenBasis local;
  if (!basis) {
    const int m = std::min(spec.m, mesh->num_nodes());
    local = fem_eigenbasis(*mesh, LaplaceKind::Neumann, m);
    basis = &local;
  }

  // load of the shifted right side f + |Omega|^{-1} int_boundary g
  const double shift = int_g / area;
  Eigen::VectorXd F = assemble_load(*mesh, spec.f);
  F += shift * (basis->mass * Eigen::VectorXd::Ones(mesh->num_nodes()));
  const Eigen::VectorXd coeffs = basis->vectors.transpose() * F;

  sol.w = Eigen::VectorXd::Zero(mesh->num_nodes());
  double resolved = 0.0;
  for (int k = 0; k < basis->count(); ++k) {
    const double mu = basis->eigenvalues[k];
    if (mu < 1e-9) continue;  // constant mode carries no zero-mean content
    sol.w += std::pow(mu, -spec.s) * coeffs[k] * basis->vectors.col(k);
    resolved += coeffs[k] * coeffs[k];
  }
  // exact zero-mean normalization
  const Eigen::VectorXd M1 = basis->mass * Eigen::VectorXd::Ones(mesh->num_nodes());
  sol.w -= (M1.dot(sol.w) / area) * Eigen::VectorXd::Ones(mesh->num_nodes());

  // unresolved load: L2 norm of the projected right side minus the retained
  // coefficients, scaled by the last retained eigenvalue
  Eigen::SimplicialLLT<SpMat> mass_llt(basis->mass);
  const double total = F.dot(mass_llt.solve(F));
  const double mu_last = basis->eigenvalues[basis->count() - 1];
  sol.tail_indicator =
      std::pow(std::max(mu_last, 1e-9), -spec.s) * std::sqrt(std::max(0.0, total - resolved));
  sol.tail_warning = sol.tail_indicator > 1e-6;

  sol.u = sol.v + sol.w;
  return sol;
}

Fn2d named_function(const std::string& name) {
  if (name == "zero") return [](double, double) { return 0.0; };
  if (name == "one") return [](double, double) { return 1.0; };
  if (name == "affine") return [](double x, double y) { return x + y; };
  if (name == "sin_product")
    return [](double x, double y) { return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y); };
  if (name == "cos_x1") return [](double x, double) { return 2.0 * std::cos(kPi * x); };
  if (name == "corner_singular")
    return [](double x, double y) {
      const double r = std::hypot(x, y);
      if (r == 0.0) return 0.0;
      return std::pow(r, 0.4999) * std::sin(0.4999 * std::atan2(y, x));
    };
  throw std::invalid_argument("unknown function name: " + name);
}

namespace {

Fn2d parse_function(const nlohmann::json& j) {
  if (j.is_string()) return named_function(j.get<std::string>());
  if (j.is_object()) {
    if (j.contains("poly")) {
      std::vector<std::array<double, 3>> terms;
      for (const auto& t : j.at("poly"))
        terms.push_back({t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()});
      return [terms](double x, double y) {
        double acc = 0.0;
        for (const auto& t : terms) acc += t[0] * std::pow(x, t[1]) * std::pow(y, t[2]);
        return acc;
      };
    }
    if (j.contains("sin_sin")) {
      const int k = j.at("sin_sin").at(0).get<int>(), l = j.at("sin_sin").at(1).get<int>();
      return [k, l](double x, double y) {
        return std::sin(k * kPi * x) * std::sin(l * kPi * y);
      };
    }
    if (j.contains("cos_cos")) {
      const int k = j.at("cos_cos").at(0).get<int>(), l = j.at("cos_cos").at(1).get<int>();
      return [k, l](double x, double y) {
        return std::cos(k * kPi * x) * std::cos(l * kPi * y);
      };
    }
  }
  throw std::invalid_argument("function descriptor must be a name or poly/sin_sin/cos_cos");
}

}  // namespace

FractionalProblemSpec parse_problem_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("problem file is not valid JSON: ") + e.what());
  }
  try {
    FractionalProblemSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirichlet")
      spec.kind = LaplaceKind::Dirichlet;
    else if (kind == "neumann")
      spec.kind = LaplaceKind::Neumann;
    else
      throw std::invalid_argument("kind must be dirichlet or neumann");
    spec.s = j.at("s").get<double>();
    if (!(spec.s > 0.0 && spec.s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    spec.f = parse_function(j.at("f"));
    spec.g.value = parse_function(j.at("g"));
    if (j.at("g") == nlohmann::json("corner_singular")) spec.g.smoothness = Smoothness::Rough;
    spec.M = j.value("M", 8);
    if (spec.M < 2) throw std::invalid_argument("M must be at least 2");
    spec.gamma_safety = j.value("gamma_safety", 1.1);
    spec.Y = j.value("Y", 0.0);
    spec.m = j.value("m", 200);
    if (spec.m < 1) throw std::invalid_argument("m must be positive");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("problem file: ") + e.what());
  }
}

}  // namespace fraclap
