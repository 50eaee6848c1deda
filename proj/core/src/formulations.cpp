#include "lseig/formulations.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>

#include "lseig/quadrature.hpp"

namespace lseig {

BlockPencil build_pencil(const FormulationSpec& spec) {
  if (!spec.mesh) throw std::invalid_argument("build_pencil: null mesh");
  if (spec.tag == Formulation::F1curl && spec.sigma_family != Family::CG1Vec)
    throw std::invalid_argument(
        "build_pencil: the curl-enriched formulation needs tangential "
        "continuity (CG1Vec flux family)");
  if (!is_vector_family(spec.sigma_family))
    throw std::invalid_argument("build_pencil: flux family must be vector-valued");

  auto sigma = build_space(spec.mesh, spec.sigma_family, false);
  auto u = build_space(spec.mesh, Family::CG1, true);
  if (u->n_free == 0)
    throw std::invalid_argument(
        "build_pencil: scalar space has no interior dofs on this mesh");

  BlockPencil p;
  p.tag = spec.tag;
  p.sigma_space = sigma;
  p.u_space = u;
  p.A = assemble(FormKind::MassSigma, *sigma, *sigma);
  p.A += assemble(FormKind::DivDiv, *sigma, *sigma);
  if (spec.tag == Formulation::F1curl)
    p.A += assemble(FormKind::CurlCurl, *sigma, *sigma);
  p.B = assemble(FormKind::GradCoupling, *u, *sigma);
  p.C = assemble(FormKind::Stiffness, *u, *u);
  p.M = assemble(FormKind::MassU, *u, *u);

  if (spec.tag == Formulation::F1 || spec.tag == Formulation::F1star) {
    SparseMat D = assemble(FormKind::UDiv, *sigma, *u);
    if (!verify_transpose_identity(p.B, D))
      throw std::runtime_error("build_pencil: D != -B^T after elimination");
  }
  return p;
}

namespace {

Eigen::VectorXd solve_block(const BlockPencil& p, const Eigen::VectorXd& rhs,
                            double* residual) {
  SparseMat K = p.lhs_block();
  Eigen::SimplicialLDLT<SparseMat> kf(K);
  if (kf.info() != Eigen::Success)
    throw std::runtime_error("source solve: block factorization failed");
  Eigen::VectorXd sol = kf.solve(rhs);
  if (residual) {
    double denom = std::max(1e-300, rhs.norm());
    *residual = (K * sol - rhs).norm() / denom;
  }
  return sol;
}

}  // namespace

SourceSolution apply_discrete_solution_operator(
    const BlockPencil& p, const std::function<double(const Vec2&)>& f) {
  const Mesh& m = *p.sigma_space->mesh;
  const TriQuadRule& rule = tri_rule(5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p.dim());

  if (p.tag == Formulation::LLstar) {
    for (int t = 0; t < m.num_triangles(); ++t) {
      ElementBasis basis(*p.u_space, t);
      double area = m.signed_area(t);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        LocalBasis lb = basis.at(rule.points[q]);
        double w = rule.weights[q] * area * f(m.point(t, rule.points[q]));
        for (int i = 0; i < lb.n; ++i) {
          int fr = p.u_space->free_of_dof[lb.dof[i]];
          if (fr >= 0) rhs[p.n_sigma() + fr] += w * lb.value[i];
        }
      }
    }
  } else {
    for (int t = 0; t < m.num_triangles(); ++t) {
      ElementBasis basis(*p.sigma_space, t);
      double area = m.signed_area(t);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        LocalBasis lb = basis.at(rule.points[q]);
        double w = rule.weights[q] * area * f(m.point(t, rule.points[q]));
        for (int i = 0; i < lb.n; ++i) {
          int fr = p.sigma_space->free_of_dof[lb.dof[i]];
          if (fr >= 0) rhs[fr] -= w * lb.div[i];
        }
      }
    }
  }

  SourceSolution out;
  Eigen::VectorXd sol = solve_block(p, rhs, &out.residual);
  out.sigma = FeFunction{p.sigma_space, sol.head(p.n_sigma())};
  out.u = FeFunction{p.u_space, sol.tail(p.n_u())};
  return out;
}

Eigen::VectorXd apply_discrete_solution_operator(const BlockPencil& p,
                                                 const Eigen::VectorXd& f_coeff) {
  if (f_coeff.size() != p.n_u())
    throw std::invalid_argument("T_h: coefficient size mismatch");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p.dim());
  if (p.tag == Formulation::LLstar) {
    rhs.tail(p.n_u()) = p.M * f_coeff;
  } else {
    // -(f_h, div tau) is exactly the UDiv matrix applied to f.
    SparseMat D = assemble(FormKind::UDiv, *p.sigma_space, *p.u_space);
    rhs.head(p.n_sigma()) = D * f_coeff;
  }
  Eigen::VectorXd sol = solve_block(p, rhs, nullptr);
  return sol.tail(p.n_u());
}

double scalar_l2_inner(const BlockPencil& p, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
  return a.dot(p.M * b);
}

ErrorRecord compute_error_norms(const BlockPencil& p, const EigenPair& pair,
                                const ExactEigenmode& exact, int quad_degree) {
  const Mesh& m = *p.sigma_space->mesh;
  const TriQuadRule& rule = tri_rule(std::max(quad_degree, 4));

  // For LLstar the eigenfunction lives in the recovered fields u = div chi
  // and grad u = grad p - chi; its divergence is not represented at lowest
  // order, so that column is reported as nan.
  const bool llstar = p.tag == Formulation::LLstar;
  LLstarRecovered rec_fields;
  FeFunction uh{p.u_space, pair.u};
  FeFunction sh{p.sigma_space, pair.sigma};
  if (llstar) rec_fields = recover_llstar_eigenfunction(p, pair);

  auto value_at = [&](int t, const std::array<double, 3>& b) {
    return llstar ? eval_value(rec_fields.u, t, b) : eval_value(uh, t, b);
  };
  auto grad_at = [&](int t, const std::array<double, 3>& b) {
    return llstar ? rec_fields.grad_at(t, b) : eval_grad(uh, t, b);
  };
  auto sigma_at = [&](int t, const std::array<double, 3>& b) {
    return llstar ? rec_fields.grad_at(t, b) : eval_vec(sh, t, b);
  };

  // Sign alignment against the exact eigenfunction.
  double inner = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    double area = m.signed_area(t);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      Vec2 x = m.point(t, rule.points[q]);
      inner += rule.weights[q] * area * value_at(t, rule.points[q]) * exact.u(x);
    }
  }
  const double sgn = inner < 0.0 ? -1.0 : 1.0;

  ErrorRecord rec;
  double e_u = 0, e_gu = 0, e_s = 0, e_ds = 0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    double area = m.signed_area(t);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto& b = rule.points[q];
      double w = rule.weights[q] * area;
      Vec2 x = m.point(t, b);
      double du = sgn * value_at(t, b) - exact.u(x);
      Vec2 dgu = sgn * grad_at(t, b) - exact.grad_u(x);
      Vec2 ds = sgn * sigma_at(t, b) - exact.grad_u(x);
      e_u += w * du * du;
      e_gu += w * dgu.squaredNorm();
      e_s += w * ds.squaredNorm();
      if (!llstar) {
        double dds = sgn * eval_div(sh, t, b) - exact.div_sigma(x);
        e_ds += w * dds * dds;
      }
    }
  }
  rec.err_u = std::sqrt(e_u);
  rec.err_grad_u = std::sqrt(e_gu);
  rec.err_sigma = std::sqrt(e_s);
  rec.err_div_sigma =
      llstar ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(e_ds);
  double lambda_h = llstar ? map_llstar_eigenvalue(pair.lambda) : pair.lambda;
  rec.err_lambda = std::abs(lambda_h - exact.lambda);
  return rec;
}

}  // namespace lseig
