#pragma once

#include "lseig/eigsolve.hpp"
#include "lseig/exact.hpp"

namespace lseig {

/// Which discrete eigenproblem to assemble: the formulation tag plus the
/// flux family (the scalar space is always CG1 with Dirichlet elimination).
/// F1curl requires CG1Vec (tangential continuity); the others accept
/// RT0, BDM1, or CG1Vec.
struct FormulationSpec {
  Formulation tag = Formulation::F1;
  Family sigma_family = Family::RT0;
  MeshPtr mesh;
};

/// Assembles the block pencil. For F1/F1star the integration-by-parts
/// identity D = -B^T is verified on the assembled matrices (throws
/// std::runtime_error on failure).
BlockPencil build_pencil(const FormulationSpec& spec);

/// Galerkin solution of the underlying source problem: for the FOSLS
/// formulations f enters as -(f, div tau), for LLstar as (f, q).
struct SourceSolution {
  FeFunction sigma;
  FeFunction u;
  double residual = 0.0;  // relative linear-system residual
};
SourceSolution apply_discrete_solution_operator(
    const BlockPencil& p, const std::function<double(const Vec2&)>& f);

/// Discrete solution operator acting on coefficient vectors of the scalar
/// space (used for the self-adjointness checks): returns the coefficients
/// of T_h f for f given by free-dof coefficients.
Eigen::VectorXd apply_discrete_solution_operator(const BlockPencil& p,
                                                 const Eigen::VectorXd& f_coeff);

/// L2 inner product of two scalar-space coefficient vectors.
double scalar_l2_inner(const BlockPencil& p, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b);

struct ErrorRecord {
  double err_u = 0.0;
  double err_grad_u = 0.0;
  double err_sigma = 0.0;
  double err_div_sigma = 0.0;
  double err_lambda = 0.0;
};

/// Quadrature error norms of an eigenpair against an exact mode. The sign of
/// the discrete pair is aligned with the exact eigenfunction before
/// differencing (the pair arrives L2-normalized).
ErrorRecord compute_error_norms(const BlockPencil& p, const EigenPair& pair,
                                const ExactEigenmode& exact, int quad_degree = 5);

}  // namespace lseig
