#pragma once

#include <Eigen/SparseCore>

#include <string>

#include "lseig/fespace.hpp"

namespace lseig {

using SparseMat = Eigen::SparseMatrix<double>;

/// Bilinear forms of the first-order system. Signs follow the block systems:
///   MassSigma     (sigma, tau)
///   DivDiv        (div sigma, div tau)
///   CurlCurl      (curl sigma, curl tau)
///   GradCoupling  -(sigma, grad v)        rows: v,   cols: sigma
///   Stiffness     (grad u, grad v)
///   UDiv          -(u, div tau)           rows: tau, cols: u
///   MassU         (p, q)
enum class FormKind {
  MassSigma,
  DivDiv,
  CurlCurl,
  GradCoupling,
  Stiffness,
  UDiv,
  MassU
};

/// Assembles the form over the mesh shared by both spaces. Integration is
/// exact for the piecewise-polynomial integrands (degree-4 rule against
/// at most P1 x P1 products). Constrained rows/columns are eliminated.
/// Throws std::invalid_argument for incompatible space/form pairings.
SparseMat assemble(FormKind form, const FeSpace& rowspace, const FeSpace& colspace);

/// Checks the integration-by-parts identity D = -B^T that holds when the
/// scalar space carries homogeneous Dirichlet values (B from GradCoupling,
/// D from UDiv). Throws on dimension mismatch.
bool verify_transpose_identity(const SparseMat& B, const SparseMat& D,
                               double tol = 1e-12);

double max_abs_diff_transpose(const SparseMat& B, const SparseMat& D);

/// MatrixMarket coordinate dump (1-based, general symmetry).
void write_matrix_market(const SparseMat& mat, const std::string& path);

}  // namespace lseig
