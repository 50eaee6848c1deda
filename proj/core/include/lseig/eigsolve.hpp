#pragma once

#include <Eigen/Dense>

#include <vector>

#include "lseig/assembly.hpp"

namespace lseig {

enum class Formulation { F1, F1star, LLstar, F1curl };

const char* formulation_name(Formulation f);

/// Blocks of the 2x2 generalized eigenproblem
///   [A B^T; B C] [x; y] = lambda * N [x; y]
/// where N depends on the formulation: [0 -B^T; 0 0] (F1, F1curl),
/// [0 0; -B 0] (F1star), [0 0; 0 M] (LLstar, eigenvalue mu).
/// A acts on the flux space, C on the scalar space; M is the scalar mass
/// matrix and is always assembled (it also normalizes eigenvectors).
struct BlockPencil {
  Formulation tag = Formulation::F1;
  SparseMat A, B, C, M;
  FeSpacePtr sigma_space, u_space;

  int n_sigma() const { return static_cast<int>(A.rows()); }
  int n_u() const { return static_cast<int>(C.rows()); }
  int dim() const { return n_sigma() + n_u(); }

  SparseMat lhs_block() const;  // [A B^T; B C]
  SparseMat rhs_block() const;  // N as above
};

/// Finite eigenpair of the block pencil. For LLstar `lambda` holds the
/// pencil eigenvalue mu_h (map_llstar_eigenvalue converts it). u is
/// normalized to unit L2 norm with the largest-magnitude coefficient
/// positive; sigma is scaled consistently with the block system.
struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd u;      // scalar-space coefficients (free dofs)
  Eigen::VectorXd sigma;  // flux-space coefficients
  double residual = 0.0;  // relative block residual
};

/// Counts of the eigenvalue families of the degenerate pencil:
/// n_infinite_space infinite eigenvalues carried by the unreduced block
/// (dim Sigma_h for F1/LLstar, dim U_h for F1star), n_infinite_kernel those
/// from ker B^T (F1) or ker B (F1star), n_finite the finite ones (rank B).
struct FamilyReport {
  int n_infinite_space = 0;
  int n_infinite_kernel = 0;
  int n_finite = 0;
};

/// Dense symmetric Schur reduction "lhs z = theta rhs z" of the pencil:
///   F1/F1curl: A x = theta B^T C^{-1} B x          (theta = lambda + 1)
///   F1star:    C y = theta B A^{-1} B^T y          (theta = lambda + 1)
///   LLstar:    (C - B A^{-1} B^T) y = theta M y    (theta = mu)
struct SchurReduced {
  Formulation tag;
  Eigen::MatrixXd lhs, rhs;
  double theta_to_lambda(double theta) const {
    return tag == Formulation::LLstar ? theta : theta - 1.0;
  }
};

/// Dense reduction; requires factorizable SPD A (or C). Intended for
/// cross-checks on coarse meshes. Throws std::runtime_error when the SPD
/// factorization fails and std::invalid_argument beyond dim 2000.
SchurReduced schur_reduce(const BlockPencil& p);

/// All finite eigenvalues of a dense Schur reduction, ascending.
std::vector<double> dense_finite_spectrum(const SchurReduced& r);

/// QZ solve of the full block pencil: finite eigenvalues (ascending, by
/// real part), the infinite count (|beta| below a scale-aware threshold)
/// and the largest imaginary part among finite eigenvalues.
struct DensePencilSpectrum {
  std::vector<double> finite;
  int n_infinite = 0;
  double max_imag = 0.0;
};
DensePencilSpectrum dense_full_spectrum(const BlockPencil& p);

/// k smallest finite eigenvalues with recovered block eigenvectors. Uses a
/// dense solve below dimension 2000 and a subspace iteration with sparse
/// LDLT factorizations above. Returns fewer pairs when the finite family is
/// smaller than k.
std::vector<EigenPair> solve_finite_spectrum(const BlockPencil& p, int k);

/// Family classification (dense analysis; guard dim <= 2000). The integer
/// counts come from a rank-revealing decomposition of B and are verified
/// against a dense QZ solve; disagreement throws std::runtime_error.
FamilyReport classify_families(const BlockPencil& p);

/// lambda = (mu + sqrt(mu^2 + 4)) / 2, the inverse of mu = lambda - 1/lambda.
double map_llstar_eigenvalue(double mu);

/// Eigenfunction recovery from an LLstar pair: u = div chi_h (a P0 field)
/// and grad u = grad p_h - chi_h, both scaled by the same factor so that u
/// has unit L2 norm. Zero input yields zero fields.
struct LLstarRecovered {
  FeFunction u;  // P0
  FeFunction p;  // scaled copy of the scalar component
  FeFunction chi;
  Vec2 grad_at(int tri, const std::array<double, 3>& bary) const;
};
LLstarRecovered recover_llstar_eigenfunction(const BlockPencil& p,
                                             const EigenPair& pair);

/// Relative residual ||K v - lambda N v|| / ((||K||_F + |lambda| ||N||_F) ||v||).
double block_residual(const BlockPencil& p, const EigenPair& pair);

/// Deterministic subspace iteration with Rayleigh-Ritz: largest eigenpairs
/// of op, self-adjoint and positive semidefinite with respect to the SPD
/// inner product W. Throws std::runtime_error when not converged.
struct RitzPair {
  double value;
  Eigen::VectorXd vec;
};
std::vector<RitzPair> subspace_largest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op,
    const SparseMat& W, int nev, double tol = 1e-11, int maxit = 600);

}  // namespace lseig
