#include "lseig/eigsolve.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>
#include <stdexcept>

#include "lseig/quadrature.hpp"

namespace lseig {

namespace {

constexpr int kDenseLimit = 2000;
constexpr double kNuTol = 1e-12;  // reduced eigenvalues below this are infinite

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Factor = Eigen::SimplicialLDLT<SparseMat>;

void append_block(std::vector<Eigen::Triplet<double>>& trip, const SparseMat& m,
                  int row0, int col0, double scale = 1.0, bool transpose = false) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      int r = transpose ? static_cast<int>(it.col()) : static_cast<int>(it.row());
      int c = transpose ? static_cast<int>(it.row()) : static_cast<int>(it.col());
      trip.emplace_back(row0 + r, col0 + c, scale * it.value());
    }
}

double frob(const SparseMat& m) { return m.norm(); }

void check_factor(const Factor& f, const char* what) {
  if (f.info() != Eigen::Success)
    throw std::runtime_error(std::string("factorization of ") + what +
                             " failed: block is not SPD (assembly bug?)");
}

}  // namespace

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::F1: return "f1";
    case Formulation::F1star: return "f1star";
    case Formulation::LLstar: return "llstar";
    case Formulation::F1curl: return "f1curl";
  }
  return "?";
}

SparseMat BlockPencil::lhs_block() const {
  std::vector<Eigen::Triplet<double>> trip;
  append_block(trip, A, 0, 0);
  append_block(trip, B, 0, n_sigma(), 1.0, true);  // B^T
  append_block(trip, B, n_sigma(), 0);
  append_block(trip, C, n_sigma(), n_sigma());
  SparseMat k(dim(), dim());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMat BlockPencil::rhs_block() const {
  std::vector<Eigen::Triplet<double>> trip;
  switch (tag) {
    case Formulation::F1:
    case Formulation::F1curl:
      append_block(trip, B, 0, n_sigma(), -1.0, true);  // -B^T upper right
      break;
    case Formulation::F1star:
      append_block(trip, B, n_sigma(), 0, -1.0);  // -B lower left
      break;
    case Formulation::LLstar:
      append_block(trip, M, n_sigma(), n_sigma());
      break;
  }
  SparseMat n(dim(), dim());
  n.setFromTriplets(trip.begin(), trip.end());
  return n;
}

SchurReduced schur_reduce(const BlockPencil& p) {
  if (p.dim() > kDenseLimit)
    throw std::invalid_argument("schur_reduce: dense reduction guarded to dim <= 2000");
  SchurReduced out;
  out.tag = p.tag;
  MatrixXd Bd = MatrixXd(p.B);
  if (p.tag == Formulation::F1 || p.tag == Formulation::F1curl) {
    Factor cf(p.C);
    check_factor(cf, "C");
    MatrixXd CinvB = cf.solve(Bd);
    out.lhs = MatrixXd(p.A);
    out.rhs = Bd.transpose() * CinvB;
  } else {
    Factor af(p.A);
    check_factor(af, "A");
    MatrixXd AinvBt = af.solve(MatrixXd(Bd.transpose()));
    MatrixXd S = Bd * AinvBt;
    S = 0.5 * (S + S.transpose()).eval();
    if (p.tag == Formulation::F1star) {
      out.lhs = MatrixXd(p.C);
      out.rhs = S;
    } else {
      out.lhs = MatrixXd(p.C) - S;
      out.rhs = MatrixXd(p.M);
    }
  }
  out.lhs = 0.5 * (out.lhs + out.lhs.transpose()).eval();
  out.rhs = 0.5 * (out.rhs + out.rhs.transpose()).eval();
  return out;
}

std::vector<double> dense_finite_spectrum(const SchurReduced& r) {
  std::vector<double> out;
  if (r.tag == Formulation::LLstar) {
    // rhs = M is SPD: every reduced eigenvalue is finite.
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(r.lhs, r.rhs);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      out.push_back(es.eigenvalues()[i]);
    return out;
  }
  // lhs z = theta rhs z with rhs only PSD: solve rhs z = nu lhs z instead;
  // nu = 0 marks the infinite family, otherwise lambda = 1/nu - 1.
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(r.rhs, r.lhs);
  const auto& nu = es.eigenvalues();
  double nu_max = nu.size() ? std::abs(nu[nu.size() - 1]) : 0.0;
  for (int i = nu.size() - 1; i >= 0; --i) {
    if (nu[i] > kNuTol * std::max(1.0, nu_max))
      out.push_back(1.0 / nu[i] - 1.0);
  }
  return out;  // ascending in lambda since nu was descending
}

DensePencilSpectrum dense_full_spectrum(const BlockPencil& p) {
  if (p.dim() > kDenseLimit)
    throw std::invalid_argument("dense_full_spectrum: guarded to dim <= 2000");
  MatrixXd K = MatrixXd(p.lhs_block());
  MatrixXd N = MatrixXd(p.rhs_block());
  Eigen::GeneralizedEigenSolver<MatrixXd> qz;
  qz.compute(K, N, true);
  DensePencilSpectrum out;
  const double beta_tol = 1e-10 * std::max(K.norm(), N.norm());
  for (int i = 0; i < qz.alphas().size(); ++i) {
    double beta = qz.betas()[i];
    if (std::abs(beta) <= beta_tol) {
      ++out.n_infinite;
      continue;
    }
    std::complex<double> lam = qz.alphas()[i] / beta;
    out.finite.push_back(lam.real());
    out.max_imag = std::max(out.max_imag, std::abs(lam.imag()));
  }
  std::sort(out.finite.begin(), out.finite.end());
  return out;
}

double map_llstar_eigenvalue(double mu) {
  if (mu >= 0.0) return 0.5 * (mu + std::sqrt(mu * mu + 4.0));
  return 2.0 / (std::sqrt(mu * mu + 4.0) - mu);
}

namespace {

// --- deterministic subspace iteration -------------------------------------
//
// Largest eigenpairs of Op z = theta z where Op is self-adjoint and positive
// semidefinite with respect to the SPD inner product W. One Op application
// per basis vector per iteration; Rayleigh-Ritz on the current basis.

double rng_draw(std::mt19937& gen) {
  return static_cast<double>(gen()) / 4294967296.0 - 0.5;
}

void w_orthonormalize(MatrixXd& X, MatrixXd& WX, const SparseMat& W,
                      std::mt19937& gen) {
  const int p = static_cast<int>(X.cols());
  for (int j = 0; j < p; ++j) {
    for (int attempt = 0;; ++attempt) {
      double before = X.col(j).norm();
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < j; ++i)
          X.col(j) -= WX.col(i).dot(X.col(j)) * X.col(i);
      if (X.col(j).norm() > 1e-10 * (before + 1e-300)) {
        VectorXd w = W * X.col(j);
        double nrm = std::sqrt(std::max(0.0, X.col(j).dot(w)));
        if (nrm > 0.0) {
          X.col(j) /= nrm;
          WX.col(j) = w / nrm;
          break;
        }
      }
      if (attempt > 40)
        throw std::runtime_error("subspace iteration: cannot build basis");
      for (int r = 0; r < X.rows(); ++r) X(r, j) = rng_draw(gen);
    }
  }
}

std::vector<RitzPair> subspace_largest_impl(
    const std::function<VectorXd(const VectorXd&)>& op, const SparseMat& W,
    int nev, double tol, int maxit) {
  const int n = static_cast<int>(W.rows());
  nev = std::min(nev, n);
  const int p = std::min(n, nev + std::max(4, nev));
  std::mt19937 gen(0x5eed1u);

  MatrixXd X(n, p), WX(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = rng_draw(gen);
  w_orthonormalize(X, WX, W, gen);

  MatrixXd Y(n, p), WY(n, p);
  for (int it = 0; it < maxit; ++it) {
    for (int j = 0; j < p; ++j) Y.col(j) = op(X.col(j));
    WY = W * Y;
    MatrixXd T = X.transpose() * WY;
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    // Descending Ritz order.
    Eigen::VectorXi idx(p);
    for (int i = 0; i < p; ++i) idx[i] = p - 1 - i;

    double scale = std::max(std::abs(es.eigenvalues()[p - 1]), 1e-300);
    bool done = true;
    for (int i = 0; i < nev && done; ++i) {
      int q = idx[i];
      double theta = es.eigenvalues()[q];
      VectorXd rv = Y * es.eigenvectors().col(q) - theta * (X * es.eigenvectors().col(q));
      VectorXd wr = WY * es.eigenvectors().col(q) - theta * (WX * es.eigenvectors().col(q));
      double rnorm = std::sqrt(std::max(0.0, rv.dot(wr)));
      if (rnorm > tol * scale) done = false;
    }
    if (done) {
      std::vector<RitzPair> out;
      out.reserve(nev);
      for (int i = 0; i < nev; ++i) {
        int q = idx[i];
        out.push_back({es.eigenvalues()[q], X * es.eigenvectors().col(q)});
      }
      return out;
    }
    X = Y;
    w_orthonormalize(X, WX, W, gen);
  }
  throw std::runtime_error("subspace iteration: not converged");
}

// --- reduced operators per formulation ------------------------------------

struct ReducedSolve {
  std::vector<double> theta;  // reduced eigenvalues, descending
  MatrixXd Y;                 // corresponding y vectors (columns)
};

ReducedSolve reduced_dense(const BlockPencil& p, int k) {
  Factor af(p.A);
  check_factor(af, "A");
  MatrixXd Bd = MatrixXd(p.B);
  MatrixXd S = Bd * af.solve(MatrixXd(Bd.transpose()));
  S = 0.5 * (S + S.transpose()).eval();
  ReducedSolve out;
  const int nu_dim = p.n_u();
  if (p.tag == Formulation::LLstar) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(MatrixXd(p.C) - S,
                                                          MatrixXd(p.M));
    int take = std::min(k, nu_dim);
    out.theta.resize(take);
    out.Y.resize(nu_dim, take);
    for (int i = 0; i < take; ++i) {
      out.theta[i] = 1.0 / es.eigenvalues()[i];  // theta = 1/mu, descending
      out.Y.col(i) = es.eigenvectors().col(i);
    }
    return out;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(S, MatrixXd(p.C));
  const auto& nu = es.eigenvalues();
  double nu_max = nu[nu_dim - 1];
  for (int i = nu_dim - 1; i >= 0 && static_cast<int>(out.theta.size()) < k; --i) {
    if (nu[i] > kNuTol * std::max(1.0, nu_max)) {
      out.theta.push_back(nu[i]);
      out.Y.conservativeResize(nu_dim, static_cast<int>(out.theta.size()));
      out.Y.col(static_cast<int>(out.theta.size()) - 1) = es.eigenvectors().col(i);
    }
  }
  return out;
}

ReducedSolve reduced_iterative(const BlockPencil& p, int k) {
  ReducedSolve out;
  if (p.tag == Formulation::LLstar) {
    // theta = 1/mu via z = (C - B A^{-1} B^T)^{-1} M y, computed with one
    // solve against the full SPD block matrix.
    auto kf = std::make_shared<Factor>(p.lhs_block());
    check_factor(*kf, "[A B^T; B C]");
    const int ns = p.n_sigma(), nu_dim = p.n_u();
    auto op = [kf, &p, ns, nu_dim](const VectorXd& y) {
      VectorXd rhs = VectorXd::Zero(ns + nu_dim);
      rhs.tail(nu_dim) = p.M * y;
      VectorXd sol = kf->solve(rhs);
      return VectorXd(sol.tail(nu_dim));
    };
    auto ritz = subspace_largest_impl(op, p.M, k, 1e-11, 600);
    for (auto& r : ritz) {
      out.theta.push_back(r.value);
      out.Y.conservativeResize(nu_dim, static_cast<int>(out.theta.size()));
      out.Y.col(static_cast<int>(out.theta.size()) - 1) = r.vec;
    }
    return out;
  }
  auto af = std::make_shared<Factor>(p.A);
  check_factor(*af, "A");
  auto cf = std::make_shared<Factor>(p.C);
  check_factor(*cf, "C");
  auto op = [af, cf, &p](const VectorXd& y) {
    VectorXd t = p.B.transpose() * y;
    VectorXd s = af->solve(t);
    VectorXd r = p.B * s;
    return VectorXd(cf->solve(r));
  };
  auto ritz = subspace_largest_impl(op, p.C, k, 1e-11, 600);
  const int nu_dim = p.n_u();
  for (auto& r : ritz) {
    if (r.value <= kNuTol) continue;  // infinite family
    out.theta.push_back(r.value);
    out.Y.conservativeResize(nu_dim, static_cast<int>(out.theta.size()));
    out.Y.col(static_cast<int>(out.theta.size()) - 1) = r.vec;
  }
  return out;
}

}  // namespace

double block_residual(const BlockPencil& p, const EigenPair& pair) {
  SparseMat K = p.lhs_block();
  SparseMat N = p.rhs_block();
  VectorXd v(p.dim());
  v.head(p.n_sigma()) = pair.sigma;
  v.tail(p.n_u()) = pair.u;
  VectorXd r = K * v - pair.lambda * (N * v);
  double denom = (frob(K) + std::abs(pair.lambda) * frob(N)) * v.norm();
  return r.norm() / std::max(denom, 1e-300);
}

std::vector<EigenPair> solve_finite_spectrum(const BlockPencil& p, int k) {
  if (k < 1) throw std::invalid_argument("solve_finite_spectrum: k must be >= 1");
  ReducedSolve red = p.dim() <= kDenseLimit ? reduced_dense(p, k)
                                            : reduced_iterative(p, k);

  Factor af(p.A);
  check_factor(af, "A");

  std::vector<EigenPair> out;
  for (size_t i = 0; i < red.theta.size(); ++i) {
    EigenPair pair;
    double theta = red.theta[i];
    VectorXd y = red.Y.col(static_cast<int>(i));
    VectorXd x = -af.solve(p.B.transpose() * y);
    switch (p.tag) {
      case Formulation::F1:
      case Formulation::F1curl:
        pair.lambda = 1.0 / theta - 1.0;
        x *= (pair.lambda + 1.0);
        break;
      case Formulation::F1star:
        pair.lambda = 1.0 / theta - 1.0;
        break;
      case Formulation::LLstar:
        pair.lambda = 1.0 / theta;  // mu_h
        break;
    }
    // Unit L2 norm of the scalar component, largest coefficient positive.
    double unorm = std::sqrt(y.dot(p.M * y));
    if (unorm > 0.0) {
      y /= unorm;
      x /= unorm;
    }
    int imax = 0;
    y.cwiseAbs().maxCoeff(&imax);
    if (y[imax] < 0.0) {
      y = -y;
      x = -x;
    }
    pair.u = y;
    pair.sigma = x;
    pair.residual = block_residual(p, pair);
    out.push_back(std::move(pair));
  }
  return out;
}

FamilyReport classify_families(const BlockPencil& p) {
  if (p.dim() > kDenseLimit)
    throw std::invalid_argument("classify_families: guarded to dim <= 2000");
  MatrixXd Bd = MatrixXd(p.B);
  Eigen::JacobiSVD<MatrixXd> svd(Bd);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10 * std::max(1.0, smax)) ++rank;

  FamilyReport rep;
  switch (p.tag) {
    case Formulation::F1:
    case Formulation::F1curl:
      rep = {p.n_sigma(), p.n_u() - rank, rank};
      break;
    case Formulation::F1star:
      rep = {p.n_u(), p.n_sigma() - rank, rank};
      break;
    case Formulation::LLstar:
      rep = {p.n_sigma(), 0, p.n_u()};
      break;
  }

  DensePencilSpectrum qz = dense_full_spectrum(p);
  if (qz.n_infinite != rep.n_infinite_space + rep.n_infinite_kernel ||
      static_cast<int>(qz.finite.size()) != rep.n_finite)
    throw std::runtime_error(
        "classify_families: QZ count disagrees with rank-based classification");
  return rep;
}

std::vector<RitzPair> subspace_largest(
    const std::function<VectorXd(const VectorXd&)>& op, const SparseMat& W,
    int nev, double tol, int maxit) {
  return subspace_largest_impl(op, W, nev, tol, maxit);
}

Vec2 LLstarRecovered::grad_at(int tri, const std::array<double, 3>& bary) const {
  return eval_grad(p, tri, bary) - eval_vec(chi, tri, bary);
}

LLstarRecovered recover_llstar_eigenfunction(const BlockPencil& p,
                                             const EigenPair& pair) {
  if (p.tag != Formulation::LLstar)
    throw std::invalid_argument("recover_llstar_eigenfunction: needs an LLstar pair");
  LLstarRecovered out;
  out.chi = FeFunction{p.sigma_space, pair.sigma};
  out.p = FeFunction{p.u_space, pair.u};
  auto p0 = build_space(p.sigma_space->mesh, Family::P0, false);
  out.u = zero_function(p0);
  const Mesh& m = *p.sigma_space->mesh;
  double norm2 = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    double d = eval_div(out.chi, t, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    out.u.coeff[t] = d;
    norm2 += m.signed_area(t) * d * d;
  }
  double nrm = std::sqrt(norm2);
  if (nrm < 1e-300) {
    out.u.coeff.setZero();
    out.p.coeff.setZero();
    out.chi.coeff.setZero();
    return out;
  }
  out.u.coeff /= nrm;
  out.p.coeff /= nrm;
  out.chi.coeff /= nrm;
  return out;
}

}  // namespace lseig
