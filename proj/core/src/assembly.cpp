#include "lseig/assembly.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "lseig/quadrature.hpp"

namespace lseig {

namespace {

bool scalar_ok(Family f) { return f == Family::CG1 || f == Family::P0; }

void check_pairing(FormKind form, const FeSpace& row, const FeSpace& col) {
  if (row.mesh != col.mesh)
    throw std::invalid_argument("assemble: spaces live on different meshes");
  bool ok = false;
  switch (form) {
    case FormKind::MassSigma:
    case FormKind::DivDiv:
    case FormKind::CurlCurl:
      ok = is_vector_family(row.family) && row.family == col.family;
      break;
    case FormKind::GradCoupling:
      ok = row.family == Family::CG1 && is_vector_family(col.family);
      break;
    case FormKind::Stiffness:
      ok = row.family == Family::CG1 && col.family == Family::CG1;
      break;
    case FormKind::UDiv:
      ok = is_vector_family(row.family) && scalar_ok(col.family);
      break;
    case FormKind::MassU:
      ok = scalar_ok(row.family) && row.family == col.family;
      break;
  }
  if (!ok)
    throw std::invalid_argument(std::string("assemble: form incompatible with ") +
                                family_name(row.family) + "/" +
                                family_name(col.family));
}

double local_entry(FormKind form, const LocalBasis& rb, const LocalBasis& cb,
                   int i, int j) {
  switch (form) {
    case FormKind::MassSigma: return rb.vec[i].dot(cb.vec[j]);
    case FormKind::DivDiv: return rb.div[i] * cb.div[j];
    case FormKind::CurlCurl: return rb.curl[i] * cb.curl[j];
    case FormKind::GradCoupling: return -rb.grad[i].dot(cb.vec[j]);
    case FormKind::Stiffness: return rb.grad[i].dot(cb.grad[j]);
    case FormKind::UDiv: return -cb.value[j] * rb.div[i];
    case FormKind::MassU: return rb.value[i] * cb.value[j];
  }
  return 0.0;
}

}  // namespace

SparseMat assemble(FormKind form, const FeSpace& rowspace, const FeSpace& colspace) {
  check_pairing(form, rowspace, colspace);
  const Mesh& m = *rowspace.mesh;
  const TriQuadRule& rule = tri_rule(4);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(m.num_triangles()) * rowspace.dofs_per_tri() *
               colspace.dofs_per_tri());

  const int nr = rowspace.dofs_per_tri();
  const int nc = colspace.dofs_per_tri();
  Eigen::Matrix<double, 6, 6> local;
  for (int t = 0; t < m.num_triangles(); ++t) {
    ElementBasis row_basis(rowspace, t);
    ElementBasis col_basis(colspace, t);
    const double area = m.signed_area(t);
    local.setZero();
    LocalBasis rb, cb;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      rb = row_basis.at(rule.points[q]);
      cb = col_basis.at(rule.points[q]);
      const double w = rule.weights[q] * area;
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j)
          local(i, j) += w * local_entry(form, rb, cb, i, j);
    }
    for (int i = 0; i < nr; ++i) {
      int r = rowspace.free_of_dof[rb.dof[i]];
      if (r < 0) continue;
      for (int j = 0; j < nc; ++j) {
        int c = colspace.free_of_dof[cb.dof[j]];
        if (c >= 0) trip.emplace_back(r, c, local(i, j));
      }
    }
  }

  SparseMat mat(rowspace.n_free, colspace.n_free);
  mat.setFromTriplets(trip.begin(), trip.end());
  mat.prune([](int, int, double v) { return v != 0.0; });
  mat.makeCompressed();
  return mat;
}

double max_abs_diff_transpose(const SparseMat& B, const SparseMat& D) {
  if (B.rows() != D.cols() || B.cols() != D.rows())
    throw std::invalid_argument("transpose identity: dimension mismatch");
  SparseMat sum = D + SparseMat(B.transpose());
  double mx = 0.0;
  for (int k = 0; k < sum.outerSize(); ++k)
    for (SparseMat::InnerIterator it(sum, k); it; ++it)
      mx = std::max(mx, std::abs(it.value()));
  return mx;
}

bool verify_transpose_identity(const SparseMat& B, const SparseMat& D, double tol) {
  return max_abs_diff_transpose(B, D) < tol;
}

void write_matrix_market(const SparseMat& mat, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_matrix_market: cannot open " + path);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << mat.rows() << ' ' << mat.cols() << ' ' << mat.nonZeros() << '\n';
  char buf[64];
  for (int k = 0; k < mat.outerSize(); ++k)
    for (SparseMat::InnerIterator it(mat, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      os << buf;
    }
}

}  // namespace lseig
