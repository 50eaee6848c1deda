#include "lseig/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lseig/quadrature.hpp"

namespace lseig {

IndicatorField estimate(const FeFunction& sigma_h, const FeFunction& u_h,
                        const EstimateOptions& opts) {
  const FeSpace& ss = *sigma_h.space;
  const FeSpace& us = *u_h.space;
  if (ss.family != Family::RT0 && ss.family != Family::BDM1)
    throw std::invalid_argument("estimate: flux family must be RT0 or BDM1");
  if (us.family != Family::CG1)
    throw std::invalid_argument("estimate: scalar family must be CG1");
  if (ss.mesh != us.mesh)
    throw std::invalid_argument("estimate: spaces live on different meshes");

  const Mesh& m = *ss.mesh;
  MeshMetrics metrics = mesh_metrics(m);
  const int nt = m.num_triangles();

  IndicatorField out;
  out.interior2 = Eigen::VectorXd::Zero(nt);
  out.curl2 = Eigen::VectorXd::Zero(nt);
  out.tjump2 = Eigen::VectorXd::Zero(nt);
  out.njump2 = Eigen::VectorXd::Zero(nt);
  if (opts.eig_residual_diagnostic)
    out.diag_eig_residual2 = Eigen::VectorXd::Zero(nt);

  // Element terms. div sigma_h and curl sigma_h are piecewise constant for
  // RT0/BDM1 and lap u_h vanishes for P1, but the degree-2 rule keeps the
  // code shape general.
  const TriQuadRule& rule = tri_rule(2);
  for (int t = 0; t < nt; ++t) {
    double h2 = metrics.h_tri[t] * metrics.h_tri[t];
    double area = m.signed_area(t);
    double ri = 0.0, rc = 0.0, rd = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double w = rule.weights[q] * area;
      double ds = eval_div(sigma_h, t, rule.points[q]);
      double cs = eval_curl(sigma_h, t, rule.points[q]);
      ri += w * ds * ds;  // lap u_h == 0 elementwise for CG1
      rc += w * cs * cs;
      if (opts.eig_residual_diagnostic) {
        double ru = opts.lambda_h * eval_value(u_h, t, rule.points[q]) + ds;
        rd += w * ru * ru;
      }
    }
    out.interior2[t] = h2 * ri;
    out.curl2[t] = h2 * rc;
    if (opts.eig_residual_diagnostic) out.diag_eig_residual2[t] = h2 * rd;
  }

  // Interior edge jumps, evaluated from both adjacent triangles at shared
  // physical points; the full edge term lands in both triangles.
  const EdgeQuadRule& er = edge_rule(2);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.edge_boundary[e]) continue;
    int t0 = m.edge_tris[e][0];
    int t1 = m.edge_tris[e][1];
    Vec2 a = m.vertices[m.edges[e][0]];
    Vec2 b = m.vertices[m.edges[e][1]];
    Vec2 tangent = m.edge_tangent(e);
    Vec2 normal = m.edge_normal(e);
    double len = metrics.h_edge[e];
    double jt2 = 0.0, jn2 = 0.0;
    for (size_t q = 0; q < er.points.size(); ++q) {
      Vec2 x = a + er.points[q] * (b - a);
      auto b0 = m.barycentric(t0, x);
      auto b1 = m.barycentric(t1, x);
      double jt = (eval_vec(sigma_h, t0, b0) - eval_vec(sigma_h, t1, b1)).dot(tangent);
      double jn = (eval_grad(u_h, t0, b0) - eval_grad(u_h, t1, b1)).dot(normal);
      jt2 += er.weights[q] * len * jt * jt;
      jn2 += er.weights[q] * len * jn * jn;
    }
    double contrib_t = len * jt2;
    double contrib_n = len * jn2;
    out.tjump2[t0] += contrib_t;
    out.tjump2[t1] += contrib_t;
    out.njump2[t0] += contrib_n;
    out.njump2[t1] += contrib_n;
  }
  return out;
}

std::vector<int> mark_dorfler(const IndicatorField& ind, double theta) {
  if (!(theta > 0.0) || theta > 1.0)
    throw std::invalid_argument("mark_dorfler: theta must lie in (0, 1]");
  const int nt = ind.size();
  std::vector<int> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&ind](int a, int b) {
    return ind.eta_sq(a) > ind.eta_sq(b);
  });

  double total = ind.eta_global_sq();
  std::vector<int> marked;
  if (total <= 0.0) return marked;
  if (theta >= 1.0) {
    for (int t = 0; t < nt; ++t)
      if (ind.eta_sq(t) > 0.0) marked.push_back(t);
    return marked;
  }
  double acc = 0.0;
  for (int t : order) {
    marked.push_back(t);
    acc += ind.eta_sq(t);
    if (acc >= theta * total) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

}  // namespace lseig
