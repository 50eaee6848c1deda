#include "lseig/fespace.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "lseig/quadrature.hpp"

namespace lseig {

bool is_vector_family(Family f) {
  return f == Family::CG1Vec || f == Family::RT0 || f == Family::BDM1;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::P0: return "p0";
    case Family::CG1: return "cg1";
    case Family::CG1Vec: return "cg1vec";
    case Family::RT0: return "rt0";
    case Family::BDM1: return "bdm1";
  }
  return "?";
}

int FeSpace::dofs_per_tri() const {
  switch (family) {
    case Family::P0: return 1;
    case Family::CG1: return 3;
    case Family::CG1Vec: return 6;
    case Family::RT0: return 3;
    case Family::BDM1: return 6;
  }
  return 0;
}

FeSpacePtr build_space(MeshPtr mesh, Family family, bool dirichlet) {
  if (dirichlet && family != Family::CG1)
    throw std::invalid_argument("build_space: Dirichlet mask only applies to CG1");
  auto sp = std::make_shared<FeSpace>();
  sp->family = family;
  sp->mesh = std::move(mesh);
  sp->dirichlet = dirichlet;
  const Mesh& m = *sp->mesh;
  switch (family) {
    case Family::P0: sp->ndof = m.num_triangles(); break;
    case Family::CG1: sp->ndof = m.num_vertices(); break;
    case Family::CG1Vec: sp->ndof = 2 * m.num_vertices(); break;
    case Family::RT0: sp->ndof = m.num_edges(); break;
    case Family::BDM1: sp->ndof = 2 * m.num_edges(); break;
  }
  sp->free_of_dof.assign(sp->ndof, -1);
  for (int d = 0; d < sp->ndof; ++d) {
    bool constrained = dirichlet && m.vertex_boundary[d];
    if (!constrained) {
      sp->free_of_dof[d] = static_cast<int>(sp->dof_of_free.size());
      sp->dof_of_free.push_back(d);
    }
  }
  sp->n_free = static_cast<int>(sp->dof_of_free.size());
  return sp;
}

namespace {

// Monomial basis for BDM1: {(1,0),(0,1),(x,0),(y,0),(0,x),(0,y)}.
Vec2 monomial(int j, const Vec2& x) {
  switch (j) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {x.x(), 0.0};
    case 3: return {x.y(), 0.0};
    case 4: return {0.0, x.x()};
    default: return {0.0, x.y()};
  }
}
constexpr std::array<double, 6> kMonomialDiv = {0, 0, 1, 0, 0, 1};
constexpr std::array<double, 6> kMonomialCurl = {0, 0, 0, -1, 1, 0};

}  // namespace

ElementBasis::ElementBasis(const FeSpace& space, int tri)
    : space_(space), tri_(tri) {
  const Mesh& m = *space.mesh;
  const auto& tv = m.triangles[tri];
  for (int k = 0; k < 3; ++k) corner_[k] = m.vertices[tv[k]];
  area_ = m.signed_area(tri);
  // grad of barycentric coordinate k is the inward-scaled perpendicular of
  // the opposite edge: rot(-90deg) applied to (corner_{k+2} - corner_{k+1}).
  for (int k = 0; k < 3; ++k) {
    Vec2 d = corner_[(k + 2) % 3] - corner_[(k + 1) % 3];
    bary_grad_[k] = Vec2(d.y(), -d.x()) / (2.0 * area_);
  }

  switch (space.family) {
    case Family::P0:
      n_ = 1;
      dof_[0] = tri;
      break;
    case Family::CG1:
      n_ = 3;
      for (int k = 0; k < 3; ++k) dof_[k] = tv[k];
      break;
    case Family::CG1Vec:
      n_ = 6;
      for (int k = 0; k < 3; ++k) {
        dof_[2 * k] = 2 * tv[k];
        dof_[2 * k + 1] = 2 * tv[k] + 1;
      }
      break;
    case Family::RT0:
      n_ = 3;
      for (int k = 0; k < 3; ++k) {
        dof_[k] = m.tri_edges[tri][k];
        sign_[k] = static_cast<double>(m.tri_edge_sign[tri][k]);
      }
      break;
    case Family::BDM1: {
      n_ = 6;
      // Local dofs (2e, 2e+1) are the mean and linear normal-trace moments
      // against the global edge orientation; the shape functions are the
      // monomial-basis solution of the 6x6 duality system.
      Eigen::Matrix<double, 6, 6> mom;
      const auto& er = edge_rule(3);
      for (int k = 0; k < 3; ++k) {
        int e = m.tri_edges[tri][k];
        dof_[2 * k] = 2 * e;
        dof_[2 * k + 1] = 2 * e + 1;
        Vec2 a = m.vertices[m.edges[e][0]];
        Vec2 b = m.vertices[m.edges[e][1]];
        Vec2 normal = m.edge_normal(e);
        for (int j = 0; j < 6; ++j) {
          double m0 = 0.0, m1 = 0.0;
          for (size_t q = 0; q < er.points.size(); ++q) {
            double s = er.points[q];
            Vec2 x = a + s * (b - a);
            double tr = monomial(j, x).dot(normal);
            m0 += er.weights[q] * tr;
            m1 += er.weights[q] * tr * (2.0 * s - 1.0);  // lambda_b - lambda_a
          }
          mom(2 * k, j) = m0;
          mom(2 * k + 1, j) = m1;
        }
      }
      bdm_coeff_ = mom.inverse();  // column i: coefficients of shape i? see below
      bdm_coeff_.transposeInPlace();  // row i: monomial coefficients of shape i
      break;
    }
  }
}

LocalBasis ElementBasis::at(const std::array<double, 3>& bary) const {
  LocalBasis out;
  out.n = n_;
  out.dof.fill(-1);
  for (int i = 0; i < n_; ++i) out.dof[i] = dof_[i];
  const Vec2 x = bary[0] * corner_[0] + bary[1] * corner_[1] + bary[2] * corner_[2];

  switch (space_.family) {
    case Family::P0:
      out.value[0] = 1.0;
      out.grad[0] = Vec2::Zero();
      break;
    case Family::CG1:
      for (int k = 0; k < 3; ++k) {
        out.value[k] = bary[k];
        out.grad[k] = bary_grad_[k];
      }
      break;
    case Family::CG1Vec:
      for (int k = 0; k < 3; ++k) {
        out.vec[2 * k] = Vec2(bary[k], 0.0);
        out.vec[2 * k + 1] = Vec2(0.0, bary[k]);
        out.div[2 * k] = bary_grad_[k].x();
        out.div[2 * k + 1] = bary_grad_[k].y();
        out.curl[2 * k] = -bary_grad_[k].y();
        out.curl[2 * k + 1] = bary_grad_[k].x();
      }
      break;
    case Family::RT0:
      // phi_e = s_e |e| / (2|T|) (x - p_opp): unit normal trace on its edge.
      for (int k = 0; k < 3; ++k) {
        double len = space_.mesh->edge_length(space_.mesh->tri_edges[tri_][k]);
        double c = sign_[k] * len / (2.0 * area_);
        out.vec[k] = c * (x - corner_[k]);
        out.div[k] = 2.0 * c;
        out.curl[k] = 0.0;
      }
      break;
    case Family::BDM1:
      for (int i = 0; i < 6; ++i) {
        Vec2 v = Vec2::Zero();
        double dv = 0.0, cl = 0.0;
        for (int j = 0; j < 6; ++j) {
          double c = bdm_coeff_(i, j);
          v += c * monomial(j, x);
          dv += c * kMonomialDiv[j];
          cl += c * kMonomialCurl[j];
        }
        out.vec[i] = v;
        out.div[i] = dv;
        out.curl[i] = cl;
      }
      break;
  }
  return out;
}

LocalBasis eval_basis(const FeSpace& space, int tri,
                      const std::array<double, 3>& bary) {
  return ElementBasis(space, tri).at(bary);
}

FeFunction zero_function(FeSpacePtr space) {
  FeFunction f;
  f.coeff = Eigen::VectorXd::Zero(space->n_free);
  f.space = std::move(space);
  return f;
}

FeFunction interpolate(FeSpacePtr space,
                       const std::function<double(const Vec2&)>& f) {
  if (is_vector_family(space->family))
    throw std::invalid_argument("interpolate: scalar callable on vector family");
  FeFunction out = zero_function(space);
  const Mesh& m = *space->mesh;
  if (space->family == Family::CG1) {
    for (int v = 0; v < m.num_vertices(); ++v) {
      int fr = space->free_of_dof[v];
      if (fr >= 0) out.coeff[fr] = f(m.vertices[v]);
    }
  } else {  // P0: centroid value
    for (int t = 0; t < m.num_triangles(); ++t)
      out.coeff[t] = f(m.point(t, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));
  }
  return out;
}

FeFunction interpolate(FeSpacePtr space,
                       const std::function<Vec2(const Vec2&)>& f) {
  if (!is_vector_family(space->family))
    throw std::invalid_argument("interpolate: vector callable on scalar family");
  FeFunction out = zero_function(space);
  const Mesh& m = *space->mesh;
  if (space->family == Family::CG1Vec) {
    for (int v = 0; v < m.num_vertices(); ++v) {
      Vec2 val = f(m.vertices[v]);
      out.coeff[space->free_of_dof[2 * v]] = val.x();
      out.coeff[space->free_of_dof[2 * v + 1]] = val.y();
    }
    return out;
  }
  const auto& er = edge_rule(4);
  for (int e = 0; e < m.num_edges(); ++e) {
    Vec2 a = m.vertices[m.edges[e][0]];
    Vec2 b = m.vertices[m.edges[e][1]];
    Vec2 normal = m.edge_normal(e);
    double m0 = 0.0, m1 = 0.0;
    for (size_t q = 0; q < er.points.size(); ++q) {
      double s = er.points[q];
      double tr = f(a + s * (b - a)).dot(normal);
      m0 += er.weights[q] * tr;
      m1 += er.weights[q] * tr * (2.0 * s - 1.0);
    }
    if (space->family == Family::RT0) {
      out.coeff[e] = m0;  // mean normal trace; basis has unit trace
    } else {
      out.coeff[2 * e] = m0;
      out.coeff[2 * e + 1] = m1;
    }
  }
  return out;
}

namespace {

template <typename Pick>
auto accumulate_local(const FeFunction& u, int tri,
                      const std::array<double, 3>& bary, Pick pick) {
  LocalBasis lb = eval_basis(*u.space, tri, bary);
  decltype(pick(lb, 0)) acc{};
  for (int i = 0; i < lb.n; ++i) {
    int fr = u.space->free_of_dof[lb.dof[i]];
    if (fr >= 0) acc += u.coeff[fr] * pick(lb, i);
  }
  return acc;
}

}  // namespace

double eval_value(const FeFunction& u, int tri, const std::array<double, 3>& b) {
  return accumulate_local(u, tri, b,
                          [](const LocalBasis& lb, int i) { return lb.value[i]; });
}

Vec2 eval_grad(const FeFunction& u, int tri, const std::array<double, 3>& b) {
  LocalBasis lb = eval_basis(*u.space, tri, b);
  Vec2 acc = Vec2::Zero();
  for (int i = 0; i < lb.n; ++i) {
    int fr = u.space->free_of_dof[lb.dof[i]];
    if (fr >= 0) acc += u.coeff[fr] * lb.grad[i];
  }
  return acc;
}

Vec2 eval_vec(const FeFunction& u, int tri, const std::array<double, 3>& b) {
  LocalBasis lb = eval_basis(*u.space, tri, b);
  Vec2 acc = Vec2::Zero();
  for (int i = 0; i < lb.n; ++i) {
    int fr = u.space->free_of_dof[lb.dof[i]];
    if (fr >= 0) acc += u.coeff[fr] * lb.vec[i];
  }
  return acc;
}

double eval_div(const FeFunction& u, int tri, const std::array<double, 3>& b) {
  return accumulate_local(u, tri, b,
                          [](const LocalBasis& lb, int i) { return lb.div[i]; });
}

double eval_curl(const FeFunction& u, int tri, const std::array<double, 3>& b) {
  return accumulate_local(u, tri, b,
                          [](const LocalBasis& lb, int i) { return lb.curl[i]; });
}

}  // namespace lseig
