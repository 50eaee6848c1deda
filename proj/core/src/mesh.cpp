#include "lseig/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lseig {

namespace {

double tri_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

struct TriRecord {
  std::array<int, 3> v;
  int refedge;  // local edge index, or -1 to assign by longest edge
};

int longest_local_edge(const std::vector<Vec2>& verts,
                       const std::array<int, 3>& t) {
  int best = 0;
  double best_len = -1.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = verts[t[(k + 1) % 3]];
    const Vec2& b = verts[t[(k + 2) % 3]];
    double len = (b - a).norm();
    if (len > best_len + 1e-14 * (1.0 + best_len)) {
      best_len = len;
      best = k;
    }
  }
  return best;
}

MeshPtr build_from(std::vector<Vec2> vertices, std::vector<TriRecord> tris,
                   DomainSpec domain) {
  auto mesh = std::make_shared<Mesh>();
  mesh->vertices = std::move(vertices);
  mesh->domain = domain;
  mesh->triangles.reserve(tris.size());
  mesh->refinement_edge.reserve(tris.size());
  for (auto& t : tris) {
    mesh->triangles.push_back(t.v);
    mesh->refinement_edge.push_back(
        t.refedge >= 0 ? t.refedge : longest_local_edge(mesh->vertices, t.v));
  }

  const int nt = mesh->num_triangles();
  for (int t = 0; t < nt; ++t) {
    if (mesh->signed_area(t) <= 0.0)
      throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                  " is not counterclockwise");
  }

  // Global edges sorted lexicographically by (lo, hi) vertex pair.
  std::vector<std::array<int, 2>> pairs;
  pairs.reserve(3 * tris.size());
  for (const auto& t : mesh->triangles)
    for (int k = 0; k < 3; ++k) {
      int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
      pairs.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  mesh->edges = pairs;

  auto edge_id = [&pairs](int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(pairs.begin(), pairs.end(), key);
    return static_cast<int>(it - pairs.begin());
  };

  mesh->tri_edges.resize(nt);
  mesh->tri_edge_sign.resize(nt);
  mesh->edge_tris.assign(mesh->edges.size(), {-1, -1});
  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh->triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tv[(k + 1) % 3], b = tv[(k + 2) % 3];
      int e = edge_id(a, b);
      mesh->tri_edges[t][k] = e;
      mesh->tri_edge_sign[t][k] = a < b ? 1 : -1;
      auto& adj = mesh->edge_tris[e];
      if (adj[0] == -1)
        adj[0] = t;
      else if (adj[1] == -1)
        adj[1] = t;
      else
        throw std::invalid_argument("mesh: edge shared by more than 2 triangles");
    }
  }

  mesh->edge_boundary.assign(mesh->edges.size(), 0);
  mesh->vertex_boundary.assign(mesh->vertices.size(), 0);
  for (int e = 0; e < mesh->num_edges(); ++e) {
    if (mesh->edge_tris[e][1] == -1) {
      mesh->edge_boundary[e] = 1;
      mesh->vertex_boundary[mesh->edges[e][0]] = 1;
      mesh->vertex_boundary[mesh->edges[e][1]] = 1;
    }
  }
  return mesh;
}

bool on_domain_boundary(DomainKind kind, const Vec2& p) {
  const double tol = 1e-12;
  auto near = [tol](double a, double b) { return std::abs(a - b) < tol; };
  if (kind == DomainKind::UnitSquare) {
    bool inside_x = p.x() > -tol && p.x() < 1 + tol;
    bool inside_y = p.y() > -tol && p.y() < 1 + tol;
    return inside_x && inside_y &&
           (near(p.x(), 0) || near(p.x(), 1) || near(p.y(), 0) || near(p.y(), 1));
  }
  if (kind == DomainKind::LShape) {
    // Outer boundary of (-1,1)^2 ...
    bool outer = near(p.x(), -1) || near(p.x(), 1) || near(p.y(), -1) ||
                 near(p.y(), 1);
    // ... plus the two reentrant segments x=0 (y<=0) and y=0 (x>=0).
    bool reentrant = (near(p.x(), 0) && p.y() < tol) ||
                     (near(p.y(), 0) && p.x() > -tol);
    return outer || reentrant;
  }
  return false;
}

}  // namespace

double Mesh::signed_area(int t) const {
  const auto& tv = triangles[t];
  return tri_signed_area(vertices[tv[0]], vertices[tv[1]], vertices[tv[2]]);
}

double Mesh::edge_length(int e) const {
  return (vertices[edges[e][1]] - vertices[edges[e][0]]).norm();
}

Vec2 Mesh::point(int t, const std::array<double, 3>& b) const {
  const auto& tv = triangles[t];
  return b[0] * vertices[tv[0]] + b[1] * vertices[tv[1]] + b[2] * vertices[tv[2]];
}

std::array<double, 3> Mesh::barycentric(int t, const Vec2& x) const {
  const auto& tv = triangles[t];
  const Vec2& p0 = vertices[tv[0]];
  const Vec2& p1 = vertices[tv[1]];
  const Vec2& p2 = vertices[tv[2]];
  double area = tri_signed_area(p0, p1, p2);
  double b0 = tri_signed_area(x, p1, p2) / area;
  double b1 = tri_signed_area(p0, x, p2) / area;
  return {b0, b1, 1.0 - b0 - b1};
}

Vec2 Mesh::edge_tangent(int e) const {
  Vec2 d = vertices[edges[e][1]] - vertices[edges[e][0]];
  return d / d.norm();
}

Vec2 Mesh::edge_normal(int e) const {
  Vec2 t = edge_tangent(e);
  return Vec2(t.y(), -t.x());
}

int Mesh::local_edge_index(int t, int e) const {
  for (int k = 0; k < 3; ++k)
    if (tri_edges[t][k] == e) return k;
  return -1;
}

double domain_area(DomainKind kind) {
  switch (kind) {
    case DomainKind::UnitSquare: return 1.0;
    case DomainKind::LShape: return 3.0;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

MeshPtr build_initial_mesh(const DomainSpec& spec) {
  if (spec.subdivisions < 1)
    throw std::invalid_argument("build_initial_mesh: subdivisions must be >= 1");
  if (spec.kind == DomainKind::Custom)
    throw std::invalid_argument("build_initial_mesh: Custom domains use make_mesh");

  const int n = spec.subdivisions;
  // Cell grid: [0,n)^2 for the square, [0,2n)^2 for the L-shape with the
  // quadrant i >= n, j < n excluded (integer-exact test).
  const int cells = spec.kind == DomainKind::UnitSquare ? n : 2 * n;
  const double x0 = spec.kind == DomainKind::UnitSquare ? 0.0 : -1.0;
  const double h = 1.0 / n;

  std::vector<Vec2> verts;
  std::map<std::pair<int, int>, int> grid_id;
  auto vertex_at = [&](int i, int j) {
    auto [it, inserted] = grid_id.try_emplace({i, j}, static_cast<int>(verts.size()));
    if (inserted) verts.emplace_back(x0 + i * h, x0 + j * h);
    return it->second;
  };

  std::vector<TriRecord> tris;
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      if (spec.kind == DomainKind::LShape && i >= n && j < n) continue;
      int bl = vertex_at(i, j);
      int br = vertex_at(i + 1, j);
      int tr = vertex_at(i + 1, j + 1);
      int tl = vertex_at(i, j + 1);
      if (spec.pattern == InitialPattern::CrissCross) {
        int c = static_cast<int>(verts.size());
        verts.emplace_back(x0 + (i + 0.5) * h, x0 + (j + 0.5) * h);
        tris.push_back({{bl, br, c}, -1});
        tris.push_back({{br, tr, c}, -1});
        tris.push_back({{tr, tl, c}, -1});
        tris.push_back({{tl, bl, c}, -1});
      } else {
        tris.push_back({{bl, br, tr}, -1});
        tris.push_back({{bl, tr, tl}, -1});
      }
    }
  }
  return build_from(std::move(verts), std::move(tris), spec);
}

MeshPtr make_mesh(std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> triangles, DomainSpec domain) {
  std::vector<TriRecord> tris;
  tris.reserve(triangles.size());
  for (auto& t : triangles) tris.push_back({t, -1});
  return build_from(std::move(vertices), std::move(tris), domain);
}

MeshPtr refine_uniform(const Mesh& m) {
  std::vector<Vec2> verts = m.vertices;
  std::vector<int> midpoint(m.num_edges());
  for (int e = 0; e < m.num_edges(); ++e) {
    midpoint[e] = static_cast<int>(verts.size());
    verts.push_back(0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]));
  }

  std::vector<TriRecord> tris;
  tris.reserve(4 * m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tv = m.triangles[t];
    // m_k is the midpoint of the edge opposite vertex k; the four children
    // are similar to the parent and keep its refinement-edge index.
    int m0 = midpoint[m.tri_edges[t][0]];
    int m1 = midpoint[m.tri_edges[t][1]];
    int m2 = midpoint[m.tri_edges[t][2]];
    int r = m.refinement_edge[t];
    tris.push_back({{tv[0], m2, m1}, r});
    tris.push_back({{m2, tv[1], m0}, r});
    tris.push_back({{m1, m0, tv[2]}, r});
    tris.push_back({{m0, m1, m2}, r});
  }
  return build_from(std::move(verts), std::move(tris), m.domain);
}

MeshPtr refine_marked(const Mesh& m, const std::vector<int>& marked) {
  for (int t : marked)
    if (t < 0 || t >= m.num_triangles())
      throw std::invalid_argument("refine_marked: triangle id out of range");

  // Edge-marking closure: a triangle with any marked edge must have its
  // refinement edge marked, so bisections stay compatible across faces.
  std::vector<char> edge_marked(m.num_edges(), 0);
  for (int t : marked) edge_marked[m.tri_edges[t][m.refinement_edge[t]]] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < m.num_triangles(); ++t) {
      const auto& te = m.tri_edges[t];
      bool any = edge_marked[te[0]] || edge_marked[te[1]] || edge_marked[te[2]];
      int ref = te[m.refinement_edge[t]];
      if (any && !edge_marked[ref]) {
        edge_marked[ref] = 1;
        changed = true;
      }
    }
  }

  std::vector<Vec2> verts = m.vertices;
  std::vector<int> midpoint(m.num_edges(), -1);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (edge_marked[e]) {
      midpoint[e] = static_cast<int>(verts.size());
      verts.push_back(0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]));
    }
  }

  // Bisect (p, a, b) at edge (a, b): children keep the parent's other edge
  // as their refinement edge (newest-vertex rule).
  struct Child {
    std::array<int, 3> v;
    int refedge;
  };
  auto bisect = [&](const std::array<int, 3>& tv, int reflocal,
                    int mid) -> std::array<Child, 2> {
    int p = tv[reflocal];
    int a = tv[(reflocal + 1) % 3];
    int b = tv[(reflocal + 2) % 3];
    // child (a, mid, p): refinement edge (a, p) is opposite local vertex 1;
    // child (mid, b, p): refinement edge (b, p) is opposite local vertex 0.
    return {Child{{a, mid, p}, 1}, Child{{mid, b, p}, 0}};
  };

  std::vector<TriRecord> tris;
  tris.reserve(2 * m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& te = m.tri_edges[t];
    int ref = te[m.refinement_edge[t]];
    if (!edge_marked[ref]) {
      tris.push_back({m.triangles[t], m.refinement_edge[t]});
      continue;
    }
    auto children = bisect(m.triangles[t], m.refinement_edge[t], midpoint[ref]);
    for (const auto& c : children) {
      // The child's refinement edge is one of the parent's original edges;
      // if that edge is marked too, bisect once more.
      int ca = c.v[(c.refedge + 1) % 3], cb = c.v[(c.refedge + 2) % 3];
      std::array<int, 2> key{std::min(ca, cb), std::max(ca, cb)};
      auto it = std::lower_bound(m.edges.begin(), m.edges.end(), key);
      int ce = (it != m.edges.end() && *it == key)
                   ? static_cast<int>(it - m.edges.begin())
                   : -1;
      if (ce >= 0 && edge_marked[ce]) {
        auto grand = bisect(c.v, c.refedge, midpoint[ce]);
        tris.push_back({grand[0].v, grand[0].refedge});
        tris.push_back({grand[1].v, grand[1].refedge});
      } else {
        tris.push_back({c.v, c.refedge});
      }
    }
  }
  return build_from(std::move(verts), std::move(tris), m.domain);
}

MeshMetrics mesh_metrics(const Mesh& m) {
  MeshMetrics out;
  out.h_edge.resize(m.num_edges());
  for (int e = 0; e < m.num_edges(); ++e) out.h_edge[e] = m.edge_length(e);
  out.h_tri.resize(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    double l0 = out.h_edge[m.tri_edges[t][0]];
    double l1 = out.h_edge[m.tri_edges[t][1]];
    double l2 = out.h_edge[m.tri_edges[t][2]];
    double h = std::max({l0, l1, l2});
    out.h_tri[t] = h;
    out.h_max = std::max(out.h_max, h);
    double inradius = m.signed_area(t) / (0.5 * (l0 + l1 + l2));
    out.shape_ratio = std::max(out.shape_ratio, h / (2.0 * inradius));
  }
  return out;
}

std::vector<std::string> audit_mesh(const Mesh& m) {
  std::vector<std::string> issues;
  auto complain = [&issues](std::string msg) { issues.push_back(std::move(msg)); };

  for (int t = 0; t < m.num_triangles(); ++t)
    if (!(m.signed_area(t) > 0.0))
      complain("triangle " + std::to_string(t) + " has non-positive area");

  std::vector<int> count(m.num_edges(), 0);
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) ++count[m.tri_edges[t][k]];
  for (int e = 0; e < m.num_edges(); ++e) {
    if (count[e] < 1 || count[e] > 2)
      complain("edge " + std::to_string(e) + " adjacent to " +
               std::to_string(count[e]) + " triangles");
    bool boundary = count[e] == 1;
    if (boundary != static_cast<bool>(m.edge_boundary[e]))
      complain("edge " + std::to_string(e) + " boundary flag inconsistent");
    if (boundary && m.domain.kind != DomainKind::Custom) {
      // A single-adjacency edge must lie on the domain boundary, otherwise
      // a hanging vertex split it on the other side.
      Vec2 a = m.vertices[m.edges[e][0]];
      Vec2 b = m.vertices[m.edges[e][1]];
      Vec2 mid = 0.5 * (a + b);
      if (!on_domain_boundary(m.domain.kind, a) ||
          !on_domain_boundary(m.domain.kind, b) ||
          !on_domain_boundary(m.domain.kind, mid))
        complain("edge " + std::to_string(e) +
                 " has one neighbor but is not on the domain boundary");
    }
  }

  if (m.domain.kind != DomainKind::Custom) {
    double total = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) total += m.signed_area(t);
    if (std::abs(total - domain_area(m.domain.kind)) > 1e-13 * std::max(1.0, total))
      complain("total area " + std::to_string(total) + " does not match domain");
  }
  return issues;
}

std::string dump_mesh_ascii(const Mesh& m) {
  std::ostringstream os;
  char buf[80];
  os << m.num_triangles() << ' ' << m.num_vertices() << ' ' << m.num_edges()
     << '\n';
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
    os << buf;
  }
  for (const auto& t : m.triangles)
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : m.edges) os << e[0] << ' ' << e[1] << '\n';
  return os.str();
}

}  // namespace lseig
