#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace lseig {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { UnitSquare, LShape, Custom };
enum class InitialPattern { CrissCross, TwoTriangle };

/// Initial-mesh request. Each unit square of the domain is split into an
/// n x n grid of cells before triangulation; the pattern decides whether a
/// cell becomes four triangles around its center or two along the diagonal.
struct DomainSpec {
  DomainKind kind = DomainKind::UnitSquare;
  int subdivisions = 1;
  InitialPattern pattern = InitialPattern::CrissCross;
};

/// Conforming triangulation with oriented edges.
///
/// Global edge orientation runs from the lower to the higher vertex index.
/// Local edge k of a triangle is the edge opposite local vertex k;
/// tri_edge_sign is +1 when the counterclockwise traversal of that edge
/// agrees with the global orientation (equivalently, when the triangle's
/// outward normal on the edge equals the global edge normal).
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;      // ccw vertex indices
  std::vector<std::array<int, 2>> edges;          // vertex pairs, lo < hi
  std::vector<std::array<int, 3>> tri_edges;      // global edge per local edge
  std::vector<std::array<int, 3>> tri_edge_sign;  // +1 / -1, see above
  std::vector<std::array<int, 2>> edge_tris;      // adjacent triangles, -1 if none
  std::vector<char> vertex_boundary;
  std::vector<char> edge_boundary;
  std::vector<int> refinement_edge;               // local edge index for bisection
  DomainSpec domain;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double signed_area(int t) const;
  double edge_length(int e) const;
  Vec2 point(int t, const std::array<double, 3>& bary) const;
  std::array<double, 3> barycentric(int t, const Vec2& x) const;

  /// Global tangent (lo -> hi, unit) and normal (tangent rotated by -90deg).
  Vec2 edge_tangent(int e) const;
  Vec2 edge_normal(int e) const;

  /// Local index (0..2) of global edge e within triangle t; -1 if absent.
  int local_edge_index(int t, int e) const;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Builds the initial triangulation of a unit square or L-shaped domain.
/// The L-shape occupies (-1,1)^2 minus the closed quadrant [0,1]x[-1,0].
/// Throws std::invalid_argument for subdivisions < 1 or a Custom kind.
MeshPtr build_initial_mesh(const DomainSpec& spec);

/// Assembles a mesh from raw vertex/triangle arrays (triangles ccw).
/// Refinement edges are assigned to the longest edge of each triangle.
MeshPtr make_mesh(std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> triangles,
                  DomainSpec domain = {DomainKind::Custom, 1,
                                       InitialPattern::CrissCross});

/// Red refinement: each triangle is split into four similar children.
MeshPtr refine_uniform(const Mesh& m);

/// Newest-vertex bisection of the marked triangles plus conforming closure.
MeshPtr refine_marked(const Mesh& m, const std::vector<int>& marked);

struct MeshMetrics {
  std::vector<double> h_tri;   // triangle diameters
  std::vector<double> h_edge;  // edge lengths
  double h_max = 0.0;
  double shape_ratio = 0.0;    // max over T of h_T / (2 inradius)
};
MeshMetrics mesh_metrics(const Mesh& m);

/// Audits the mesh invariants (edge adjacency counts, positive areas,
/// conformity via boundary-edge geometry, total area). Returns a list of
/// violations; an empty list means the mesh is sound. Geometric checks are
/// skipped for Custom domains.
std::vector<std::string> audit_mesh(const Mesh& m);

/// Exact area of the reference domains (1 for the square, 3 for the L-shape).
double domain_area(DomainKind kind);

/// ASCII dump: header "ntri nvert nedge", then vertex coordinates, triangle
/// vertex triples, and edge vertex pairs, one entity per line.
std::string dump_mesh_ascii(const Mesh& m);

}  // namespace lseig
