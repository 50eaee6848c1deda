#pragma once

#include <array>
#include <vector>

namespace lseig {

/// Symmetric triangle rule in barycentric coordinates; weights sum to 1 and
/// are scaled by the element area on use.
struct TriQuadRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Smallest stored rule exact for polynomials of degree >= min_degree.
/// Throws std::invalid_argument beyond the maximum supported degree.
const TriQuadRule& tri_rule(int min_degree);
int max_tri_degree();

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct EdgeQuadRule {
  std::vector<double> points;
  std::vector<double> weights;
};
const EdgeQuadRule& edge_rule(int npoints);

}  // namespace lseig
