#pragma once

#include <functional>

#include "lseig/mesh.hpp"

namespace lseig {

/// Closed-form Dirichlet eigenmode of the unit square, L2-normalized:
/// lambda = pi^2 (m^2 + n^2), u = 2 sin(m pi x) sin(n pi y), sigma = grad u.
struct ExactEigenmode {
  double lambda = 0.0;
  std::function<double(const Vec2&)> u;
  std::function<Vec2(const Vec2&)> grad_u;
  std::function<double(const Vec2&)> div_sigma;  // = -lambda u
};

ExactEigenmode square_mode(int m, int n);

}  // namespace lseig
