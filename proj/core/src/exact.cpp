#include "lseig/exact.hpp"

#include <cmath>

namespace lseig {

ExactEigenmode square_mode(int m, int n) {
  const double pi = M_PI;
  ExactEigenmode mode;
  mode.lambda = pi * pi * (m * m + n * n);
  mode.u = [=](const Vec2& p) {
    return 2.0 * std::sin(m * pi * p.x()) * std::sin(n * pi * p.y());
  };
  mode.grad_u = [=](const Vec2& p) {
    return Vec2(2.0 * m * pi * std::cos(m * pi * p.x()) * std::sin(n * pi * p.y()),
                2.0 * n * pi * std::sin(m * pi * p.x()) * std::cos(n * pi * p.y()));
  };
  double lambda = mode.lambda;
  auto u = mode.u;
  mode.div_sigma = [=](const Vec2& p) { return -lambda * u(p); };
  return mode;
}

}  // namespace lseig
