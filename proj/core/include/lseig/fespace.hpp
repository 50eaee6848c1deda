#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>

#include "lseig/mesh.hpp"

namespace lseig {

/// Discrete families. CG1 is the scalar continuous P1 space, CG1Vec its
/// vector-valued version, RT0 and BDM1 the lowest-order H(div) elements
/// (one resp. two normal-trace moments per edge), P0 piecewise constants.
enum class Family { P0, CG1, CG1Vec, RT0, BDM1 };

bool is_vector_family(Family f);
const char* family_name(Family f);

/// Degree-of-freedom map for one family on one mesh. Dirichlet constraints
/// (boundary vertices of CG1) are handled by elimination: constrained dofs
/// carry no free index and their coefficients are implicitly zero.
struct FeSpace {
  Family family;
  MeshPtr mesh;
  bool dirichlet = false;
  int ndof = 0;                  // total, including constrained
  int n_free = 0;
  std::vector<int> free_of_dof;  // -1 for constrained dofs
  std::vector<int> dof_of_free;

  int dofs_per_tri() const;
};

using FeSpacePtr = std::shared_ptr<const FeSpace>;

/// Builds the dof map. Dirichlet elimination is only meaningful for CG1
/// (boundary vertices); requesting it for any other family throws.
FeSpacePtr build_space(MeshPtr mesh, Family family, bool dirichlet);

/// Values of all local shape functions of one triangle at one barycentric
/// point. Scalar families fill value/grad, vector families fill vec/div/curl
/// (curl is the scalar 2D curl dσy/dx - dσx/dy).
struct LocalBasis {
  int n = 0;
  std::array<int, 6> dof{};
  std::array<double, 6> value{};
  std::array<Vec2, 6> grad{};
  std::array<Vec2, 6> vec{};
  std::array<double, 6> div{};
  std::array<double, 6> curl{};
};

/// Shape-function evaluator bound to one triangle; construction resolves the
/// geometry (and for BDM1 the moment-dual coefficients) once.
class ElementBasis {
 public:
  ElementBasis(const FeSpace& space, int tri);

  LocalBasis at(const std::array<double, 3>& bary) const;
  int tri() const { return tri_; }

 private:
  const FeSpace& space_;
  int tri_;
  double area_;
  std::array<Vec2, 3> corner_;
  std::array<Vec2, 3> bary_grad_;
  std::array<int, 6> dof_{};
  int n_ = 0;
  // BDM1: coefficients of each shape function in the monomial basis
  // {(1,0),(0,1),(x,0),(y,0),(0,x),(0,y)}; RT0: per-edge sign and opposite
  // corner cached in sign_/opp_.
  Eigen::Matrix<double, 6, 6> bdm_coeff_;
  std::array<double, 3> sign_{};
};

/// Convenience one-shot evaluation (constructs an ElementBasis internally).
LocalBasis eval_basis(const FeSpace& space, int tri,
                      const std::array<double, 3>& bary);

/// Coefficient vector over the free dofs of a space.
struct FeFunction {
  FeSpacePtr space;
  Eigen::VectorXd coeff;
};

FeFunction zero_function(FeSpacePtr space);

/// Nodal / edge-moment interpolation of a callable field.
FeFunction interpolate(FeSpacePtr space, const std::function<double(const Vec2&)>& f);
FeFunction interpolate(FeSpacePtr space, const std::function<Vec2(const Vec2&)>& f);

/// Pointwise evaluation helpers (constrained dofs contribute zero).
double eval_value(const FeFunction& u, int tri, const std::array<double, 3>& bary);
Vec2 eval_grad(const FeFunction& u, int tri, const std::array<double, 3>& bary);
Vec2 eval_vec(const FeFunction& u, int tri, const std::array<double, 3>& bary);
double eval_div(const FeFunction& u, int tri, const std::array<double, 3>& bary);
double eval_curl(const FeFunction& u, int tri, const std::array<double, 3>& bary);

}  // namespace lseig
