#pragma once

#include "lseig/eigsolve.hpp"

namespace lseig {

/// Per-triangle residual indicator
///   eta_T^2 = h_T^2 ||div sigma_h - lap u_h||_T^2 + h_T^2 ||curl sigma_h||_T^2
///           + sum_{e in dT, e interior} h_e (||[sigma_h . t]||_e^2
///                                            + ||[grad u_h . n]||_e^2),
/// stored by contribution. Interior edges contribute the full edge term to
/// both adjacent triangles; boundary edges contribute nothing.
struct IndicatorField {
  Eigen::VectorXd interior2;  // h_T^2 ||div sigma_h - lap u_h||^2
  Eigen::VectorXd curl2;      // h_T^2 ||curl sigma_h||^2
  Eigen::VectorXd tjump2;     // sum of h_e ||[sigma_h . t]||^2 over own edges
  Eigen::VectorXd njump2;     // sum of h_e ||[grad u_h . n]||^2
  // Optional diagnostic h_T^2 ||lambda_h u_h + div sigma_h||^2; not part of
  // the estimator, empty unless requested.
  Eigen::VectorXd diag_eig_residual2;

  int size() const { return static_cast<int>(interior2.size()); }
  double eta_sq(int t) const {
    return interior2[t] + curl2[t] + tjump2[t] + njump2[t];
  }
  double eta_global_sq() const {
    return interior2.sum() + curl2.sum() + tjump2.sum() + njump2.sum();
  }
  double eta_global() const { return std::sqrt(eta_global_sq()); }
};

struct EstimateOptions {
  bool eig_residual_diagnostic = false;
  double lambda_h = 0.0;  // used only by the diagnostic term
};

/// Evaluates the indicator for a FOSLS eigenpair with an H(div) flux family
/// (RT0 or BDM1) and CG1 scalar part. Other families throw.
IndicatorField estimate(const FeFunction& sigma_h, const FeFunction& u_h,
                        const EstimateOptions& opts = {});

/// Bulk marking: the minimal set M, greedy over descending eta_T (ties by
/// triangle id), with sum_{T in M} eta_T^2 >= theta * eta_h^2. theta = 1
/// marks every triangle with a positive indicator.
std::vector<int> mark_dorfler(const IndicatorField& ind, double theta);

}  // namespace lseig
