#pragma once

#include "lseig/estimator.hpp"
#include "lseig/formulations.hpp"

namespace lseig {

struct AdaptOptions {
  double theta = 0.3;
  int max_dofs = 10000;  // budget on the pencil dimension
  double lambda_ref = std::numeric_limits<double>::quiet_NaN();
  int quad_degree = 5;
};

struct AdaptRecord {
  int iter = 0;
  int ndof = 0;
  double lambda1 = 0.0;
  double eta = 0.0;
  double err_lambda = std::numeric_limits<double>::quiet_NaN();
  MeshPtr mesh;
  IndicatorField indicators;
};

/// SOLVE-ESTIMATE-MARK-REFINE driver for the fundamental mode. Solves on the
/// initial mesh and keeps refining with Doerfler marking until a solve has
/// been recorded at or above the dof budget (budget exhaustion is the normal
/// termination). Requires a FOSLS formulation with an RT0/BDM1 flux family.
std::vector<AdaptRecord> adapt_loop(const FormulationSpec& spec,
                                    const AdaptOptions& opts);

}  // namespace lseig
