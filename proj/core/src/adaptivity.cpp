#include "lseig/adaptivity.hpp"

#include <cmath>
#include <stdexcept>

namespace lseig {

std::vector<AdaptRecord> adapt_loop(const FormulationSpec& spec,
                                    const AdaptOptions& opts) {
  if (!(opts.theta > 0.0) || opts.theta > 1.0)
    throw std::invalid_argument("adapt_loop: theta must lie in (0, 1]");
  if (spec.tag != Formulation::F1 ||
      (spec.sigma_family != Family::RT0 && spec.sigma_family != Family::BDM1))
    throw std::invalid_argument("adapt_loop: needs F1 with an RT0/BDM1 flux");

  std::vector<AdaptRecord> records;
  MeshPtr mesh = spec.mesh;
  for (int iter = 0;; ++iter) {
    FormulationSpec level{spec.tag, spec.sigma_family, mesh};
    BlockPencil pencil = build_pencil(level);
    auto pairs = solve_finite_spectrum(pencil, 1);
    if (pairs.empty()) throw std::runtime_error("adapt_loop: no finite eigenvalue");
    const EigenPair& pair = pairs.front();

    FeFunction sh{pencil.sigma_space, pair.sigma};
    FeFunction uh{pencil.u_space, pair.u};
    IndicatorField ind = estimate(sh, uh);

    AdaptRecord rec;
    rec.iter = iter;
    rec.ndof = pencil.dim();
    rec.lambda1 = pair.lambda;
    rec.eta = ind.eta_global();
    if (!std::isnan(opts.lambda_ref))
      rec.err_lambda = std::abs(pair.lambda - opts.lambda_ref);
    rec.mesh = mesh;
    rec.indicators = ind;
    records.push_back(rec);

    if (rec.ndof >= opts.max_dofs) break;
    std::vector<int> marked = mark_dorfler(ind, opts.theta);
    if (marked.empty()) break;  // nothing left to refine
    mesh = refine_marked(*mesh, marked);
  }
  return records;
}

}  // namespace lseig
