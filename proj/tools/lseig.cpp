// lseig: experiment runner for the least-squares eigenvalue solvers.
//
// Subcommands:
//   apriori        uniform-refinement convergence tables
//   curl-failure   first five eigenvalues of the curl-enriched formulation
//                  on the L-shape, plus an RT0 control run
//   adaptive       Doerfler-driven adaptive study on the L-shape
//   oracle         L-shape reference eigenvalues (P1 ladder + extrapolation)

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "lseig/experiments.hpp"

namespace fs = std::filesystem;
using namespace lseig;

namespace {

struct GlobalFlags {
  bool dump_mesh = false;
  bool dump_matrices = false;
  int quad_degree = 5;
};

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << content;
  std::cout << "wrote " << path.string() << "\n";
}

std::string theta_label(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", theta);
  return buf;
}

Method parse_method(const std::string& s) {
  if (s == "f1") return Method::F1;
  if (s == "f1star") return Method::F1star;
  if (s == "llstar") return Method::LLstar;
  if (s == "pep") return Method::PEP;
  if (s == "pemd") return Method::PEMd;
  throw CLI::ValidationError("--formulation", "unknown formulation " + s);
}

Family parse_family(const std::string& s) {
  if (s == "rt0") return Family::RT0;
  if (s == "bdm1") return Family::BDM1;
  if (s == "cg1vec") return Family::CG1Vec;
  throw CLI::ValidationError("--sigma", "unknown family " + s);
}

void dump_debug_artifacts(const ExperimentConfig& cfg, const fs::path& out,
                          const GlobalFlags& flags) {
  if (!flags.dump_mesh && !flags.dump_matrices) return;
  MeshPtr mesh = build_initial_mesh(
      {cfg.domain, cfg.initial_subdivisions, InitialPattern::CrissCross});
  if (flags.dump_mesh) write_file(out / "mesh_level0.txt", dump_mesh_ascii(*mesh));
  if (flags.dump_matrices && cfg.method != Method::PEP && cfg.method != Method::PEMd) {
    Formulation tag = cfg.method == Method::F1        ? Formulation::F1
                      : cfg.method == Method::F1star ? Formulation::F1star
                                                      : Formulation::LLstar;
    BlockPencil pencil = build_pencil({tag, cfg.sigma_family, mesh});
    write_matrix_market(pencil.A, (out / "block_A.mtx").string());
    write_matrix_market(pencil.B, (out / "block_B.mtx").string());
    write_matrix_market(pencil.C, (out / "block_C.mtx").string());
    write_matrix_market(pencil.M, (out / "block_M.mtx").string());
    std::cout << "wrote block matrices to " << out.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"least-squares finite element eigenvalue experiments"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_flag("--dump-mesh", flags.dump_mesh, "dump the initial mesh (ASCII)");
  app.add_flag("--dump-matrices", flags.dump_matrices,
               "dump assembled blocks (MatrixMarket)");
  app.add_option("--quad-degree", flags.quad_degree,
                 "quadrature degree for error norms (>= 4)");

  // apriori
  auto* ap = app.add_subcommand("apriori", "uniform-refinement convergence table");
  std::string ap_form = "f1", ap_sigma = "rt0", ap_domain = "square";
  std::string ap_out = "out", ap_refdata;
  int ap_levels = 5, ap_k = 1, ap_n0 = 0;
  ap->add_option("--formulation", ap_form, "f1|f1star|llstar|pep|pemd");
  ap->add_option("--sigma", ap_sigma, "rt0|bdm1|cg1vec");
  ap->add_option("--domain", ap_domain, "square|lshape");
  ap->add_option("--levels", ap_levels, "number of uniform levels (>= 2)");
  ap->add_option("--num-eigs", ap_k, "eigenvalues per level");
  ap->add_option("--initial-n", ap_n0, "initial subdivisions (default 4/square, 1/lshape)");
  ap->add_option("--refdata", ap_refdata, "L-shape reference CSV");
  ap->add_option("--out", ap_out, "output directory");

  // curl-failure
  auto* cf = app.add_subcommand("curl-failure",
                                "div-curl formulation on the L-shape");
  std::string cf_out = "out", cf_refdata;
  int cf_levels = 5;
  cf->add_option("--levels", cf_levels, "number of uniform levels (>= 3)");
  cf->add_option("--refdata", cf_refdata, "L-shape reference CSV");
  cf->add_option("--out", cf_out, "output directory");

  // adaptive
  auto* ad = app.add_subcommand("adaptive", "Doerfler adaptive study (L-shape)");
  std::string ad_out = "out", ad_refdata, ad_thetas = "0.3";
  int ad_maxdofs = 100000;
  ad->add_option("--theta", ad_thetas, "comma-separated bulk parameters");
  ad->add_option("--max-dofs", ad_maxdofs, "dof budget per run");
  ad->add_option("--refdata", ad_refdata, "L-shape reference CSV");
  ad->add_option("--out", ad_out, "output directory");

  // oracle
  auto* orc = app.add_subcommand("oracle", "reference eigenvalue oracles");
  std::string orc_target = "lshape", orc_out = "refdata";
  int orc_level = 7;
  orc->add_option("target", orc_target, "only 'lshape' is available");
  orc->add_option("--max-level", orc_level, "finest P1 ladder level");
  orc->add_option("--out", orc_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ap) {
      ExperimentConfig cfg;
      cfg.method = parse_method(ap_form);
      cfg.sigma_family = parse_family(ap_sigma);
      cfg.domain = ap_domain == "lshape" ? DomainKind::LShape : DomainKind::UnitSquare;
      cfg.levels = ap_levels;
      cfg.num_eigs = ap_k;
      cfg.initial_subdivisions =
          ap_n0 > 0 ? ap_n0 : (cfg.domain == DomainKind::UnitSquare ? 4 : 1);
      cfg.quad_degree = flags.quad_degree;
      cfg.refdata_file = ap_refdata;
      fs::path out(ap_out);
      dump_debug_artifacts(cfg, out, flags);
      ConvergenceTable table = run_apriori(cfg);
      std::string base = std::string("apriori_") + method_name(cfg.method) + "_" +
                         family_name(cfg.sigma_family) + "_" +
                         (cfg.domain == DomainKind::UnitSquare ? "square" : "lshape");
      write_file(out / (base + ".csv"), convergence_table_csv(table));
      write_file(out / (base + ".gp"),
                 gnuplot_script(base + ".csv", 4 + cfg.num_eigs + 1, base));
      std::cout << "rate(err_lambda) = " << format_csv_value(table.rate_lambda)
                << "\n";
    } else if (*cf) {
      ExperimentConfig cfg;
      cfg.levels = cf_levels;
      cfg.refdata_file = cf_refdata;
      cfg.quad_degree = flags.quad_degree;
      CurlFailureResult res = run_curl_failure(cfg);
      fs::path out(cf_out);
      write_file(out / "curl_failure.csv", curl_failure_csv(res));
      write_file(out / "curl_failure_control.csv", curl_failure_control_csv(res));
      std::cout << "mode 1 wrong-limit detected: "
                << (res.mode1_wrong_limit ? "yes" : "no")
                << ", control converges: " << (res.control_converges ? "yes" : "no")
                << "\n";
    } else if (*ad) {
      ExperimentConfig cfg;
      cfg.max_dofs = ad_maxdofs;
      cfg.refdata_file = ad_refdata;
      cfg.quad_degree = flags.quad_degree;
      std::stringstream ts(ad_thetas);
      std::string tok;
      while (std::getline(ts, tok, ','))
        if (!tok.empty()) cfg.thetas.push_back(std::stod(tok));
      AdaptiveStudy study = run_adaptive(cfg);
      fs::path out(ad_out);
      for (size_t i = 0; i < study.thetas.size(); ++i)
        write_file(out / ("adaptive_theta" + theta_label(study.thetas[i]) + ".csv"),
                   adaptive_log_csv(study.logs[i]));
      write_file(out / "adaptive_summary.csv", adaptive_summary_csv(study));
      for (size_t i = 0; i < study.thetas.size(); ++i)
        std::cout << "theta=" << theta_label(study.thetas[i])
                  << " slope=" << format_csv_value(study.slopes[i]) << "\n";
    } else if (*orc) {
      if (orc_target != "lshape")
        throw std::runtime_error("unknown oracle target " + orc_target);
      LShapeReference ref = lshape_reference_oracle(orc_level, 5);
      write_file(fs::path(orc_out) / "lshape_eigs.csv", lshape_reference_csv(ref));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
