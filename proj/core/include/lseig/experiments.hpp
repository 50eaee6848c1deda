#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "lseig/adaptivity.hpp"

namespace lseig {

/// Methods available to the a priori study: the three least-squares
/// formulations plus the classical Galerkin (PEP) and mixed RT0-P0 (PEMd)
/// baselines.
enum class Method { F1, F1star, LLstar, PEP, PEMd };

const char* method_name(Method m);

struct ExperimentConfig {
  Method method = Method::F1;
  Family sigma_family = Family::RT0;
  DomainKind domain = DomainKind::UnitSquare;
  int initial_subdivisions = 4;  // square default gives h = 2^-2 at level 0
  int levels = 5;
  int num_eigs = 1;
  std::vector<double> thetas;  // adaptive; 1.0 is always appended
  int max_dofs = 100000;
  int quad_degree = 5;
  std::string refdata_file;  // optional L-shape reference CSV
  int oracle_max_level = 6;  // fallback oracle depth when no refdata given
};

struct ConvergenceRow {
  int level = 0;
  double h_max = 0.0;
  int ndof_sigma = 0;
  int ndof_u = 0;
  std::vector<double> lambdas;
  double err_lambda, err_u, err_grad_u, err_sigma, err_div_sigma, eta;
};

struct ConvergenceTable {
  Method method = Method::F1;
  Family sigma_family = Family::RT0;
  DomainKind domain = DomainKind::UnitSquare;
  int num_eigs = 1;
  bool experimental = false;  // continuous flux family: outside the analysis
  std::vector<ConvergenceRow> rows;
  // log-log rates vs h over the last max(3, levels-1) rows; nan if undefined
  double rate_lambda, rate_u, rate_grad_u, rate_sigma, rate_div_sigma;
};

ConvergenceTable run_apriori(const ExperimentConfig& cfg);

/// Reference eigenvalues of the L-shaped domain from the built-in oracle:
/// uniform P1 Galerkin ladders with Aitken extrapolation per mode.
struct LShapeReference {
  std::vector<double> lambda;
  std::vector<double> observed_rate;
  int levels_used = 0;
  int finest_ndof = 0;
};
LShapeReference lshape_reference_oracle(int max_level = 7, int k = 5);
std::string lshape_reference_csv(const LShapeReference& ref);
LShapeReference parse_lshape_reference_csv(std::istream& in);

struct CurlFailureResult {
  std::vector<double> h_max;             // per level
  std::vector<int> ndof;                 // curl pencil dimension
  std::vector<std::array<double, 5>> lambdas;
  std::vector<std::array<double, 5>> errors;
  std::vector<double> control_lambda1;   // F1 / RT0 on the same meshes
  std::vector<double> control_err1;
  LShapeReference reference;
  bool mode1_wrong_limit = false;   // err > 0.1 at all levels, diffs shrink
  bool control_converges = false;   // control err < 0.05 at the finest level
};
CurlFailureResult run_curl_failure(const ExperimentConfig& cfg);

struct AdaptiveStudy {
  std::vector<double> thetas;
  std::vector<std::vector<AdaptRecord>> logs;  // one per theta
  std::vector<double> slopes;  // err_lambda vs ndof, log-log
  LShapeReference reference;
};
AdaptiveStudy run_adaptive(const ExperimentConfig& cfg);

/// Least-squares slope in log-log coordinates. Requires at least two pairs
/// with positive entries; throws std::invalid_argument otherwise.
double fit_rate(const std::vector<std::pair<double, double>>& pairs);

/// Smallest k eigenvalues (ascending) of the P1 Galerkin pencil, plus the
/// free scalar dof count. Used by the baselines and the oracle.
std::vector<double> pep_eigenvalues(MeshPtr mesh, int k, int* ndof = nullptr);

/// CSV emission (comma separated, '.' decimal, 12 significant digits,
/// nan spelled "nan"). All writers are byte-deterministic.
std::string format_csv_value(double v);
std::string convergence_table_csv(const ConvergenceTable& t);
std::string curl_failure_csv(const CurlFailureResult& r);
std::string curl_failure_control_csv(const CurlFailureResult& r);
std::string adaptive_log_csv(const std::vector<AdaptRecord>& records);
std::string adaptive_summary_csv(const AdaptiveStudy& s);
std::string gnuplot_script(const std::string& csv_name, int err_col,
                           const std::string& title);

}  // namespace lseig
