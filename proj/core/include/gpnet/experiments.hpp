#ifndef GPNET_EXPERIMENTS_HPP
#define GPNET_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gpnet/inference.hpp"
#include "gpnet/netcalc.hpp"
#include "gpnet/rng.hpp"

namespace gpnet {

// Five-process demonstration network: common-scale Matern with phi = 10,
// smoothness (0.2, 1, 0.5, 1.4, 0.75) and a sparse unit-diagonal precision.
// Chosen so that the (2,3) pair reverses sign between marginal and partial
// correlation, (3,5) is conditionally independent with positive marginal
// correlation mediated by y4, and the (3,4) partial effective cross-range
// is shorter than its unconditional one.
ParsimoniousMaternModel demo_network_model();

// Symmetric hollow adjacency; each unordered pair included independently.
BoolMatrix gen_graph(int q, double edge_prob, Rng& rng);

// SPD precision with unit diagonal and exact zeros off the adjacency
// pattern: off-diagonal weights |w| ~ U[0.2, 0.6] with random sign, the
// diagonal inflated to a 5% dominance margin, then rescaled to unit
// diagonal. A deterministic stand-in for graph-constrained Wishart draws;
// preserves the properties the studies rely on (pattern zeros, SPD,
// unit diagonal).
SigmaPair gen_precision(const BoolMatrix& adjacency, Rng& rng);

struct LambdaPathSpec {
  int length = 50;
  double ratio = 1e-2;
};

struct RocStudyConfig {
  int q = 8;
  int grid = 20;  // grid x grid locations on [0,1]^2
  int replicates = 30;
  double edge_probability = 0.2;
  double phi = 10.0;
  double nu_lo = 0.5, nu_hi = 2.0;
  LambdaPathSpec path;
  std::uint64_t master_seed = 0;
  int threads = 2;
  // desk-budget convergence for the per-replicate Sigma MLE; the glasso
  // lambda path quantizes edge scores far more coarsely than this
  FitOptions fit{.max_iter = 60, .grad_tol = 1e-4};
};

struct RocReplicate {
  int id = 0;
  bool ok = false;
  std::string note;
  double auc_spatial = 0.0, auc_independent = 0.0;
  double sens_spatial = 0.0, spec_spatial = 0.0;
  double sens_independent = 0.0, spec_independent = 0.0;
  std::vector<RocPoint> roc_spatial, roc_independent;
};

struct RocStudyReport {
  RocStudyConfig config;
  std::vector<RocReplicate> replicates;
  int used = 0;
  double mean_auc_spatial = 0.0, mean_auc_independent = 0.0;
  double mean_dsens = 0.0, mean_dspec = 0.0;
};

// Graph recovery, spatial vs independent: per replicate, draw a graph and
// precision, simulate common-scale Matern data on the grid, estimate Sigma
// by fixed-spatial MLE (Spatial arm) and by the iid sample covariance
// (Independent arm), run the glasso path on both and score edge recovery
// against the simulated graph.
RocStudyReport run_roc_study(const RocStudyConfig& cfg);

struct RecoveryStudyConfig {
  int grid = 20;
  int replicates = 20;
  int missing_count = 200;
  double nu_lo = 0.2, nu_hi = 1.8;
  double phi_lo = 10.0, phi_hi = 40.0;
  std::uint64_t master_seed = 0;
  int threads = 2;
  FitOptions fit{.max_iter = 60, .grad_tol = 1e-5};
};

struct FamilyScores {
  double pcorr_rmse = 0.0;
  double margvar_rmse = 0.0;
  double crosscov_rmse = 0.0;
  double pred_rmse = 0.0;
  double pred_crps = 0.0;
};

struct RecoveryReplicate {
  int id = 0;
  bool ok = false;
  std::string note;
  FamilyScores pm;   // common-scale Matern arm (well specified)
  FamilyScores iox;  // inside-out arm fit to the same data
};

struct RecoveryStudyReport {
  RecoveryStudyConfig config;
  std::vector<RecoveryReplicate> replicates;
  int used = 0;
  FamilyScores mean_pm, mean_iox;
};

// Parameter and prediction recovery on the demonstration network: data
// simulated from the common-scale Matern with per-replicate smoothness and
// scale draws, a fixed number of entries removed at random, both model
// arms refit with true spatial parameters, and colocated partial
// correlations, coregionalization entries and held-out predictions scored.
RecoveryStudyReport run_recovery_study(const RecoveryStudyConfig& cfg);

// Scores one fitted model against the generating common-scale Matern:
// colocated partial correlations, marginal variances and cross-covariances
// by RMSE, held-out entries by RMSE and Gaussian CRPS. Plugging the truth
// in yields exactly zero on the parameter rows.
FamilyScores score_against_truth(const CrossCovModel& model_hat,
                                 const ParsimoniousMaternModel& truth,
                                 const FieldSample& masked, const Matrix& full_values,
                                 const std::vector<std::pair<int, int>>& held_out,
                                 int size_cap = kDefaultSizeCap);

struct GeoPipelineConfig {
  int test_count = 200;
  std::uint64_t master_seed = 0;
  double range_threshold = 0.05;
  double range_search_max = 3.0;
  FitOptions fit{.max_iter = 80, .grad_tol = 1e-5};
  double nu_min = 0.05, nu_max = 3.0;
};

struct MetalScores {
  std::string name;
  double rmspe_pm = 0.0, crps_pm = 0.0;
  double rmspe_iox = 0.0, crps_iox = 0.0;
  double rmspe_mean_baseline = 0.0;
  int test_entries = 0;
};

struct GeoPipelineReport {
  GeoPipelineConfig config;
  std::vector<std::string> names;
  std::vector<double> nu_hat, phi_hat, var_hat;  // univariate profile fits
  double phi_shared = 0.0;                       // common scale for the Matern arm
  std::vector<MetalScores> per_metal;
  MetalScores overall;
  Matrix colocated_corr_pm;    // standardized Sigma (Hadamard) Gamma
  Matrix pcorr_pm, pcorr_iox;  // process-level partial correlation coefficients
  Matrix marginal_range, partial_range;
  GraphSummary graph_pm;
};

// Maximum-likelihood geostatistical pipeline for an irregular multivariate
// dataset in heavy-metal format: log-transform, center, hold out a test
// split, estimate per-component smoothness/scale by univariate profile
// likelihood, fit Sigma for the common-scale Matern and inside-out arms,
// and report correlation/partial-correlation structure, effective ranges
// and held-out prediction scores.
GeoPipelineReport run_geo_pipeline(const FieldSample& raw, std::vector<std::string> names,
                                   const GeoPipelineConfig& cfg);

}  // namespace gpnet

#endif
