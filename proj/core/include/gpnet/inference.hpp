#ifndef GPNET_INFERENCE_HPP
#define GPNET_INFERENCE_HPP

#include <vector>

#include "gpnet/gaussian.hpp"
#include "gpnet/models.hpp"

namespace gpnet {

struct FitOptions {
  int max_iter = 100;
  double grad_tol = 1e-5;  // relative to max(1, |loglik|)
  int size_cap = kDefaultSizeCap;
};

struct FitResult {
  CrossCovModel model_hat;
  double loglik_at_opt = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;  // analytic gradient max-norm at the optimum
};

// Maximum likelihood for Sigma with the template's spatial parameters held
// fixed. Sigma is parametrized by its lower Cholesky factor (log diagonal);
// the likelihood gradient is computed analytically from the blocks of
// C^{-1} - alpha alpha^T. The template's Sigma is the initializer. Not
// defined for the LMC.
FitResult fit_sigma_mle(const FieldSample& sample, const CrossCovModel& model_template,
                        const FitOptions& opts = {});

// Closed-form Sigma estimate for inside-out data observed exactly on the
// reference set: whitening each component column by L_j^{-1} reduces the
// problem to a sample covariance over rows. Adds a 1e-8 trace ridge when
// n < q (flagged through *ridged).
Matrix iox_sigma_hat(const FieldSample& sample, const InsideOutModel& model,
                     bool* ridged = nullptr);

// (1/n) Yc^T Yc with column-centered Yc, observations treated as
// independent replicates.
Matrix sample_cov_independent(const FieldSample& sample);

struct GlassoOptions {
  int max_iter = 500;
  double tol = 1e-8;
};

struct GraphEstimate {
  Matrix precision;
  Matrix covariance;  // the estimated Sigma_glasso = precision^{-1}
  double lambda = 0.0;
  BoolMatrix edges;
  Matrix pcorr;  // standardized negated precision (edge weights)
  int iterations = 0;
  bool converged = false;
};

// L1-penalized precision estimation (off-diagonal penalty) by the
// block-coordinate-descent method: cycles a lasso subproblem over columns
// of the working covariance.
GraphEstimate graphical_lasso(const Matrix& s_hat, double lambda,
                              const GlassoOptions& opts = {});

// Solutions along a decreasing lambda sequence, warm-starting each solve
// at the previous one.
std::vector<GraphEstimate> graphical_lasso_path(const Matrix& s_hat,
                                                const std::vector<double>& lambdas,
                                                const GlassoOptions& opts = {});

// Max KKT violation of the penalized stationarity conditions:
// [W - S]_ij = lambda sign(P_ij) on nonzero off-diagonal precision entries,
// |[W - S]_ij| <= lambda on zero ones, W_ii = S_ii.
double glasso_kkt_residual(const GraphEstimate& est, const Matrix& s_hat);

// Edge scores for ROC analysis: the largest lambda on a geometric path at
// which each off-diagonal precision entry first becomes nonzero (never
// active on the path scores 0).
Matrix glasso_entry_lambda_scores(const Matrix& s_hat, int path_length = 50,
                                  double lambda_ratio = 1e-2);

struct RocPoint {
  double fpr;
  double tpr;
};

struct RocResult {
  std::vector<RocPoint> points;  // sorted by fpr
  double auc = 0.0;
};

// ROC of score-ranked edge detection against a truth labeling; trapezoidal
// AUC. Requires at least one true edge and one true non-edge.
RocResult roc_curve(const std::vector<double>& scores, const std::vector<bool>& truth);

struct F1Result {
  double threshold = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
};

// Threshold on the scores maximizing F1 (ties resolved toward higher
// specificity). All-zero scores yield an infinite threshold sentinel.
F1Result f1_best_threshold(const std::vector<double>& scores, const std::vector<bool>& truth);

// Closed-form CRPS of a Gaussian predictive law at observation y.
double crps_gaussian(double mu, double sd, double y);

double rmse(const std::vector<double>& estimates, const std::vector<double>& truth);

}  // namespace gpnet

#endif
