#ifndef GPNET_NETCALC_HPP
#define GPNET_NETCALC_HPP

#include <functional>
#include <limits>
#include <set>

#include "gpnet/models.hpp"

namespace gpnet {

// Process-level partial correlation coefficient r_ij = -Q_ij/(Q_ii Q_jj)^{1/2}.
double partial_coeff(const SigmaPair& sp, int i, int j);

// Sigma-free spatial factor multiplying both the marginal and the partial
// cross-correlation of an inside-out family: rho for the separable model,
// the continuous kernel overlap k_ij for the convolution model, gamma_ij M
// for the common-scale Matern, f_ij(l, l'; S) for the inside-out model.
// Throws for the LMC, whose partial structure does not factorize.
double attenuation(const CrossCovModel& model, int i, int j, Point l1, Point l2);

// corr{y_i(l1), y_j(l2)} = cross covariance standardized by the marginal
// variances at the two points.
double marginal_cross_corr(const CrossCovModel& model, int i, int j, Point l1, Point l2);

// corr{y_i(l1), y_j(l2) | all other components} = partial_coeff x attenuation.
// Throws std::invalid_argument for the LMC (conditional independence there is
// characterized by the inverse loading support, not by a Q entry).
double partial_cross_corr(const CrossCovModel& model, int i, int j, Point l1, Point l2);

constexpr double kRangeNotReached = std::numeric_limits<double>::infinity();

// Smallest h such that |fn(h')| < threshold for all h' in [h, search_max]
// (last down-crossing), bracketed on a grid and refined by bisection to
// 1e-6. Returns 0 when |fn| never reaches the threshold and
// kRangeNotReached when |fn(search_max)| is still above it.
double effective_range(const std::function<double(double)>& fn, double threshold,
                       double search_max, int grid_points = 2048);

// Partial (or marginal) cross-correlation along the ray anchor + h * direction.
std::function<double(double)> partial_corr_along_ray(const CrossCovModel& model, int i,
                                                     int j, const Eigen::RowVectorXd& anchor,
                                                     const Eigen::RowVectorXd& direction);
std::function<double(double)> marginal_corr_along_ray(const CrossCovModel& model, int i,
                                                      int j, const Eigen::RowVectorXd& anchor,
                                                      const Eigen::RowVectorXd& direction);

struct LmcCiResult {
  bool independent;
  int witness_row;     // violating row r (0-based) when not independent, else -1
  double max_product;  // max_r |a_ri a_rj|
};

// Process-level conditional independence test for the LMC: independent iff
// a_ri a_rj = 0 for all rows r of A = Lambda^{-1} (within tol * |A|_max^2).
LmcCiResult lmc_ci_check(const LmcModel& model, int i, int j, double tol = 1e-12);

// [S_Y(w)^{-1}]_{ij} = sum_r a_ri a_rj / rho_r~(w) for the LMC with Matern
// latent spectral densities in R^dim.
double lmc_inverse_spectral_entry(const LmcModel& model, const Eigen::RowVectorXd& omega,
                                  int i, int j);

// Colocated point-wise partial correlations: the (i,j) entry is
// corr{y_i(l), y_j(l) | Y_o(l)}, from the standardized negated inverse of
// the colocated covariance. Distinct from the process-level matrix except
// in the separable model.
Matrix colocated_pointwise_pcorr(const CrossCovModel& model);
Matrix colocated_pointwise_pcorr(const CrossCovModel& model, Point l);

// Colocated process-level partial correlations r_ij * attenuation(l, l).
Matrix colocated_process_pcorr(const CrossCovModel& model);
Matrix colocated_process_pcorr(const CrossCovModel& model, Point l);

struct GraphSummary {
  int q = 0;
  std::set<std::pair<int, int>> edges;  // i < j, pairs with Q_ij != 0 under tol
  Matrix weights;                       // process-level r_ij
  Matrix colocated_pointwise;
  Matrix colocated_process;
};

GraphSummary summarize_graph(const CrossCovModel& model, double edge_tol = 1e-8);

}  // namespace gpnet

#endif
