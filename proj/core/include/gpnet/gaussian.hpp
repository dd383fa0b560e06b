#ifndef GPNET_GAUSSIAN_HPP
#define GPNET_GAUSSIAN_HPP

#include <cstdint>
#include <vector>

#include "gpnet/models.hpp"
#include "gpnet/types.hpp"

namespace gpnet {

// Flat index of (component, location) into vec(Y) = (y_1^T ... y_q^T)^T.
inline int vec_index(int component, int location, int n_locs) {
  return component * n_locs + location;
}

// Lower Cholesky factor of a symmetric positive-definite matrix (LAPACK
// dpotrf). Throws std::invalid_argument when the input is not symmetric to
// 1e-10 relative, std::runtime_error naming the failing pivot when not PD.
Matrix chol(const Matrix& spd);

// In-place factorization without the symmetry check (input must be SPD,
// only the lower triangle is referenced). Returns the failing pivot (1-based)
// or 0 on success.
int chol_inplace(Matrix& a);

// Solve L L^T x = b given the lower factor.
Matrix chol_solve(const Matrix& L, const Matrix& b);

// Full inverse from the lower factor (LAPACK dpotri).
Matrix chol_inverse(const Matrix& L);

double chol_logdet(const Matrix& L);

// Number of BLAS threads used by the dense kernels (OpenBLAS).
void set_blas_threads(int n);

struct ConditionalLaw {
  Vector mean;
  Matrix cov;
  // which (component, location-in-target-list) pairs the law describes
  std::vector<std::pair<int, int>> target_index_map;
  int clamp_count = 0;  // variances clamped up to zero
};

// Schur complement Sigma_x - Sigma_{x,o} Sigma_o^{-1} Sigma_{o,x}: the
// conditional covariance of joint_cov[target | given]. The brute-force
// oracle for every closed-form partial correlation in this library.
Matrix schur_conditional_cov(const Matrix& joint_cov, const std::vector<int>& target_idx,
                             const std::vector<int>& given_idx);

// Conditional law of the target entries given observed values at given_idx.
ConditionalLaw condition(const Matrix& joint_cov, const std::vector<int>& target_idx,
                         const std::vector<int>& given_idx, const Vector& given_values);

// Draw one field from the model over locs; deterministic in the seed.
FieldSample sample_field(const CrossCovModel& model, const LocationSet& locs,
                         std::uint64_t seed, int size_cap = kDefaultSizeCap);

// Exact dense Gaussian log-likelihood of the observed entries (mask
// honored by subsetting the joint covariance; no imputation).
double loglik(const FieldSample& sample, const CrossCovModel& model,
              int size_cap = kDefaultSizeCap);

// Cokriging: plug-in conditional law of (component, point) targets given
// all observed entries of the sample.
ConditionalLaw predict(const FieldSample& sample, const CrossCovModel& model,
                       const std::vector<std::pair<int, Eigen::RowVectorXd>>& targets,
                       int size_cap = kDefaultSizeCap);

}  // namespace gpnet

#endif
