#ifndef GPNET_MODELS_HPP
#define GPNET_MODELS_HPP

#include <variant>
#include <vector>

#include "gpnet/special.hpp"
#include "gpnet/types.hpp"

namespace gpnet {

using Point = Eigen::Ref<const Eigen::RowVectorXd>;

// Default guard on the size of an assembled joint covariance (nq).
inline constexpr int kDefaultSizeCap = 12000;

// Shared correlation: cov{y_i(l), y_j(l')} = sigma_ij rho(l - l').
struct SeparableModel {
  SigmaPair sigma;
  MaternParams corr;
};

// cov{y_i(l), y_j(l')} = sigma_ij gamma_ij M(l - l'; (nu_i+nu_j)/2, phi).
// A single scale phi is shared across components; gamma_ij is the
// cross-smoothness normalization so that the colocated covariance is
// Sigma (Hadamard) Gamma.
class ParsimoniousMaternModel {
 public:
  ParsimoniousMaternModel(SigmaPair sigma, std::vector<double> nu, double phi, int dim);

  const SigmaPair& sigma() const { return sigma_; }
  const std::vector<double>& nu() const { return nu_; }
  double phi() const { return phi_; }
  int dim() const { return dim_; }
  double gamma(int i, int j) const { return gamma_(i, j); }
  const Matrix& gamma() const { return gamma_; }

  SigmaPair sigma_;  // public-ish for refitting; accessors preferred
  std::vector<double> nu_;
  double phi_;
  int dim_;

 private:
  Matrix gamma_;
};

enum class KernelFamily { Gaussian, Spherical };

struct KernelSpec {
  KernelFamily family;
  double bandwidth;
};

// Smoothing-kernel value k(r; spec) at distance r, normalized so that the
// squared kernel integrates to one over R^dim.
double kernel_value(const KernelSpec& k, double r, int dim);

// Continuous kernel overlap k_ij(h) = int k_i(r) k_j(r + h) dr. Gaussian
// pairs use the closed form; any pair involving a spherical kernel goes
// through numerical overlap integration. |k_ij| <= 1, k_jj(0) = 1.
double conv_overlap(const KernelSpec& ki, const KernelSpec& kj,
                    const Eigen::RowVectorXd& lag);

// Finite-rank process convolution on a knot grid: y_j(l) = g_j(l)^T v_j with
// g_j(l)_t = k_j(l - s_t) Delta_t^{1/2}, so that
// cov{vec(Y)} = diag{G_1..G_q} (Sigma kron I) diag{G_1^T..G_q^T}.
class DiscretizedConvolutionModel {
 public:
  DiscretizedConvolutionModel(SigmaPair sigma, std::vector<KernelSpec> kernels,
                              LocationSet knots, Vector cell_area);
  // Uniform cell areas: domain_area / n_knots.
  DiscretizedConvolutionModel(SigmaPair sigma, std::vector<KernelSpec> kernels,
                              LocationSet knots, double domain_area);

  const SigmaPair& sigma() const { return sigma_; }
  const std::vector<KernelSpec>& kernels() const { return kernels_; }
  const LocationSet& knots() const { return knots_; }
  const Vector& cell_area() const { return cell_area_; }
  int dim() const { return knots_.dim(); }

  // g_j(l), length n_knots.
  Vector basis(int j, Point l) const;

  SigmaPair sigma_;

 private:
  std::vector<KernelSpec> kernels_;
  LocationSet knots_;
  Vector cell_area_;
};

// Nonstationary model built from per-component factors over a reference set:
// y_j(l) = h_j(l)^T L_j v_j + r_j(l)^{1/2} v_j(l), L_j L_j^T = rho_j(S).
class InsideOutModel {
 public:
  InsideOutModel(SigmaPair sigma, std::vector<MaternParams> corr, LocationSet reference);

  const SigmaPair& sigma() const { return sigma_; }
  const std::vector<MaternParams>& corr() const { return corr_; }
  const LocationSet& reference() const { return reference_; }
  const Matrix& chol_reference(int j) const { return chol_ref_[j]; }
  bool jitter_applied() const { return jitter_applied_; }

  // rho_j between the reference set and arbitrary points (n_ref x m).
  Matrix corr_reference_to(int j, const LocationSet& pts) const;

  SigmaPair sigma_;

 private:
  std::vector<MaternParams> corr_;
  LocationSet reference_;
  std::vector<Matrix> chol_ref_;  // lower Cholesky factors of rho_j(S)
  bool jitter_applied_ = false;
};

// Linear model of coregionalization: y(l) = Lambda w(l) with independent
// latent components carrying distinct correlation functions.
class LmcModel {
 public:
  LmcModel(Matrix loading, std::vector<MaternParams> corr);

  const Matrix& loading() const { return loading_; }
  const Matrix& loading_inverse() const { return loading_inv_; }
  const std::vector<MaternParams>& corr() const { return corr_; }
  double condition_number() const { return cond_; }

 private:
  Matrix loading_, loading_inv_;
  std::vector<MaternParams> corr_;
  double cond_;
};

using CrossCovModel = std::variant<SeparableModel, ParsimoniousMaternModel,
                                   DiscretizedConvolutionModel, InsideOutModel, LmcModel>;

int num_components(const CrossCovModel& model);

// Cross-dependence parameters; throws for the LMC, which carries a loading
// matrix instead of a SigmaPair.
const SigmaPair& model_sigma(const CrossCovModel& model);
// Model with the SigmaPair replaced (spatial parameters untouched).
CrossCovModel with_sigma(const CrossCovModel& model, SigmaPair sigma);

// cov{y_i(l1), y_j(l2)} under the model's closed form.
double cross_cov_entry(const CrossCovModel& model, int i, int j, Point l1, Point l2);

// Joint covariance of vec(Y) = (y_1^T ... y_q^T)^T over locs: entry
// ((j-1)n + a, (k-1)n + b) = cov{y_j(l_a), y_k(l_b)} (component-major,
// zero-based internally). Throws std::length_error when nq exceeds the cap.
Matrix build_joint_cov(const CrossCovModel& model, const LocationSet& locs,
                       int size_cap = kDefaultSizeCap);

struct IoxWeights {
  Vector h;  // rho_j(S)^{-1} rho_j(S, l)
  double r;  // rho_j(l,l) - h^T rho_j(S, l), clamped to [0, inf)
};

// Interpolation weights and residual variance of component j at l.
IoxWeights iox_weights(const InsideOutModel& model, int j, Point l);

// Colocated covariance cov{Y(l), Y(l)}. Stationary families do not depend
// on l; the nonstationary families (inside-out, discretized convolution)
// evaluate at the given point, defaulting to their first reference/knot.
Matrix colocated_covariance(const CrossCovModel& model);
Matrix colocated_covariance(const CrossCovModel& model, Point l);

}  // namespace gpnet

#endif
