#include "gpnet/netcalc.hpp"

#include <cmath>

namespace gpnet {

double partial_coeff(const SigmaPair& sp, int i, int j) {
  const int q = sp.order();
  if (i < 0 || i >= q || j < 0 || j >= q)
    throw std::out_of_range("partial_coeff: component index out of range");
  if (i == j) throw std::domain_error("partial_coeff: requires i != j");
  return -sp.precision(i, j) / std::sqrt(sp.precision(i, i) * sp.precision(j, j));
}

namespace {

// f_ij(l, l'; S) computed from the weights directly (never via division by
// sigma_ij, which may be zero).
double iox_attenuation(const InsideOutModel& m, int i, int j, Point l1, Point l2) {
  const IoxWeights wi = iox_weights(m, i, l1);
  const IoxWeights wj = iox_weights(m, j, l2);
  const Vector a = m.chol_reference(i).transpose() * wi.h;
  const Vector b = m.chol_reference(j).transpose() * wj.h;
  double f = a.dot(b);
  if ((l1 - l2).norm() == 0.0) f += std::sqrt(wi.r) * std::sqrt(wj.r);
  return f;
}

}  // namespace

double attenuation(const CrossCovModel& model, int i, int j, Point l1, Point l2) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SeparableModel>) {
          return matern_corr((l1 - l2).norm(), m.corr);
        } else if constexpr (std::is_same_v<T, ParsimoniousMaternModel>) {
          const MaternParams cross{0.5 * (m.nu()[i] + m.nu()[j]), m.phi()};
          return m.gamma(i, j) * matern_corr((l1 - l2).norm(), cross);
        } else if constexpr (std::is_same_v<T, DiscretizedConvolutionModel>) {
          // continuous-limit overlap; the knot expansion approximates it
          return conv_overlap(m.kernels()[i], m.kernels()[j], l1 - l2);
        } else if constexpr (std::is_same_v<T, InsideOutModel>) {
          return iox_attenuation(m, i, j, l1, l2);
        } else {
          throw std::invalid_argument(
              "attenuation: the LMC partial cross-correlation does not factor into a "
              "coefficient and a Sigma-free spatial term; use lmc_ci_check");
        }
      },
      model);
}

double marginal_cross_corr(const CrossCovModel& model, int i, int j, Point l1, Point l2) {
  const double vi = cross_cov_entry(model, i, i, l1, l1);
  const double vj = cross_cov_entry(model, j, j, l2, l2);
  if (!(vi > 0.0) || !(vj > 0.0))
    throw std::domain_error("marginal_cross_corr: zero marginal variance");
  return cross_cov_entry(model, i, j, l1, l2) / std::sqrt(vi * vj);
}

double partial_cross_corr(const CrossCovModel& model, int i, int j, Point l1, Point l2) {
  if (std::holds_alternative<LmcModel>(model))
    throw std::invalid_argument(
        "partial_cross_corr: not defined in factorized form for the LMC; conditional "
        "independence there is governed by the rows of the inverse loading matrix");
  if (i == j) throw std::domain_error("partial_cross_corr: requires i != j");
  const double r = partial_coeff(model_sigma(model), i, j);
  if (r == 0.0) return 0.0;
  return r * attenuation(model, i, j, l1, l2);
}

double effective_range(const std::function<double(double)>& fn, double threshold,
                       double search_max, int grid_points) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw std::domain_error("effective_range: threshold must be in (0, 1)");
  if (!(search_max > 0.0)) throw std::domain_error("effective_range: search_max must be > 0");

  const double step = search_max / grid_points;
  // last grid point at or above the threshold
  int last_above = -1;
  for (int k = 0; k <= grid_points; ++k) {
    if (std::abs(fn(k * step)) >= threshold) last_above = k;
  }
  if (last_above < 0) return 0.0;
  if (last_above == grid_points) return kRangeNotReached;

  double lo = last_above * step, hi = (last_above + 1) * step;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(fn(mid)) >= threshold)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::function<double(double)> partial_corr_along_ray(const CrossCovModel& model, int i, int j,
                                                     const Eigen::RowVectorXd& anchor,
                                                     const Eigen::RowVectorXd& direction) {
  const Eigen::RowVectorXd unit = direction / direction.norm();
  return [&model, i, j, anchor, unit](double h) {
    const Eigen::RowVectorXd other = anchor + h * unit;
    return partial_cross_corr(model, i, j, anchor, other);
  };
}

std::function<double(double)> marginal_corr_along_ray(const CrossCovModel& model, int i, int j,
                                                      const Eigen::RowVectorXd& anchor,
                                                      const Eigen::RowVectorXd& direction) {
  const Eigen::RowVectorXd unit = direction / direction.norm();
  return [&model, i, j, anchor, unit](double h) {
    const Eigen::RowVectorXd other = anchor + h * unit;
    return marginal_cross_corr(model, i, j, anchor, other);
  };
}

LmcCiResult lmc_ci_check(const LmcModel& model, int i, int j, double tol) {
  const Matrix& A = model.loading_inverse();
  const int q = static_cast<int>(A.rows());
  if (i < 0 || i >= q || j < 0 || j >= q || i == j)
    throw std::domain_error("lmc_ci_check: need distinct component indices in range");
  const double scale = A.cwiseAbs().maxCoeff();
  LmcCiResult res{true, -1, 0.0};
  for (int r = 0; r < q; ++r) {
    const double p = std::abs(A(r, i) * A(r, j));
    if (p > res.max_product) {
      res.max_product = p;
      res.witness_row = r;
    }
  }
  res.independent = res.max_product <= tol * scale * scale;
  if (res.independent) res.witness_row = -1;
  return res;
}

double lmc_inverse_spectral_entry(const LmcModel& model, const Eigen::RowVectorXd& omega,
                                  int i, int j) {
  const Matrix& A = model.loading_inverse();
  const int q = static_cast<int>(A.rows());
  if (i < 0 || i >= q || j < 0 || j >= q)
    throw std::out_of_range("lmc_inverse_spectral_entry: component index out of range");
  const int dim = static_cast<int>(omega.size());
  double out = 0.0;
  for (int r = 0; r < q; ++r) {
    const double sd = matern_spectral_density(omega.norm(), model.corr()[r], dim);
    if (!(sd > 0.0))
      throw std::domain_error("lmc_inverse_spectral_entry: zero spectral density");
    out += A(r, i) * A(r, j) / sd;
  }
  return out;
}

namespace {

Matrix pcorr_from_cov(const Matrix& cov) {
  const int q = static_cast<int>(cov.rows());
  if (q == 1) return Matrix::Ones(1, 1);
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("colocated_pointwise_pcorr: colocated covariance is singular");
  Matrix P = llt.solve(Matrix::Identity(q, q));
  Matrix out(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      out(i, j) = i == j ? 1.0 : -P(i, j) / std::sqrt(P(i, i) * P(j, j));
  return out;
}

}  // namespace

Matrix colocated_pointwise_pcorr(const CrossCovModel& model) {
  return pcorr_from_cov(colocated_covariance(model));
}

Matrix colocated_pointwise_pcorr(const CrossCovModel& model, Point l) {
  return pcorr_from_cov(colocated_covariance(model, l));
}

namespace {

Matrix process_pcorr_impl(const CrossCovModel& model, const Eigen::RowVectorXd& l) {
  const SigmaPair& sp = model_sigma(model);
  const int q = sp.order();
  Matrix out = Matrix::Identity(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (i != j) out(i, j) = partial_coeff(sp, i, j) * attenuation(model, i, j, l, l);
  return out;
}

Eigen::RowVectorXd default_point(const CrossCovModel& model) {
  if (const auto* iox = std::get_if<InsideOutModel>(&model)) return iox->reference().point(0);
  if (const auto* dc = std::get_if<DiscretizedConvolutionModel>(&model))
    return dc->knots().point(0);
  return Eigen::RowVectorXd::Zero(2);
}

}  // namespace

Matrix colocated_process_pcorr(const CrossCovModel& model) {
  return process_pcorr_impl(model, default_point(model));
}

Matrix colocated_process_pcorr(const CrossCovModel& model, Point l) {
  return process_pcorr_impl(model, l);
}

GraphSummary summarize_graph(const CrossCovModel& model, double edge_tol) {
  const SigmaPair& sp = model_sigma(model);
  GraphSummary g;
  g.q = sp.order();
  g.weights = Matrix::Zero(g.q, g.q);
  for (int i = 0; i < g.q; ++i)
    for (int j = i + 1; j < g.q; ++j) {
      const double r = partial_coeff(sp, i, j);
      if (std::abs(r) >= edge_tol) {
        g.edges.insert({i, j});
        g.weights(i, j) = g.weights(j, i) = r;
      }
    }
  g.colocated_pointwise = colocated_pointwise_pcorr(model);
  g.colocated_process = colocated_process_pcorr(model);
  return g;
}

}  // namespace gpnet
