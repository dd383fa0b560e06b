#include "gpnet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpnet/optim.hpp"

namespace gpnet {

namespace {

// Observed (component, location) pairs in vec(Y) order; component-major so
// the observed covariance splits into contiguous per-component blocks.
struct ObsLayout {
  std::vector<int> comp, loc;
  std::vector<int> comp_begin;  // q+1 offsets into the flat index
};

ObsLayout observed_layout(const FieldSample& s) {
  ObsLayout out;
  out.comp_begin.assign(s.q() + 1, 0);
  for (int j = 0; j < s.q(); ++j) {
    for (int a = 0; a < s.n(); ++a)
      if (s.observed(a, j)) {
        out.comp.push_back(j);
        out.loc.push_back(a);
      }
    out.comp_begin[j + 1] = static_cast<int>(out.comp.size());
  }
  return out;
}

// Sigma-free attenuation blocks of the joint covariance restricted to the
// observed entries: block (i,j) has rows = observed locations of component
// i, cols = observed locations of component j. Obtained by assembling the
// joint covariance once and dividing out sigma_ij (after replacing any
// zero-entry Sigma with a strictly positive one sharing the spatial side).
std::vector<std::vector<Matrix>> observed_attenuation_blocks(const FieldSample& sample,
                                                             const CrossCovModel& model,
                                                             const ObsLayout& lay,
                                                             int size_cap) {
  const int q = num_components(model);
  Matrix sig = model_sigma(model).sigma();
  bool has_zero = false;
  for (int i = 0; i < q && !has_zero; ++i)
    for (int j = 0; j < q && !has_zero; ++j)
      if (sig(i, j) == 0.0) has_zero = true;
  CrossCovModel base = model;
  if (has_zero) {
    Matrix safe = Matrix::Constant(q, q, 0.5);
    safe.diagonal().setConstant(1.0 + 0.5 * q);  // diagonally dominant, all nonzero
    base = with_sigma(model, SigmaPair::from_sigma(safe));
    sig = safe;
  }
  Matrix C = build_joint_cov(base, sample.locs, size_cap);
  const int n = sample.n();
  std::vector<std::vector<Matrix>> blocks(q, std::vector<Matrix>(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const int ni = lay.comp_begin[i + 1] - lay.comp_begin[i];
      const int nj = lay.comp_begin[j + 1] - lay.comp_begin[j];
      Matrix b(ni, nj);
      for (int a = 0; a < ni; ++a) {
        const int la = lay.loc[lay.comp_begin[i] + a];
        for (int bcol = 0; bcol < nj; ++bcol) {
          const int lb = lay.loc[lay.comp_begin[j] + bcol];
          b(a, bcol) = C(i * n + la, j * n + lb) / sig(i, j);
        }
      }
      blocks[i][j] = std::move(b);
    }
  return blocks;
}

struct CholParam {
  int q;
  int size() const { return q * (q + 1) / 2; }

  Matrix unpack(const Vector& th) const {
    Matrix T = Matrix::Zero(q, q);
    int k = 0;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j <= i; ++j, ++k) T(i, j) = (i == j) ? std::exp(th(k)) : th(k);
    return T;
  }
  Vector pack(const Matrix& T) const {
    Vector th(size());
    int k = 0;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j <= i; ++j, ++k) th(k) = (i == j) ? std::log(T(i, j)) : T(i, j);
    return th;
  }
};

}  // namespace

FitResult fit_sigma_mle(const FieldSample& sample, const CrossCovModel& model_template,
                        const FitOptions& opts) {
  if (std::holds_alternative<LmcModel>(model_template))
    throw std::invalid_argument("fit_sigma_mle: the LMC has no Sigma to estimate");
  const int q = num_components(model_template);
  const ObsLayout lay = observed_layout(sample);
  const int m = static_cast<int>(lay.comp.size());
  if (m == 0) throw std::invalid_argument("fit_sigma_mle: no observed entries");

  const auto blocks = observed_attenuation_blocks(sample, model_template, lay, opts.size_cap);
  Vector y(m);
  for (int k = 0; k < m; ++k) y(k) = sample.values(lay.loc[k], lay.comp[k]);

  // Parametrize Sigma = (T0 Tt)(T0 Tt)^T with T0 the initializer's Cholesky
  // factor: near the optimum the whitened objective is close to isotropic,
  // which keeps the quasi-Newton iteration count small.
  const Matrix T0 = chol(model_sigma(model_template).sigma());
  const CholParam par{q};
  auto assemble_and_factor = [&](const Vector& th, Matrix& C) -> bool {
    const Matrix T = T0 * par.unpack(th);
    const Matrix sig = T * T.transpose();
    C.resize(m, m);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        C.block(lay.comp_begin[i], lay.comp_begin[j], blocks[i][j].rows(),
                blocks[i][j].cols()) = sig(i, j) * blocks[i][j];
    return chol_inplace(C) == 0;
  };
  auto negloglik = [&](const Vector& th) -> double {
    Matrix C;
    if (!assemble_and_factor(th, C)) return std::numeric_limits<double>::infinity();
    const Vector alpha = chol_solve(C, y);
    return 0.5 * (m * std::log(2.0 * M_PI) + chol_logdet(C) + y.dot(alpha));
  };
  auto negloglik_grad = [&](const Vector& th, Vector& grad) -> double {
    Matrix C;
    if (!assemble_and_factor(th, C)) {
      grad.setZero();
      return std::numeric_limits<double>::infinity();
    }
    const Matrix Tt = par.unpack(th);
    const Vector alpha = chol_solve(C, y);
    const double ll = -0.5 * (m * std::log(2.0 * M_PI) + chol_logdet(C) + y.dot(alpha));
    Matrix W = chol_inverse(C);
    W = 0.5 * (alpha * alpha.transpose() - W).eval();  // dl/dC
    Matrix H(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        H(i, j) = W.block(lay.comp_begin[i], lay.comp_begin[j], blocks[i][j].rows(),
                          blocks[i][j].cols())
                      .cwiseProduct(blocks[i][j])
                      .sum();
    // dl/dT at T = T0 Tt, chained back through T0
    const Matrix GT = T0.transpose() * (2.0 * H * (T0 * Tt));
    grad.resize(par.size());
    int k = 0;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j <= i; ++j, ++k)
        grad(k) = -((i == j) ? GT(i, j) * Tt(i, j) : GT(i, j));
    return -ll;
  };

  Vector th0 = par.pack(Matrix::Identity(q, q));
  MinimizeResult opt =
      minimize_lbfgs(negloglik_grad, th0, opts.max_iter, opts.grad_tol, 10, negloglik);

  const Matrix T = T0 * par.unpack(opt.x);
  Matrix sig_hat = T * T.transpose();
  sig_hat = 0.5 * (sig_hat + sig_hat.transpose()).eval();
  return FitResult{with_sigma(model_template, SigmaPair::from_sigma(sig_hat)), -opt.f,
                   opt.iterations, opt.converged,
                   opt.grad.cwiseAbs().maxCoeff() / std::max(1.0, std::abs(opt.f))};
}

Matrix iox_sigma_hat(const FieldSample& sample, const InsideOutModel& model, bool* ridged) {
  if (ridged) *ridged = false;
  if (!sample.fully_observed())
    throw std::invalid_argument("iox_sigma_hat: requires a fully observed sample");
  const LocationSet& S = model.reference();
  if (sample.n() != S.size() ||
      (sample.locs.coords() - S.coords()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("iox_sigma_hat: sample must sit exactly on the reference set");
  const int n = sample.n(), q = sample.q();
  Matrix U(n, q);
  for (int j = 0; j < q; ++j)
    U.col(j) =
        model.chol_reference(j).triangularView<Eigen::Lower>().solve(sample.values.col(j));
  Matrix out = U.transpose() * U / n;
  if (n < q) {
    out.diagonal().array() += 1e-8 * out.trace();
    if (ridged) *ridged = true;
  }
  return out;
}

Matrix sample_cov_independent(const FieldSample& sample) {
  if (!sample.fully_observed())
    throw std::invalid_argument("sample_cov_independent: requires a fully observed sample");
  const int n = sample.n();
  if (n < 2) throw std::invalid_argument("sample_cov_independent: need n >= 2");
  Matrix yc = sample.values.rowwise() - sample.values.colwise().mean();
  return yc.transpose() * yc / n;
}

namespace {

double soft_threshold(double x, double t) {
  return std::copysign(std::max(0.0, std::abs(x) - t), x);
}

}  // namespace

namespace {

GraphEstimate glasso_core(const Matrix& s_hat, double lambda, const GlassoOptions& opts,
                          Matrix& W, Matrix& B) {
  const int q = static_cast<int>(s_hat.rows());
  GraphEstimate est;
  est.lambda = lambda;
  const double scale = std::max(
      1e-12,
      (s_hat - Matrix(s_hat.diagonal().asDiagonal())).cwiseAbs().maxCoeff());
  int sweep = 0;
  bool converged = false;
  for (; sweep < opts.max_iter && !converged; ++sweep) {
    double max_change = 0.0;
    for (int j = 0; j < q; ++j) {
      // lasso subproblem on column j: 0.5 b' W11 b - b' s12 + lambda |b|_1
      Vector beta = B.col(j);
      for (int inner = 0; inner < 200; ++inner) {
        double change = 0.0;
        for (int k = 0; k < q; ++k) {
          if (k == j) continue;
          double r = s_hat(k, j);
          for (int l = 0; l < q; ++l)
            if (l != j && l != k) r -= W(k, l) * beta(l);
          const double nb = soft_threshold(r, lambda) / W(k, k);
          change = std::max(change, std::abs(nb - beta(k)));
          beta(k) = nb;
        }
        if (change < opts.tol * std::max(scale, 1e-12)) break;
      }
      beta(j) = 0.0;
      Vector w12 = Vector::Zero(q);
      for (int k = 0; k < q; ++k)
        if (k != j)
          for (int l = 0; l < q; ++l)
            if (l != j) w12(k) += W(k, l) * beta(l);
      for (int k = 0; k < q; ++k)
        if (k != j) {
          max_change = std::max(max_change, std::abs(W(k, j) - w12(k)));
          W(k, j) = W(j, k) = w12(k);
        }
      B.col(j) = beta;
    }
    converged = max_change < opts.tol * std::max(scale, 1e-12);
  }

  // recover the precision from W and the column coefficients
  Matrix P(q, q);
  for (int j = 0; j < q; ++j) {
    double denom = W(j, j);
    for (int k = 0; k < q; ++k)
      if (k != j) denom -= W(k, j) * B(k, j);
    const double p22 = 1.0 / denom;
    P(j, j) = p22;
    for (int k = 0; k < q; ++k)
      if (k != j) P(k, j) = -B(k, j) * p22;
  }
  P = 0.5 * (P + P.transpose()).eval();
  // exact zeros for entries never activated
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (i != j && B(i, j) == 0.0 && B(j, i) == 0.0) P(i, j) = 0.0;

  est.precision = P;
  est.covariance = W;
  est.iterations = sweep;
  est.converged = converged;
  est.edges = BoolMatrix::Constant(q, q, false);
  est.pcorr = Matrix::Zero(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (i != j && P(i, j) != 0.0) {
        est.edges(i, j) = true;
        est.pcorr(i, j) = -P(i, j) / std::sqrt(P(i, i) * P(j, j));
      }
  return est;
}

}  // namespace

GraphEstimate graphical_lasso(const Matrix& s_hat, double lambda, const GlassoOptions& opts) {
  const int q = static_cast<int>(s_hat.rows());
  if (s_hat.cols() != q || !s_hat.isApprox(s_hat.transpose(), 1e-8))
    throw std::invalid_argument("graphical_lasso: S must be symmetric");
  if ((s_hat.diagonal().array() <= 0.0).any())
    throw std::invalid_argument("graphical_lasso: S must have a positive diagonal");
  if (lambda < 0.0) throw std::invalid_argument("graphical_lasso: lambda must be >= 0");
  Matrix W = s_hat;               // working covariance; diagonal stays S_ii (unpenalized)
  Matrix B = Matrix::Zero(q, q);  // lasso coefficients per column
  return glasso_core(s_hat, lambda, opts, W, B);
}

std::vector<GraphEstimate> graphical_lasso_path(const Matrix& s_hat,
                                                const std::vector<double>& lambdas,
                                                const GlassoOptions& opts) {
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (lambdas[k] > lambdas[k - 1])
      throw std::invalid_argument("graphical_lasso_path: lambdas must be non-increasing");
  const int q = static_cast<int>(s_hat.rows());
  Matrix W = s_hat;
  Matrix B = Matrix::Zero(q, q);
  std::vector<GraphEstimate> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) out.push_back(glasso_core(s_hat, lam, opts, W, B));
  return out;
}

double glasso_kkt_residual(const GraphEstimate& est, const Matrix& s_hat) {
  const int q = static_cast<int>(s_hat.rows());
  const Matrix diff = est.covariance - s_hat;
  double res = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (i == j) {
        res = std::max(res, std::abs(diff(i, i)));
      } else if (est.precision(i, j) != 0.0) {
        // W - S = lambda sign(P) off the diagonal at active entries
        res = std::max(
            res, std::abs(diff(i, j) - est.lambda * (est.precision(i, j) > 0 ? 1.0 : -1.0)));
      } else {
        res = std::max(res, std::max(0.0, std::abs(diff(i, j)) - est.lambda));
      }
    }
  return res;
}

Matrix glasso_entry_lambda_scores(const Matrix& s_hat, int path_length, double lambda_ratio) {
  const int q = static_cast<int>(s_hat.rows());
  double lmax = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (i != j) lmax = std::max(lmax, std::abs(s_hat(i, j)));
  Matrix scores = Matrix::Zero(q, q);
  if (lmax == 0.0) return scores;
  std::vector<double> lambdas(path_length);
  for (int t = 0; t < path_length; ++t)
    lambdas[t] = lmax * std::pow(lambda_ratio, static_cast<double>(t) / (path_length - 1));
  const std::vector<GraphEstimate> path = graphical_lasso_path(s_hat, lambdas);
  for (int t = 0; t < path_length; ++t)
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        if (i != j && scores(i, j) == 0.0 && path[t].precision(i, j) != 0.0)
          scores(i, j) = lambdas[t];
  return scores;
}

RocResult roc_curve(const std::vector<double>& scores, const std::vector<bool>& truth) {
  if (scores.size() != truth.size())
    throw std::invalid_argument("roc_curve: score/truth size mismatch");
  const int npos = static_cast<int>(std::count(truth.begin(), truth.end(), true));
  const int nneg = static_cast<int>(truth.size()) - npos;
  if (npos == 0 || nneg == 0)
    throw std::invalid_argument("roc_curve: need at least one edge and one non-edge");

  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });

  RocResult out;
  out.points.push_back({0.0, 0.0});
  int tp = 0, fp = 0;
  double auc = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double v = scores[order[k]];
    int dtp = 0, dfp = 0;
    while (k < order.size() && scores[order[k]] == v) {  // ties move diagonally
      if (truth[order[k]])
        ++dtp;
      else
        ++dfp;
      ++k;
    }
    const double tpr0 = static_cast<double>(tp) / npos;
    const double fpr0 = static_cast<double>(fp) / nneg;
    tp += dtp;
    fp += dfp;
    const double tpr1 = static_cast<double>(tp) / npos;
    const double fpr1 = static_cast<double>(fp) / nneg;
    auc += 0.5 * (tpr0 + tpr1) * (fpr1 - fpr0);
    out.points.push_back({fpr1, tpr1});
  }
  out.auc = auc;
  return out;
}

F1Result f1_best_threshold(const std::vector<double>& scores, const std::vector<bool>& truth) {
  if (scores.size() != truth.size())
    throw std::invalid_argument("f1_best_threshold: score/truth size mismatch");
  const int npos = static_cast<int>(std::count(truth.begin(), truth.end(), true));
  const int nneg = static_cast<int>(truth.size()) - npos;
  if (npos == 0 || nneg == 0)
    throw std::invalid_argument("f1_best_threshold: degenerate truth");
  if (std::all_of(scores.begin(), scores.end(), [](double s) { return s == 0.0; }))
    return {std::numeric_limits<double>::infinity(), 0.0, 1.0, 0.0};

  std::vector<double> cand = scores;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  F1Result best;
  best.threshold = std::numeric_limits<double>::infinity();
  best.specificity = 1.0;
  for (double th : cand) {
    int tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
      const bool pred = scores[k] >= th;
      if (pred && truth[k])
        ++tp;
      else if (pred)
        ++fp;
      else if (truth[k])
        ++fn;
      else
        ++tn;
    }
    if (tp == 0) continue;
    const double precision = static_cast<double>(tp) / (tp + fp);
    const double recall = static_cast<double>(tp) / (tp + fn);
    const double f1 = 2.0 * precision * recall / (precision + recall);
    const double spec = static_cast<double>(tn) / nneg;
    if (f1 > best.f1 || (f1 == best.f1 && spec > best.specificity)) {
      best.f1 = f1;
      best.threshold = th;
      best.sensitivity = recall;
      best.specificity = spec;
    }
  }
  return best;
}

double crps_gaussian(double mu, double sd, double y) {
  if (!(sd > 0.0)) throw std::domain_error("crps_gaussian: sd must be > 0");
  const double z = (y - mu) / sd;
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  return sd * (z * (2.0 * cdf - 1.0) + 2.0 * pdf - 1.0 / std::sqrt(M_PI));
}

double rmse(const std::vector<double>& estimates, const std::vector<double>& truth) {
  if (estimates.size() != truth.size()) throw std::invalid_argument("rmse: size mismatch");
  if (estimates.empty()) throw std::invalid_argument("rmse: empty input");
  double acc = 0.0;
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    const double d = estimates[k] - truth[k];
    acc += d * d;
  }
  return std::sqrt(acc / estimates.size());
}

}  // namespace gpnet
