#include "gpnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gpnet/optim.hpp"

namespace gpnet {

ParsimoniousMaternModel demo_network_model() {
  Matrix prec = Matrix::Identity(5, 5);
  auto set = [&](int i, int j, double v) { prec(i, j) = prec(j, i) = v; };
  set(0, 1, -0.56);
  set(0, 2, 0.57);
  set(1, 2, -0.28);
  set(2, 3, -0.24);
  set(3, 4, -0.60);
  return ParsimoniousMaternModel(SigmaPair::from_precision(prec),
                                 {0.2, 1.0, 0.5, 1.4, 0.75}, 10.0, 2);
}

BoolMatrix gen_graph(int q, double edge_prob, Rng& rng) {
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw std::domain_error("gen_graph: edge probability must be in [0, 1]");
  BoolMatrix adj = BoolMatrix::Constant(q, q, false);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      if (rng.bernoulli(edge_prob)) adj(i, j) = adj(j, i) = true;
  return adj;
}

SigmaPair gen_precision(const BoolMatrix& adjacency, Rng& rng) {
  const int q = static_cast<int>(adjacency.rows());
  Matrix prec = Matrix::Identity(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      if (adjacency(i, j)) {
        const double w = rng.uniform(0.2, 0.6) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
        prec(i, j) = prec(j, i) = w;
      }
  for (int i = 0; i < q; ++i) {
    const double off = prec.row(i).cwiseAbs().sum() - std::abs(prec(i, i));
    prec(i, i) = std::max(1.0, 1.05 * off);
  }
  Vector d = prec.diagonal().cwiseSqrt().cwiseInverse();
  prec = (d.asDiagonal() * prec * d.asDiagonal()).eval();
  prec.diagonal().setOnes();
  return SigmaPair::from_precision(prec);
}

namespace {

void parallel_replicates(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int r = 0; r < count; ++r) body(r);
    return;
  }
  set_blas_threads(1);  // replicate-level fan-out owns the cores
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t]() {
      for (int r = t; r < count; r += threads) body(r);
    });
  for (auto& th : pool) th.join();
}

// Whitened moment estimate of Sigma for common-scale Matern data: each
// component column is whitened by the Cholesky factor of its own marginal
// Matern correlation over the observation grid.
Matrix whitened_sigma_estimate(const FieldSample& s, const std::vector<double>& nu,
                               double phi) {
  const int q = s.q();
  std::vector<MaternParams> corr;
  for (int j = 0; j < q; ++j) corr.emplace_back(nu[j], phi);
  InsideOutModel white(SigmaPair::from_sigma(Matrix::Identity(q, q)), corr, s.locs);
  return iox_sigma_hat(s, white);
}

// Pairwise-complete colocated second moments of a masked sample.
Matrix pairwise_colocated_cov(const FieldSample& s) {
  const int q = s.q();
  Vector mean = Vector::Zero(q);
  Vector cnt = Vector::Zero(q);
  for (int j = 0; j < q; ++j)
    for (int a = 0; a < s.n(); ++a)
      if (s.observed(a, j)) {
        mean(j) += s.values(a, j);
        cnt(j) += 1.0;
      }
  mean.array() /= cnt.array().max(1.0);
  Matrix out = Matrix::Zero(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j) {
      double acc = 0.0;
      int both = 0;
      for (int a = 0; a < s.n(); ++a)
        if (s.observed(a, i) && s.observed(a, j)) {
          acc += (s.values(a, i) - mean(i)) * (s.values(a, j) - mean(j));
          ++both;
        }
      out(i, j) = out(j, i) = both > 0 ? acc / both : 0.0;
    }
  return out;
}

Matrix project_spd(Matrix m) {
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const double floor = std::max(1e-6, 1e-4 * es.eigenvalues().maxCoeff());
  Vector ev = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<double> upper_triangle(const Matrix& m) {
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

}  // namespace

RocStudyReport run_roc_study(const RocStudyConfig& cfg) {
  if (cfg.replicates < 1) throw std::invalid_argument("run_roc_study: need replicates >= 1");
  RocStudyReport report;
  report.config = cfg;
  report.replicates.resize(cfg.replicates);
  const LocationSet locs = LocationSet::grid2d(cfg.grid);

  parallel_replicates(cfg.replicates, cfg.threads, [&](int r) {
    RocReplicate& rep = report.replicates[r];
    rep.id = r;
    Rng rng = Rng::derive(cfg.master_seed, r);
    try {
      const BoolMatrix adj = gen_graph(cfg.q, cfg.edge_probability, rng);
      int edges = 0;
      for (int i = 0; i < cfg.q; ++i)
        for (int j = i + 1; j < cfg.q; ++j)
          if (adj(i, j)) ++edges;
      const int pairs = cfg.q * (cfg.q - 1) / 2;
      if (edges == 0 || edges == pairs) {
        rep.note =
            edges == 0 ? "degenerate truth: empty graph" : "degenerate truth: complete graph";
        return;
      }
      const SigmaPair sp = gen_precision(adj, rng);
      std::vector<double> nu(cfg.q);
      for (double& v : nu) v = rng.uniform(cfg.nu_lo, cfg.nu_hi);
      const ParsimoniousMaternModel truth(sp, nu, cfg.phi, 2);
      const FieldSample sample = sample_field(CrossCovModel{truth}, locs, rng.next());

      // Spatial arm: Sigma MLE with the true spatial parameters, warm-started
      // at the whitened moment estimate
      Matrix init = project_spd(whitened_sigma_estimate(sample, nu, cfg.phi));
      FitResult fit = fit_sigma_mle(
          sample, with_sigma(CrossCovModel{truth}, SigmaPair::from_sigma(init)), cfg.fit);
      const Matrix sig_spatial = model_sigma(fit.model_hat).sigma();
      // Independent arm: iid sample covariance
      const Matrix sig_indep = sample_cov_independent(sample);

      const Matrix sc_sp =
          glasso_entry_lambda_scores(sig_spatial, cfg.path.length, cfg.path.ratio);
      const Matrix sc_in =
          glasso_entry_lambda_scores(sig_indep, cfg.path.length, cfg.path.ratio);

      std::vector<double> s_sp = upper_triangle(sc_sp), s_in = upper_triangle(sc_in);
      std::vector<bool> truth_edges;
      for (int i = 0; i < cfg.q; ++i)
        for (int j = i + 1; j < cfg.q; ++j) truth_edges.push_back(adj(i, j));

      const RocResult roc_sp = roc_curve(s_sp, truth_edges);
      const RocResult roc_in = roc_curve(s_in, truth_edges);
      const F1Result f1_sp = f1_best_threshold(s_sp, truth_edges);
      const F1Result f1_in = f1_best_threshold(s_in, truth_edges);

      rep.auc_spatial = roc_sp.auc;
      rep.auc_independent = roc_in.auc;
      rep.roc_spatial = roc_sp.points;
      rep.roc_independent = roc_in.points;
      rep.sens_spatial = f1_sp.sensitivity;
      rep.spec_spatial = f1_sp.specificity;
      rep.sens_independent = f1_in.sensitivity;
      rep.spec_independent = f1_in.specificity;
      rep.ok = true;
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.note = e.what();
    }
  });

  for (const RocReplicate& rep : report.replicates) {
    if (!rep.ok) continue;
    ++report.used;
    report.mean_auc_spatial += rep.auc_spatial;
    report.mean_auc_independent += rep.auc_independent;
    report.mean_dsens += rep.sens_spatial - rep.sens_independent;
    report.mean_dspec += rep.spec_spatial - rep.spec_independent;
  }
  if (report.used > 0) {
    report.mean_auc_spatial /= report.used;
    report.mean_auc_independent /= report.used;
    report.mean_dsens /= report.used;
    report.mean_dspec /= report.used;
  }
  return report;
}

namespace {

struct RecoveryTruth {
  std::vector<double> pcorr, margvar, crosscov;
};

RecoveryTruth recovery_truth_values(const ParsimoniousMaternModel& truth) {
  RecoveryTruth out;
  const int q = truth.sigma().order();
  const Matrix coloc = truth.sigma().sigma().cwiseProduct(truth.gamma());
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      out.pcorr.push_back(partial_coeff(truth.sigma(), i, j) * truth.gamma(i, j));
      out.crosscov.push_back(coloc(i, j));
    }
  for (int i = 0; i < q; ++i) out.margvar.push_back(coloc(i, i));
  return out;
}

}  // namespace

FamilyScores score_against_truth(const CrossCovModel& model_hat,
                                 const ParsimoniousMaternModel& truth,
                                 const FieldSample& masked, const Matrix& full_values,
                                 const std::vector<std::pair<int, int>>& held_out,
                                 int size_cap) {
  const int q = num_components(model_hat);
  const RecoveryTruth tv = recovery_truth_values(truth);

  // colocated summaries of the fitted model; the nonstationary inside-out
  // arm averages its colocated attenuation over the grid
  std::vector<double> pc_hat, mv_hat, cc_hat;
  const SigmaPair& sp = model_sigma(model_hat);
  Matrix att = Matrix::Ones(q, q);
  if (const auto* pm = std::get_if<ParsimoniousMaternModel>(&model_hat)) {
    att = pm->gamma();
  } else if (const auto* iox = std::get_if<InsideOutModel>(&model_hat)) {
    const int n = iox->reference().size();
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        att(i, j) = (iox->chol_reference(i).cwiseProduct(iox->chol_reference(j))).sum() / n;
  }
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      pc_hat.push_back(partial_coeff(sp, i, j) * att(i, j));
      cc_hat.push_back(sp.sigma(i, j) * att(i, j));
    }
  for (int i = 0; i < q; ++i) mv_hat.push_back(sp.sigma(i, i) * att(i, i));

  FamilyScores out;
  out.pcorr_rmse = rmse(pc_hat, tv.pcorr);
  out.margvar_rmse = rmse(mv_hat, tv.margvar);
  out.crosscov_rmse = rmse(cc_hat, tv.crosscov);

  std::vector<std::pair<int, Eigen::RowVectorXd>> targets;
  for (const auto& [loc, comp] : held_out) targets.emplace_back(comp, masked.locs.point(loc));
  const ConditionalLaw law = predict(masked, model_hat, targets, size_cap);
  double se = 0.0, crps = 0.0;
  for (std::size_t k = 0; k < held_out.size(); ++k) {
    const double y = full_values(held_out[k].first, held_out[k].second);
    const double mu = law.mean(static_cast<int>(k));
    const double sd = std::sqrt(std::max(1e-12, law.cov(k, k)));
    se += (y - mu) * (y - mu);
    crps += crps_gaussian(mu, sd, y);
  }
  out.pred_rmse = std::sqrt(se / held_out.size());
  out.pred_crps = crps / held_out.size();
  return out;
}

RecoveryStudyReport run_recovery_study(const RecoveryStudyConfig& cfg) {
  if (cfg.replicates < 1)
    throw std::invalid_argument("run_recovery_study: need replicates >= 1");
  RecoveryStudyReport report;
  report.config = cfg;
  report.replicates.resize(cfg.replicates);
  const LocationSet locs = LocationSet::grid2d(cfg.grid);
  const SigmaPair demo_sigma = demo_network_model().sigma();
  const int q = demo_sigma.order();
  const int n = locs.size();
  if (cfg.missing_count >= n * q)
    throw std::invalid_argument("run_recovery_study: missing_count exceeds the table");

  parallel_replicates(cfg.replicates, cfg.threads, [&](int r) {
    RecoveryReplicate& rep = report.replicates[r];
    rep.id = r;
    Rng rng = Rng::derive(cfg.master_seed, r);
    try {
      std::vector<double> nu(q);
      for (double& v : nu) v = rng.uniform(cfg.nu_lo, cfg.nu_hi);
      const double phi = rng.uniform(cfg.phi_lo, cfg.phi_hi);
      const ParsimoniousMaternModel truth(demo_sigma, nu, phi, 2);
      FieldSample full = sample_field(CrossCovModel{truth}, locs, rng.next());

      // remove missing_count entries uniformly at random
      BoolMatrix mask = BoolMatrix::Constant(n, q, true);
      std::vector<std::pair<int, int>> held_out;
      while (static_cast<int>(held_out.size()) < cfg.missing_count) {
        const int loc = static_cast<int>(rng.uniform() * n);
        const int comp = static_cast<int>(rng.uniform() * q);
        if (mask(loc, comp)) {
          mask(loc, comp) = false;
          held_out.emplace_back(loc, comp);
        }
      }
      FieldSample masked(full.values, locs, mask);

      const Matrix init =
          project_spd(pairwise_colocated_cov(masked).cwiseQuotient(truth.gamma()));

      // common-scale Matern arm (true spatial parameters)
      FitResult fit_pm = fit_sigma_mle(
          masked, with_sigma(CrossCovModel{truth}, SigmaPair::from_sigma(init)), cfg.fit);
      rep.pm =
          score_against_truth(fit_pm.model_hat, truth, masked, full.values, held_out, cfg.fit.size_cap);

      // inside-out arm with matching marginal correlations
      std::vector<MaternParams> corr;
      for (int j = 0; j < q; ++j) corr.emplace_back(nu[j], phi);
      InsideOutModel iox_tmpl(SigmaPair::from_sigma(init), corr, locs);
      FitResult fit_iox = fit_sigma_mle(masked, CrossCovModel{iox_tmpl}, cfg.fit);
      rep.iox = score_against_truth(fit_iox.model_hat, truth, masked, full.values, held_out,
                             cfg.fit.size_cap);
      rep.ok = true;
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.note = e.what();
    }
  });

  auto acc = [&](FamilyScores& mean, const FamilyScores& s) {
    mean.pcorr_rmse += s.pcorr_rmse;
    mean.margvar_rmse += s.margvar_rmse;
    mean.crosscov_rmse += s.crosscov_rmse;
    mean.pred_rmse += s.pred_rmse;
    mean.pred_crps += s.pred_crps;
  };
  for (const RecoveryReplicate& rep : report.replicates)
    if (rep.ok) {
      ++report.used;
      acc(report.mean_pm, rep.pm);
      acc(report.mean_iox, rep.iox);
    }
  if (report.used > 0) {
    auto norm = [&](FamilyScores& s) {
      s.pcorr_rmse /= report.used;
      s.margvar_rmse /= report.used;
      s.crosscov_rmse /= report.used;
      s.pred_rmse /= report.used;
      s.pred_crps /= report.used;
    };
    norm(report.mean_pm);
    norm(report.mean_iox);
  }
  return report;
}

namespace {

// Profile log-likelihood of a univariate Matern field (variance profiled out).
double univariate_profile_loglik(const Matrix& dist, const Vector& y, double nu, double phi) {
  const int n = static_cast<int>(y.size());
  Matrix R(n, n);
  const MaternParams p{nu, phi};
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) R(a, b) = R(b, a) = matern_corr(dist(a, b), p);
  R.diagonal().array() += 1e-8;
  if (chol_inplace(R) > 0) return -std::numeric_limits<double>::infinity();
  const Vector alpha = chol_solve(R, y);
  const double s2 = y.dot(alpha) / n;
  if (!(s2 > 0.0)) return -std::numeric_limits<double>::infinity();
  return -0.5 * (n * std::log(2.0 * M_PI * s2) + chol_logdet(R) + n);
}

struct UnivariateFit {
  double nu, phi, var;
};

UnivariateFit fit_univariate_matern(const LocationSet& locs, const Vector& y, double nu_min,
                                    double nu_max) {
  const Matrix dist = locs.distances();
  double dsum = 0.0;
  int dcnt = 0;
  for (int a = 0; a < locs.size(); ++a)
    for (int b = a + 1; b < locs.size(); ++b) {
      dsum += dist(a, b);
      ++dcnt;
    }
  const double dbar = dsum / std::max(1, dcnt);
  auto neg = [&](const Vector& t) {
    const double nu = t(0), phi = std::exp(t(1));
    if (nu < nu_min || nu > nu_max || !(phi > 0.0) || !std::isfinite(phi)) return 1e12;
    return -univariate_profile_loglik(dist, y, nu, phi);
  };
  MinimizeResult best;
  best.f = std::numeric_limits<double>::infinity();
  for (double phi0 : {1.0 / dbar, 4.0 / dbar, 16.0 / dbar}) {
    Vector t0(2);
    t0 << 0.5, std::log(phi0);
    MinimizeResult res = minimize_nelder_mead(neg, t0, 0.4, 300, 1e-10);
    if (res.f < best.f) best = res;
  }
  UnivariateFit out{std::clamp(best.x(0), nu_min, nu_max), std::exp(best.x(1)), 0.0};
  Matrix R(locs.size(), locs.size());
  const MaternParams p{out.nu, out.phi};
  for (int a = 0; a < locs.size(); ++a)
    for (int b = a; b < locs.size(); ++b) R(a, b) = R(b, a) = matern_corr(dist(a, b), p);
  R.diagonal().array() += 1e-8;
  chol_inplace(R);
  const Vector alpha_var = chol_solve(R, y);
  out.var = y.dot(alpha_var) / locs.size();
  return out;
}

}  // namespace

GeoPipelineReport run_geo_pipeline(const FieldSample& raw, std::vector<std::string> names,
                                   const GeoPipelineConfig& cfg) {
  const int n = raw.n(), q = raw.q();
  if (static_cast<int>(names.size()) != q)
    throw std::invalid_argument("run_geo_pipeline: need one name per component");
  if (q < 2) throw std::invalid_argument("run_geo_pipeline: need at least two components");

  GeoPipelineReport report;
  report.config = cfg;
  report.names = std::move(names);

  // log-transform and center the observed entries
  Matrix logv = Matrix::Zero(n, q);
  for (int j = 0; j < q; ++j)
    for (int a = 0; a < n; ++a)
      if (raw.observed(a, j)) {
        if (!(raw.values(a, j) > 0.0))
          throw std::domain_error("run_geo_pipeline: non-positive concentration at row " +
                                  std::to_string(a + 1) + ", component " + report.names[j]);
        logv(a, j) = std::log(raw.values(a, j));
      }
  Vector mean = Vector::Zero(q);
  for (int j = 0; j < q; ++j) {
    int cnt = 0;
    for (int a = 0; a < n; ++a)
      if (raw.observed(a, j)) {
        mean(j) += logv(a, j);
        ++cnt;
      }
    if (cnt < 2)
      throw std::invalid_argument("run_geo_pipeline: component " + report.names[j] +
                                  " has fewer than two observations");
    mean(j) /= cnt;
    for (int a = 0; a < n; ++a)
      if (raw.observed(a, j)) logv(a, j) -= mean(j);
  }

  // hold out test entries among the observed ones
  std::vector<std::pair<int, int>> observed;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < q; ++j)
      if (raw.observed(a, j)) observed.emplace_back(a, j);
  if (cfg.test_count >= static_cast<int>(observed.size()))
    throw std::invalid_argument("run_geo_pipeline: test_count exceeds the observed entries");
  Rng rng(cfg.master_seed);
  std::vector<std::pair<int, int>> test_set;
  BoolMatrix train_mask = BoolMatrix::Constant(n, q, false);
  for (const auto& [a, j] : observed) train_mask(a, j) = true;
  while (static_cast<int>(test_set.size()) < cfg.test_count) {
    const auto& pick = observed[static_cast<int>(rng.uniform() * observed.size())];
    if (train_mask(pick.first, pick.second)) {
      train_mask(pick.first, pick.second) = false;
      test_set.push_back(pick);
    }
  }
  FieldSample train(logv, raw.locs, train_mask);

  // univariate profile fits per component
  report.nu_hat.resize(q);
  report.phi_hat.resize(q);
  report.var_hat.resize(q);
  for (int j = 0; j < q; ++j) {
    std::vector<int> rows;
    for (int a = 0; a < n; ++a)
      if (train_mask(a, j)) rows.push_back(a);
    Matrix coords(rows.size(), raw.locs.dim());
    Vector y(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      coords.row(k) = raw.locs.point(rows[k]);
      y(k) = logv(rows[k], j);
    }
    const UnivariateFit fit =
        fit_univariate_matern(LocationSet(coords), y, cfg.nu_min, cfg.nu_max);
    report.nu_hat[j] = fit.nu;
    report.phi_hat[j] = fit.phi;
    report.var_hat[j] = fit.var;
  }
  double logphi = 0.0;
  for (int j = 0; j < q; ++j) logphi += std::log(report.phi_hat[j]);
  report.phi_shared = std::exp(logphi / q);

  // Sigma fits for both arms, warm-started at the pairwise moment estimate
  ParsimoniousMaternModel pm_shape(SigmaPair::from_sigma(Matrix::Identity(q, q)),
                                   report.nu_hat, report.phi_shared, 2);
  const Matrix init_pm =
      project_spd(pairwise_colocated_cov(train).cwiseQuotient(pm_shape.gamma()));
  FitResult fit_pm = fit_sigma_mle(
      train,
      CrossCovModel{ParsimoniousMaternModel(SigmaPair::from_sigma(init_pm), report.nu_hat,
                                            report.phi_shared, 2)},
      cfg.fit);

  std::vector<MaternParams> corr;
  for (int j = 0; j < q; ++j) corr.emplace_back(report.nu_hat[j], report.phi_hat[j]);
  const Matrix init_iox = project_spd(pairwise_colocated_cov(train));
  FitResult fit_iox = fit_sigma_mle(
      train, CrossCovModel{InsideOutModel(SigmaPair::from_sigma(init_iox), corr, raw.locs)},
      cfg.fit);

  // held-out predictions: both arms plus the column-mean baseline
  std::vector<std::pair<int, Eigen::RowVectorXd>> targets;
  for (const auto& [a, j] : test_set) targets.emplace_back(j, raw.locs.point(a));
  const ConditionalLaw law_pm = predict(train, fit_pm.model_hat, targets, cfg.fit.size_cap);
  const ConditionalLaw law_iox = predict(train, fit_iox.model_hat, targets, cfg.fit.size_cap);

  report.per_metal.resize(q);
  MetalScores& all = report.overall;
  all.name = "overall";
  for (int j = 0; j < q; ++j) report.per_metal[j].name = report.names[j];
  for (std::size_t k = 0; k < test_set.size(); ++k) {
    const auto& [a, j] = test_set[k];
    const double y = logv(a, j);
    auto add = [&](MetalScores& dst) {
      const double mu_pm = law_pm.mean(static_cast<int>(k));
      const double sd_pm = std::sqrt(std::max(1e-12, law_pm.cov(k, k)));
      const double mu_io = law_iox.mean(static_cast<int>(k));
      const double sd_io = std::sqrt(std::max(1e-12, law_iox.cov(k, k)));
      dst.rmspe_pm += (y - mu_pm) * (y - mu_pm);
      dst.crps_pm += crps_gaussian(mu_pm, sd_pm, y);
      dst.rmspe_iox += (y - mu_io) * (y - mu_io);
      dst.crps_iox += crps_gaussian(mu_io, sd_io, y);
      dst.rmspe_mean_baseline += y * y;  // the column-mean predictor is 0 after centering
      dst.test_entries += 1;
    };
    add(report.per_metal[j]);
    add(all);
  }
  auto finalize = [](MetalScores& ms) {
    if (ms.test_entries == 0) return;
    ms.rmspe_pm = std::sqrt(ms.rmspe_pm / ms.test_entries);
    ms.rmspe_iox = std::sqrt(ms.rmspe_iox / ms.test_entries);
    ms.rmspe_mean_baseline = std::sqrt(ms.rmspe_mean_baseline / ms.test_entries);
    ms.crps_pm /= ms.test_entries;
    ms.crps_iox /= ms.test_entries;
  };
  for (auto& ms : report.per_metal) finalize(ms);
  finalize(all);

  // network summaries and effective ranges from the fitted models
  report.colocated_corr_pm = Matrix::Identity(q, q);
  const auto& pm_hat = std::get<ParsimoniousMaternModel>(fit_pm.model_hat);
  const Matrix coloc = pm_hat.sigma().sigma().cwiseProduct(pm_hat.gamma());
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      report.colocated_corr_pm(i, j) = coloc(i, j) / std::sqrt(coloc(i, i) * coloc(j, j));
  report.pcorr_pm = Matrix::Identity(q, q);
  report.pcorr_iox = Matrix::Identity(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (i != j) {
        report.pcorr_pm(i, j) = partial_coeff(pm_hat.sigma(), i, j);
        report.pcorr_iox(i, j) = partial_coeff(model_sigma(fit_iox.model_hat), i, j);
      }
  report.graph_pm = summarize_graph(fit_pm.model_hat);

  report.marginal_range = Matrix::Zero(q, q);
  report.partial_range = Matrix::Zero(q, q);
  Eigen::RowVectorXd origin = Eigen::RowVectorXd::Zero(raw.locs.dim());
  Eigen::RowVectorXd dir = Eigen::RowVectorXd::Zero(raw.locs.dim());
  dir(0) = 1.0;
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      report.marginal_range(i, j) = report.marginal_range(j, i) = effective_range(
          marginal_corr_along_ray(fit_pm.model_hat, i, j, origin, dir), cfg.range_threshold,
          cfg.range_search_max);
      report.partial_range(i, j) = report.partial_range(j, i) = effective_range(
          partial_corr_along_ray(fit_pm.model_hat, i, j, origin, dir), cfg.range_threshold,
          cfg.range_search_max);
    }
  return report;
}

}  // namespace gpnet
