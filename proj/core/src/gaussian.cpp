#include "gpnet/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gpnet/rng.hpp"

#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace gpnet {

void set_blas_threads(int n) { openblas_set_num_threads(n); }

int chol_inplace(Matrix& a) {
  const int n = static_cast<int>(a.rows());
  const int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n);
  if (info > 0) return info;
  if (info < 0) throw std::runtime_error("chol: invalid argument to dpotrf");
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return 0;
}

Matrix chol(const Matrix& spd) {
  if (spd.rows() != spd.cols()) throw std::invalid_argument("chol: matrix must be square");
  const double scale = spd.cwiseAbs().maxCoeff();
  if ((spd - spd.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
    throw std::invalid_argument("chol: matrix is not symmetric");
  Matrix L = spd;
  const int pivot = chol_inplace(L);
  if (pivot > 0)
    throw std::runtime_error("chol: matrix is not positive definite (pivot " +
                             std::to_string(pivot) + ")");
  return L;
}

Matrix chol_solve(const Matrix& L, const Matrix& b) {
  Matrix x = b;
  const int n = static_cast<int>(L.rows());
  const int nrhs = static_cast<int>(b.cols());
  const int info = LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', n, nrhs, L.data(), n, x.data(), n);
  if (info != 0) throw std::runtime_error("chol_solve: dpotrs failed");
  return x;
}

Matrix chol_inverse(const Matrix& L) {
  Matrix inv = L;
  const int n = static_cast<int>(L.rows());
  const int info = LAPACKE_dpotri(LAPACK_COL_MAJOR, 'L', n, inv.data(), n);
  if (info != 0) throw std::runtime_error("chol_inverse: dpotri failed");
  inv.triangularView<Eigen::StrictlyUpper>() = inv.transpose();
  return inv;
}

double chol_logdet(const Matrix& L) { return 2.0 * L.diagonal().array().log().sum(); }

namespace {

Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

void check_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    for (int y : b)
      if (x == y) throw std::invalid_argument("condition: index sets must be disjoint");
}

// Observed flat indices of a sample in vec(Y) order, with their
// (component, location) pairs.
struct ObservedIndex {
  std::vector<int> flat;
  std::vector<int> comp, loc;
};

ObservedIndex observed_index(const FieldSample& s) {
  ObservedIndex out;
  const int n = s.n();
  for (int j = 0; j < s.q(); ++j)
    for (int a = 0; a < n; ++a)
      if (s.observed(a, j)) {
        out.flat.push_back(vec_index(j, a, n));
        out.comp.push_back(j);
        out.loc.push_back(a);
      }
  return out;
}

}  // namespace

Matrix schur_conditional_cov(const Matrix& joint_cov, const std::vector<int>& target_idx,
                             const std::vector<int>& given_idx) {
  check_disjoint(target_idx, given_idx);
  Matrix Cxx = submatrix(joint_cov, target_idx, target_idx);
  if (given_idx.empty()) return Cxx;
  Matrix Cxo = submatrix(joint_cov, target_idx, given_idx);
  Matrix Coo = submatrix(joint_cov, given_idx, given_idx);
  const int pivot = chol_inplace(Coo);
  if (pivot > 0)
    throw std::runtime_error("condition: conditioning block is singular (pivot " +
                             std::to_string(pivot) + ")");
  const Matrix s = chol_solve(Coo, Cxo.transpose());
  Matrix out = Cxx - Cxo * s;
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

ConditionalLaw condition(const Matrix& joint_cov, const std::vector<int>& target_idx,
                         const std::vector<int>& given_idx, const Vector& given_values) {
  check_disjoint(target_idx, given_idx);
  if (static_cast<int>(given_idx.size()) != given_values.size())
    throw std::invalid_argument("condition: given index/value size mismatch");
  ConditionalLaw law;
  if (given_idx.empty()) {
    law.mean = Vector::Zero(target_idx.size());
    law.cov = submatrix(joint_cov, target_idx, target_idx);
    return law;
  }
  Matrix Cxo = submatrix(joint_cov, target_idx, given_idx);
  Matrix Coo = submatrix(joint_cov, given_idx, given_idx);
  const int pivot = chol_inplace(Coo);
  if (pivot > 0)
    throw std::runtime_error("condition: conditioning block is singular (pivot " +
                             std::to_string(pivot) + ")");
  const Vector w = chol_solve(Coo, given_values);
  law.mean = Cxo * w;
  Matrix Cxx = submatrix(joint_cov, target_idx, target_idx);
  const Matrix s = chol_solve(Coo, Cxo.transpose());
  law.cov = Cxx - Cxo * s;
  law.cov = 0.5 * (law.cov + law.cov.transpose()).eval();
  for (int i = 0; i < law.cov.rows(); ++i)
    if (law.cov(i, i) < 0.0) {
      law.cov(i, i) = 0.0;
      ++law.clamp_count;
    }
  return law;
}

FieldSample sample_field(const CrossCovModel& model, const LocationSet& locs,
                         std::uint64_t seed, int size_cap) {
  const int q = num_components(model);
  const int n = locs.size();
  Matrix C = build_joint_cov(model, locs, size_cap);
  const int pivot = chol_inplace(C);
  if (pivot > 0) {
    // semi-definite joint covariances (e.g. low-rank convolution) get a jitter
    C = build_joint_cov(model, locs, size_cap);
    C.diagonal().array() += 1e-10 * C.diagonal().mean();
    if (chol_inplace(C) > 0)
      throw std::runtime_error("sample_field: joint covariance is not positive semi-definite");
  }
  Rng rng(seed);
  Vector z(q * n);
  for (int i = 0; i < q * n; ++i) z(i) = rng.normal();
  const Vector y = C.triangularView<Eigen::Lower>() * z;
  Matrix values(n, q);
  for (int j = 0; j < q; ++j) values.col(j) = y.segment(j * n, n);
  return FieldSample(std::move(values), locs);
}

double loglik(const FieldSample& sample, const CrossCovModel& model, int size_cap) {
  const ObservedIndex obs = observed_index(sample);
  const int m = static_cast<int>(obs.flat.size());
  if (m == 0) throw std::invalid_argument("loglik: sample has no observed entries");
  Matrix C = build_joint_cov(model, sample.locs, size_cap);
  Matrix Co = submatrix(C, obs.flat, obs.flat);
  Vector y(m);
  for (int k = 0; k < m; ++k) y(k) = sample.values(obs.loc[k], obs.comp[k]);
  const int pivot = chol_inplace(Co);
  if (pivot > 0)
    throw std::runtime_error("loglik: covariance is not positive definite (pivot " +
                             std::to_string(pivot) + ")");
  const Vector alpha = chol_solve(Co, y);
  return -0.5 * (m * std::log(2.0 * M_PI) + chol_logdet(Co) + y.dot(alpha));
}

ConditionalLaw predict(const FieldSample& sample, const CrossCovModel& model,
                       const std::vector<std::pair<int, Eigen::RowVectorXd>>& targets,
                       int size_cap) {
  if (targets.empty()) throw std::invalid_argument("predict: no targets");
  const int n = sample.n();
  Matrix tpts(targets.size(), sample.locs.dim());
  for (std::size_t t = 0; t < targets.size(); ++t) tpts.row(t) = targets[t].second;
  const LocationSet all = sample.locs.appended(LocationSet(tpts));

  const ObservedIndex obs = observed_index(sample);
  std::vector<int> given;
  Vector given_values(obs.flat.size());
  const int ntot = all.size();
  for (std::size_t k = 0; k < obs.flat.size(); ++k) {
    given.push_back(vec_index(obs.comp[k], obs.loc[k], ntot));
    given_values(k) = sample.values(obs.loc[k], obs.comp[k]);
  }
  std::vector<int> target_idx;
  ConditionalLaw law;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    target_idx.push_back(vec_index(targets[t].first, n + static_cast<int>(t), ntot));
    law.target_index_map.emplace_back(targets[t].first, static_cast<int>(t));
  }
  // a target duplicating an observed (component, point) keeps zero variance
  // through the Schur complement; clamping records it
  Matrix C = build_joint_cov(model, all, size_cap);
  ConditionalLaw inner = condition(C, target_idx, given, given_values);
  law.mean = std::move(inner.mean);
  law.cov = std::move(inner.cov);
  law.clamp_count = inner.clamp_count;
  return law;
}

}  // namespace gpnet
