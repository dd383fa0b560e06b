#include "gpnet/types.hpp"

#include <Eigen/Cholesky>

namespace gpnet {

LocationSet LocationSet::grid2d(int m, double x0, double x1, double y0, double y1) {
  if (m < 1) throw std::invalid_argument("grid2d: m must be >= 1");
  Matrix c(m * m, 2);
  for (int iy = 0, k = 0; iy < m; ++iy)
    for (int ix = 0; ix < m; ++ix, ++k) {
      c(k, 0) = m == 1 ? x0 : x0 + (x1 - x0) * ix / (m - 1);
      c(k, 1) = m == 1 ? y0 : y0 + (y1 - y0) * iy / (m - 1);
    }
  return LocationSet(std::move(c));
}

LocationSet LocationSet::line1d(int n, double x0, double x1) {
  if (n < 1) throw std::invalid_argument("line1d: n must be >= 1");
  Matrix c(n, 1);
  for (int i = 0; i < n; ++i) c(i, 0) = n == 1 ? x0 : x0 + (x1 - x0) * i / (n - 1);
  return LocationSet(std::move(c));
}

Matrix LocationSet::distances() const {
  const int n = size();
  Matrix d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = distance(i, j);
  }
  return d;
}

std::vector<int> LocationSet::duplicate_points() const {
  std::vector<int> dup;
  for (int i = 1; i < size(); ++i)
    for (int j = 0; j < i; ++j)
      if ((coords_.row(i) - coords_.row(j)).norm() == 0.0) {
        dup.push_back(i);
        break;
      }
  return dup;
}

LocationSet LocationSet::appended(const LocationSet& extra) const {
  if (extra.dim() != dim())
    throw std::invalid_argument("LocationSet::appended: dimension mismatch");
  Matrix c(size() + extra.size(), dim());
  c.topRows(size()) = coords_;
  c.bottomRows(extra.size()) = extra.coords_;
  return LocationSet(std::move(c));
}

SigmaPair SigmaPair::from_sigma(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
    throw std::invalid_argument("SigmaPair: Sigma must be square and nonempty");
  if (!sigma.isApprox(sigma.transpose(), 1e-10))
    throw std::invalid_argument("SigmaPair: Sigma must be symmetric");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("SigmaPair: Sigma must be positive definite");
  Matrix prec = llt.solve(Matrix::Identity(sigma.rows(), sigma.cols()));
  prec = 0.5 * (prec + prec.transpose()).eval();
  return SigmaPair(sigma, std::move(prec));
}

SigmaPair SigmaPair::from_precision(const Matrix& prec) {
  SigmaPair flipped = from_sigma(prec);
  return SigmaPair(flipped.prec_, flipped.sigma_);
}

FieldSample::FieldSample(Matrix v, LocationSet l) : values(std::move(v)), locs(std::move(l)) {
  if (values.rows() != locs.size())
    throw std::invalid_argument("FieldSample: values/locations row mismatch");
}

FieldSample::FieldSample(Matrix v, LocationSet l, BoolMatrix m)
    : values(std::move(v)), locs(std::move(l)), mask(std::move(m)) {
  if (values.rows() != locs.size())
    throw std::invalid_argument("FieldSample: values/locations row mismatch");
  if (mask.size() != 0 && (mask.rows() != values.rows() || mask.cols() != values.cols()))
    throw std::invalid_argument("FieldSample: mask shape mismatch");
}

bool FieldSample::fully_observed() const {
  if (mask.size() == 0) return true;
  return mask.all();
}

int FieldSample::observed_count() const {
  if (mask.size() == 0) return static_cast<int>(values.size());
  return static_cast<int>(mask.cast<int>().sum());
}

}  // namespace gpnet
