#ifndef GPNET_TYPES_HPP
#define GPNET_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gpnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Ordered set of n points in R^d, shared by all process components.
class LocationSet {
 public:
  LocationSet() = default;
  explicit LocationSet(Matrix coords) : coords_(std::move(coords)) {
    if (coords_.rows() < 1 || coords_.cols() < 1)
      throw std::invalid_argument("LocationSet: need at least one point");
  }

  // m x m regular grid on [x0,x1] x [y0,y1], row-major in y then x.
  static LocationSet grid2d(int m, double x0 = 0.0, double x1 = 1.0,
                            double y0 = 0.0, double y1 = 1.0);
  // n evenly spaced points on [x0, x1].
  static LocationSet line1d(int n, double x0 = 0.0, double x1 = 1.0);

  int size() const { return static_cast<int>(coords_.rows()); }
  int dim() const { return static_cast<int>(coords_.cols()); }
  Eigen::RowVectorXd point(int i) const { return coords_.row(i); }
  const Matrix& coords() const { return coords_; }

  double distance(int i, int j) const { return (coords_.row(i) - coords_.row(j)).norm(); }

  // Pairwise Euclidean distance matrix.
  Matrix distances() const;

  // Indices of rows coinciding (exactly) with an earlier row.
  std::vector<int> duplicate_points() const;

  LocationSet appended(const LocationSet& extra) const;

 private:
  Matrix coords_;
};

// The q x q cross-dependence covariance and its cached inverse: the single
// home of all cross-process parameters.
class SigmaPair {
 public:
  static SigmaPair from_sigma(const Matrix& sigma);
  static SigmaPair from_precision(const Matrix& prec);

  int order() const { return static_cast<int>(sigma_.rows()); }
  const Matrix& sigma() const { return sigma_; }
  const Matrix& precision() const { return prec_; }
  double sigma(int i, int j) const { return sigma_(i, j); }
  double precision(int i, int j) const { return prec_(i, j); }

 private:
  SigmaPair(Matrix s, Matrix p) : sigma_(std::move(s)), prec_(std::move(p)) {}
  Matrix sigma_, prec_;
};

// n x q observations bound to a LocationSet; mask(i,j) = true means entry
// (location i, component j) is observed.
struct FieldSample {
  Matrix values;  // n x q
  LocationSet locs;
  BoolMatrix mask;  // n x q; empty means fully observed

  FieldSample() = default;
  FieldSample(Matrix v, LocationSet l);
  FieldSample(Matrix v, LocationSet l, BoolMatrix m);

  int n() const { return static_cast<int>(values.rows()); }
  int q() const { return static_cast<int>(values.cols()); }
  bool fully_observed() const;
  bool observed(int loc, int comp) const {
    return mask.size() == 0 || mask(loc, comp);
  }
  int observed_count() const;
};

}  // namespace gpnet

#endif
