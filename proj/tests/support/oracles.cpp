#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "gpnet/quadrature.hpp"
#include "gpnet/special.hpp"

namespace gpnet::testing {

namespace {
constexpr double kPi = 3.14159265358979323846264338;
}

double bessel_k_quad(double nu, double x) {
  // integrand dies once x cosh t - nu t exceeds ~746
  double tmax = 5.0;
  while (x * std::cosh(tmax) - nu * tmax < 746.0 && tmax < 60.0) tmax += 1.0;
  auto f = [nu, x](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); };
  double rough = integrate(f, 0.0, tmax, 1e-6);
  return integrate(f, 0.0, tmax, std::abs(rough) * 1e-13);
}

namespace {

// sqrt(m_i m_j) as a function of |w|.
struct CrossDensity {
  double nu_i, nu_j, phi;
  int dim;
  double operator()(double w) const {
    const MaternParams pi_{nu_i, phi}, pj_{nu_j, phi};
    return std::sqrt(matern_spectral_density(w, pi_, dim) *
                     matern_spectral_density(w, pj_, dim));
  }
};

// Sum of integrals between consecutive zeros of the oscillating factor,
// with averaging of the last two partial sums.
double oscillatory_sum(const std::function<double(double)>& f, double first_zero,
                       double zero_spacing, double abs_tol) {
  double prev_partial = integrate(f, 0.0, first_zero, abs_tol * 1e-3);
  double partial = prev_partial;
  double z = first_zero;
  for (int k = 0; k < 100000; ++k) {
    const double term = integrate(f, z, z + zero_spacing, abs_tol * 1e-3);
    prev_partial = partial;
    partial += term;
    z += zero_spacing;
    if (std::abs(term) < abs_tol && k > 8) break;
  }
  return 0.5 * (partial + prev_partial);
}

}  // namespace

double spectral_cross_transform(double nu_i, double nu_j, double phi, double h, int dim) {
  const CrossDensity g{nu_i, nu_j, phi, dim};
  if (dim == 1) {
    if (h == 0.0) return 2.0 * integrate_half_line([&](double w) { return g(w); }, 1e-12);
    auto f = [&](double w) { return g(w) * std::cos(w * h); };
    return 2.0 * oscillatory_sum(f, 0.5 * kPi / h, kPi / h, 1e-10);
  }
  if (dim == 2) {
    if (h == 0.0)
      return 2.0 * kPi * integrate_half_line([&](double w) { return g(w) * w; }, 1e-12);
    auto f = [&](double w) { return g(w) * std::cyl_bessel_j(0.0, w * h) * w; };
    // J0 zeros are asymptotically pi/h apart starting near 2.405/h
    return 2.0 * kPi * oscillatory_sum(f, 2.404825557695773 / h, kPi / h, 1e-10);
  }
  throw std::invalid_argument("spectral_cross_transform: dim must be 1 or 2");
}

double spectral_mass(double nu, double phi, int dim) {
  const MaternParams p{nu, phi};
  auto m = [&](double w) { return matern_spectral_density(w, p, dim); };
  switch (dim) {
    case 1:
      return 2.0 * integrate_half_line(m, 1e-12);
    case 2:
      return 2.0 * kPi * integrate_half_line([&](double w) { return m(w) * w; }, 1e-12);
    case 3:
      return 4.0 * kPi * integrate_half_line([&](double w) { return m(w) * w * w; }, 1e-12);
  }
  throw std::invalid_argument("spectral_mass: dim must be 1, 2 or 3");
}

double gaussian_overlap_quad_2d(double a, double b, double h) {
  const double ca = std::pow(kPi * a * a, -0.5);
  const double cb = std::pow(kPi * b * b, -0.5);
  const double ext = 8.0 * std::max(a, b) + h;
  auto inner = [&](double x) {
    return integrate(
        [&](double y) {
          const double r2 = x * x + y * y;
          const double s2 = (x + h) * (x + h) + y * y;
          return std::exp(-r2 / (2 * a * a)) * std::exp(-s2 / (2 * b * b));
        },
        -ext, ext, 1e-12);
  };
  return ca * cb * integrate(inner, -ext, ext, 1e-11);
}

double disk_lens_area(double r1, double r2, double s) {
  if (s >= r1 + r2) return 0.0;
  const double rm = std::min(r1, r2);
  if (s <= std::abs(r1 - r2)) return kPi * rm * rm;
  const double d1 = (s * s + r1 * r1 - r2 * r2) / (2 * s * r1);
  const double d2 = (s * s + r2 * r2 - r1 * r1) / (2 * s * r2);
  return r1 * r1 * std::acos(d1) + r2 * r2 * std::acos(d2) -
         0.5 * std::sqrt((-s + r1 + r2) * (s + r1 - r2) * (s - r1 + r2) * (s + r1 + r2));
}

double glasso_objective(const Eigen::MatrixXd& precision, const Eigen::MatrixXd& S,
                        double lambda) {
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double logdet =
      2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  double l1 = 0.0;
  for (int i = 0; i < precision.rows(); ++i)
    for (int j = 0; j < precision.cols(); ++j)
      if (i != j) l1 += std::abs(precision(i, j));
  return -logdet + (S * precision).trace() + lambda * l1;
}

Eigen::MatrixXd glasso_reference_ista(const Eigen::MatrixXd& S, double lambda, int iters) {
  const int q = static_cast<int>(S.rows());
  Eigen::MatrixXd P = Eigen::MatrixXd(S.diagonal().cwiseInverse().asDiagonal());
  auto smooth = [&](const Eigen::MatrixXd& X) {
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double logdet =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    return -logdet + (S * X).trace();
  };
  double fP = smooth(P);
  double step = 1.0 / S.squaredNorm();
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd Pinv = P.inverse();
    Eigen::MatrixXd G = S - Pinv;
    // backtracking proximal step
    for (int ls = 0; ls < 60; ++ls) {
      Eigen::MatrixXd T = P - step * G;
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
          if (i != j) {
            const double v = T(i, j);
            T(i, j) = std::copysign(std::max(0.0, std::abs(v) - step * lambda), v);
          }
      T = 0.5 * (T + T.transpose()).eval();
      const double fT = smooth(T);
      const Eigen::MatrixXd D = T - P;
      const double quad = fP + (G.cwiseProduct(D)).sum() + D.squaredNorm() / (2.0 * step);
      if (std::isfinite(fT) && fT <= quad + 1e-15) {
        const double change = D.cwiseAbs().maxCoeff();
        P = T;
        fP = fT;
        step *= 1.25;
        if (change < 1e-13) return P;
        break;
      }
      step *= 0.5;
    }
  }
  return P;
}

}  // namespace gpnet::testing
