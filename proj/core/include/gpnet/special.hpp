#ifndef GPNET_SPECIAL_HPP
#define GPNET_SPECIAL_HPP

#include <stdexcept>

namespace gpnet {

// Matern smoothness/decay pair. Both strictly positive.
struct MaternParams {
  double nu;
  double phi;

  MaternParams(double nu_, double phi_) : nu(nu_), phi(phi_) {
    if (!(nu > 0.0) || !(phi > 0.0))
      throw std::domain_error("MaternParams: nu and phi must be > 0");
  }
};

// Modified Bessel function of the second kind, fractional order nu >= 0.
// Temme's series for x <= 2, Steed's continued fraction beyond, then
// upward recurrence in the order. Accurate to ~1e-13 relative for
// nu in [0, 5], x in [1e-8, 50].
//
// Negative orders use the evenness K_{-nu} = K_nu. Throws
// std::domain_error for x <= 0. If the result would
// exceed the double range it is saturated to DBL_MAX and *saturated
// (when non-null) is set; an infinity is never returned silently.
double bessel_k(double nu, double x, bool* saturated = nullptr);

// Matern correlation M(h; nu, phi) = 2^{1-nu}/Gamma(nu) (phi h)^nu K_nu(phi h).
// M(0) = 1 exactly; the x^nu K_nu(x) limit is taken analytically for
// phi*h < 1e-10 where direct evaluation cancels catastrophically.
double matern_corr(double h, const MaternParams& p);

// Isotropic Matern spectral density in R^d, d in {1,2,3}:
//   m(w; nu, phi) = Gamma(nu+d/2) phi^{2nu} / (Gamma(nu) pi^{d/2})
//                   * (phi^2 + |w|^2)^{-(nu+d/2)},
// normalized so that its integral over R^d is 1 under the convention
// corr(h) = int e^{i w.h} m(w) dw.
double matern_spectral_density(double omega_norm, const MaternParams& p, int dim);

// Cross-smoothness normalization for the common-scale multivariate Matern:
//   gamma_ij = [G(nu_i+d/2)/G(nu_i)]^{1/2} [G(nu_j+d/2)/G(nu_j)]^{1/2}
//              * G((nu_i+nu_j)/2) / G((nu_i+nu_j)/2 + d/2).
// Symmetric, in (0, 1], equal to 1 iff nu_i == nu_j. Evaluated in log space.
double gamma_factor(double nu_i, double nu_j, int dim);

}  // namespace gpnet

#endif
