#include "gpnet/special.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

namespace gpnet {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kZeta3 = 1.20205690315959428539973816;
constexpr double kPi = 3.14159265358979323846264338;

// Temme's auxiliary gamma combinations:
//   g1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)
//   g2(mu) = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
// with the mu -> 0 limits taken from the 1/Gamma(1+x) Taylor series.
void temme_gammas(double mu, double& g1, double& g2, double& gam_plus, double& gam_minus) {
  gam_plus = std::tgamma(1.0 + mu);
  gam_minus = std::tgamma(1.0 - mu);
  if (std::abs(mu) < 1e-3) {
    const double a1 = kEulerGamma;
    const double a2 = 0.5 * kEulerGamma * kEulerGamma - kPi * kPi / 12.0;
    const double a3 = kEulerGamma * kEulerGamma * kEulerGamma / 6.0 -
                      kEulerGamma * kPi * kPi / 12.0 + kZeta3 / 3.0;
    // 1/Gamma(1+x) = 1 + a1 x + a2 x^2 + a3 x^3 + O(x^4); odd terms cancel in g1.
    g1 = -(a1 + a3 * mu * mu);
    g2 = 1.0 + a2 * mu * mu;
  } else {
    g1 = (1.0 / gam_minus - 1.0 / gam_plus) / (2.0 * mu);
    g2 = 0.5 * (1.0 / gam_minus + 1.0 / gam_plus);
  }
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x <= 2 (Temme 1975).
void bessel_k_temme(double mu, double x, double& kmu, double& kmu1) {
  constexpr int kMaxIter = 500;
  const double eps = std::numeric_limits<double>::epsilon();
  const double x2 = 0.5 * x;
  const double pimu = kPi * mu;
  const double fact = (std::abs(pimu) < 1e-15) ? 1.0 : pimu / std::sin(pimu);
  const double d = -std::log(x2);
  const double e = mu * d;
  const double fact2 = (std::abs(e) < 1e-15) ? 1.0 : std::sinh(e) / e;
  double g1, g2, gp, gm;
  temme_gammas(mu, g1, g2, gp, gm);
  double ff = fact * (g1 * std::cosh(e) + g2 * fact2 * d);
  double sum = ff;
  const double ee = std::exp(e);  // (2/x)^mu
  double p = 0.5 * ee * gp;
  double q = 0.5 / ee * gm;
  double c = 1.0;
  const double d2 = x2 * x2;
  double sum1 = p;
  for (int i = 1; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu * mu);
    c *= d2 / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * eps) break;
  }
  kmu = sum;
  kmu1 = sum1 * 2.0 / x;
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x > 2, via Steed's CF2.
void bessel_k_steed(double mu, double x, double& kmu, double& kmu1) {
  constexpr int kMaxIter = 10000;
  const double eps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h = a1 * h;
  kmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k(double nu, double x, bool* saturated) {
  if (saturated) *saturated = false;
  if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be > 0");
  if (nu < 0.0) nu = -nu;  // K is even in the order

  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;  // |mu| <= 1/2
  double kmu, kmu1;
  if (x <= 2.0)
    bessel_k_temme(mu, x, kmu, kmu1);
  else
    bessel_k_steed(mu, x, kmu, kmu1);

  // K_{m+1}(x) = K_{m-1}(x) + 2m/x K_m(x), stable upward in the order.
  for (int i = 1; i <= nl; ++i) {
    if (kmu1 > DBL_MAX / 4.0) {
      if (saturated) *saturated = true;
      return DBL_MAX;
    }
    const double knext = kmu + (mu + i) * 2.0 / x * kmu1;
    kmu = kmu1;
    kmu1 = knext;
  }
  if (!std::isfinite(kmu)) {
    if (saturated) *saturated = true;
    return DBL_MAX;
  }
  return kmu;
}

double matern_corr(double h, const MaternParams& p) {
  if (h < 0.0) throw std::domain_error("matern_corr: distance must be >= 0");
  const double x = p.phi * h;
  if (x < 1e-10) return 1.0;  // x^nu K_nu(x) -> 2^{nu-1} Gamma(nu)
  const double lg = (1.0 - p.nu) * std::log(2.0) - std::lgamma(p.nu) + p.nu * std::log(x);
  const double k = bessel_k(p.nu, x);
  double m = std::exp(lg) * k;
  if (m > 1.0) m = 1.0;  // guard against last-ulp excess near zero lag
  return m;
}

double matern_spectral_density(double omega_norm, const MaternParams& p, int dim) {
  if (dim < 1 || dim > 3)
    throw std::domain_error("matern_spectral_density: dim must be 1, 2 or 3");
  if (omega_norm < 0.0)
    throw std::domain_error("matern_spectral_density: frequency magnitude must be >= 0");
  const double hd = 0.5 * dim;
  const double logc = std::lgamma(p.nu + hd) - std::lgamma(p.nu) +
                      2.0 * p.nu * std::log(p.phi) - hd * std::log(kPi);
  return std::exp(logc - (p.nu + hd) * std::log(p.phi * p.phi + omega_norm * omega_norm));
}

double gamma_factor(double nu_i, double nu_j, int dim) {
  if (!(nu_i > 0.0) || !(nu_j > 0.0))
    throw std::domain_error("gamma_factor: smoothness must be > 0");
  if (dim < 1 || dim > 3) throw std::domain_error("gamma_factor: dim must be 1, 2 or 3");
  const double hd = 0.5 * dim;
  const double nbar = 0.5 * (nu_i + nu_j);
  const double lg = 0.5 * (std::lgamma(nu_i + hd) - std::lgamma(nu_i)) +
                    0.5 * (std::lgamma(nu_j + hd) - std::lgamma(nu_j)) +
                    std::lgamma(nbar) - std::lgamma(nbar + hd);
  double g = std::exp(lg);
  if (g > 1.0) g = 1.0;  // Cauchy-Schwarz bound; equality iff nu_i == nu_j
  return g;
}

}  // namespace gpnet
