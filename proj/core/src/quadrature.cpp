#include "gpnet/quadrature.hpp"

#include <cmath>

namespace gpnet {

namespace {

// Kronrod-15 abscissae on [0,1] (positive half) and weights; the
// embedded Gauss-7 rule uses the odd-indexed abscissae.
const double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& result, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  const double fc = f(c);
  resk = kWgk[7] * fc;
  resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  result = resk * h;
  err = std::abs((resk - resg) * h);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth) {
  double r, e;
  gk15(f, a, b, r, e);
  if (e <= tol || depth <= 0) return r;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth - 1) + adapt(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, abs_tol, max_depth);
}

double integrate_half_line(const std::function<double(double)>& f, double abs_tol) {
  return integrate(
      [&f](double u) {
        const double om = 1.0 - u;
        const double t = u / om;
        return f(t) / (om * om);
      },
      0.0, 1.0 - 1e-14, abs_tol);
}

}  // namespace gpnet
