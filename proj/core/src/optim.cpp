#include "gpnet/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace gpnet {

MinimizeResult minimize_lbfgs(const std::function<double(const Vector&, Vector&)>& fg,
                              Vector x0, int max_iter, double grad_tol, int memory,
                              const std::function<double(const Vector&)>& f_only) {
  const int n = static_cast<int>(x0.size());
  MinimizeResult res;
  res.x = std::move(x0);
  res.grad.resize(n);
  res.f = fg(res.x, res.grad);

  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;

  Vector g = res.grad;
  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter;
    if (g.cwiseAbs().maxCoeff() <= grad_tol * std::max(1.0, std::abs(res.f))) {
      res.converged = true;
      return res;
    }
    // two-loop recursion
    Vector q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Vector dir = -q;
    double dg = dir.dot(g);
    if (dg >= 0.0) {  // not a descent direction; fall back to steepest descent
      dir = -g;
      dg = -g.squaredNorm();
    }

    // backtracking Armijo; value-only trials, one gradient per accepted step
    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(1.0, dir.norm())) : 1.0;
    const double c1 = 1e-4;
    Vector xn(n), gn(n);
    double fn = res.f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = res.x + step * dir;
      fn = f_only ? f_only(xn) : fg(xn, gn);
      if (std::isfinite(fn) && fn <= res.f + c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = g.cwiseAbs().maxCoeff() <= 10.0 * grad_tol * std::max(1.0, std::abs(res.f));
      return res;
    }
    if (f_only) fn = fg(xn, gn);  // gradient at the accepted point
    Vector s = xn - res.x;
    Vector y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    res.x = std::move(xn);
    res.f = fn;
    g = gn;
    res.grad = g;
  }
  res.converged = g.cwiseAbs().maxCoeff() <= grad_tol * std::max(1.0, std::abs(res.f));
  return res;
}

MinimizeResult minimize_nelder_mead(const std::function<double(const Vector&)>& f, Vector x0,
                                    double step, int max_iter, double f_tol) {
  const int n = static_cast<int>(x0.size());
  std::vector<Vector> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  MinimizeResult res;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::vector<int> ord(n + 1);
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = ord[0], worst = ord[n], second = ord[n - 1];
    if (std::abs(fv[worst] - fv[best]) <= f_tol * (std::abs(fv[best]) + f_tol)) break;

    Vector centroid = Vector::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    Vector xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    if (fr < fv[best]) {
      Vector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      Vector xc = centroid + 0.5 * (pts[worst] - centroid);
      const double fc = f(xc);
      if (fc < fv[worst]) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i)
          if (i != best) {
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            fv[i] = f(pts[i]);
          }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = pts[best];
  res.f = fv[best];
  res.iterations = iter;
  res.converged = iter < max_iter;
  return res;
}

}  // namespace gpnet
