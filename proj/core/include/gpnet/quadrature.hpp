#ifndef GPNET_QUADRATURE_HPP
#define GPNET_QUADRATURE_HPP

#include <functional>

namespace gpnet {

// Adaptive Gauss-Kronrod (G7,K15) integration of f on [a, b].
// Bisects intervals until the local K15-G7 error estimate is below
// abs_tol scaled to the interval, or max_depth is reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 30);

// Integral of f over [0, inf) via the substitution t = u/(1-u).
double integrate_half_line(const std::function<double(double)>& f,
                           double abs_tol = 1e-10);

}  // namespace gpnet

#endif
