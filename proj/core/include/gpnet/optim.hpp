#ifndef GPNET_OPTIM_HPP
#define GPNET_OPTIM_HPP

#include <functional>

#include "gpnet/types.hpp"

namespace gpnet {

struct MinimizeResult {
  Vector x;
  double f = 0.0;
  Vector grad;
  int iterations = 0;
  bool converged = false;
};

// Limited-memory BFGS with backtracking Armijo line search. fg must return
// f(x) and write the gradient. When f_only is provided the line-search
// trials use it and the gradient is computed once per accepted step (the
// gradient costs ~3x the value for the dense likelihoods here).
// Deterministic; stops when the gradient max-norm falls below
// grad_tol * max(1, |f|) or the step stalls.
MinimizeResult minimize_lbfgs(const std::function<double(const Vector&, Vector&)>& fg,
                              Vector x0, int max_iter = 200, double grad_tol = 1e-6,
                              int memory = 10,
                              const std::function<double(const Vector&)>& f_only = {});

// Nelder-Mead simplex for low-dimensional noisy-free objectives.
MinimizeResult minimize_nelder_mead(const std::function<double(const Vector&)>& f, Vector x0,
                                    double step = 0.25, int max_iter = 400,
                                    double f_tol = 1e-9);

}  // namespace gpnet

#endif
