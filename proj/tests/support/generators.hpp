// Random inputs for property-style tests, driven by the library Rng so
// every run is reproducible.
#ifndef GPNET_TESTS_GENERATORS_HPP
#define GPNET_TESTS_GENERATORS_HPP

#include "gpnet/models.hpp"
#include "gpnet/rng.hpp"
#include "gpnet/types.hpp"

namespace gpnet::testing {

inline Matrix random_spd(int q, Rng& rng, double diag_boost = 0.5) {
  Matrix a(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) a(i, j) = rng.normal();
  Matrix s = a * a.transpose() / q;
  s.diagonal().array() += diag_boost;
  return s;
}

// SPD precision with exact zeros at non-edges of a random pattern.
inline Matrix random_patterned_precision(int q, double edge_prob, Rng& rng) {
  Matrix prec = Matrix::Identity(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      if (rng.bernoulli(edge_prob)) {
        const double w = rng.uniform(0.2, 0.6) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
        prec(i, j) = prec(j, i) = w;
      }
  for (int i = 0; i < q; ++i) {
    const double off = prec.row(i).cwiseAbs().sum() - std::abs(prec(i, i));
    if (off + 0.05 > prec(i, i)) prec(i, i) = 1.05 * off + 0.05;
  }
  return prec;
}

inline LocationSet random_locs(int n, int d, Rng& rng) {
  Matrix c(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) c(i, k) = rng.uniform();
  return LocationSet(std::move(c));
}

inline std::vector<MaternParams> random_matern_set(int q, Rng& rng) {
  std::vector<MaternParams> out;
  out.reserve(q);
  for (int j = 0; j < q; ++j)
    out.emplace_back(rng.uniform(0.4, 2.0), rng.uniform(4.0, 15.0));
  return out;
}

}  // namespace gpnet::testing

#endif
