#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpnet/gaussian.hpp"
#include "gpnet/rng.hpp"
#include "support/generators.hpp"

using namespace gpnet;
using gpnet::testing::random_locs;
using gpnet::testing::random_spd;

TEST_CASE("chol basics") {
  CHECK((chol(Matrix::Identity(5, 5)) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
  Matrix a(2, 2);
  a << 4.0, 2.0, 2.0, 3.0;
  Matrix L = chol(a);
  CHECK(L(0, 0) == doctest::Approx(2.0));
  CHECK(L(1, 0) == doctest::Approx(1.0));
  CHECK(L(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(L(0, 1) == 0.0);

  Rng rng(5);
  Matrix s = random_spd(50, rng);
  Matrix Ls = chol(s);
  CHECK((Ls * Ls.transpose() - s).norm() / s.norm() < 1e-10);
}

TEST_CASE("chol error reporting") {
  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(chol(asym), std::invalid_argument);
  Matrix indef(3, 3);
  indef << 1, 0, 0, 0, 1, 2, 0, 2, 1;  // 2x2 trailing block indefinite
  try {
    chol(indef);
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("pivot 3") != std::string::npos);
  }
}

TEST_CASE("condition: 3x3 arithmetic oracle") {
  Matrix s(3, 3);
  s << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  Matrix c = schur_conditional_cov(s, {0, 1}, {2});
  CHECK(c(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(c(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c(1, 1) == doctest::Approx(1.5).epsilon(1e-14));

  SUBCASE("empty given set leaves the block unchanged") {
    Matrix u = schur_conditional_cov(s, {0, 2}, {});
    CHECK(u(0, 0) == 2.0);
    CHECK(u(0, 1) == 1.0);
  }
  SUBCASE("disjointness enforced") {
    CHECK_THROWS_AS(schur_conditional_cov(s, {0, 1}, {1}), std::invalid_argument);
  }
}

TEST_CASE("conditioning on an independent block changes nothing") {
  Rng rng(9);
  Matrix a = random_spd(3, rng), b = random_spd(2, rng);
  Matrix joint = Matrix::Zero(5, 5);
  joint.topLeftCorner(3, 3) = a;
  joint.bottomRightCorner(2, 2) = b;
  Matrix c = schur_conditional_cov(joint, {0, 1, 2}, {3, 4});
  CHECK((c - a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sequential conditioning equals conditioning on the union") {
  Rng rng(15);
  Matrix s = random_spd(12, rng);
  std::vector<int> target{0, 1}, g1{2, 3, 4, 5}, g2{6, 7, 8, 9, 10, 11}, both;
  both = g1;
  both.insert(both.end(), g2.begin(), g2.end());
  // condition on g1 first: conditional covariance of {target, g2}
  std::vector<int> tg2 = target;
  tg2.insert(tg2.end(), g2.begin(), g2.end());
  Matrix step1 = schur_conditional_cov(s, tg2, g1);
  std::vector<int> t01{0, 1}, grest;
  for (std::size_t k = 2; k < tg2.size(); ++k) grest.push_back(static_cast<int>(k));
  Matrix step2 = schur_conditional_cov(step1, t01, grest);
  Matrix direct = schur_conditional_cov(s, target, both);
  CHECK((step2 - direct).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("sample_field determinism and Monte Carlo covariance") {
  Rng rng(21);
  Matrix sig = random_spd(2, rng);
  CrossCovModel m =
      ParsimoniousMaternModel(SigmaPair::from_sigma(sig), {0.6, 1.3}, 8.0, 2);
  LocationSet locs = random_locs(4, 2, rng);

  FieldSample s1 = sample_field(m, locs, 777);
  FieldSample s2 = sample_field(m, locs, 777);
  CHECK((s1.values - s2.values).cwiseAbs().maxCoeff() == 0.0);
  FieldSample s3 = sample_field(m, locs, 778);
  CHECK((s1.values - s3.values).cwiseAbs().maxCoeff() > 0.0);

  const int reps = 10000;
  const int dim = 8;
  Matrix C = build_joint_cov(m, locs);
  Matrix acc = Matrix::Zero(dim, dim);
  for (int r = 0; r < reps; ++r) {
    FieldSample s = sample_field(m, locs, Rng::derive(999, r).next());
    Vector y(dim);
    y << s.values.col(0), s.values.col(1);
    acc += y * y.transpose();
  }
  acc /= reps;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double se = std::sqrt((C(i, i) * C(j, j) + C(i, j) * C(i, j)) / reps);
      CHECK(std::abs(acc(i, j) - C(i, j)) < 5.0 * se);
    }
}

TEST_CASE("independent components stay empirically uncorrelated") {
  CrossCovModel m = SeparableModel{SigmaPair::from_sigma(Matrix::Identity(2, 2)),
                                   MaternParams{0.8, 10.0}};
  LocationSet locs = LocationSet::grid2d(5);
  const int reps = 4000;  // 25 locations x 4000 reps = 1e5 pairs
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int r = 0; r < reps; ++r) {
    FieldSample s = sample_field(m, locs, Rng::derive(1234, r).next());
    sxy += (s.values.col(0).array() * s.values.col(1).array()).sum();
    sxx += s.values.col(0).squaredNorm();
    syy += s.values.col(1).squaredNorm();
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.05);
}

TEST_CASE("loglik closed forms") {
  // spread-out locations make the correlation numerically negligible
  CrossCovModel white = SeparableModel{SigmaPair::from_sigma(Matrix::Identity(2, 2)),
                                       MaternParams{0.5, 1000.0}};
  Matrix coords(3, 1);
  coords << 0.0, 10.0, 20.0;
  LocationSet locs(coords);
  FieldSample zero(Matrix::Zero(3, 2), locs);
  CHECK(loglik(zero, white) == doctest::Approx(-(6.0 / 2.0) * std::log(2 * M_PI)).epsilon(1e-12));

  // 1-d, n=2, exponential kernel: hand-computed 2x2 likelihood
  const double sig2 = 1.7, rho = std::exp(-3.0 * 0.4), y1 = 0.6, y2 = -1.1;
  Matrix s1(1, 1);
  s1 << sig2;
  CrossCovModel m1 = SeparableModel{SigmaPair::from_sigma(s1), MaternParams{0.5, 3.0}};
  Matrix c2(2, 1);
  c2 << 0.0, 0.4;
  Matrix vals(2, 1);
  vals << y1, y2;
  FieldSample sample2(vals, LocationSet(c2));
  const double det = sig2 * sig2 * (1 - rho * rho);
  const double quad = (y1 * y1 - 2 * rho * y1 * y2 + y2 * y2) / (sig2 * (1 - rho * rho));
  const double expected = -0.5 * (2 * std::log(2 * M_PI) + std::log(det) + quad);
  CHECK(loglik(sample2, m1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("loglik shift under doubling Sigma") {
  Rng rng(33);
  Matrix sig = random_spd(3, rng);
  CrossCovModel m = SeparableModel{SigmaPair::from_sigma(sig), MaternParams{0.7, 6.0}};
  LocationSet locs = random_locs(12, 2, rng);
  FieldSample s = sample_field(m, locs, 4242);
  const int mobs = 36;
  CrossCovModel doubled = with_sigma(m, SigmaPair::from_sigma(2.0 * sig));
  FieldSample zero(Matrix::Zero(12, 3), locs);
  const double l0 = loglik(zero, m);
  const double l1 = loglik(s, m);
  const double l2 = loglik(s, doubled);
  // logdet grows by m log 2, quadratic halves
  CHECK(l2 == doctest::Approx(l0 - 0.5 * mobs * std::log(2.0) + 0.5 * (l1 - l0)).epsilon(1e-10));
}

TEST_CASE("loglik honors the mask") {
  Rng rng(35);
  Matrix sig = random_spd(2, rng);
  CrossCovModel m = SeparableModel{SigmaPair::from_sigma(sig), MaternParams{0.9, 7.0}};
  LocationSet locs = random_locs(6, 2, rng);
  FieldSample full = sample_field(m, locs, 90);
  BoolMatrix mask = BoolMatrix::Constant(6, 2, true);
  mask(2, 0) = mask(4, 1) = false;
  FieldSample masked(full.values, locs, mask);
  CHECK(masked.observed_count() == 10);
  // against a hand-subset computation
  Matrix C = build_joint_cov(m, locs);
  std::vector<int> keep;
  Vector y(10);
  int k = 0;
  for (int j = 0; j < 2; ++j)
    for (int a = 0; a < 6; ++a)
      if (mask(a, j)) {
        keep.push_back(vec_index(j, a, 6));
        y(k++) = full.values(a, j);
      }
  Matrix Co(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) Co(i, j) = C(keep[i], keep[j]);
  const Matrix L = chol(Co);
  const Vector alpha = chol_solve(L, y);
  const double expected = -0.5 * (10 * std::log(2 * M_PI) + chol_logdet(L) + y.dot(alpha));
  CHECK(loglik(masked, m) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("average loglik prefers the generating model") {
  Rng rng(51);
  Matrix sig = random_spd(2, rng);
  CrossCovModel truth = ParsimoniousMaternModel(SigmaPair::from_sigma(sig), {0.6, 1.1}, 10.0, 2);
  CrossCovModel wrong = ParsimoniousMaternModel(SigmaPair::from_sigma(sig), {0.6, 1.1}, 20.0, 2);
  LocationSet locs = random_locs(20, 2, rng);
  double acc_true = 0.0, acc_wrong = 0.0;
  for (int r = 0; r < 50; ++r) {
    FieldSample s = sample_field(truth, locs, Rng::derive(7007, r).next());
    acc_true += loglik(s, truth);
    acc_wrong += loglik(s, wrong);
  }
  CHECK(acc_true > acc_wrong);
}

TEST_CASE("predict interpolates and decouples independent components") {
  Rng rng(61);
  Matrix sig = random_spd(2, rng);
  CrossCovModel m = SeparableModel{SigmaPair::from_sigma(sig), MaternParams{1.1, 6.0}};
  LocationSet locs = random_locs(10, 2, rng);
  FieldSample s = sample_field(m, locs, 31);

  SUBCASE("observed target reproduces the observation with zero variance") {
    ConditionalLaw law = predict(s, m, {{0, locs.point(3)}});
    CHECK(law.mean(0) == doctest::Approx(s.values(3, 0)).epsilon(1e-8));
    CHECK(law.cov(0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  }
  SUBCASE("identity Sigma ignores the other component") {
    CrossCovModel ind = SeparableModel{SigmaPair::from_sigma(Matrix::Identity(2, 2)),
                                       MaternParams{1.1, 6.0}};
    FieldSample si = sample_field(ind, locs, 77);
    Eigen::RowVectorXd target(2);
    target << 0.42, 0.58;
    ConditionalLaw joint_law = predict(si, ind, {{0, target}});
    // kriging with only component 0 observed
    BoolMatrix mask = BoolMatrix::Constant(10, 2, false);
    mask.col(0).setConstant(true);
    FieldSample only0(si.values, locs, mask);
    ConditionalLaw solo_law = predict(only0, ind, {{0, target}});
    CHECK(joint_law.mean(0) == doctest::Approx(solo_law.mean(0)).epsilon(1e-10));
    CHECK(joint_law.cov(0, 0) == doctest::Approx(solo_law.cov(0, 0)).epsilon(1e-10));
  }
}

TEST_CASE("prediction residuals are calibrated and orthogonal") {
  Rng rng(71);
  Matrix sig = random_spd(2, rng);
  CrossCovModel m = ParsimoniousMaternModel(SigmaPair::from_sigma(sig), {0.8, 1.4}, 9.0, 2);
  LocationSet locs = random_locs(9, 2, rng);
  Eigen::RowVectorXd target(2);
  target << 0.5, 0.5;
  // held-out entry: predict component 0 at a new point across replicates
  const int reps = 500;
  double zsum = 0.0, z2sum = 0.0;
  std::vector<double> resid(reps), cond0(reps);
  for (int r = 0; r < reps; ++r) {
    LocationSet all = locs.appended(LocationSet(Matrix(target)));
    FieldSample s = sample_field(m, all, Rng::derive(512, r).next());
    const double truth_val = s.values(9, 0);
    Matrix vals = s.values.topRows(9);
    FieldSample obs(vals, locs);
    ConditionalLaw law = predict(obs, m, {{0, target}});
    const double z = (truth_val - law.mean(0)) / std::sqrt(law.cov(0, 0));
    zsum += z;
    z2sum += z * z;
    resid[r] = truth_val - law.mean(0);
    cond0[r] = vals(0, 0);
  }
  const double zmean = zsum / reps;
  const double zvar = z2sum / reps - zmean * zmean;
  CHECK(std::abs(zmean) < 0.15);
  CHECK(zvar == doctest::Approx(1.0).epsilon(0.2));
  // orthogonality to a conditioning value
  double num = 0.0, da = 0.0, db = 0.0, ma = 0.0, mb = 0.0;
  for (int r = 0; r < reps; ++r) {
    ma += resid[r] / reps;
    mb += cond0[r] / reps;
  }
  for (int r = 0; r < reps; ++r) {
    num += (resid[r] - ma) * (cond0[r] - mb);
    da += (resid[r] - ma) * (resid[r] - ma);
    db += (cond0[r] - mb) * (cond0[r] - mb);
  }
  CHECK(std::abs(num / std::sqrt(da * db)) < 0.1);
}
