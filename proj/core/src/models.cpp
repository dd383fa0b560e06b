#include "gpnet/models.hpp"

#include <Eigen/Cholesky>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "gpnet/quadrature.hpp"

namespace gpnet {

namespace {

constexpr double kPi = 3.14159265358979323846264338;

void check_component(const CrossCovModel& model, int i, int j) {
  const int q = num_components(model);
  if (i < 0 || i >= q || j < 0 || j >= q)
    throw std::out_of_range("component index out of range");
}

// Memoizes an isotropic kernel over the distinct distances of a location
// set; regular grids have few of them, so this removes nearly all Bessel
// evaluations from matrix assembly.
class MemoIsotropic {
 public:
  explicit MemoIsotropic(std::function<double(double)> f) : f_(std::move(f)) {}
  double operator()(double d) {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(d);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double v = f_(d);
    memo_.emplace(key, v);
    return v;
  }

 private:
  std::function<double(double)> f_;
  std::unordered_map<std::uint64_t, double> memo_;
};

// Fills the (i,j) component block of C assuming an isotropic entry function.
void fill_isotropic_block(Matrix& C, const LocationSet& locs, int i, int j,
                          MemoIsotropic& kernel, double scale) {
  const int n = locs.size();
  for (int a = 0; a < n; ++a) {
    const int b0 = (i == j) ? a : 0;
    for (int b = b0; b < n; ++b) {
      const double v = scale * kernel(locs.distance(a, b));
      C(i * n + a, j * n + b) = v;
      if (i == j)
        C(i * n + b, j * n + a) = v;
      else
        C(j * n + b, i * n + a) = v;
    }
  }
}

double sq(double x) { return x * x; }

double ball_volume(int dim, double radius) {
  switch (dim) {
    case 1: return 2.0 * radius;
    case 2: return kPi * radius * radius;
    default: return 4.0 / 3.0 * kPi * radius * radius * radius;
  }
}

// Mass of the normalized Gaussian kernel over the centered (dim-1)-ball of
// radius c orthogonal to the integration axis.
double gaussian_slab_mass(double a, double c, int dim) {
  if (dim == 1) return 1.0;
  if (dim == 2) return a * std::sqrt(2.0 * kPi) * std::erf(c / (a * std::sqrt(2.0)));
  return 2.0 * kPi * a * a * (1.0 - std::exp(-c * c / (2.0 * a * a)));
}

double overlap_gaussian_gaussian(double a, double b, double h2, int dim) {
  const double s2 = a * a + b * b;
  return std::pow(2.0 * a * b / s2, 0.5 * dim) * std::exp(-h2 / (2.0 * s2));
}

// Both kernels reduced onto the axis joining the two centers (separation s);
// the transverse part is closed-form, the axial part is quadrature.
double overlap_with_spherical(const KernelSpec& ki, const KernelSpec& kj, double s, int dim) {
  const KernelSpec& sph = ki.family == KernelFamily::Spherical ? ki : kj;
  const KernelSpec& oth = ki.family == KernelFamily::Spherical ? kj : ki;
  const double b = sph.bandwidth;
  const double cs = 1.0 / std::sqrt(ball_volume(dim, b));
  if (oth.family == KernelFamily::Gaussian) {
    const double a = oth.bandwidth;
    const double cg = std::pow(kPi * a * a, -0.25 * dim);
    auto f = [&](double x) {
      const double c = std::sqrt(std::max(0.0, b * b - sq(x + s)));
      return std::exp(-x * x / (2.0 * a * a)) * gaussian_slab_mass(a, c, dim);
    };
    return cs * cg * integrate(f, -s - b, -s + b, 1e-12);
  }
  // spherical-spherical: transverse sections are concentric balls.
  const double bi = oth.bandwidth;
  const double ci = 1.0 / std::sqrt(ball_volume(dim, bi));
  const double lo = std::max(-bi, -s - b);
  const double hi = std::min(bi, -s + b);
  if (hi <= lo) return 0.0;
  auto f = [&](double x) {
    const double r2 = std::min(bi * bi - x * x, b * b - sq(x + s));
    if (r2 <= 0.0) return 0.0;
    if (dim == 1) return 1.0;
    if (dim == 2) return 2.0 * std::sqrt(r2);
    return kPi * r2;
  };
  return cs * ci * integrate(f, lo, hi, 1e-12);
}

}  // namespace

ParsimoniousMaternModel::ParsimoniousMaternModel(SigmaPair sigma, std::vector<double> nu,
                                                 double phi, int dim)
    : sigma_(std::move(sigma)), nu_(std::move(nu)), phi_(phi), dim_(dim) {
  const int q = sigma_.order();
  if (static_cast<int>(nu_.size()) != q)
    throw std::invalid_argument("ParsimoniousMaternModel: need one nu per component");
  for (double v : nu_)
    if (!(v > 0.0)) throw std::domain_error("ParsimoniousMaternModel: nu must be > 0");
  if (!(phi_ > 0.0)) throw std::domain_error("ParsimoniousMaternModel: phi must be > 0");
  if (dim_ < 1 || dim_ > 3)
    throw std::domain_error("ParsimoniousMaternModel: dim must be 1, 2 or 3");
  gamma_.resize(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) gamma_(i, j) = gamma_factor(nu_[i], nu_[j], dim_);
}

double kernel_value(const KernelSpec& k, double r, int dim) {
  if (!(k.bandwidth > 0.0)) throw std::domain_error("kernel_value: bandwidth must be > 0");
  switch (k.family) {
    case KernelFamily::Gaussian: {
      const double a = k.bandwidth;
      return std::pow(kPi * a * a, -0.25 * dim) * std::exp(-r * r / (2.0 * a * a));
    }
    case KernelFamily::Spherical:
      return std::abs(r) <= k.bandwidth ? 1.0 / std::sqrt(ball_volume(dim, k.bandwidth)) : 0.0;
  }
  throw std::domain_error("kernel_value: unsupported kernel family");
}

double conv_overlap(const KernelSpec& ki, const KernelSpec& kj,
                    const Eigen::RowVectorXd& lag) {
  const int dim = static_cast<int>(lag.size());
  if (dim < 1 || dim > 3) throw std::domain_error("conv_overlap: dim must be 1, 2 or 3");
  if (!(ki.bandwidth > 0.0) || !(kj.bandwidth > 0.0))
    throw std::domain_error("conv_overlap: bandwidth must be > 0");
  if (ki.family == KernelFamily::Gaussian && kj.family == KernelFamily::Gaussian)
    return overlap_gaussian_gaussian(ki.bandwidth, kj.bandwidth, lag.squaredNorm(), dim);
  return overlap_with_spherical(ki, kj, lag.norm(), dim);
}

DiscretizedConvolutionModel::DiscretizedConvolutionModel(SigmaPair sigma,
                                                         std::vector<KernelSpec> kernels,
                                                         LocationSet knots, Vector cell_area)
    : sigma_(std::move(sigma)),
      kernels_(std::move(kernels)),
      knots_(std::move(knots)),
      cell_area_(std::move(cell_area)) {
  if (static_cast<int>(kernels_.size()) != sigma_.order())
    throw std::invalid_argument("DiscretizedConvolutionModel: need one kernel per component");
  if (cell_area_.size() != knots_.size())
    throw std::invalid_argument("DiscretizedConvolutionModel: one cell area per knot");
  if ((cell_area_.array() <= 0.0).any())
    throw std::domain_error("DiscretizedConvolutionModel: cell areas must be > 0");
}

DiscretizedConvolutionModel::DiscretizedConvolutionModel(SigmaPair sigma,
                                                         std::vector<KernelSpec> kernels,
                                                         LocationSet knots, double domain_area)
    : DiscretizedConvolutionModel(
          std::move(sigma), std::move(kernels), knots,
          Vector::Constant(knots.size(), domain_area / knots.size())) {}

Vector DiscretizedConvolutionModel::basis(int j, Point l) const {
  const int ns = knots_.size();
  Vector g(ns);
  for (int t = 0; t < ns; ++t)
    g(t) = kernel_value(kernels_[j], (l - knots_.point(t)).norm(), dim()) *
           std::sqrt(cell_area_(t));
  return g;
}

InsideOutModel::InsideOutModel(SigmaPair sigma, std::vector<MaternParams> corr,
                               LocationSet reference)
    : sigma_(std::move(sigma)), corr_(std::move(corr)), reference_(std::move(reference)) {
  if (static_cast<int>(corr_.size()) != sigma_.order())
    throw std::invalid_argument("InsideOutModel: need one correlation per component");
  const int n = reference_.size();
  const Matrix dist = reference_.distances();
  chol_ref_.reserve(corr_.size());
  for (std::size_t j = 0; j < corr_.size(); ++j) {
    Matrix rho(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) rho(a, b) = rho(b, a) = matern_corr(dist(a, b), corr_[j]);
    Eigen::LLT<Matrix> llt(rho);
    if (llt.info() != Eigen::Success) {
      // near-singular reference correlation (e.g. duplicate points)
      rho.diagonal().array() += 1e-10;
      llt.compute(rho);
      jitter_applied_ = true;
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("InsideOutModel: rho_" + std::to_string(j + 1) +
                                 "(S) is not positive definite");
    }
    chol_ref_.push_back(llt.matrixL());
  }
}

Matrix InsideOutModel::corr_reference_to(int j, const LocationSet& pts) const {
  const int n = reference_.size();
  Matrix out(n, pts.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < pts.size(); ++b)
      out(a, b) = matern_corr((reference_.point(a) - pts.point(b)).norm(), corr_[j]);
  return out;
}

LmcModel::LmcModel(Matrix loading, std::vector<MaternParams> corr)
    : loading_(std::move(loading)), corr_(std::move(corr)) {
  const int q = static_cast<int>(loading_.rows());
  if (loading_.cols() != q)
    throw std::invalid_argument("LmcModel: loading matrix must be square (full-rank model)");
  if (static_cast<int>(corr_.size()) != q)
    throw std::invalid_argument("LmcModel: need one latent correlation per component");
  for (int r = 0; r < q; ++r)
    for (int s = r + 1; s < q; ++s)
      if (corr_[r].nu == corr_[s].nu && corr_[r].phi == corr_[s].phi)
        throw std::invalid_argument("LmcModel: latent correlations must be pairwise distinct");
  Eigen::JacobiSVD<Matrix> svd(loading_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(q - 1);
  cond_ = smax / smin;
  if (!(smin > 0.0) || cond_ > 1e12)
    throw std::invalid_argument("LmcModel: loading matrix is numerically singular");
  loading_inv_ = svd.solve(Matrix::Identity(q, q));
}

int num_components(const CrossCovModel& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LmcModel>)
          return static_cast<int>(m.loading().rows());
        else if constexpr (std::is_same_v<T, SeparableModel>)
          return m.sigma.order();
        else
          return m.sigma().order();
      },
      model);
}

const SigmaPair& model_sigma(const CrossCovModel& model) {
  return std::visit(
      [](const auto& m) -> const SigmaPair& {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LmcModel>)
          throw std::invalid_argument("model_sigma: LMC carries a loading matrix, not Sigma");
        else if constexpr (std::is_same_v<T, SeparableModel>)
          return m.sigma;
        else
          return m.sigma();
      },
      model);
}

CrossCovModel with_sigma(const CrossCovModel& model, SigmaPair sigma) {
  if (sigma.order() != num_components(model))
    throw std::invalid_argument("with_sigma: order mismatch");
  CrossCovModel out = model;
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LmcModel>)
          throw std::invalid_argument("with_sigma: not defined for the LMC");
        else if constexpr (std::is_same_v<T, SeparableModel>)
          m.sigma = std::move(sigma);
        else
          m.sigma_ = std::move(sigma);
      },
      out);
  return out;
}

double cross_cov_entry(const CrossCovModel& model, int i, int j, Point l1, Point l2) {
  check_component(model, i, j);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SeparableModel>) {
          return m.sigma.sigma(i, j) * matern_corr((l1 - l2).norm(), m.corr);
        } else if constexpr (std::is_same_v<T, ParsimoniousMaternModel>) {
          const MaternParams cross{0.5 * (m.nu()[i] + m.nu()[j]), m.phi()};
          return m.sigma().sigma(i, j) * m.gamma(i, j) * matern_corr((l1 - l2).norm(), cross);
        } else if constexpr (std::is_same_v<T, DiscretizedConvolutionModel>) {
          return m.sigma().sigma(i, j) * m.basis(i, l1).dot(m.basis(j, l2));
        } else if constexpr (std::is_same_v<T, InsideOutModel>) {
          const IoxWeights wi = iox_weights(m, i, l1);
          const IoxWeights wj = iox_weights(m, j, l2);
          const Vector a = m.chol_reference(i).transpose() * wi.h;  // L_i^T h_i
          const Vector b = m.chol_reference(j).transpose() * wj.h;
          double f = a.dot(b);
          if ((l1 - l2).norm() == 0.0) f += std::sqrt(wi.r) * std::sqrt(wj.r);
          return m.sigma().sigma(i, j) * f;
        } else {  // LmcModel
          double v = 0.0;
          const double h = (l1 - l2).norm();
          for (int r = 0; r < num_components(model); ++r)
            v += m.loading()(i, r) * m.loading()(j, r) * matern_corr(h, m.corr()[r]);
          return v;
        }
      },
      model);
}

Matrix build_joint_cov(const CrossCovModel& model, const LocationSet& locs, int size_cap) {
  const int q = num_components(model);
  const int n = locs.size();
  if (static_cast<long>(q) * n > size_cap)
    throw std::length_error("build_joint_cov: nq = " + std::to_string(long(q) * n) +
                            " exceeds the size cap " + std::to_string(size_cap));
  Matrix C(q * n, q * n);

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SeparableModel>) {
          MemoIsotropic rho([&](double d) { return matern_corr(d, m.corr); });
          for (int i = 0; i < q; ++i)
            for (int j = i; j < q; ++j) fill_isotropic_block(C, locs, i, j, rho, m.sigma.sigma(i, j));
        } else if constexpr (std::is_same_v<T, ParsimoniousMaternModel>) {
          for (int i = 0; i < q; ++i)
            for (int j = i; j < q; ++j) {
              const MaternParams cross{0.5 * (m.nu()[i] + m.nu()[j]), m.phi()};
              MemoIsotropic ker([&](double d) { return matern_corr(d, cross); });
              fill_isotropic_block(C, locs, i, j, ker, m.sigma().sigma(i, j) * m.gamma(i, j));
            }
        } else if constexpr (std::is_same_v<T, DiscretizedConvolutionModel>) {
          std::vector<Matrix> G(q);
          for (int j = 0; j < q; ++j) {
            G[j].resize(n, m.knots().size());
            for (int a = 0; a < n; ++a) G[j].row(a) = m.basis(j, locs.point(a)).transpose();
          }
          for (int i = 0; i < q; ++i)
            for (int j = i; j < q; ++j) {
              C.block(i * n, j * n, n, n) = m.sigma().sigma(i, j) * (G[i] * G[j].transpose());
              if (i != j)
                C.block(j * n, i * n, n, n) = C.block(i * n, j * n, n, n).transpose();
            }
        } else if constexpr (std::is_same_v<T, InsideOutModel>) {
          std::vector<Matrix> W(q);
          std::vector<Vector> res(q);
          for (int j = 0; j < q; ++j) {
            const Matrix cross = m.corr_reference_to(j, locs);  // n_ref x n
            W[j] = m.chol_reference(j)
                       .template triangularView<Eigen::Lower>()
                       .solve(cross)
                       .transpose();  // n x n_ref
            res[j].resize(n);
            for (int a = 0; a < n; ++a)
              res[j](a) = std::sqrt(std::max(0.0, 1.0 - W[j].row(a).squaredNorm()));
          }
          // coordinate-identical pairs carry the residual cross term
          std::vector<std::pair<int, int>> same;
          for (int a = 0; a < n; ++a) same.emplace_back(a, a);
          for (int a : locs.duplicate_points())
            for (int b = 0; b < a; ++b)
              if ((locs.point(a) - locs.point(b)).norm() == 0.0) {
                same.emplace_back(a, b);
                same.emplace_back(b, a);
              }
          for (int i = 0; i < q; ++i)
            for (int j = i; j < q; ++j) {
              Matrix block = W[i] * W[j].transpose();
              for (const auto& [a, b] : same) block(a, b) += res[i](a) * res[j](b);
              C.block(i * n, j * n, n, n) = m.sigma().sigma(i, j) * block;
              if (i != j)
                C.block(j * n, i * n, n, n) = C.block(i * n, j * n, n, n).transpose();
            }
        } else {  // LmcModel
          C.setZero();
          for (int r = 0; r < q; ++r) {
            MemoIsotropic rho([&](double d) { return matern_corr(d, m.corr()[r]); });
            Matrix R(n, n);
            for (int a = 0; a < n; ++a)
              for (int b = a; b < n; ++b) R(a, b) = R(b, a) = rho(locs.distance(a, b));
            for (int i = 0; i < q; ++i)
              for (int j = 0; j < q; ++j) {
                const double w = m.loading()(i, r) * m.loading()(j, r);
                if (w != 0.0) C.block(i * n, j * n, n, n) += w * R;
              }
          }
        }
      },
      model);
  return C;
}

IoxWeights iox_weights(const InsideOutModel& model, int j, Point l) {
  if (j < 0 || j >= model.sigma().order())
    throw std::out_of_range("iox_weights: component index out of range");
  const LocationSet& S = model.reference();
  // at a reference point the weights are exact: h = e_k, r = 0
  for (int k = 0; k < S.size(); ++k)
    if ((S.point(k) - l).norm() == 0.0) {
      IoxWeights w;
      w.h = Vector::Zero(S.size());
      w.h(k) = 1.0;
      w.r = 0.0;
      return w;
    }
  Matrix pt(1, l.size());
  pt.row(0) = l;
  const Matrix cross = model.corr_reference_to(j, LocationSet(pt));  // n x 1
  const Matrix& L = model.chol_reference(j);
  const Vector u = L.triangularView<Eigen::Lower>().solve(cross.col(0));
  IoxWeights w;
  w.h = L.transpose().triangularView<Eigen::Upper>().solve(u);
  w.r = std::max(0.0, 1.0 - u.squaredNorm());
  return w;
}

Matrix colocated_covariance(const CrossCovModel& model) {
  return std::visit(
      [&](const auto& m) -> Matrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, InsideOutModel>)
          return colocated_covariance(model, m.reference().point(0));
        else if constexpr (std::is_same_v<T, DiscretizedConvolutionModel>)
          return colocated_covariance(model, m.knots().point(0));
        else {
          const int q = num_components(model);
          Matrix out(q, q);
          Eigen::RowVectorXd origin = Eigen::RowVectorXd::Zero(2);
          for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) out(i, j) = cross_cov_entry(model, i, j, origin, origin);
          return out;
        }
      },
      model);
}

Matrix colocated_covariance(const CrossCovModel& model, Point l) {
  const int q = num_components(model);
  Matrix out(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) out(i, j) = cross_cov_entry(model, i, j, l, l);
  return out;
}

}  // namespace gpnet
