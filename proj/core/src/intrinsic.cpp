#include "shapestat/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "linalg.hpp"
#include "shapestat/error.hpp"
#include "shapestat/extrinsic.hpp"
#include "shapestat/statdist.hpp"

namespace shapestat::intrinsic {

namespace {

constexpr double kTangentTol = 1e-12;
constexpr double kLambdaMaxCondition = 1e10;
constexpr double kCovarianceMaxCondition = 1e12;
constexpr int kMaxStepHalvings = 40;
// Relative slack when comparing Frechet values across one descent step;
// near convergence the decrease is at the level of rounding.
constexpr double kDescentSlack = 1e-12;

ComplexVector horizontal_part(const ComplexVector& u, const ComplexVector& w) {
  ComplexVector h = w.array() - w.mean();
  h -= u * u.dot(h);
  return h;
}

void check_sample(std::span<const Shape> sample) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "empty sample");
}

RealVector unit(int dim, int r) {
  RealVector e = RealVector::Zero(dim);
  e(r) = 1.0;
  return e;
}

}  // namespace

TangentVector::TangentVector(Preshape base, ComplexVector w)
    : base_(std::move(base)), w_(std::move(w)) {
  if (w_.size() != base_.vector().size()) {
    throw Error(ErrorCode::InvalidArgument, "tangent vector length differs from base");
  }
  const double scale = std::max(1.0, w_.norm());
  if (std::abs(w_.sum()) > kTangentTol * scale) {
    throw Error(ErrorCode::InvalidArgument, "tangent vector is not centered");
  }
  if (std::abs(base_.vector().dot(w_)) > kTangentTol * scale) {
    throw Error(ErrorCode::InvalidArgument, "tangent vector is not horizontal");
  }
}

TangentVector TangentVector::project(Preshape base, const ComplexVector& w) {
  ComplexVector h = horizontal_part(base.vector(), w);
  return TangentVector(std::move(base), std::move(h), Unchecked{});
}

Shape exp_map(const TangentVector& v) {
  const double t = v.norm();
  if (!(t < std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::OutOfInjectivityRadius,
                "tangent vector norm " + std::to_string(t) +
                    " is not below the injectivity radius pi/2");
  }
  if (t == 0.0) return Shape(v.base());
  const ComplexVector p = std::cos(t) * v.base().vector() + (std::sin(t) / t) * v.w();
  return Shape(Preshape::project(p));
}

TangentVector log_map(const Shape& base, const Shape& target) {
  const ComplexVector& u = base.rep().vector();
  const detail::OrbitGeometry g = detail::orbit_geometry(u, target.rep().vector());
  if (g.cos_angle <= kCutTolerance) {
    throw Error(ErrorCode::CutLocus, "target lies on the cut locus of the base shape");
  }
  if (g.sin_angle == 0.0) {
    return TangentVector(base.rep(), ComplexVector::Zero(u.size()));
  }
  return TangentVector(base.rep(), (g.angle / g.sin_angle) * g.residual);
}

Chart::Chart(Shape base, std::vector<ComplexVector> frame)
    : base_(std::move(base)), frame_(std::move(frame)) {
  if (static_cast<int>(frame_.size()) != shape_space_dim(base_.k())) {
    throw Error(ErrorCode::InvalidArgument, "chart frame has the wrong dimension");
  }
}

RealVector Chart::coordinates(const TangentVector& v) const {
  RealVector x(dim());
  for (int r = 0; r < dim(); ++r) x(r) = frame_[r].dot(v.w()).real();
  return x;
}

TangentVector Chart::tangent(const RealVector& x) const {
  ComplexVector w = ComplexVector::Zero(base_.k());
  for (int r = 0; r < dim(); ++r) w += x(r) * frame_[r];
  return TangentVector::project(base_.rep(), w);
}

Shape Chart::point(const RealVector& x) const { return exp_map(tangent(x)); }

RealVector Chart::coordinates_of(const Shape& s) const {
  return coordinates(log_map(base_, s));
}

Chart build_chart(const Shape& base) {
  const int k = base.k();
  const ComplexVector& u = base.rep().vector();
  std::vector<ComplexVector> residuals;
  residuals.reserve(k);
  for (int j = 0; j < k; ++j) {
    ComplexVector e = ComplexVector::Constant(k, Complex(-1.0 / k, 0.0));
    e(j) += 1.0;
    residuals.push_back(horizontal_part(u, e));
  }

  std::vector<ComplexVector> directions;
  directions.reserve(k - 2);
  std::vector<bool> used(k, false);
  for (int a = 0; a < k - 2; ++a) {
    int pivot = -1;
    double best = -1.0;
    for (int j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double norm = residuals[j].norm();
      if (norm > best) {
        best = norm;
        pivot = j;
      }
    }
    used[pivot] = true;
    ComplexVector f = residuals[pivot];
    // Second orthogonalization pass.
    f = horizontal_part(u, f);
    for (const ComplexVector& g : directions) f -= g * g.dot(f);
    f.normalize();
    for (int j = 0; j < k; ++j) {
      if (!used[j]) residuals[j] -= f * f.dot(residuals[j]);
    }
    directions.push_back(std::move(f));
  }

  std::vector<ComplexVector> frame;
  frame.reserve(2 * (k - 2));
  for (const ComplexVector& f : directions) frame.push_back(f);
  for (const ComplexVector& f : directions) frame.push_back(Complex(0.0, 1.0) * f);
  return Chart(base, std::move(frame));
}

TangentVector mean_log(std::span<const Shape> sample, const Shape& mu) {
  check_sample(sample);
  ComplexVector sum = ComplexVector::Zero(mu.k());
  for (const Shape& x : sample) sum += log_map(mu, x).w();
  return TangentVector::project(mu.rep(), sum / static_cast<double>(sample.size()));
}

KarcherResult karcher_mean(std::span<const Shape> sample, const Shape& init,
                           const KarcherOptions& options) {
  check_sample(sample);
  if (!(options.step > 0.0) || !(options.tol > 0.0) || options.max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "Karcher step and tol must be positive and max_iter >= 1");
  }
  KarcherResult result{init};
  for (const Shape& x : sample) {
    result.init_radius = std::max(result.init_radius, geodesic_distance(init, x));
  }
  result.support_condition_held = result.init_radius < kSupportRadius;

  Shape mu = init;
  double value = frechet_function(mu, sample, MetricKind::Intrinsic);
  for (int it = 1; it <= options.max_iter; ++it) {
    const TangentVector grad = mean_log(sample, mu);
    const double grad_norm = grad.norm();
    if (grad_norm < options.tol) {
      result.mean = std::move(mu);
      result.iterations = it;
      result.gradient_norm = grad_norm;
      return result;
    }
    double step = std::min(options.step, 0.99 * (std::numbers::pi / 2.0) / grad_norm);
    Shape candidate = mu;
    double candidate_value = value;
    for (int h = 0; h <= kMaxStepHalvings; ++h) {
      candidate = exp_map(TangentVector::project(mu.rep(), step * grad.w()));
      candidate_value = frechet_function(candidate, sample, MetricKind::Intrinsic);
      if (candidate_value <= value * (1.0 + kDescentSlack)) break;
      step *= 0.5;
    }
    mu = std::move(candidate);
    value = candidate_value;
  }
  throw Error(ErrorCode::NoConvergence,
              "Karcher iteration did not reach tolerance in " +
                  std::to_string(options.max_iter) + " iterations");
}

KarcherResult karcher_mean(std::span<const Shape> sample,
                           const KarcherOptions& options) {
  check_sample(sample);
  return karcher_mean(sample, extrinsic::extrinsic_mean(sample).mean, options);
}

RealVector squared_distance_gradient_fd(const Chart& chart, const RealVector& y,
                                        const Shape& x, double fd_step) {
  const int d = chart.dim();
  RealVector g(d);
  for (int r = 0; r < d; ++r) {
    const RealVector e = fd_step * unit(d, r);
    const double plus = geodesic_distance(x, chart.point(y + e));
    const double minus = geodesic_distance(x, chart.point(y - e));
    g(r) = (plus * plus - minus * minus) / (2.0 * fd_step);
  }
  return g;
}

RealMatrix frechet_hessian_fd(std::span<const Shape> sample, const Chart& chart,
                              const RealVector& y, double fd_step) {
  check_sample(sample);
  if (!(fd_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  }
  const int d = chart.dim();
  auto f = [&](const RealVector& z) {
    return frechet_function(chart.point(z), sample, MetricKind::Intrinsic);
  };
  const double h = fd_step;
  const double f0 = f(y);
  RealMatrix hess(d, d);
  for (int r = 0; r < d; ++r) {
    const RealVector er = h * unit(d, r);
    hess(r, r) = (f(y + er) - 2.0 * f0 + f(y - er)) / (h * h);
    for (int s = r + 1; s < d; ++s) {
      const RealVector es = h * unit(d, s);
      const double v = (f(y + er + es) - f(y + er - es) - f(y - er + es) +
                        f(y - er - es)) /
                       (4.0 * h * h);
      hess(r, s) = v;
      hess(s, r) = v;
    }
  }
  return hess;
}

CltParams estimate_clt_params(std::span<const Shape> sample, const Shape& mean,
                              const Chart& chart, double fd_step) {
  check_sample(sample);
  const int d = chart.dim();
  const RealVector y = chart.coordinates_of(mean);
  const bool centered = y.norm() < 1e-12;

  const auto n = static_cast<Eigen::Index>(sample.size());
  RealMatrix grads(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Shape& x = sample[static_cast<std::size_t>(j)];
    grads.col(j) = centered ? RealVector(-2.0 * chart.coordinates_of(x))
                            : squared_distance_gradient_fd(chart, y, x, fd_step);
  }
  const RealVector g_bar = grads.rowwise().mean();

  CltParams params;
  params.sigma = grads * grads.transpose() / static_cast<double>(n) -
                 g_bar * g_bar.transpose();
  params.lambda = frechet_hessian_fd(sample, chart, y, fd_step);

  const double cond = detail::spd_condition_number(params.lambda);
  if (!(cond <= kLambdaMaxCondition)) {
    throw Error(ErrorCode::SingularLambda,
                "Hessian of the Frechet function is singular or indefinite "
                "(condition number " +
                    std::to_string(cond) + ")");
  }
  return params;
}

namespace {

// Lambda^{-1} Sigma Lambda^{-1}
RealMatrix sandwich(const CltParams& p) {
  const Eigen::LDLT<RealMatrix> ldlt(p.lambda);
  const RealMatrix left = ldlt.solve(p.sigma);
  const RealMatrix c = ldlt.solve(left.transpose()).transpose();
  return 0.5 * (c + c.transpose());
}

}  // namespace

IntrinsicMeanTestResult intrinsic_mean_test_detailed(std::span<const Shape> a,
                                                     std::span<const Shape> b,
                                                     double alpha,
                                                     const IntrinsicOptions& options) {
  validate_alpha(alpha);
  check_sample(a);
  check_sample(b);
  const int k = a.front().k();
  std::vector<Shape> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (const Shape& s : pooled) {
    if (s.k() != k) {
      throw Error(ErrorCode::ShapeMismatch, "samples have different landmark counts");
    }
  }

  KarcherResult pooled_mean = karcher_mean(pooled, options.karcher);
  KarcherResult mean_a = karcher_mean(a, options.karcher);
  KarcherResult mean_b = karcher_mean(b, options.karcher);
  const Chart chart = build_chart(pooled_mean.mean);

  RealVector xa = chart.coordinates_of(mean_a.mean);
  RealVector xb = chart.coordinates_of(mean_b.mean);
  const CltParams pa = estimate_clt_params(a, mean_a.mean, chart, options.fd_step);
  const CltParams pb = estimate_clt_params(b, mean_b.mean, chart, options.fd_step);

  const auto n = static_cast<double>(a.size());
  const auto m = static_cast<double>(b.size());
  const RealMatrix cov = sandwich(pa) / n + sandwich(pb) / m;
  const double stat = detail::spd_quadratic_form(
      cov, xa - xb, kCovarianceMaxCondition, ErrorCode::SingularCovariance,
      "intrinsic mean test covariance");

  return {chi_squared_report(stat, shape_space_dim(k), alpha), std::move(pooled_mean),
          std::move(mean_a), std::move(mean_b), std::move(xa), std::move(xb)};
}

TestReport intrinsic_mean_test(std::span<const Shape> a, std::span<const Shape> b,
                               double alpha, const IntrinsicOptions& options) {
  return intrinsic_mean_test_detailed(a, b, alpha, options).report;
}

double ConfidenceRegion::statistic(const Shape& candidate) const {
  const RealVector diff = center - chart.coordinates_of(candidate);
  return diff.dot(shape_matrix * diff);
}

bool ConfidenceRegion::contains(const Shape& candidate) const {
  return statistic(candidate) <= threshold;
}

double ConfidenceRegion::log_volume() const {
  const double d = static_cast<double>(center.size());
  const Eigen::LLT<RealMatrix> llt(shape_matrix);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0) +
         0.5 * d * std::log(threshold) - 0.5 * log_det;
}

ConfidenceRegion intrinsic_confidence_region(std::span<const Shape> sample,
                                             double alpha,
                                             const IntrinsicOptions& options) {
  validate_alpha(alpha);
  const KarcherResult km = karcher_mean(sample, options.karcher);
  Chart chart = build_chart(km.mean);
  const CltParams params = estimate_clt_params(sample, km.mean, chart, options.fd_step);

  const RealMatrix sigma = 0.5 * (params.sigma + params.sigma.transpose());
  if (!(detail::spd_condition_number(sigma) < kCovarianceMaxCondition)) {
    throw Error(ErrorCode::SingularCovariance,
                "gradient covariance is singular; the confidence region is degenerate");
  }
  const Eigen::LLT<RealMatrix> llt(sigma);
  const auto n = static_cast<int>(sample.size());
  RealMatrix shape_matrix = static_cast<double>(n) * params.lambda * llt.solve(params.lambda);
  shape_matrix = 0.5 * (shape_matrix + shape_matrix.transpose()).eval();

  RealVector center = chart.coordinates_of(km.mean);
  const int d = chart.dim();
  return ConfidenceRegion{std::move(chart), std::move(center), std::move(shape_matrix),
                          statdist::chi2_quantile(1.0 - alpha, d), n, alpha};
}

VariationSummary intrinsic_variation_summary(std::span<const Shape> sample,
                                             const KarcherOptions& options) {
  const KarcherResult km = karcher_mean(sample, options);
  return variation_summary(sample, km.mean, MetricKind::Intrinsic);
}

TestReport intrinsic_variation_test(std::span<const Shape> a, std::span<const Shape> b,
                                    double alpha, const KarcherOptions& options) {
  validate_alpha(alpha);
  return variation_test(intrinsic_variation_summary(a, options),
                        intrinsic_variation_summary(b, options), alpha);
}

}  // namespace shapestat::intrinsic
