#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "shapestat/frechet.hpp"
#include "shapestat/shape_core.hpp"

namespace shapestat::intrinsic {

// Sectional curvature of the shape space lies in [1, 4] under the metric
// whose distance is arccos|u* v|.
inline constexpr double kCurvatureBound = 4.0;
// pi / (2 sqrt(C)): radius of the support ball that guarantees a unique
// local minimum of the Frechet function.
inline constexpr double kSupportRadius = std::numbers::pi / 4.0;
inline constexpr double kCutTolerance = 1e-9;

/// Horizontal lift of a tangent vector: a centered complex k-vector w with
/// base* w = 0.
class TangentVector {
 public:
  /// Checks centering and horizontality to 1e-12 (scaled by max(1, |w|)).
  TangentVector(Preshape base, ComplexVector w);

  /// Removes the mean and the base-parallel component from w.
  static TangentVector project(Preshape base, const ComplexVector& w);

  const Preshape& base() const noexcept { return base_; }
  const ComplexVector& w() const noexcept { return w_; }
  double norm() const { return w_.norm(); }

 private:
  struct Unchecked {};
  TangentVector(Preshape base, ComplexVector w, Unchecked)
      : base_(std::move(base)), w_(std::move(w)) {}

  Preshape base_;
  ComplexVector w_;
};

/// Shape of cos|w| base + sin|w| w/|w|. Throws OutOfInjectivityRadius for
/// |w| >= pi/2.
Shape exp_map(const TangentVector& v);

/// Inverse of exp_map at base.rep(). |result| equals geodesic_distance.
/// Throws CutLocus when |u* v| <= 1e-9.
TangentVector log_map(const Shape& base, const Shape& target);

/// Normal-coordinate chart: an orthonormal real basis of the horizontal
/// space at `base`. The first k-2 frame vectors are complex-orthonormal
/// directions f_a; the last k-2 are i f_a.
class Chart {
 public:
  explicit Chart(Shape base, std::vector<ComplexVector> frame);

  const Shape& base() const noexcept { return base_; }
  const std::vector<ComplexVector>& frame() const noexcept { return frame_; }
  int dim() const noexcept { return static_cast<int>(frame_.size()); }

  /// Real coordinates Re<frame_r, w> of a tangent vector at base().rep().
  RealVector coordinates(const TangentVector& v) const;
  TangentVector tangent(const RealVector& x) const;

  /// exp_map(tangent(x))
  Shape point(const RealVector& x) const;
  /// coordinates(log_map(base(), s))
  RealVector coordinates_of(const Shape& s) const;

 private:
  Shape base_;
  std::vector<ComplexVector> frame_;
};

/// Pivoted Gram-Schmidt over the centered standard directions, with the
/// base direction removed. Deterministic given the base representative.
Chart build_chart(const Shape& base);

struct KarcherOptions {
  double step = 1.0;
  int max_iter = 100;
  double tol = 1e-9;
};

struct KarcherResult {
  Shape mean;
  int iterations = 0;
  double gradient_norm = 0.0;
  // max_j d(init, X_j) < pi/4. The iteration still runs when this fails.
  bool support_condition_held = true;
  double init_radius = 0.0;
};

/// Riemannian gradient descent mu <- exp_mu(step * mean_j log_mu(X_j)) until
/// |mean_j log_mu(X_j)| < tol. A step that would raise the Frechet function
/// is halved until it does not. Throws EmptySample, NoConvergence.
KarcherResult karcher_mean(std::span<const Shape> sample, const Shape& init,
                           const KarcherOptions& options = {});

/// Same, initialized at the extrinsic mean.
KarcherResult karcher_mean(std::span<const Shape> sample,
                           const KarcherOptions& options = {});

/// (1/n) sum log_mu(X_j), the sample version of the stationarity condition.
TangentVector mean_log(std::span<const Shape> sample, const Shape& mu);

struct CltParams {
  RealMatrix lambda;  // Hessian of the sample Frechet function
  RealMatrix sigma;   // covariance of per-observation gradients
};

inline constexpr double kDefaultFdStep = 1e-4;

/// Gradient of y -> d_g^2(x, chart.point(y)) at coordinates y by central
/// differences.
RealVector squared_distance_gradient_fd(const Chart& chart, const RealVector& y,
                                        const Shape& x, double fd_step);

/// Hessian of y -> F_n(chart.point(y)) at y by central differences,
/// symmetric by construction.
RealMatrix frechet_hessian_fd(std::span<const Shape> sample, const Chart& chart,
                              const RealVector& y, double fd_step);

/// Estimates (Lambda, Sigma) at the chart coordinates of `mean`. When the
/// chart is centered at the mean, the per-observation gradients are the
/// closed form -2 * coordinates(log_mean(X_j)); elsewhere they come from
/// central differences. Lambda is always a central-difference Hessian.
/// Throws SingularLambda when cond(Lambda) > 1e10.
CltParams estimate_clt_params(std::span<const Shape> sample, const Shape& mean,
                              const Chart& chart,
                              double fd_step = kDefaultFdStep);

struct IntrinsicOptions {
  KarcherOptions karcher;
  double fd_step = kDefaultFdStep;
};

struct IntrinsicMeanTestResult {
  TestReport report;
  KarcherResult pooled;
  KarcherResult mean_a;
  KarcherResult mean_b;
  RealVector coords_a;
  RealVector coords_b;
};

/// Two-sample test for equal intrinsic means in the normal chart at the
/// pooled Karcher mean:
/// (a - b)' (C_a / n + C_b / m)^{-1} (a - b), C = Lambda^{-1} Sigma Lambda^{-1},
/// referred to chi-squared with 2k - 4 degrees of freedom.
IntrinsicMeanTestResult intrinsic_mean_test_detailed(
    std::span<const Shape> a, std::span<const Shape> b, double alpha,
    const IntrinsicOptions& options = {});

TestReport intrinsic_mean_test(std::span<const Shape> a,
                               std::span<const Shape> b, double alpha,
                               const IntrinsicOptions& options = {});

/// Ellipsoid {mu : (center - x(mu))' shape_matrix (center - x(mu)) <= threshold}
/// in the normal chart at the sample Karcher mean, with
/// shape_matrix = n (Lambda^{-1} Sigma Lambda^{-1})^{-1}.
struct ConfidenceRegion {
  Chart chart;
  RealVector center;
  RealMatrix shape_matrix;
  double threshold = 0.0;
  int n = 0;
  double alpha = 0.05;

  double statistic(const Shape& candidate) const;
  bool contains(const Shape& candidate) const;
  /// Log Lebesgue volume of the ellipsoid in chart coordinates.
  double log_volume() const;
};

ConfidenceRegion intrinsic_confidence_region(std::span<const Shape> sample,
                                             double alpha,
                                             const IntrinsicOptions& options = {});

/// Variation summary about the sample's own Karcher mean (geodesic metric).
VariationSummary intrinsic_variation_summary(std::span<const Shape> sample,
                                             const KarcherOptions& options = {});

TestReport intrinsic_variation_test(std::span<const Shape> a,
                                    std::span<const Shape> b, double alpha,
                                    const KarcherOptions& options = {});

}  // namespace shapestat::intrinsic
