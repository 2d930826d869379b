#include "shapestat/extrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"
#include "shapestat/error.hpp"

namespace shapestat::extrinsic {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kGapTol = 1e-10;
constexpr double kMaxCondition = 1e12;

void fix_phases(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg_max = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double mag = std::abs(vectors(r, c));
      if (mag > best) {
        best = mag;
        arg_max = r;
      }
    }
    if (best > 0.0) {
      vectors.col(c) *= std::conj(vectors(arg_max, c)) / best;
      vectors(arg_max, c) = Complex(best, 0.0);
    }
  }
}

EigenSystem decompose(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure,
                "Hermitian eigensolver did not converge");
  }
  EigenSystem eig;
  eig.eigenvalues = es.eigenvalues();
  eig.eigenvectors = es.eigenvectors();
  fix_phases(eig.eigenvectors);
  const Eigen::Index k = eig.eigenvalues.size();
  eig.spectral_gap = k > 1 ? eig.eigenvalues(k - 1) - eig.eigenvalues(k - 2) : 0.0;
  return eig;
}

// Averaged embeddings annihilate the all-ones vector. Shifting that
// direction to -1 before decomposing pins it to column 0 even when the
// matrix has further zero eigenvalues (n < k - 1), so columns 1..k-2 always
// span the centered complement of the top eigenvector.
EigenSystem centered_eigensystem(const HermitianMatrix& a) {
  const int k = a.k();
  const ComplexMatrix ones = ComplexMatrix::Constant(k, k, Complex(1.0 / k, 0.0));
  EigenSystem eig = decompose(a.matrix() - ones);
  eig.eigenvalues(0) += 1.0;
  eig.spectral_gap = eig.eigenvalues(k - 1) - eig.eigenvalues(k - 2);
  return eig;
}

void require_focal_free(const EigenSystem& eig, const char* what) {
  if (!has_simple_top_eigenvalue(eig)) {
    throw Error(ErrorCode::FocalMean,
                std::string(what) +
                    ": top eigenvalue of the averaged embedding is not simple "
                    "(spectral gap " +
                    std::to_string(eig.spectral_gap) + ")");
  }
}

// 2k-4 by n matrix of tangent coordinates, one column per observation.
RealMatrix coordinate_matrix(std::span<const Shape> sample, const EigenSystem& eig) {
  const int k = eig.k();
  RealMatrix t(shape_space_dim(k), static_cast<Eigen::Index>(sample.size()));
  for (std::size_t j = 0; j < sample.size(); ++j) {
    t.col(static_cast<Eigen::Index>(j)) = tangent_coords(sample[j], eig).t;
  }
  return t;
}

void check_same_k(std::span<const Shape> a, std::span<const Shape> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "empty sample");
  const int k = a.front().k();
  auto differs = [k](const Shape& s) { return s.k() != k; };
  if (std::any_of(a.begin(), a.end(), differs) ||
      std::any_of(b.begin(), b.end(), differs)) {
    throw Error(ErrorCode::ShapeMismatch, "samples have different landmark counts");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(ComplexMatrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) {
    throw Error(ErrorCode::InvalidArgument, "Hermitian matrix must be square");
  }
  if ((a_ - a_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw Error(ErrorCode::InvalidArgument, "matrix is not self-adjoint");
  }
}

HermitianMatrix embed(const Shape& s) {
  const ComplexVector& u = s.rep().vector();
  return HermitianMatrix(u * u.adjoint());
}

HermitianMatrix average_embedding(std::span<const Shape> sample) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "empty sample");
  const int k = sample.front().k();
  ComplexMatrix sum = ComplexMatrix::Zero(k, k);
  for (const Shape& s : sample) {
    if (s.k() != k) {
      throw Error(ErrorCode::ShapeMismatch, "sample has mixed landmark counts");
    }
    const ComplexVector& u = s.rep().vector();
    sum.noalias() += u * u.adjoint();
  }
  sum /= static_cast<double>(sample.size());
  // Round-off leaves the diagonal with tiny imaginary parts.
  sum = 0.5 * (sum + sum.adjoint()).eval();
  return HermitianMatrix(std::move(sum));
}

EigenSystem hermitian_eigensystem(const HermitianMatrix& a) {
  return decompose(a.matrix());
}

bool has_simple_top_eigenvalue(const EigenSystem& eig) {
  return eig.spectral_gap > kGapTol * std::max(1.0, eig.top_eigenvalue());
}

ExtrinsicMean extrinsic_mean(std::span<const Shape> sample) {
  EigenSystem eig = centered_eigensystem(average_embedding(sample));
  require_focal_free(eig, "extrinsic mean");
  Shape mean(Preshape::project(eig.top_eigenvector()));
  return {std::move(mean), std::move(eig)};
}

double extrinsic_variation(const EigenSystem& eig) {
  return std::max(0.0, 2.0 * (1.0 - eig.top_eigenvalue()));
}

ExtrinsicCoords tangent_coords(const HermitianMatrix& x, const EigenSystem& eig) {
  const int k = eig.k();
  const ComplexMatrix& u = eig.eigenvectors;
  const ComplexVector x_top = x.matrix() * u.col(k - 1);
  ExtrinsicCoords c{RealVector(shape_space_dim(k))};
  for (int a = 1; a <= k - 2; ++a) {
    const Complex v = u.col(a).dot(x_top);
    c.t(a - 1) = v.real();
    c.t(a - 1 + k - 2) = v.imag();
  }
  return c;
}

ExtrinsicCoords tangent_coords(const Shape& s, const EigenSystem& eig) {
  const int k = eig.k();
  const ComplexMatrix& u = eig.eigenvectors;
  // U* (w w*) U_k = (U* w)(w* U_k)
  const ComplexVector proj = u.adjoint() * s.rep().vector();
  const Complex top = std::conj(proj(k - 1));
  ExtrinsicCoords c{RealVector(shape_space_dim(k))};
  for (int a = 1; a <= k - 2; ++a) {
    const Complex v = proj(a) * top;
    c.t(a - 1) = v.real();
    c.t(a - 1 + k - 2) = v.imag();
  }
  return c;
}

TestReport extrinsic_mean_test(std::span<const Shape> a,
                               std::span<const Shape> b, double alpha) {
  validate_alpha(alpha);
  check_same_k(a, b);
  const int k = a.front().k();
  const auto n = static_cast<double>(a.size());
  const auto m = static_cast<double>(b.size());

  const ComplexMatrix pooled =
      (n * average_embedding(a).matrix() + m * average_embedding(b).matrix()) /
      (n + m);
  const EigenSystem eig = centered_eigensystem(HermitianMatrix(pooled));
  require_focal_free(eig, "pooled extrinsic mean");

  const RealMatrix t = coordinate_matrix(a, eig);
  const RealMatrix s = coordinate_matrix(b, eig);
  const RealVector t_bar = t.rowwise().mean();
  const RealVector s_bar = s.rowwise().mean();
  const RealMatrix sigma1 = t * t.transpose() / n - t_bar * t_bar.transpose();
  const RealMatrix sigma2 = s * s.transpose() / m - s_bar * s_bar.transpose();
  const RealVector diff = t_bar - s_bar;

  const double stat = detail::spd_quadratic_form(
      sigma1 / n + sigma2 / m, diff, kMaxCondition, ErrorCode::SingularCovariance,
      "extrinsic mean test covariance (samples smaller than 2k-4 = " +
          std::to_string(shape_space_dim(k)) +
          " observations give a rank-deficient covariance)");
  return chi_squared_report(stat, shape_space_dim(k), alpha);
}

VariationSummary extrinsic_variation_summary(std::span<const Shape> sample) {
  const ExtrinsicMean em = extrinsic_mean(sample);
  return variation_summary(sample, em.mean, MetricKind::Extrinsic);
}

TestReport extrinsic_variation_test(std::span<const Shape> a,
                                    std::span<const Shape> b, double alpha) {
  validate_alpha(alpha);
  check_same_k(a, b);
  return variation_test(extrinsic_variation_summary(a),
                        extrinsic_variation_summary(b), alpha);
}

}  // namespace shapestat::extrinsic
