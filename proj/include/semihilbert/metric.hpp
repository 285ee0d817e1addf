#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/spectral.hpp"
#include "semihilbert/tolerances.hpp"

namespace semihilbert {

/// A positive semidefinite operator A together with the spectral data every
/// A-indexed quantity needs: A^dagger, A^{1/2}, (A^{1/2})^dagger and the range
/// projector P. Immutable after construction; share it through MetricPtr.
///
/// Eigenvalues ascend, so the first nullity() eigenvectors span N(A) and the
/// remaining rank() span R(A). Eigenvalues at or below eps_rank * lambda_max are
/// stored as exactly zero.
class Metric {
 public:
  static std::shared_ptr<const Metric> create(const ComplexMatrix& a,
                                              double eps_rank = tol::kRank) {
    detail::require_square(a, "metric must be square");
    return from_spectrum(a, herm_eig(a), eps_rank);
  }

  /// Builds a metric from a known decomposition of `a` (used for diag(A, A)).
  static std::shared_ptr<const Metric> from_spectrum(const ComplexMatrix& a, HermitianEig eig,
                                                     double eps_rank = tol::kRank) {
    const double cut = detail::psd_rank_threshold(eig, eps_rank);
    std::size_t nullity = 0;
    for (auto& l : eig.values) {
      if (l <= cut) {
        l = 0.0;
        ++nullity;
      }
    }
    return std::shared_ptr<const Metric>(new Metric(a, std::move(eig), nullity, eps_rank));
  }

  std::size_t dim() const noexcept { return a_.rows(); }
  std::size_t rank() const noexcept { return dim() - nullity_; }
  std::size_t nullity() const noexcept { return nullity_; }
  double eps_rank() const noexcept { return eps_rank_; }

  const ComplexMatrix& matrix() const noexcept { return a_; }
  const HermitianEig& spectrum() const noexcept { return eig_; }
  const ComplexMatrix& pinv() const noexcept { return pinv_; }
  const ComplexMatrix& sqrt() const noexcept { return sqrt_; }
  const ComplexMatrix& sqrt_pinv() const noexcept { return sqrt_pinv_; }
  const ComplexMatrix& projector() const noexcept { return proj_; }

  /// Unit eigenvector spanning part of N(A) (k < nullity()) or R(A) (otherwise).
  Vector eigenvector(std::size_t k) const { return eig_.vectors.column(k); }

  /// rank x n matrix Lambda_r^{1/2} Q_r*; maps x to coordinates in which ||x||_A
  /// is the Euclidean norm. Only valid when rank() > 0.
  const ComplexMatrix& to_range() const { return left_; }

  /// n x rank matrix Q_r Lambda_r^{-1/2}; right inverse of to_range().
  const ComplexMatrix& from_range() const { return right_; }

  /// Reduced compression Lambda_r^{1/2} Q_r* T Q_r Lambda_r^{-1/2} (rank x rank).
  /// Unitarily similar to A^{1/2} T (A^{1/2})^dagger restricted to R(A).
  ComplexMatrix compress(const ComplexMatrix& t) const {
    if (t.rows() != dim() || t.cols() != dim()) {
      throw Error(ErrorKind::DimensionMismatch, "operator and metric dimensions differ");
    }
    if (rank() == 0) throw Error(ErrorKind::InvalidArgument, "zero metric has no range");
    return left_ * (t * right_);
  }

 private:
  Metric(const ComplexMatrix& a, HermitianEig eig, std::size_t nullity, double eps_rank)
      : a_(a),
        eig_(std::move(eig)),
        nullity_(nullity),
        eps_rank_(eps_rank),
        pinv_(spectral_function(eig_, [](double l) { return l > 0.0 ? 1.0 / l : 0.0; })),
        sqrt_(spectral_function(eig_, [](double l) { return std::sqrt(l); })),
        sqrt_pinv_(spectral_function(eig_, [](double l) { return l > 0.0 ? 1.0 / std::sqrt(l) : 0.0; })),
        proj_(spectral_function(eig_, [](double l) { return l > 0.0 ? 1.0 : 0.0; })) {
    const std::size_t n = a_.rows();
    const std::size_t r = n - nullity_;
    if (r > 0) {
      left_ = ComplexMatrix(r, n);
      right_ = ComplexMatrix(n, r);
      for (std::size_t k = 0; k < r; ++k) {
        const std::size_t col = nullity_ + k;
        const double s = std::sqrt(eig_.values[col]);
        for (std::size_t i = 0; i < n; ++i) {
          const cplx q = eig_.vectors(i, col);
          left_(k, i) = s * std::conj(q);
          right_(i, k) = q / s;
        }
      }
    }
  }

  ComplexMatrix a_;
  HermitianEig eig_;
  std::size_t nullity_;
  double eps_rank_;
  ComplexMatrix pinv_, sqrt_, sqrt_pinv_, proj_;
  ComplexMatrix left_, right_;
};

using MetricPtr = std::shared_ptr<const Metric>;

inline MetricPtr new_metric(const ComplexMatrix& a, double eps_rank = tol::kRank) {
  return Metric::create(a, eps_rank);
}

/// <x, y>_A = <A x, y>.
inline cplx a_inner(const Metric& m, std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != m.dim() || y.size() != m.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector and metric dimensions differ");
  }
  return inner(m.matrix() * x, y);
}

inline double a_norm_vec(const Metric& m, std::span<const cplx> x) {
  return std::sqrt(std::max(0.0, a_inner(m, x, x).real()));
}

}  // namespace semihilbert
