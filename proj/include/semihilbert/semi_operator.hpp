#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include "semihilbert/angle_search.hpp"
#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/metric.hpp"
#include "semihilbert/random.hpp"
#include "semihilbert/spectral.hpp"
#include "semihilbert/tolerances.hpp"

namespace semihilbert {

/// A nonnegative real or the symbol "unbounded". Deliberately has no
/// arithmetic: callers must unwrap with value(), which throws on Unbounded.
class ExtendedRadius {
 public:
  static ExtendedRadius finite(double v) { return ExtendedRadius(v); }
  static ExtendedRadius unbounded() { return ExtendedRadius(); }

  bool is_unbounded() const noexcept { return !value_.has_value(); }
  bool is_finite() const noexcept { return value_.has_value(); }

  double value() const {
    if (!value_) throw Error(ErrorKind::InvalidArgument, "radius is unbounded");
    return *value_;
  }

  std::string to_string(int precision = 8) const {
    if (!value_) return "unbounded";
    std::ostringstream os;
    os.precision(precision);
    os << *value_;
    return os.str();
  }

  friend bool operator==(const ExtendedRadius&, const ExtendedRadius&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ExtendedRadius& r) {
    return r.value_ ? (os << *r.value_) : (os << "unbounded");
  }

 private:
  ExtendedRadius() = default;
  explicit ExtendedRadius(double v) : value_(v) {}
  std::optional<double> value_;
};

/// An operator T bound to a metric A. Membership in B_{A^{1/2}} and B_A is
/// decided once at construction; T^{#A} and the compression are computed
/// eagerly when defined, so the object is immutable and safe to share.
///
/// In finite dimensions both sets equal {T : T(N(A)) in N(A)}. The two flags
/// come from different tests (null-space image vs. range of T*A) and must
/// agree; disagreement throws MembershipMismatch.
class SemiOperator {
 public:
  SemiOperator(MetricPtr metric, ComplexMatrix t) : metric_(std::move(metric)), t_(std::move(t)) {
    const Metric& m = *metric_;
    const std::size_t n = m.dim();
    if (t_.rows() != n || t_.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "operator and metric dimensions differ");
    }
    const std::size_t nullity = m.nullity();
    const ComplexMatrix& q = m.spectrum().vectors;

    // ||P T v|| for each null vector v; P T v has coordinates Q_r* T v.
    half_residual_ = 0.0;
    for (std::size_t k = 0; k < nullity; ++k) {
      const Vector tv = t_ * m.eigenvector(k);
      double acc = 0.0;
      for (std::size_t j = nullity; j < n; ++j) {
        cplx c{};
        for (std::size_t i = 0; i < n; ++i) c += std::conj(q(i, j)) * tv[i];
        acc += std::norm(c);
      }
      half_residual_ = std::max(half_residual_, std::sqrt(acc));
    }
    in_half_ = half_residual_ <= tol::kMembership * (1.0 + frobenius_norm(t_));

    // ||(I - P) T* A e_j|| for each column; (I - P) has coordinates Q_N*.
    const ComplexMatrix tsa = t_.adjoint() * m.matrix();
    full_residual_ = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
      double acc = 0.0;
      for (std::size_t k = 0; k < nullity; ++k) {
        cplx c{};
        for (std::size_t i = 0; i < n; ++i) c += std::conj(q(i, k)) * tsa(i, col);
        acc += std::norm(c);
      }
      full_residual_ = std::max(full_residual_, std::sqrt(acc));
    }
    in_full_ = full_residual_ <= tol::kMembership * (1.0 + frobenius_norm(tsa));

    if (in_half_ != in_full_) {
      throw Error(ErrorKind::MembershipMismatch,
                  "null-space test and range test disagree (residuals " +
                      std::to_string(half_residual_) + ", " + std::to_string(full_residual_) + ")");
    }
    if (in_full_) sharp_ = m.pinv() * tsa;
    if (in_half_ && m.rank() > 0) compressed_ = m.compress(t_);
  }

  const Metric& metric() const noexcept { return *metric_; }
  const MetricPtr& metric_ptr() const noexcept { return metric_; }
  const ComplexMatrix& matrix() const noexcept { return t_; }

  /// T in B_{A^{1/2}}(H): T maps N(A) into N(A).
  bool in_half() const noexcept { return in_half_; }
  /// T in B_A(H): R(T* A) in R(A).
  bool in_full() const noexcept { return in_full_; }
  double half_residual() const noexcept { return half_residual_; }
  double full_residual() const noexcept { return full_residual_; }

  /// T^{#A} = A^dagger T* A.
  const ComplexMatrix& sharp() const {
    if (!sharp_) throw Error(ErrorKind::NotAdjointable, "operator is not A-adjointable");
    return *sharp_;
  }

  /// Reduced compression (rank x rank); empty when the metric is zero or T is
  /// not in B_{A^{1/2}}.
  const std::optional<ComplexMatrix>& compressed() const noexcept { return compressed_; }

 private:
  MetricPtr metric_;
  ComplexMatrix t_;
  bool in_half_ = false;
  bool in_full_ = false;
  double half_residual_ = 0.0;
  double full_residual_ = 0.0;
  std::optional<ComplexMatrix> sharp_;
  std::optional<ComplexMatrix> compressed_;
};

inline SemiOperator bind(MetricPtr metric, ComplexMatrix t) {
  return SemiOperator(std::move(metric), std::move(t));
}

inline ComplexMatrix sharp(const SemiOperator& op) { return op.sharp(); }

/// Full-size compression A^{1/2} T (A^{1/2})^dagger.
inline ComplexMatrix compression(const SemiOperator& op) {
  const Metric& m = op.metric();
  return m.sqrt() * op.matrix() * m.sqrt_pinv();
}

/// ||(T^#)^# - P T P||_F.
inline double double_sharp_identity_check(const SemiOperator& op) {
  const SemiOperator s(op.metric_ptr(), op.sharp());
  const ComplexMatrix& p = op.metric().projector();
  return frobenius_norm(s.sharp() - p * op.matrix() * p);
}

/// ||T||_A = sup{||T x||_A : ||x||_A = 1}, computed as sigma_max of the compression.
inline ExtendedRadius a_seminorm_op(const SemiOperator& op) {
  if (!op.in_half()) return ExtendedRadius::unbounded();
  if (!op.compressed()) return ExtendedRadius::finite(0.0);
  return ExtendedRadius::finite(operator_norm_2(*op.compressed()));
}

namespace radius {
/// w(T~) of the compression via the classical angle search.
struct Compression {};
/// sup over theta of ||(e^{i theta} T + (e^{i theta} T)^#) / 2||_A.
struct ThetaSup {};
/// max |<T x, x>_A| over `count` seeded pseudo-random A-unit vectors: a lower bound.
struct Sampling {
  std::size_t count = 100000;
  std::uint64_t seed = 0;
};
}  // namespace radius

using RadiusMethod = std::variant<radius::Compression, radius::ThetaSup, radius::Sampling>;

namespace detail {

inline double radius_theta_sup(const SemiOperator& op) {
  const Metric& m = op.metric();
  const ComplexMatrix& t = op.matrix();
  const ComplexMatrix& ts = op.sharp();
  const std::size_t n = m.dim();
  ComplexMatrix h(n, n);
  auto f_pair = [&](double theta) {
    const cplx e = std::polar(1.0, theta);
    const cplx ec = std::conj(e);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (e * t(i, j) + ec * ts(i, j));
    const double v = a_seminorm_op(SemiOperator(op.metric_ptr(), h)).value();
    return std::pair{v, v};  // ||H(theta + pi)||_A = ||-H(theta)||_A
  };
  return maximize_over_angle(f_pair).value;
}

// The first half of the budget is uniform on the A-unit sphere; the second
// half perturbs the best vector so far with a shrinking Gaussian step. Every
// candidate is an A-unit vector, so the result stays attained.
inline double radius_sampling(const SemiOperator& op, const radius::Sampling& cfg) {
  const Metric& m = op.metric();
  const std::size_t r = m.rank();
  if (r == 0) return 0.0;
  RandomStream rng(cfg.seed, "a-unit-sampling");
  const ComplexMatrix at = m.matrix() * op.matrix();
  const ComplexMatrix& lift = m.from_range();
  auto value = [&](Vector& y) {
    const double ny = norm(y);
    if (ny == 0.0) return -1.0;
    for (auto& z : y) z /= ny;
    const Vector x = lift * y;  // ||x||_A = ||y|| = 1
    return std::abs(inner(at * x, x));
  };
  double best = 0.0;
  Vector best_y(r, cplx{});
  const std::size_t uniform = cfg.count - cfg.count / 2;
  for (std::size_t k = 0; k < uniform; ++k) {
    Vector y = rng.complex_normal_vector(r);
    const double v = value(y);
    if (v > best) {
      best = v;
      best_y = std::move(y);
    }
  }
  double step = 0.3;
  std::size_t misses = 0;
  for (std::size_t k = uniform; k < cfg.count; ++k) {
    Vector y = rng.complex_normal_vector(r);
    for (std::size_t i = 0; i < r; ++i) y[i] = best_y[i] + step * y[i];
    const double v = value(y);
    if (v > best) {
      best = v;
      best_y = std::move(y);
      step = std::min(1.0, 1.2 * step);
      misses = 0;
    } else if (++misses % 50 == 0) {
      step = std::max(1e-8, 0.5 * step);
    }
  }
  return best;
}

}  // namespace detail

/// w_A(T) = sup{|<T x, x>_A| : ||x||_A = 1}; Unbounded when T(N(A)) is not in N(A).
inline ExtendedRadius a_numerical_radius(const SemiOperator& op,
                                         const RadiusMethod& method = radius::Compression{}) {
  if (!op.in_half()) return ExtendedRadius::unbounded();
  if (op.metric().rank() == 0) return ExtendedRadius::finite(0.0);
  return std::visit(
      [&](const auto& how) -> ExtendedRadius {
        using M = std::decay_t<decltype(how)>;
        if constexpr (std::is_same_v<M, radius::Compression>) {
          return ExtendedRadius::finite(numerical_radius_classical(*op.compressed()));
        } else if constexpr (std::is_same_v<M, radius::ThetaSup>) {
          if (!op.in_full()) throw Error(ErrorKind::NotAdjointable, "ThetaSup needs T in B_A");
          return ExtendedRadius::finite(detail::radius_theta_sup(op));
        } else {
          return ExtendedRadius::finite(detail::radius_sampling(op, how));
        }
      },
      method);
}

/// A T = T* A.
inline bool is_a_selfadjoint(const SemiOperator& op) {
  const ComplexMatrix at = op.metric().matrix() * op.matrix();
  return hermitian_defect(at) <= tol::kMembership * (1.0 + frobenius_norm(at));
}

/// A T positive semidefinite.
inline bool is_a_positive(const SemiOperator& op) {
  if (!is_a_selfadjoint(op)) return false;
  const ComplexMatrix at = op.metric().matrix() * op.matrix();
  ExtremeEigenvalues solver;
  return solver(hermitian_part(at)).min >= -tol::kMembership * (1.0 + frobenius_norm(at));
}

/// U^# U = (U^#)^# U^# = P.
inline bool is_a_unitary(const SemiOperator& op) {
  if (!op.in_full()) return false;
  const ComplexMatrix& p = op.metric().projector();
  const ComplexMatrix& us = op.sharp();
  const SemiOperator adj(op.metric_ptr(), us);
  if (!adj.in_full()) return false;
  return frobenius_norm(us * op.matrix() - p) <= tol::kMembership &&
         frobenius_norm(adj.sharp() * us - p) <= tol::kMembership;
}

/// U = (A^{1/2})^dagger V A^{1/2}, where V = exp(i G) on R(A) for a seeded
/// random Hermitian G and the identity on N(A). U is A-unitary.
inline ComplexMatrix random_a_unitary(const Metric& m, std::uint64_t seed) {
  const std::size_t n = m.dim();
  const std::size_t r = m.rank();
  if (r == 0) return ComplexMatrix(n, n);
  RandomStream rng(seed, "a-unitary");
  ComplexMatrix g(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    g(i, i) = rng.normal() * std::numbers::pi;
    for (std::size_t j = 0; j < i; ++j) {
      g(i, j) = rng.complex_normal() * std::numbers::pi;
      g(j, i) = std::conj(g(i, j));
    }
  }
  const HermitianEig eig = herm_eig(g);
  ComplexMatrix v(r, r);
  for (std::size_t k = 0; k < r; ++k) {
    const cplx phase = std::polar(1.0, eig.values[k]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        v(i, j) += eig.vectors(i, k) * phase * std::conj(eig.vectors(j, k));
  }
  return m.from_range() * v * m.to_range();
}

}  // namespace semihilbert
