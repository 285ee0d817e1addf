#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/metric.hpp"
#include "semihilbert/semi_operator.hpp"

namespace semihilbert {

/// [[t, x], [y, s]] by explicit index mapping.
inline ComplexMatrix assemble_blocks(const ComplexMatrix& t, const ComplexMatrix& x,
                                     const ComplexMatrix& y, const ComplexMatrix& s) {
  const std::size_t n = t.rows();
  for (const ComplexMatrix* b : {&t, &x, &y, &s}) {
    if (b->rows() != n || b->cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "blocks must share one square shape");
    }
  }
  ComplexMatrix out(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = t(i, j);
      out(i, j + n) = x(i, j);
      out(i + n, j) = y(i, j);
      out(i + n, j + n) = s(i, j);
    }
  }
  return out;
}

/// The metric diag(A, A) on H + H. Its eigenbasis is assembled from the one of
/// A instead of being recomputed, so rank doubles exactly.
inline MetricPtr double_metric(const Metric& m) {
  const std::size_t n = m.dim();
  const ComplexMatrix zero(n, n);
  const ComplexMatrix a2 = assemble_blocks(m.matrix(), zero, zero, m.matrix());
  const HermitianEig& eig = m.spectrum();

  // Eigenpair j < n lives in the first copy, j >= n in the second.
  std::vector<std::size_t> order(2 * n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eig.values[a % n] < eig.values[b % n];
  });
  HermitianEig eig2{std::vector<double>(2 * n), ComplexMatrix(2 * n, 2 * n)};
  for (std::size_t col = 0; col < 2 * n; ++col) {
    const std::size_t src = order[col] % n;
    const std::size_t offset = order[col] < n ? 0 : n;
    eig2.values[col] = eig.values[src];
    for (std::size_t i = 0; i < n; ++i) eig2.vectors(i + offset, col) = eig.vectors(i, src);
  }
  return Metric::from_spectrum(a2, std::move(eig2), m.eps_rank());
}

/// A 2x2 operator matrix over the doubled metric.
struct BlockOperator {
  MetricPtr base;
  MetricPtr doubled;
  ComplexMatrix t, x, y, s;
  ComplexMatrix assembled;

  SemiOperator bound() const { return SemiOperator(doubled, assembled); }
};

/// Base metric and its double, computed once and reused for many blocks.
class DoubledSpace {
 public:
  explicit DoubledSpace(MetricPtr base) : base_(std::move(base)), doubled_(double_metric(*base_)) {}

  const MetricPtr& base() const noexcept { return base_; }
  const MetricPtr& doubled() const noexcept { return doubled_; }
  std::size_t dim() const noexcept { return base_->dim(); }

  BlockOperator block(const ComplexMatrix& t, const ComplexMatrix& x, const ComplexMatrix& y,
                      const ComplexMatrix& s) const {
    if (t.rows() != dim()) {
      throw Error(ErrorKind::DimensionMismatch, "block size differs from metric size");
    }
    return BlockOperator{base_, doubled_, t, x, y, s, assemble_blocks(t, x, y, s)};
  }

  BlockOperator off_diagonal(const ComplexMatrix& x, const ComplexMatrix& y) const {
    const ComplexMatrix zero(dim(), dim());
    return block(zero, x, y, zero);
  }

  BlockOperator diagonal(const ComplexMatrix& x, const ComplexMatrix& y) const {
    const ComplexMatrix zero(dim(), dim());
    return block(x, zero, zero, y);
  }

 private:
  MetricPtr base_;
  MetricPtr doubled_;
};

inline BlockOperator make_block(const MetricPtr& m, const ComplexMatrix& t, const ComplexMatrix& x,
                                const ComplexMatrix& y, const ComplexMatrix& s) {
  return DoubledSpace(m).block(t, x, y, s);
}

/// Absolute deviations for the four block identities; each is zero in exact
/// arithmetic. Both sides are computed independently.
struct Lemma21Residuals {
  double sharp_blocks;       // ||[[T,X],[Y,S]]^# - [[T^#, Y^#], [X^#, S^#]]||_F
  double norm_diagonal;      // | ||diag(X,Y)|| - max(||X||, ||Y||) |
  double norm_off_diagonal;  // | ||[[0,X],[Y,0]]|| - max(||X||, ||Y||) |
  double radius_diagonal;    // | w(diag(X,Y)) - max(w(X), w(Y)) |
  double radius_symmetric;   // | w([[X,Y],[Y,X]]) - max(w(X+Y), w(X-Y)) |
};

inline Lemma21Residuals lemma21_residuals(const BlockOperator& b) {
  const MetricPtr& m = b.base;
  const SemiOperator t(m, b.t), x(m, b.x), y(m, b.y), s(m, b.s);
  for (const SemiOperator* op : {&t, &x, &y, &s}) {
    if (!op->in_full()) throw Error(ErrorKind::NotAdjointable, "block is not A-adjointable");
  }
  const ComplexMatrix zero(m->dim(), m->dim());
  auto block = [&](const ComplexMatrix& bt, const ComplexMatrix& bx, const ComplexMatrix& by,
                   const ComplexMatrix& bs) {
    return SemiOperator(b.doubled, assemble_blocks(bt, bx, by, bs));
  };
  auto norm_of = [](const SemiOperator& op) { return a_seminorm_op(op).value(); };
  auto radius_of = [](const SemiOperator& op) { return a_numerical_radius(op).value(); };

  Lemma21Residuals out{};
  const ComplexMatrix expected = assemble_blocks(t.sharp(), y.sharp(), x.sharp(), s.sharp());
  out.sharp_blocks = frobenius_norm(b.bound().sharp() - expected);

  const double nx = norm_of(x);
  const double ny = norm_of(y);
  out.norm_diagonal = std::abs(norm_of(block(b.x, zero, zero, b.y)) - std::max(nx, ny));
  out.norm_off_diagonal = std::abs(norm_of(block(zero, b.x, b.y, zero)) - std::max(nx, ny));

  out.radius_diagonal = std::abs(radius_of(block(b.x, zero, zero, b.y)) -
                                 std::max(radius_of(x), radius_of(y)));
  const double w_sum = radius_of(SemiOperator(m, b.x + b.y));
  const double w_diff = radius_of(SemiOperator(m, b.x - b.y));
  out.radius_symmetric =
      std::abs(radius_of(block(b.x, b.y, b.y, b.x)) - std::max(w_sum, w_diff));
  return out;
}

}  // namespace semihilbert
