#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/tolerances.hpp"

namespace semihilbert {

/// Eigen-decomposition of a Hermitian matrix: M = Q diag(values) Q*.
/// Values ascend; column j of `vectors` belongs to values[j].
struct HermitianEig {
  std::vector<double> values;
  ComplexMatrix vectors;
};

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) throw Error(ErrorKind::NonSquare, what);
}

inline void require_hermitian(const ComplexMatrix& m) {
  require_square(m, "Hermitian input must be square");
  const double defect = hermitian_defect(m);
  if (defect > tol::kHermitian * (1.0 + frobenius_norm(m))) {
    throw Error(ErrorKind::NotHermitian,
                "||M - M*||_F = " + std::to_string(defect) + " exceeds tolerance");
  }
}

}  // namespace detail

/// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq with a
/// diagonal unitary, then applies a real Givens rotation.
inline HermitianEig herm_eig(const ComplexMatrix& input, int max_sweeps = 64) {
  detail::require_hermitian(input);
  const std::size_t n = input.rows();
  ComplexMatrix a = hermitian_part(input);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double fro = frobenius_norm(a);
  const double target = 4.0 * std::numeric_limits<double>::epsilon() * fro;

  auto off_norm = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
  };

  int sweep = 0;
  double off = off_norm();
  while (off > target) {
    if (sweep++ >= max_sweeps) {
      throw Error(ErrorKind::NonConvergence, "Jacobi sweep budget exhausted");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sconj = s * std::conj(phase);
        const cplx cconj = c * std::conj(phase);
        // A <- A G with G = [[c, s], [-s conj(e), c conj(e)]] on (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - sconj * akq;
          a(k, q) = s * akp + cconj * akq;
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - sconj * vkq;
          v(k, q) = s * vkp + cconj * vkq;
        }
        // A <- G* A.
        const cplx se = s * phase;
        const cplx ce = c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - se * aqk;
          a(q, k) = s * apk + ce * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    const double next = off_norm();
    if (next >= off && next <= 1e3 * target) break;  // stagnated at roundoff level
    off = next;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermitianEig out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

/// Q diag(f(lambda)) Q*.
template <typename F>
ComplexMatrix spectral_function(const HermitianEig& eig, F&& f) {
  const std::size_t n = eig.values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx qik = fk * eig.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += qik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

/// Largest and smallest eigenvalue of a Hermitian matrix without eigenvectors.
/// Householder reduction to a real tridiagonal, then implicit QL on the tridiagonal.
/// The workspace is reused across calls, which matters in angle scans.
class ExtremeEigenvalues {
 public:
  struct Range {
    double min;
    double max;
  };

  /// `h` is an m x m Hermitian matrix in row-major order.
  Range operator()(std::span<const cplx> h, std::size_t m) {
    if (m == 1) return {h[0].real(), h[0].real()};
    if (m == 2) {
      const double mean = 0.5 * (h[0].real() + h[3].real());
      const double half_gap = 0.5 * (h[0].real() - h[3].real());
      const double radius = std::hypot(half_gap, std::abs(h[2]));
      return {mean - radius, mean + radius};
    }
    // Lower triangle only, real and imaginary parts split; entry (i, j) with
    // i >= j sits at i * m + j.
    re_.resize(m * m);
    im_.resize(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        re_[i * m + j] = h[i * m + j].real();
        im_[i * m + j] = h[i * m + j].imag();
      }
    diag_.assign(m, 0.0);
    sub_.assign(m - 1, 0.0);
    vr_.resize(m);
    vi_.resize(m);
    pr_.resize(m);
    pi_.resize(m);

    for (std::size_t k = 0; k + 2 < m; ++k) {
      const std::size_t o = k + 1;  // trailing block starts at (o, o)
      const std::size_t len = m - o;
      double xnorm2 = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t at = (o + i) * m + k;
        vr_[i] = re_[at];
        vi_[i] = im_[at];
        xnorm2 += vr_[i] * vr_[i] + vi_[i] * vi_[i];
      }
      const double xnorm = std::sqrt(xnorm2);
      sub_[k] = xnorm;
      if (xnorm == 0.0) continue;
      // v = x + phase(x_0) |x| e_1, normalized; H = I - 2 v v*.
      const double a0 = std::sqrt(vr_[0] * vr_[0] + vi_[0] * vi_[0]);
      if (a0 > 0.0) {
        vr_[0] += vr_[0] / a0 * xnorm;
        vi_[0] += vi_[0] / a0 * xnorm;
      } else {
        vr_[0] += xnorm;
      }
      double vnorm2 = 0.0;
      for (std::size_t i = 0; i < len; ++i) vnorm2 += vr_[i] * vr_[i] + vi_[i] * vi_[i];
      const double inv = 1.0 / std::sqrt(vnorm2);
      for (std::size_t i = 0; i < len; ++i) {
        vr_[i] *= inv;
        vi_[i] *= inv;
      }
      // p = B v from the lower triangle.
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t row = (o + i) * m + o;
        const double d = re_[row + i];
        double sr = d * vr_[i];
        double si = d * vi_[i];
        for (std::size_t j = 0; j < i; ++j) {
          const double br = re_[row + j];
          const double bi = im_[row + j];
          sr += br * vr_[j] - bi * vi_[j];
          si += br * vi_[j] + bi * vr_[j];
        }
        pr_[i] = sr;
        pi_[i] = si;
      }
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t row = (o + i) * m + o;
        for (std::size_t j = 0; j < i; ++j) {
          // conj(B(i, j)) v_i added to p_j
          const double br = re_[row + j];
          const double bi = im_[row + j];
          pr_[j] += br * vr_[i] + bi * vi_[i];
          pi_[j] += br * vi_[i] - bi * vr_[i];
        }
      }
      double c = 0.0;
      for (std::size_t i = 0; i < len; ++i) c += vr_[i] * pr_[i] + vi_[i] * pi_[i];
      // w = 2 (p - c v); B <- B - v w* - w v*.
      for (std::size_t i = 0; i < len; ++i) {
        pr_[i] = 2.0 * (pr_[i] - c * vr_[i]);
        pi_[i] = 2.0 * (pi_[i] - c * vi_[i]);
      }
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t row = (o + i) * m + o;
        for (std::size_t j = 0; j <= i; ++j) {
          re_[row + j] -= vr_[i] * pr_[j] + vi_[i] * pi_[j] + pr_[i] * vr_[j] + pi_[i] * vi_[j];
          im_[row + j] -= vi_[i] * pr_[j] - vr_[i] * pi_[j] + pi_[i] * vr_[j] - pr_[i] * vi_[j];
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) diag_[i] = re_[i * m + i];
    {
      const std::size_t at = (m - 1) * m + (m - 2);
      sub_[m - 2] = std::sqrt(re_[at] * re_[at] + im_[at] * im_[at]);
    }
    sub_.push_back(0.0);
    tridiagonal_ql();
    const auto [lo, hi] = std::minmax_element(diag_.begin(), diag_.end());
    return {*lo, *hi};
  }

  Range operator()(const ComplexMatrix& h) {
    detail::require_square(h, "extreme eigenvalues need a square matrix");
    return (*this)(h.data(), h.rows());
  }

 private:
  // Implicit QL with Wilkinson shifts on (diag_, sub_), eigenvalues only;
  // sub_[i] couples i and i + 1 and sub_.back() is a zero sentinel.
  void tridiagonal_ql() {
    const std::size_t n = diag_.size();
    double* d = diag_.data();
    double* e = sub_.data();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
      int iter = 0;
      std::size_t m;
      do {
        for (m = l; m + 1 < n; ++m) {
          const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
          if (std::abs(e[m]) <= eps * dd) break;
        }
        if (m == l) break;
        if (++iter > 60) throw Error(ErrorKind::NonConvergence, "tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::sqrt(g * g + 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::sqrt(f * f + g * g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      } while (true);
    }
  }

  std::vector<double> re_, im_, vr_, vi_, pr_, pi_;
  std::vector<double> diag_, sub_;
};

/// sigma_max(M) = sqrt(lambda_max(M* M)).
inline double operator_norm_2(const ComplexMatrix& m) {
  const std::size_t n = m.cols();
  std::vector<cplx> gram(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < m.rows(); ++k) acc += std::conj(m(k, i)) * m(k, j);
      gram[i * n + j] = acc;
      gram[j * n + i] = std::conj(acc);
    }
  ExtremeEigenvalues solver;
  return std::sqrt(std::max(0.0, solver(gram, n).max));
}

namespace detail {

// Validates PSD-ness and returns the threshold below which eigenvalues are zero.
inline double psd_rank_threshold(const HermitianEig& eig, double eps_rank) {
  if (!(eps_rank > 0.0 && eps_rank < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "rank tolerance must lie in (0, 1)");
  }
  const double lmax = std::max(0.0, eig.values.back());
  const double lmin = eig.values.front();
  if (lmin < -tol::kNegative * lmax || (lmax == 0.0 && lmin < 0.0)) {
    throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(lmin) + " is negative");
  }
  return eps_rank * lmax;
}

}  // namespace detail

inline ComplexMatrix pseudo_inverse(const HermitianEig& eig, double eps_rank = tol::kRank) {
  const double cut = detail::psd_rank_threshold(eig, eps_rank);
  return spectral_function(eig, [cut](double l) { return l > cut ? 1.0 / l : 0.0; });
}

/// Moore-Penrose inverse of a Hermitian PSD matrix via its eigendecomposition.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double eps_rank = tol::kRank) {
  return pseudo_inverse(herm_eig(m), eps_rank);
}

inline ComplexMatrix sqrt_psd(const HermitianEig& eig, double eps_rank = tol::kRank) {
  const double cut = detail::psd_rank_threshold(eig, eps_rank);
  return spectral_function(eig, [cut](double l) { return l > cut ? std::sqrt(l) : 0.0; });
}

inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) { return sqrt_psd(herm_eig(m)); }

}  // namespace semihilbert
