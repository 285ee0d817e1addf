#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/spectral.hpp"
#include "semihilbert/tolerances.hpp"

namespace semihilbert {

struct AngleSearchOptions {
  int grid_points = tol::kThetaGrid;
  int brackets = tol::kThetaBrackets;
  int max_brackets = 8;
  double theta_tol = tol::kThetaBracket;
};

struct AngleMaximum {
  double value = 0.0;
  double theta = 0.0;
};

/// Maximizes a unimodal-near-the-peak function on [a, b]. Returns the best
/// evaluated point, so the value is always attained (a lower bound on the sup).
/// The bracket never shrinks below a few ulps of its endpoints.
template <typename F>
AngleMaximum golden_section_maximize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  tol = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)));
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  AngleMaximum best = fc >= fd ? AngleMaximum{fc, c} : AngleMaximum{fd, d};
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc > best.value) best = {fc, c};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd > best.value) best = {fd, d};
    }
  }
  return best;
}

/// Global maximum over one period [0, 2 pi) of f(theta) = lambda_max(Re(e^{i theta} S)),
/// or any maximum of such functions.
///
/// `f_pair(theta)` returns {f(theta), f(theta + pi)}, so a single Hermitian
/// eigenvalue sweep fills two grid slots. Every such f is a supremum of
/// |z| cos(theta + arg z), hence f + (w/2) theta^2 is convex with w the global
/// max. Around the maximizer f drops by at most (w/2) d^2, so any grid point
/// more than w delta^2 / 8 below the grid maximum cannot neighbour the global
/// peak. All remaining local maxima (at least the best `brackets`) are refined
/// by golden section on [theta_j - delta, theta_j + delta].
template <typename FPair>
AngleMaximum maximize_over_angle(FPair&& f_pair, const AngleSearchOptions& opts = {}) {
  const int grid = std::max(4, opts.grid_points + (opts.grid_points % 2));
  const int half = grid / 2;
  const double delta = 2.0 * std::numbers::pi / grid;
  std::vector<double> vals(static_cast<std::size_t>(grid));
  for (int j = 0; j < half; ++j) {
    const auto [front, back] = f_pair(j * delta);
    vals[j] = front;
    vals[j + half] = back;
  }
  int argmax = 0;
  for (int j = 1; j < grid; ++j)
    if (vals[j] > vals[argmax]) argmax = j;
  const double gmax = vals[argmax];
  AngleMaximum best{gmax, argmax * delta};

  const double drop = delta * delta / 8.0;
  const double w_bound = std::max(gmax, 0.0) / (1.0 - drop);
  const double threshold = gmax - w_bound * drop - 1e-14 * (1.0 + std::abs(gmax));

  std::vector<int> peaks;
  for (int j = 0; j < grid; ++j) {
    const double prev = vals[(j + grid - 1) % grid];
    const double next = vals[(j + 1) % grid];
    if (vals[j] >= prev && vals[j] >= next) peaks.push_back(j);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) { return vals[a] > vals[b]; });

  std::vector<int> chosen;
  for (int j : peaks) {
    if (static_cast<int>(chosen.size()) >= opts.max_brackets) break;
    if (static_cast<int>(chosen.size()) >= opts.brackets && vals[j] < threshold) break;
    const bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](int c) {
      const int gap = std::abs(c - j);
      return std::min(gap, grid - gap) <= 1;
    });
    if (!overlaps) chosen.push_back(j);
  }

  auto f = [&](double theta) { return f_pair(theta).first; };
  for (int j : chosen) {
    const double centre = j * delta;
    const AngleMaximum local =
        golden_section_maximize(f, centre - delta, centre + delta, opts.theta_tol);
    if (local.value > best.value) best = local;
  }
  best.theta = std::fmod(best.theta + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  return best;
}

/// Classical numerical radius w(S) = sup_theta lambda_max((e^{i theta} S + e^{-i theta} S*) / 2).
/// `tol` bounds the value error through the Lipschitz bound |f'| <= w(S) <= ||S||_F.
inline AngleMaximum numerical_radius_search(const ComplexMatrix& s, double tol = 1e-12,
                                            AngleSearchOptions opts = {}) {
  detail::require_square(s, "numerical radius needs a square matrix");
  const std::size_t m = s.rows();
  if (m == 1) return {std::abs(s(0, 0)), -std::arg(s(0, 0))};
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  opts.theta_tol = std::min(opts.theta_tol, tol / (1.0 + frobenius_norm(s)));

  // H(theta) = cos(theta) Re S - sin(theta) Im S with Re S = (S + S*)/2, Im S = (S - S*)/(2i).
  std::vector<cplx> re(m * m), im(m * m), h(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const cplx sij = s(i, j);
      const cplx sji = std::conj(s(j, i));
      re[i * m + j] = 0.5 * (sij + sji);
      im[i * m + j] = (sij - sji) / cplx(0.0, 2.0);
    }
  ExtremeEigenvalues solver;
  auto f_pair = [&](double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    for (std::size_t k = 0; k < m * m; ++k) h[k] = c * re[k] - sn * im[k];
    const auto range = solver(h, m);
    return std::pair{range.max, -range.min};
  };
  return maximize_over_angle(f_pair, opts);
}

inline double numerical_radius_classical(const ComplexMatrix& s, double tol = 1e-12) {
  return numerical_radius_search(s, tol).value;
}

}  // namespace semihilbert
