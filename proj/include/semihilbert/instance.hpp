#pragma once

#include <cstdint>
#include <string>

#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/metric.hpp"
#include "semihilbert/random.hpp"

namespace semihilbert {

/// A metric plus the four named operators T, S, X, Y used by the checks. Every
/// operator maps N(A) into N(A).
struct Instance {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::size_t rank = 0;
  MetricPtr metric;
  ComplexMatrix t, s, x, y;
};

inline constexpr std::size_t kMaxInstanceDim = 8;

namespace detail {

inline std::uint64_t instance_key(std::uint64_t seed, std::size_t dim, std::size_t rank) {
  return mix64(seed ^ mix64((static_cast<std::uint64_t>(dim) << 32) | rank));
}

/// Random unitary by modified Gram-Schmidt on a complex Gaussian matrix.
inline ComplexMatrix random_unitary(RandomStream& rng, std::size_t n) {
  ComplexMatrix q = rng.complex_normal_matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx proj{};
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

/// Operator with block-lower-triangular coordinates [[T_RR, 0], [T_NR, T_NN]]
/// in the basis `q` (range columns first), so T(N(A)) in N(A) holds exactly.
/// Draws whose range block vanishes are redrawn from stream "<name>#k".
inline ComplexMatrix null_invariant_operator(std::uint64_t key, const std::string& name,
                                             const ComplexMatrix& q, std::size_t rank) {
  const std::size_t n = q.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int attempt = 0;; ++attempt) {
    RandomStream rng(key, attempt == 0 ? name : name + "#" + std::to_string(attempt));
    ComplexMatrix coords = rng.complex_normal_matrix(n, n);
    double range_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i < rank && j >= rank) coords(i, j) = 0.0;
        coords(i, j) *= scale;
        if (i < rank && j < rank) range_mass += std::norm(coords(i, j));
      }
    if (std::sqrt(range_mass) > 1e-12) return q * coords * q.adjoint();
  }
}

}  // namespace detail

/// Regenerates bit-identically from (seed, dim, rank). A = Q diag(l_1..l_r, 0..0) Q*
/// with l_i uniform in [0.1, 2] and Q a random unitary.
inline Instance gen_instance(std::uint64_t seed, std::size_t dim, std::size_t rank) {
  if (rank < 1 || rank > dim || dim > kMaxInstanceDim) {
    throw Error(ErrorKind::BadShape, "need 1 <= rank <= dim <= 8, got dim=" + std::to_string(dim) +
                                         " rank=" + std::to_string(rank));
  }
  const std::uint64_t key = detail::instance_key(seed, dim, rank);
  RandomStream basis_rng(key, "Q");
  const ComplexMatrix q = detail::random_unitary(basis_rng, dim);
  RandomStream spectrum_rng(key, "lambda");
  ComplexMatrix a(dim, dim);
  for (std::size_t k = 0; k < rank; ++k) {
    const double l = spectrum_rng.uniform(0.1, 2.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) a(i, j) += l * q(i, k) * std::conj(q(j, k));
  }
  Instance inst;
  inst.seed = seed;
  inst.dim = dim;
  inst.rank = rank;
  inst.metric = new_metric(hermitian_part(a));
  inst.t = detail::null_invariant_operator(key, "T", q, rank);
  inst.s = detail::null_invariant_operator(key, "S", q, rank);
  inst.x = detail::null_invariant_operator(key, "X", q, rank);
  inst.y = detail::null_invariant_operator(key, "Y", q, rank);
  return inst;
}

}  // namespace semihilbert
