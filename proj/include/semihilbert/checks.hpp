#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semihilbert/blockspace.hpp"
#include "semihilbert/error.hpp"
#include "semihilbert/instance.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/metric.hpp"
#include "semihilbert/semi_operator.hpp"
#include "semihilbert/tolerances.hpp"

namespace semihilbert {

enum class CheckId {
  NormIdentity,
  RadiusEquiv,
  UnitaryInvariance,
  PowerIneq,
  Lemma21,
  MainOffDiag,
  Remark24Chain,
  SelfBound,
  NilpotentHalf,
  RowBound,
  RepeatedRows,
  SharpOffDiag,
  FullBlock,
  SumDiffChain,
  Buzano,
};

/// The families run by the certification sweep (Buzano is checked on vectors).
inline constexpr std::array<CheckId, 14> kSuiteChecks = {
    CheckId::NormIdentity,  CheckId::RadiusEquiv,   CheckId::UnitaryInvariance,
    CheckId::PowerIneq,     CheckId::Lemma21,       CheckId::MainOffDiag,
    CheckId::Remark24Chain, CheckId::SelfBound,     CheckId::NilpotentHalf,
    CheckId::RowBound,      CheckId::RepeatedRows,  CheckId::SharpOffDiag,
    CheckId::FullBlock,     CheckId::SumDiffChain,
};

inline const char* check_name(CheckId id) {
  switch (id) {
    case CheckId::NormIdentity: return "NormIdentity";
    case CheckId::RadiusEquiv: return "RadiusEquiv";
    case CheckId::UnitaryInvariance: return "UnitaryInvariance";
    case CheckId::PowerIneq: return "PowerIneq";
    case CheckId::Lemma21: return "Lemma21";
    case CheckId::MainOffDiag: return "MainOffDiag";
    case CheckId::Remark24Chain: return "Remark24Chain";
    case CheckId::SelfBound: return "SelfBound";
    case CheckId::NilpotentHalf: return "NilpotentHalf";
    case CheckId::RowBound: return "RowBound";
    case CheckId::RepeatedRows: return "RepeatedRows";
    case CheckId::SharpOffDiag: return "SharpOffDiag";
    case CheckId::FullBlock: return "FullBlock";
    case CheckId::SumDiffChain: return "SumDiffChain";
    case CheckId::Buzano: return "Buzano";
  }
  return "?";
}

inline CheckId parse_check(std::string_view name) {
  for (CheckId id : kSuiteChecks)
    if (name == check_name(id)) return id;
  if (name == check_name(CheckId::Buzano)) return CheckId::Buzano;
  throw Error(ErrorKind::UnknownCheck, "unknown check '" + std::string(name) + "'");
}

/// Families whose every part is an equality.
inline bool is_equality_family(CheckId id) {
  switch (id) {
    case CheckId::NormIdentity:
    case CheckId::UnitaryInvariance:
    case CheckId::Lemma21:
    case CheckId::NilpotentHalf:
    case CheckId::SharpOffDiag:
      return true;
    default:
      return false;
  }
}

enum class Relation { LessEqual, Equal };

struct Tolerances {
  double equality = tol::kEquality;
  double inequality = tol::kInequality;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// One certified instance of one claim. Slack >= 0 means the claim holds:
/// rhs - lhs for inequalities, -|lhs - rhs| for equalities. `scale` is
/// max(instance scale, |lhs|, |rhs|) and the tolerance is base * (1 + scale).
struct CheckResult {
  CheckId check = CheckId::NormIdentity;
  std::string note;
  Relation relation = Relation::LessEqual;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::size_t rank = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  double normalized_slack() const { return slack / (1.0 + scale); }

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

inline CheckResult make_result(CheckId id, std::string note, Relation rel, double lhs, double rhs,
                               double instance_scale, const Tolerances& tols) {
  CheckResult r;
  r.check = id;
  r.note = std::move(note);
  r.relation = rel;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rel == Relation::Equal ? 0.0 - std::abs(lhs - rhs) : rhs - lhs;  // never -0
  r.scale = std::max({instance_scale, std::abs(lhs), std::abs(rhs)});
  r.tolerance = (rel == Relation::Equal ? tols.equality : tols.inequality) * (1.0 + r.scale);
  r.pass = std::isfinite(r.slack) && r.slack >= -r.tolerance;
  return r;
}

/// Memoizing evaluator for one instance: A-seminorms, A-numerical radii and
/// A-adjoints of named operators on the base and doubled spaces. Keys are
/// supplied by the caller and must identify the matrix uniquely.
class Evaluator {
 public:
  explicit Evaluator(const Instance& inst) : inst_(inst), space_(inst.metric) {
    scale_ = std::max({norm("T", inst.t), norm("S", inst.s), norm("X", inst.x), norm("Y", inst.y)});
  }

  const Instance& instance() const noexcept { return inst_; }
  const DoubledSpace& space() const noexcept { return space_; }
  double scale() const noexcept { return scale_; }

  double norm(const std::string& key, const ComplexMatrix& m) { return get(key, m, false).norm; }
  double radius(const std::string& key, const ComplexMatrix& m) {
    return get(key, m, false).radius();
  }
  const ComplexMatrix& sharp(const std::string& key, const ComplexMatrix& m) {
    return get(key, m, false).op.sharp();
  }
  double block_norm(const std::string& key, const ComplexMatrix& m) {
    return get(key, m, true).norm;
  }
  double block_radius(const std::string& key, const ComplexMatrix& m) {
    return get(key, m, true).radius();
  }
  const ComplexMatrix& block_sharp(const std::string& key, const ComplexMatrix& m) {
    return get(key, m, true).op.sharp();
  }

 private:
  struct Entry {
    SemiOperator op;
    double norm;
    std::optional<double> w;
    double radius() {
      if (!w) w = a_numerical_radius(op).value();
      return *w;
    }
  };

  Entry& get(const std::string& key, const ComplexMatrix& m, bool doubled) {
    auto& cache = doubled ? block_cache_ : cache_;
    auto it = cache.find(key);
    if (it == cache.end()) {
      SemiOperator op(doubled ? space_.doubled() : space_.base(), m);
      const ExtendedRadius n = a_seminorm_op(op);
      if (n.is_unbounded()) {
        throw Error(ErrorKind::NotAdjointable, "operator '" + key + "' leaves N(A)");
      }
      it = cache.emplace(key, Entry{std::move(op), n.value(), std::nullopt}).first;
    }
    return it->second;
  }

  const Instance& inst_;
  DoubledSpace space_;
  double scale_ = 0.0;
  std::map<std::string, Entry> cache_;
  std::map<std::string, Entry> block_cache_;
};

namespace detail {

inline void append_family(Evaluator& ev, CheckId id, const Tolerances& tols,
                          std::vector<CheckResult>& out) {
  const Instance& in = ev.instance();
  const ComplexMatrix& T = in.t;
  const ComplexMatrix& S = in.s;
  const ComplexMatrix& X = in.x;
  const ComplexMatrix& Y = in.y;
  const ComplexMatrix zero(in.dim, in.dim);
  const double sc = ev.scale();
  auto add = [&](std::string note, Relation rel, double lhs, double rhs) {
    CheckResult r = make_result(id, std::move(note), rel, lhs, rhs, sc, tols);
    r.seed = in.seed;
    r.dim = in.dim;
    r.rank = in.rank;
    out.push_back(std::move(r));
  };
  auto blocks = [](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                   const ComplexMatrix& d) { return assemble_blocks(a, b, c, d); };
  // w_AA([[0, X], [Y, 0]]), shared by several families.
  auto w_off = [&] { return ev.block_radius("off(X,Y)", blocks(zero, X, Y, zero)); };

  switch (id) {
    case CheckId::NormIdentity: {
      const double nt = ev.norm("T", T);
      const ComplexMatrix& ts = ev.sharp("T", T);
      add("||T#T|| = ||T||^2", Relation::Equal, ev.norm("T#T", ts * T), nt * nt);
      add("||TT#|| = ||T||^2", Relation::Equal, ev.norm("TT#", T * ts), nt * nt);
      add("||T#|| = ||T||", Relation::Equal, ev.norm("T#", ts), nt);
      break;
    }
    case CheckId::RadiusEquiv: {
      const double nt = ev.norm("T", T);
      const double wt = ev.radius("T", T);
      add("||T||/2 <= w(T)", Relation::LessEqual, 0.5 * nt, wt);
      add("w(T) <= ||T||", Relation::LessEqual, wt, nt);
      break;
    }
    case CheckId::UnitaryInvariance: {
      const ComplexMatrix u = random_a_unitary(*in.metric, detail::instance_key(in.seed, in.dim, in.rank));
      const ComplexMatrix& us = ev.sharp("U", u);
      add("w(U#TU) = w(T)", Relation::Equal, ev.radius("U#TU", us * T * u), ev.radius("T", T));
      break;
    }
    case CheckId::PowerIneq: {
      const double wt = ev.radius("T", T);
      ComplexMatrix tk = T;
      for (unsigned k = 2; k <= 4; ++k) {
        tk = tk * T;
        const std::string key = "T^" + std::to_string(k);
        add("w(" + key + ") <= w(T)^" + std::to_string(k), Relation::LessEqual, ev.radius(key, tk),
            std::pow(wt, static_cast<double>(k)));
      }
      break;
    }
    case CheckId::Lemma21: {
      const Lemma21Residuals r = lemma21_residuals(ev.space().block(T, X, Y, S));
      add("(i) block adjoint", Relation::Equal, r.sharp_blocks, 0.0);
      add("(ii) diagonal norm", Relation::Equal, r.norm_diagonal, 0.0);
      add("(ii) off-diagonal norm", Relation::Equal, r.norm_off_diagonal, 0.0);
      add("(iii) diagonal radius", Relation::Equal, r.radius_diagonal, 0.0);
      add("(iv) symmetric radius", Relation::Equal, r.radius_symmetric, 0.0);
      break;
    }
    case CheckId::MainOffDiag: {
      const ComplexMatrix& xs = ev.sharp("X", X);
      const ComplexMatrix& ys = ev.sharp("Y", Y);
      const double w = w_off();
      const double rhs = 0.25 * std::max(ev.norm("X#X+YY#", xs * X + Y * ys),
                                         ev.norm("XX#+Y#Y", X * xs + ys * Y)) +
                         0.5 * std::max(ev.radius("XY", X * Y), ev.radius("YX", Y * X));
      add("w(off(X,Y))^2 <= bound", Relation::LessEqual, w * w, rhs);
      break;
    }
    case CheckId::Remark24Chain: {
      const double w = w_off();
      const double lower =
          std::max(std::sqrt(ev.radius("XY", X * Y)), std::sqrt(ev.radius("YX", Y * X)));
      add("sqrt w(XY), sqrt w(YX) <= w(off)", Relation::LessEqual, lower, w);
      add("w(off) <= (||X||+||Y||)/2", Relation::LessEqual, w,
          0.5 * (ev.norm("X", X) + ev.norm("Y", Y)));
      break;
    }
    case CheckId::SelfBound: {
      const ComplexMatrix& xs = ev.sharp("X", X);
      const double rhs =
          0.5 * std::sqrt(ev.norm("X#X+XX#", xs * X + X * xs) + 2.0 * ev.radius("X^2", X * X));
      add("w(X) <= sqrt(||X#X+XX#|| + 2w(X^2))/2", Relation::LessEqual, ev.radius("X", X), rhs);
      break;
    }
    case CheckId::NilpotentHalf: {
      const double half = 0.5 * ev.norm("X", X);
      add("w([[0,X],[0,0]]) = ||X||/2", Relation::Equal,
          ev.block_radius("[[0,X],[0,0]]", blocks(zero, X, zero, zero)), half);
      add("w([[0,0],[X,0]]) = ||X||/2", Relation::Equal,
          ev.block_radius("[[0,0],[X,0]]", blocks(zero, zero, X, zero)), half);
      break;
    }
    case CheckId::RowBound: {
      add("(i) w([[T,X],[0,0]]) <= w(T) + ||X||/2", Relation::LessEqual,
          ev.block_radius("[[T,X],[0,0]]", blocks(T, X, zero, zero)),
          ev.radius("T", T) + 0.5 * ev.norm("X", X));
      add("(ii) w([[0,0],[Y,S]]) <= w(S) + ||Y||/2", Relation::LessEqual,
          ev.block_radius("[[0,0],[Y,S]]", blocks(zero, zero, Y, S)),
          ev.radius("S", S) + 0.5 * ev.norm("Y", Y));
      break;
    }
    case CheckId::RepeatedRows: {
      const ComplexMatrix sum = T + S;
      const ComplexMatrix diff = T - S;
      add("(i) w([[T,S],[T,S]]) <= w(T+S) + ||T-S||/2", Relation::LessEqual,
          ev.block_radius("[[T,S],[T,S]]", blocks(T, S, T, S)),
          ev.radius("T+S", sum) + 0.5 * ev.norm("T-S", diff));
      add("(ii) w([[T,S],[-T,-S]]) <= w(T-S) + ||T+S||/2", Relation::LessEqual,
          ev.block_radius("[[T,S],[-T,-S]]", blocks(T, S, -T, -S)),
          ev.radius("T-S", diff) + 0.5 * ev.norm("T+S", sum));
      break;
    }
    case CheckId::SharpOffDiag: {
      const ComplexMatrix& xs = ev.sharp("X", X);
      const ComplexMatrix& xss = ev.sharp("X#", xs);
      const double nx = ev.norm("X", X);
      add("(i) w([[0,X],[X#,0]]) = ||X||", Relation::Equal,
          ev.block_radius("[[0,X],[X#,0]]", blocks(zero, X, xs, zero)), nx);
      add("(ii) max ||.|| = 2||X||^2", Relation::Equal,
          std::max(ev.norm("X#X+X#X##", xs * X + xs * xss), ev.norm("XX#+X##X#", X * xs + xss * xs)),
          2.0 * nx * nx);
      break;
    }
    case CheckId::FullBlock: {
      const double w_full = ev.block_radius("[[T,X],[Y,S]]", blocks(T, X, Y, S));
      const double w_m = w_off();
      const double w_r = ev.block_radius("off(XS,YT)", blocks(zero, X * S, Y * T, zero));
      const double wt = ev.radius("T", T);
      const double ws = ev.radius("S", S);
      const ComplexMatrix& ts = ev.sharp("T", T);
      const ComplexMatrix& ss = ev.sharp("S", S);
      const ComplexMatrix& xs = ev.sharp("X", X);
      const ComplexMatrix& ys = ev.sharp("Y", Y);
      const double rhs = w_m * w_m + w_r + std::max(wt * wt, ws * ws) +
                         0.5 * std::max(ev.norm("T#T+XX#", ts * T + X * xs),
                                        ev.norm("S#S+YY#", ss * S + Y * ys));
      add("w([[T,X],[Y,S]])^2 <= bound", Relation::LessEqual, w_full * w_full, rhs);
      break;
    }
    case CheckId::SumDiffChain: {
      const double wt = ev.radius("T", T);
      const double wx = ev.radius("X", X);
      const double wp = ev.radius("T+X", T + X);
      const double wm = ev.radius("T-X", T - X);
      const double mid = std::max(wp, wm);
      const ComplexMatrix& ts = ev.sharp("T", T);
      const ComplexMatrix& xs = ev.sharp("X", X);
      add("max{w(T),w(X)} + |w(T+X)-w(T-X)|/2 <= max{w(T+X),w(T-X)}", Relation::LessEqual,
          std::max(wt, wx) + 0.5 * std::abs(wp - wm), mid);
      add("max{w(T+X),w(T-X)} <= sqrt(...)", Relation::LessEqual, mid,
          std::sqrt(wx * wx + ev.radius("XT", X * T) + wt * wt +
                    0.5 * ev.norm("XX#+T#T", X * xs + ts * T)));
      break;
    }
    case CheckId::Buzano:
      throw Error(ErrorKind::UnknownCheck, "Buzano is checked on vectors, see buzano_check");
  }
}

}  // namespace detail

/// All parts of one family on an instance, sharing the evaluator's cache.
inline std::vector<CheckResult> run_check(CheckId id, Evaluator& ev, const Tolerances& tols = {}) {
  std::vector<CheckResult> out;
  detail::append_family(ev, id, tols, out);
  return out;
}

inline std::vector<CheckResult> run_check(CheckId id, const Instance& inst,
                                          const Tolerances& tols = {}) {
  Evaluator ev(inst);
  return run_check(id, ev, tols);
}

/// |<x,z>_AA <z,y>_AA| <= (||x||_AA ||y||_AA + |<x,y>_AA|) / 2 for ||z||_AA = 1.
/// z is normalized here; a z of (near) zero seminorm is rejected with DegenerateZ.
inline CheckResult buzano_check(std::span<const cplx> x, std::span<const cplx> y,
                                std::span<const cplx> z, const Metric& m2,
                                const Tolerances& tols = {}) {
  const double nz = a_norm_vec(m2, z);
  if (nz < tol::kMembership) {
    throw Error(ErrorKind::DegenerateZ, "z has zero seminorm");
  }
  Vector unit(z.begin(), z.end());
  for (auto& c : unit) c /= nz;
  const double lhs = std::abs(a_inner(m2, x, unit) * a_inner(m2, unit, y));
  const double rhs = 0.5 * (a_norm_vec(m2, x) * a_norm_vec(m2, y) + std::abs(a_inner(m2, x, y)));
  CheckResult r = make_result(CheckId::Buzano, "triple", Relation::LessEqual, lhs, rhs, 0.0, tols);
  r.dim = m2.dim();
  r.rank = m2.rank();
  return r;
}

}  // namespace semihilbert
