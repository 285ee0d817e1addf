#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "semihilbert/checks.hpp"
#include "semihilbert/error.hpp"
#include "semihilbert/instance.hpp"
#include "semihilbert/random.hpp"

namespace semihilbert {

inline constexpr const char* kVersion = "1.0.0";

struct SuiteConfig {
  std::vector<std::size_t> dims{2};
  // ranks[i] lists the ranks for dims[i]; an empty entry (or a short list)
  // means every rank 1..n.
  std::vector<std::vector<std::size_t>> ranks;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  Tolerances tolerances{};
  unsigned workers = 1;
};

struct CheckSummary {
  CheckId check = CheckId::NormIdentity;
  std::size_t count = 0;
  std::size_t failures = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double min_normalized_slack = std::numeric_limits<double>::infinity();
  std::uint64_t argmin_seed = 0;
  std::size_t argmin_dim = 0;
  std::size_t argmin_rank = 0;
  std::string argmin_note;

  friend bool operator==(const CheckSummary&, const CheckSummary&) = default;
};

struct SuiteReport {
  std::uint64_t base_seed = 0;
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::size_t>> ranks;  // resolved, one list per dim
  std::size_t trials = 0;
  Tolerances tolerances{};
  std::string version = kVersion;
  std::size_t instances = 0;
  std::vector<CheckResult> results;
  std::vector<CheckSummary> summary;  // kSuiteChecks order
  bool pass = false;

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

inline std::vector<std::size_t> resolve_ranks(std::size_t dim, const std::vector<std::size_t>& given) {
  if (given.empty()) {
    std::vector<std::size_t> all(dim);
    for (std::size_t r = 1; r <= dim; ++r) all[r - 1] = r;
    return all;
  }
  for (std::size_t r : given) {
    if (r < 1 || r > dim) {
      throw Error(ErrorKind::BadShape, "rank " + std::to_string(r) + " invalid for dim " +
                                           std::to_string(dim));
    }
  }
  return given;
}

/// Every suite family on one instance, in kSuiteChecks order.
inline std::vector<CheckResult> run_instance(const Instance& inst, const Tolerances& tols) {
  Evaluator ev(inst);
  std::vector<CheckResult> out;
  for (CheckId id : kSuiteChecks) detail::append_family(ev, id, tols, out);
  return out;
}

inline std::vector<CheckSummary> summarize(const std::vector<CheckResult>& results) {
  std::vector<CheckSummary> summary;
  for (CheckId id : kSuiteChecks) {
    CheckSummary s;
    s.check = id;
    summary.push_back(s);
  }
  for (const CheckResult& r : results) {
    auto it = std::find_if(summary.begin(), summary.end(),
                           [&](const CheckSummary& s) { return s.check == r.check; });
    if (it == summary.end()) continue;
    ++it->count;
    if (!r.pass) ++it->failures;
    if (r.slack < it->min_slack) {
      it->min_slack = r.slack;
      it->argmin_seed = r.seed;
      it->argmin_dim = r.dim;
      it->argmin_rank = r.rank;
      it->argmin_note = r.note;
    }
    it->min_normalized_slack = std::min(it->min_normalized_slack, r.normalized_slack());
  }
  return summary;
}

/// Instance seeds are base_seed + trial for every (dim, rank); the instance key
/// also mixes in dim and rank. Workers fill fixed slots, so the result order is
/// the same for any worker count.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  if (cfg.dims.empty()) throw Error(ErrorKind::InvalidArgument, "no dimensions given");

  SuiteReport rep;
  rep.base_seed = cfg.base_seed;
  rep.dims = cfg.dims;
  rep.trials = cfg.trials;
  rep.tolerances = cfg.tolerances;

  struct Job {
    std::uint64_t seed;
    std::size_t dim, rank;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    const std::size_t n = cfg.dims[i];
    if (n < 1 || n > kMaxInstanceDim) {
      throw Error(ErrorKind::BadShape, "dimension " + std::to_string(n) + " out of range");
    }
    rep.ranks.push_back(resolve_ranks(n, i < cfg.ranks.size() ? cfg.ranks[i] : std::vector<std::size_t>{}));
    for (std::size_t r : rep.ranks.back())
      for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({cfg.base_seed + t, n, r});
  }

  std::vector<std::vector<CheckResult>> slots(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < jobs.size(); k += stride) {
      try {
        slots[k] = run_instance(gen_instance(jobs[k].seed, jobs[k].dim, jobs[k].rank), cfg.tolerances);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(jobs.size())));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  // Rethrow the first failure in job order, independent of scheduling.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  rep.instances = jobs.size();
  for (auto& slot : slots)
    for (auto& r : slot) rep.results.push_back(std::move(r));
  rep.summary = summarize(rep.results);
  rep.pass = std::all_of(rep.summary.begin(), rep.summary.end(),
                         [](const CheckSummary& s) { return s.failures == 0; });
  return rep;
}

// ---------------------------------------------------------------------------
// Tightness probe

enum class ProbeFamily { Generic, Tied, NilpotentTied };

inline const char* probe_family_name(ProbeFamily f) {
  switch (f) {
    case ProbeFamily::Generic: return "generic";
    case ProbeFamily::Tied: return "tied";
    case ProbeFamily::NilpotentTied: return "nilpotent-tied";
  }
  return "?";
}

struct ProbeConfig {
  CheckId check = CheckId::MainOffDiag;
  std::size_t dim = 2;
  std::size_t rank = 0;  // 0 means full rank
  bool identity_metric = false;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  Tolerances tolerances{};
};

/// One accepted coordinate move: operator index (0..3 for T, S, X, Y), entry
/// (i, j) in the eigenbasis of A, and the complex step added there.
struct ProbeMove {
  int op = 0;
  std::size_t i = 0, j = 0;
  double re = 0.0, im = 0.0;
};

struct ProbeResult {
  CheckResult best;          // part with the smallest relative slack
  double relative_slack = 0; // best.slack / max(|lhs|, |rhs|)
  Instance instance;         // the operators at the best point
  std::uint64_t restart_seed = 0;
  ProbeFamily family = ProbeFamily::Generic;
  std::vector<ProbeMove> trace;
  std::size_t evaluations = 0;
  bool falsification = false;  // some part failed its tolerance
};

namespace detail {

inline ComplexMatrix& probe_operator(Instance& inst, int k) {
  switch (k) {
    case 0: return inst.t;
    case 1: return inst.s;
    case 2: return inst.x;
    default: return inst.y;
  }
}

// In the eigenbasis of A (null vectors first) an operator preserves N(A)
// exactly when the entries (i >= nullity, j < nullity) vanish, and entries with
// i < nullity are invisible to every A-quantity. Only the range block moves;
// perturbing the invisible entries lets roundoff drive them without bound.
inline bool probe_entry_allowed(const Metric& m, std::size_t i, std::size_t j) {
  return i >= m.nullity() && j >= m.nullity();
}

inline Instance probe_start(const ProbeConfig& cfg, std::size_t rank, std::uint64_t restart_seed,
                            ProbeFamily family) {
  Instance inst = gen_instance(restart_seed, cfg.dim, rank);
  if (cfg.identity_metric) inst.metric = new_metric(ComplexMatrix::identity(cfg.dim));
  const Metric& m = *inst.metric;
  const ComplexMatrix& q = m.spectrum().vectors;
  if (family == ProbeFamily::Tied) {
    inst.y = inst.x;
    inst.s = inst.t;
  } else if (family == ProbeFamily::NilpotentTied) {
    // Strictly upper triangular on the range coordinates, zero elsewhere.
    RandomStream rng(instance_key(restart_seed, cfg.dim, rank), "probe-nilpotent");
    ComplexMatrix c(cfg.dim, cfg.dim);
    for (std::size_t i = m.nullity(); i < cfg.dim; ++i)
      for (std::size_t j = i + 1; j < cfg.dim; ++j) c(i, j) = rng.complex_normal();
    inst.x = q * c * q.adjoint();
    inst.y = inst.x;
    inst.s = inst.t;
  }
  return inst;
}

struct ProbeScore {
  double relative = std::numeric_limits<double>::infinity();
  CheckResult part;
  bool failed = false;
};

inline ProbeScore probe_score(CheckId id, const Instance& inst, const Tolerances& tols) {
  ProbeScore s;
  Evaluator ev(inst);
  std::vector<CheckResult> parts;
  append_family(ev, id, tols, parts);
  for (const CheckResult& r : parts) {
    if (!r.pass) s.failed = true;
    const double mag = std::max(std::abs(r.lhs), std::abs(r.rhs));
    if (mag < 1e-6) continue;  // relative slack is meaningless near zero
    const double rel = r.slack / mag;
    if (rel < s.relative) {
      s.relative = rel;
      s.part = r;
    }
  }
  if (!std::isfinite(s.relative) && !parts.empty()) {
    s.part = parts.front();
    s.relative = 0.0;
  }
  return s;
}

}  // namespace detail

/// Random restarts cycling through three start families (independent
/// operators; Y = X and S = T; X = Y nilpotent on R(A)), each followed by
/// coordinate-wise hill descent on the smallest relative slack among the
/// family's parts. `iterations` bounds the number of check evaluations.
inline ProbeResult tightness_probe(const ProbeConfig& cfg) {
  if (cfg.check == CheckId::Buzano) {
    throw Error(ErrorKind::NotAnInequality, "Buzano is probed over vectors, not instances");
  }
  if (is_equality_family(cfg.check)) {
    throw Error(ErrorKind::NotAnInequality,
                std::string(check_name(cfg.check)) + " is an equality family");
  }
  if (cfg.iterations < 1) throw Error(ErrorKind::InvalidArgument, "iterations must be at least 1");
  const std::size_t rank = cfg.identity_metric || cfg.rank == 0 ? cfg.dim : cfg.rank;

  constexpr std::size_t kRestartBudget = 200;
  constexpr std::size_t kStaleLimit = 40;
  const ProbeFamily families[] = {ProbeFamily::NilpotentTied, ProbeFamily::Tied,
                                  ProbeFamily::Generic};

  ProbeResult best;
  best.relative_slack = std::numeric_limits<double>::infinity();
  RandomStream moves(cfg.seed, "probe-moves");
  std::size_t used = 0;
  for (std::size_t restart = 0; used < cfg.iterations; ++restart) {
    const ProbeFamily family = families[restart % 3];
    const std::uint64_t restart_seed = mix64(cfg.seed ^ mix64(restart + 1));
    Instance cur = detail::probe_start(cfg, rank, restart_seed, family);
    detail::ProbeScore score = detail::probe_score(cfg.check, cur, cfg.tolerances);
    ++used;
    std::vector<ProbeMove> trace;
    auto record = [&] {
      if (score.relative < best.relative_slack || score.failed) {
        best.relative_slack = score.relative;
        best.best = score.part;
        best.instance = cur;
        best.restart_seed = restart_seed;
        best.family = family;
        best.trace = trace;
        best.falsification = best.falsification || score.failed;
      }
    };
    record();

    const Metric& m = *cur.metric;
    const ComplexMatrix& q = m.spectrum().vectors;
    const std::size_t n = cfg.dim;
    double step = 0.1;
    std::size_t stale = 0;
    const std::size_t stop = std::min(cfg.iterations, used + kRestartBudget);
    while (used < stop && stale < kStaleLimit && step > 1e-9) {
      ProbeMove mv;
      mv.op = static_cast<int>(moves.next_u64() % 4);
      do {
        mv.i = moves.next_u64() % n;
        mv.j = moves.next_u64() % n;
      } while (!detail::probe_entry_allowed(m, mv.i, mv.j));
      const cplx z = step * moves.complex_normal();
      mv.re = z.real();
      mv.im = z.imag();

      Instance next = cur;
      ComplexMatrix& op = detail::probe_operator(next, mv.op);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) op(a, b) += z * q(a, mv.i) * std::conj(q(b, mv.j));
      // Keep tied families tied so the descent explores the same configuration.
      if (family != ProbeFamily::Generic) {
        if (mv.op == 2 || mv.op == 3) next.x = next.y = op;
        if (mv.op == 0 || mv.op == 1) next.t = next.s = op;
      }
      const detail::ProbeScore s = detail::probe_score(cfg.check, next, cfg.tolerances);
      ++used;
      if (s.relative < score.relative - 1e-15) {
        cur = std::move(next);
        score = s;
        trace.push_back(mv);
        stale = 0;
        step *= 1.5;
        record();
      } else {
        ++stale;
        if (stale % 8 == 0) step *= 0.5;
      }
    }
  }
  best.evaluations = used;
  return best;
}

}  // namespace semihilbert
