// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Usage: acceptance [path-to-semihilbert-cli]
// Without the CLI path the determinism criterion compares two in-process runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semihilbert/blockspace.hpp"
#include "semihilbert/checks.hpp"
#include "semihilbert/instance.hpp"
#include "semihilbert/io.hpp"
#include "semihilbert/semi_operator.hpp"
#include "semihilbert/suite.hpp"

using namespace semihilbert;

namespace {

constexpr double kSweepIneq = 1e-8;       // slack >= -1e-8 (1 + scale)
constexpr double kSweepEq = 1e-7;         // |deviation| <= 1e-7 (1 + scale)
constexpr double kNilpotentHalfTol = 1e-7;
constexpr double kSharpOffDiagTol = 1e-6;
constexpr double kMethodAgreeTol = 1e-6;
constexpr double kSamplingTol = 1e-2;
constexpr double kSamplingQuorum = 0.99;
constexpr double kClassicalNilTol = 1e-9;
constexpr double kJordanTol = 1e-8;
constexpr double kBuzanoTol = 1e-10;
constexpr double kProbeSlack = 1e-9;

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Instances cycled over n = 2..6 and every rank 1..n.
Instance instance_number(std::size_t k) {
  static const auto shapes = [] {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t n = 2; n <= 6; ++n)
      for (std::size_t r = 1; r <= n; ++r) out.emplace_back(n, r);
    return out;
  }();
  const auto [n, r] = shapes[k % shapes.size()];
  return gen_instance(1000 + k, n, r);
}

SuiteConfig sweep_config() {
  SuiteConfig cfg;
  cfg.dims = {2, 3, 4, 5, 6};
  cfg.trials = 200;
  cfg.base_seed = 0;
  return cfg;
}

void full_sweep(const SuiteReport& rep, double secs) {
  std::size_t ineq_bad = 0, eq_bad = 0;
  std::vector<bool> ranks_seen(7 * 7, false);
  for (const CheckResult& r : rep.results) {
    if (r.relation == Relation::LessEqual) {
      ineq_bad += r.slack < -kSweepIneq * (1.0 + r.scale);
    } else {
      eq_bad += -r.slack > kSweepEq * (1.0 + r.scale);
    }
    ranks_seen[r.dim * 7 + r.rank] = true;
  }
  bool every_rank = true;
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t r = 1; r <= n; ++r) every_rank = every_rank && ranks_seen[n * 7 + r];
  bool every_family = rep.summary.size() == kSuiteChecks.size();
  for (const CheckSummary& s : rep.summary) every_family = every_family && s.count > 0;
  const std::size_t family_instances = rep.summary.size() * rep.instances;
  const bool ok = rep.pass && ineq_bad == 0 && eq_bad == 0 && every_rank && every_family &&
                  family_instances >= 5000;
  report(1, "full sweep", ok,
         format("%zu instances x %zu families = %zu family-instances, %zu results, "
                "%zu inequality / %zu equality violations, all ranks %s, %.1f s",
                rep.instances, rep.summary.size(), family_instances, rep.results.size(), ineq_bad,
                eq_bad, every_rank ? "covered" : "MISSING", secs));
}

void unbounded_example() {
  const SemiOperator op(new_metric(ComplexMatrix::diagonal({1.0, 0.0})),
                        ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  const bool ok = !op.in_half() && !op.in_full() && a_numerical_radius(op).is_unbounded() &&
                  a_numerical_radius(op, radius::ThetaSup{}).is_unbounded() &&
                  a_numerical_radius(op, radius::Sampling{}).is_unbounded() &&
                  a_seminorm_op(op).is_unbounded();
  report(2, "A = diag(1,0), T = swap", ok,
         format("membership %s/%s, w_A = %s", op.in_half() ? "true" : "false",
                op.in_full() ? "true" : "false", a_numerical_radius(op).to_string().c_str()));
}

void nilpotent_half() {
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    const Instance inst = instance_number(k);
    Evaluator ev(inst);
    const double nx = ev.norm("X", inst.x);
    for (const CheckResult& r : run_check(CheckId::NilpotentHalf, ev)) {
      const double dev = std::abs(r.lhs - 0.5 * nx) / (1.0 + nx);
      worst = std::max(worst, dev);
      bad += dev > kNilpotentHalfTol;
    }
  }
  report(3, "nilpotent corner = half seminorm", bad == 0,
         format("1000 instances, both corners, worst |dev|/(1+||X||) = %.3g", worst));
}

void sharp_off_diagonal() {
  double worst_w = 0.0, worst_n = 0.0;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    const Instance inst = instance_number(k);
    Evaluator ev(inst);
    const double nx = ev.norm("X", inst.x);
    const auto rs = run_check(CheckId::SharpOffDiag, ev);
    const double dw = std::abs(rs[0].lhs - nx) / (1.0 + nx);
    const double dn = std::abs(rs[1].lhs - 2.0 * nx * nx) / (1.0 + nx * nx);
    worst_w = std::max(worst_w, dw);
    worst_n = std::max(worst_n, dn);
    bad += (dw > kSharpOffDiagTol) + (dn > kSharpOffDiagTol);
  }
  report(4, "[[0,X],[X#,0]] identities", bad == 0,
         format("1000 instances, worst radius dev %.3g, worst norm dev %.3g", worst_w, worst_n));
}

void method_cross_validation() {
  double worst = 0.0;
  std::size_t disagree = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    const Instance inst = instance_number(k);
    const SemiOperator op(inst.metric, inst.t);
    const double c = a_numerical_radius(op).value();
    const double th = a_numerical_radius(op, radius::ThetaSup{}).value();
    const double dev = std::abs(c - th) / (1.0 + c);
    worst = std::max(worst, dev);
    disagree += dev > kMethodAgreeTol;
  }
  std::size_t close = 0, above = 0, total = 0;
  for (std::size_t k = 0; total < 200; ++k) {
    const Instance inst = instance_number(k);
    if (inst.dim > 4) continue;
    ++total;
    const SemiOperator op(inst.metric, inst.t);
    const double c = a_numerical_radius(op).value();
    const double sm = a_numerical_radius(op, radius::Sampling{100000, k}).value();
    close += c - sm <= kSamplingTol * (1.0 + c);
    above += sm > c + 1e-10 * (1.0 + c);
  }
  const double frac = static_cast<double>(close) / static_cast<double>(total);
  report(5, "radius methods agree", disagree == 0 && frac >= kSamplingQuorum && above == 0,
         format("compression vs theta: 1000 instances, worst %.3g; sampling 1e5 (n<=4): "
                "%zu/%zu within 1e-2, %zu above certified value",
                worst, close, total, above));
}

void classical_reduction() {
  const MetricPtr id2 = new_metric(ComplexMatrix::identity(2));
  double worst = 0.0;
  for (cplx c : {cplx(1.0), cplx(2.0), cplx(0.0, 1.0)}) {
    const double w = a_numerical_radius(SemiOperator(id2, ComplexMatrix{{0.0, c}, {0.0, 0.0}})).value();
    worst = std::max(worst, std::abs(w - std::abs(c) / 2.0));
  }
  const ComplexMatrix jordan{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
  const double wj = a_numerical_radius(SemiOperator(new_metric(ComplexMatrix::identity(3)), jordan)).value();
  const double grid = oracle::dense_grid_radius(jordan, 100000);
  const double exact = std::cos(std::numbers::pi / 4.0);
  const bool ok = worst <= kClassicalNilTol && std::abs(wj - exact) <= kJordanTol &&
                  std::abs(grid - exact) <= kJordanTol && std::abs(wj - grid) <= kJordanTol;
  report(6, "classical values at A = I", ok,
         format("|c|/2 worst dev %.3g; Jordan w = %.15f, grid %.15f, cos(pi/4) %.15f", worst, wj,
                grid, exact));
}

void invariance_and_power(const SuiteReport& rep) {
  std::size_t n_unit = 0, n_pow = 0, bad = 0;
  double worst_unit = 0.0, worst_pow = 0.0;
  for (const CheckResult& r : rep.results) {
    if (r.dim > 4) continue;
    if (r.check == CheckId::UnitaryInvariance) {
      ++n_unit;
      worst_unit = std::max(worst_unit, -r.slack / (1.0 + r.scale));
      bad += -r.slack > kSweepEq * (1.0 + r.scale);
    } else if (r.check == CheckId::PowerIneq) {
      ++n_pow;
      worst_pow = std::max(worst_pow, -r.slack / (1.0 + r.scale));
      bad += r.slack < -kSweepIneq * (1.0 + r.scale);
    }
  }
  report(7, "unitary invariance and power inequality", bad == 0 && n_unit > 0 && n_pow > 0,
         format("n in {2,3,4}: %zu invariance results (worst dev %.3g), %zu power results "
                "(worst normalized deficit %.3g)",
                n_unit, worst_unit, n_pow, worst_pow));
}

void buzano_triples() {
  RandomStream rng(2024, "acceptance-triples");
  std::size_t bad = 0;
  double worst = INFINITY;
  for (std::size_t k = 0; k < 10000; ++k) {
    const std::size_t n = 2 + k % 4;
    const std::size_t r = 1 + (k / 4) % (n - 1);  // rank < n
    const MetricPtr m2 = double_metric(*gen_instance(k, n, r).metric);
    const Vector x = rng.complex_normal_vector(2 * n);
    const Vector y = rng.complex_normal_vector(2 * n);
    const Vector z = rng.complex_normal_vector(2 * n);
    const CheckResult res = buzano_check(x, y, z, *m2);
    worst = std::min(worst, res.slack);
    bad += res.slack < -kBuzanoTol;
  }
  report(8, "Buzano on rank-deficient doubled metrics", bad == 0,
         format("10000 triples, min slack %.3g", worst));
}

void tightness() {
  ProbeConfig cfg;
  cfg.check = CheckId::MainOffDiag;
  cfg.dim = 2;
  cfg.identity_metric = true;
  const ProbeResult res = tightness_probe(cfg);
  const bool ok = !res.falsification && res.best.slack <= kProbeSlack;
  report(9, "off-diagonal bound is attained", ok,
         format("min slack %.3g (lhs %.12f, rhs %.12f), start family %s, %zu evaluations",
                res.best.slack, res.best.lhs, res.best.rhs, probe_family_name(res.family),
                res.evaluations));
}

void determinism(const std::string& first, const char* cli) {
  std::string second;
  std::string how;
  int code = 0;
  if (cli != nullptr) {
    const std::string path = "acceptance_sweep.json";
    const std::string cmd = std::string("\"") + cli +
                            "\" certify --dims 2,3,4,5,6 --ranks all --trials 200 --seed 0 --json " +
                            path + " > acceptance_certify.txt";
    code = std::system(cmd.c_str());
    second = read_file(path);
    how = format("CLI run exit %d", code);
  } else {
    second = report_to_json(run_suite(sweep_config()));
    how = "second in-process run";
  }
  const bool ok = code == 0 && !first.empty() && first == second;
  report(10, "byte-identical reports", ok,
         format("%s, %zu vs %zu bytes, %s", how.c_str(), first.size(), second.size(),
                first == second ? "identical" : "DIFFERENT"));
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;

  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport sweep = run_suite(sweep_config());
  const double secs = seconds_since(t0);

  full_sweep(sweep, secs);
  unbounded_example();
  nilpotent_half();
  sharp_off_diagonal();
  method_cross_validation();
  classical_reduction();
  invariance_and_power(sweep);
  buzano_triples();
  tightness();
  determinism(report_to_json(sweep), cli);

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
