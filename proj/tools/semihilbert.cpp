// Command-line front end: certification sweep, single-operator queries,
// the built-in demo and the tightness probe.
//
// Exit codes: 0 success / all checks pass, 1 violation or not adjointable,
// 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semihilbert/blockspace.hpp"
#include "semihilbert/checks.hpp"
#include "semihilbert/io.hpp"
#include "semihilbert/semi_operator.hpp"
#include "semihilbert/suite.hpp"

namespace sh = semihilbert;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " value '" + item + "'");
    }
    if (pos != item.size()) throw UsageError(std::string("bad ") + what + " value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

// "all", one list for every dimension ("1,2"), or one list per dimension ("1;1,2").
std::vector<std::vector<std::size_t>> parse_ranks(const std::string& text, std::size_t ndims) {
  if (text == "all") return {};
  std::vector<std::string> groups;
  std::stringstream ss(text);
  std::string g;
  while (std::getline(ss, g, ';')) groups.push_back(g);
  std::vector<std::vector<std::size_t>> out;
  if (groups.size() == 1) {
    const auto list = parse_list(groups[0], "rank");
    out.assign(ndims, list);
  } else if (groups.size() == ndims) {
    for (const auto& grp : groups) out.push_back(grp == "all" ? std::vector<std::size_t>{} : parse_list(grp, "rank"));
  } else {
    throw UsageError("--ranks needs one list or one list per dimension");
  }
  return out;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_matrix(const sh::ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::cout << "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) std::cout << ", ";
      std::cout << "[" << fmt(m(i, j).real()) << ", " << fmt(m(i, j).imag()) << "]";
    }
    std::cout << "]\n";
  }
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string dims = "2,3";
  std::string ranks = "all";
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string json;
  double tol_scale = 1.0;
  unsigned workers = 1;
};

int cmd_certify(const CertifyArgs& a) {
  sh::SuiteConfig cfg;
  cfg.dims = parse_list(a.dims, "dimension");
  for (std::size_t n : cfg.dims) {
    if (n < 2 || n > sh::kMaxInstanceDim) throw UsageError("dimensions must lie in 2..8");
  }
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  if (!(a.tol_scale > 0.0) || !std::isfinite(a.tol_scale)) throw UsageError("--tol-scale must be positive");
  cfg.ranks = parse_ranks(a.ranks, cfg.dims.size());
  for (std::size_t i = 0; i < cfg.ranks.size(); ++i)
    for (std::size_t r : cfg.ranks[i])
      if (r < 1 || r > cfg.dims[i]) throw UsageError("rank " + std::to_string(r) + " invalid for dimension " + std::to_string(cfg.dims[i]));
  cfg.trials = a.trials;
  cfg.base_seed = a.seed;
  cfg.tolerances.equality *= a.tol_scale;
  cfg.tolerances.inequality *= a.tol_scale;
  cfg.workers = std::max(1u, a.workers);

  const sh::SuiteReport rep = sh::run_suite(cfg);

  std::printf("%-18s %8s %8s %16s %16s  %s\n", "check", "count", "failures", "min slack",
              "min norm. slack", "argmin (seed, dim, rank)");
  for (const auto& s : rep.summary) {
    std::printf("%-18s %8zu %8zu %16s %16s  (%llu, %zu, %zu) %s\n", sh::check_name(s.check), s.count,
                s.failures, fmt(s.min_slack).c_str(), fmt(s.min_normalized_slack).c_str(),
                static_cast<unsigned long long>(s.argmin_seed), s.argmin_dim, s.argmin_rank,
                s.argmin_note.c_str());
  }
  std::printf("instances: %zu  results: %zu  families: %zu\n", rep.instances, rep.results.size(),
              rep.summary.size());
  for (const auto& r : rep.results) {
    if (!r.pass) {
      std::printf("VIOLATION %s [%s] seed=%llu dim=%zu rank=%zu lhs=%s rhs=%s slack=%s tol=%s\n",
                  sh::check_name(r.check), r.note.c_str(), static_cast<unsigned long long>(r.seed),
                  r.dim, r.rank, fmt(r.lhs).c_str(), fmt(r.rhs).c_str(), fmt(r.slack).c_str(),
                  fmt(r.tolerance).c_str());
    }
  }
  std::printf("%s\n", rep.pass ? "PASS" : "FAIL");

  if (!a.json.empty()) {
    std::ofstream out(a.json, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + a.json + "'");
    out << sh::report_to_json(rep);
  }
  return rep.pass ? kOk : kViolation;
}

struct OperatorArgs {
  std::string file;
  std::string op = "T";
  std::string method = "compression";
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

sh::SemiOperator load_operator(const OperatorArgs& a) {
  const sh::MatrixFile file = sh::parse_matrix_file(read_file(a.file));
  if (!file.has("A")) throw UsageError("matrix file has no 'A'");
  if (!file.has(a.op)) throw UsageError("matrix file has no '" + a.op + "'");
  return sh::SemiOperator(sh::new_metric(file.get("A")), file.get(a.op));
}

int cmd_radius(const OperatorArgs& a) {
  sh::RadiusMethod method;
  if (a.method == "compression") {
    method = sh::radius::Compression{};
  } else if (a.method == "theta") {
    method = sh::radius::ThetaSup{};
  } else if (a.method == "sampling") {
    method = sh::radius::Sampling{a.samples, a.seed};
  } else {
    throw UsageError("unknown method '" + a.method + "'");
  }
  const sh::SemiOperator op = load_operator(a);
  std::cout << "n = " << op.metric().dim() << ", rank(A) = " << op.metric().rank() << "\n";
  std::cout << "membership: bounded (A^1/2) = " << (op.in_half() ? "true" : "false")
            << ", A-adjointable = " << (op.in_full() ? "true" : "false") << "\n";
  std::cout << "||" << a.op << "||_A = " << sh::a_seminorm_op(op).to_string(9) << "\n";
  std::cout << "w_A(" << a.op << ") = " << sh::a_numerical_radius(op, method).to_string(9) << "  ["
            << a.method << (a.method == "sampling" ? ", lower bound" : "") << "]\n";
  return kOk;
}

int cmd_sharp(const OperatorArgs& a) {
  const sh::SemiOperator op = load_operator(a);
  if (!op.in_full()) {
    std::cout << a.op << " is not A-adjointable\n";
    return kViolation;
  }
  const sh::ComplexMatrix& s = op.sharp();
  const sh::ComplexMatrix& am = op.metric().matrix();
  std::cout << a.op << "^# =\n";
  print_matrix(s);
  std::cout << "residual ||A T^# - T* A||_F = " << fmt(sh::frobenius_norm(am * s - op.matrix().adjoint() * am))
            << "\n";
  return kOk;
}

int cmd_demo() {
  using sh::ComplexMatrix;
  std::cout << "1. Operator that does not preserve N(A)\n";
  const auto a = sh::new_metric(ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}});
  const sh::SemiOperator t(a, ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  std::cout << "   A = diag(1, 0), T = [[0, 1], [1, 0]]\n";
  std::cout << "   T(N(A)) in N(A): " << (t.in_half() ? "true" : "false")
            << ", A-adjointable: " << (t.in_full() ? "true" : "false") << "\n";
  std::cout << "   ||T||_A = " << sh::a_seminorm_op(t) << "\n";
  std::cout << "   w_A(T) = " << sh::a_numerical_radius(t) << "\n\n";

  std::cout << "2. U = (1/sqrt 2) [[I, I], [-I, I]] over diag(A, A)\n";
  const sh::Instance inst = sh::gen_instance(1, 3, 2);
  const sh::DoubledSpace space(inst.metric);
  const std::size_t n = inst.dim;
  const double c = 1.0 / std::sqrt(2.0);
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const sh::SemiOperator u(space.doubled(), sh::assemble_blocks(c * id, c * id, -c * id, c * id));
  std::cout << "   A: seeded 3x3 metric of rank 2, T and S seeded (seed 1)\n";
  std::cout << "   U is A-unitary: " << (sh::is_a_unitary(u) ? "true" : "false") << "\n";
  const sh::SemiOperator b(space.doubled(), sh::assemble_blocks(inst.t, inst.s, inst.t, inst.s));
  const sh::SemiOperator conj(space.doubled(), u.sharp() * b.matrix() * u.matrix());
  const double w = sh::a_numerical_radius(b).value();
  const double wc = sh::a_numerical_radius(conj).value();
  std::cout << "   w([[T, S], [T, S]])       = " << fmt(w) << "\n";
  std::cout << "   w(U^# [[T, S], [T, S]] U) = " << fmt(wc) << "\n";
  std::cout << "   |difference| = " << fmt(std::abs(w - wc)) << "\n";
  return kOk;
}

struct ProbeArgs {
  std::string check = "MainOffDiag";
  std::size_t dim = 2;
  std::size_t rank = 0;
  bool identity = false;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
};

int cmd_probe(const ProbeArgs& a) {
  sh::ProbeConfig cfg;
  cfg.check = sh::parse_check(a.check);
  if (a.dim < 1 || a.dim > sh::kMaxInstanceDim) throw UsageError("--dim must lie in 1..8");
  if (a.rank > a.dim) throw UsageError("--rank exceeds --dim");
  cfg.dim = a.dim;
  cfg.rank = a.rank;
  cfg.identity_metric = a.identity;
  cfg.iterations = a.iterations;
  cfg.seed = a.seed;
  const sh::ProbeResult r = sh::tightness_probe(cfg);
  std::cout << "check: " << a.check << " [" << r.best.note << "]\n";
  std::cout << "evaluations: " << r.evaluations << "\n";
  std::cout << "min slack: " << fmt(r.best.slack) << " (lhs " << fmt(r.best.lhs) << ", rhs "
            << fmt(r.best.rhs) << ")\n";
  std::cout << "relative slack: " << fmt(r.relative_slack) << "\n";
  std::cout << "start: family " << sh::probe_family_name(r.family) << ", restart seed "
            << r.restart_seed << ", " << r.trace.size() << " accepted moves\n";
  if (r.falsification) {
    std::cout << "FALSIFICATION candidate; operators at the best point:\n";
    for (const auto* m : {&r.instance.t, &r.instance.s, &r.instance.x, &r.instance.y}) print_matrix(*m);
    return kViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Hilbertian operator toolkit"};
  app.require_subcommand(1);

  CertifyArgs certify;
  auto* c = app.add_subcommand("certify", "run the seeded certification sweep");
  c->add_option("--dims", certify.dims, "comma-separated dimensions in 2..8")->capture_default_str();
  c->add_option("--ranks", certify.ranks, "'all', one list, or ';'-separated lists per dimension")
      ->capture_default_str();
  c->add_option("--trials", certify.trials, "instances per (dimension, rank)")->capture_default_str();
  c->add_option("--seed", certify.seed, "base seed")->capture_default_str();
  c->add_option("--json", certify.json, "write the JSON report here");
  c->add_option("--tol-scale", certify.tol_scale, "multiply both tolerance classes")->capture_default_str();
  c->add_option("--workers", certify.workers, "worker threads")->capture_default_str();

  OperatorArgs radius;
  auto* r = app.add_subcommand("radius", "A-seminorm and A-numerical radius of one operator");
  r->add_option("file", radius.file, "matrix file (JSON)")->required();
  r->add_option("--operator", radius.op, "operator name in the file")->capture_default_str();
  r->add_option("--method", radius.method, "compression | theta | sampling")->capture_default_str();
  r->add_option("--samples", radius.samples, "vectors for --method sampling")->capture_default_str();
  r->add_option("--seed", radius.seed, "seed for --method sampling")->capture_default_str();

  OperatorArgs sharp;
  auto* s = app.add_subcommand("sharp", "A-adjoint of one operator");
  s->add_option("file", sharp.file, "matrix file (JSON)")->required();
  s->add_option("--operator", sharp.op, "operator name in the file")->capture_default_str();

  auto* d = app.add_subcommand("demo", "two worked examples");

  ProbeArgs probe;
  auto* p = app.add_subcommand("probe", "search for small slack on one inequality family");
  p->add_option("--check", probe.check, "family name")->capture_default_str();
  p->add_option("--dim", probe.dim, "dimension")->capture_default_str();
  p->add_option("--rank", probe.rank, "rank of A (0 = full)")->capture_default_str();
  p->add_flag("--identity", probe.identity, "use A = I");
  p->add_option("--iterations", probe.iterations, "check evaluations")->capture_default_str();
  p->add_option("--seed", probe.seed, "probe seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (c->parsed()) return cmd_certify(certify);
    if (r->parsed()) return cmd_radius(radius);
    if (s->parsed()) return cmd_sharp(sharp);
    if (d->parsed()) return cmd_demo();
    if (p->parsed()) return cmd_probe(probe);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sh::Error& e) {
    std::cerr << "error (" << sh::to_string(e.kind()) << "): " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
