// rbtlse: experiment runner and file-based solver front end.
// Talks to the library only through the C interface.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbtlse/rbtlse.h"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitSolver = 2;

struct MatrixDeleter {
  void operator()(rbtlse_matrix* m) const { rbtlse_matrix_destroy(m); }
};
struct SolutionDeleter {
  void operator()(rbtlse_solution* s) const { rbtlse_solution_destroy(s); }
};
struct ExperimentDeleter {
  void operator()(rbtlse_experiment* e) const { rbtlse_experiment_destroy(e); }
};
using MatrixPtr = std::unique_ptr<rbtlse_matrix, MatrixDeleter>;
using SolutionPtr = std::unique_ptr<rbtlse_solution, SolutionDeleter>;
using ExperimentPtr = std::unique_ptr<rbtlse_experiment, ExperimentDeleter>;

struct Failure {
  rbtlse_status status;
  std::string context;
};

void check(rbtlse_status s, const std::string& context) {
  if (s != RBTLSE_OK) throw Failure{s, context};
}

int report_failure(const Failure& f) {
  std::cerr << "rbtlse: " << f.context << ": " << rbtlse_status_name(f.status) << ": " << rbtlse_last_error()
            << '\n';
  return rbtlse_status_is_solver_error(f.status) ? kExitSolver : kExitIo;
}

MatrixPtr load(const std::string& path) {
  rbtlse_matrix* m = nullptr;
  check(rbtlse_matrix_load(path.c_str(), &m), "loading " + path);
  return MatrixPtr(m);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::size_t> parse_m_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("--m-list", "not an integer: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--m-list", "empty list");
  return out;
}

struct RunOptions {
  std::string experiment;
  int t_min = 1;
  int t_max = 5;
  int t_step = 1;
  std::string m_list;
  int perturbation_case = 1;
  std::uint64_t seed = 1;
  int trials = 0;
  std::string out;
  bool iterative = false;
  std::string variant = "real";
  double noise_scale = 0.01;
};

int run_command(const RunOptions& o) {
  rbtlse_experiment_config cfg;
  rbtlse_experiment_config_defaults(&cfg);
  cfg.experiment = o.experiment.c_str();
  cfg.t_min = o.t_min;
  cfg.t_max = o.t_max;
  cfg.t_step = o.t_step;
  std::vector<std::size_t> ms;
  if (!o.m_list.empty()) {
    ms = parse_m_list(o.m_list);
    cfg.m_list = ms.data();
    cfg.m_count = ms.size();
  }
  cfg.perturbation_case = o.perturbation_case;
  cfg.variant = o.variant == "complex" ? RBTLSE_COMPLEX : RBTLSE_REAL;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.noise_scale = o.noise_scale;
  cfg.iterative_norm = o.iterative ? 1 : 0;
  cfg.out_path = o.out.empty() ? nullptr : o.out.c_str();

  rbtlse_experiment* raw = nullptr;
  check(rbtlse_experiment_run(&cfg, &raw), "run " + o.experiment);
  ExperimentPtr exp(raw);

  std::size_t errors = 0, violations = 0;
  const std::size_t count = rbtlse_experiment_record_count(exp.get());
  for (std::size_t i = 0; i < count; ++i) {
    rbtlse_record rec;
    check(rbtlse_experiment_record(exp.get(), i, &rec), "reading records");
    if (rec.error[0] != '\0') ++errors;
    if (rec.bound_violated) ++violations;
  }
  if (o.out.empty()) std::cout << rbtlse_experiment_csv(exp.get());
  std::cerr << o.experiment << ": " << count << " rows, " << errors << " with solver errors";
  if (o.experiment.rfind("bound-", 0) == 0) std::cerr << ", " << violations << " above bound";
  std::cerr << '\n';
  return 0;
}

struct SolveOptions {
  std::string a, b, c, d;
  std::string report;
  std::string x_out;
  double eps_n = std::ldexp(1.0, -53);
  std::string da, db, dc, dd;
  bool iterative = false;
};

int solve_command(rbtlse_kind kind, const SolveOptions& o) {
  const bool have_deltas = !o.da.empty() || !o.db.empty() || !o.dc.empty() || !o.dd.empty();
  if (have_deltas && (o.da.empty() || o.db.empty() || o.dc.empty() || o.dd.empty())) {
    std::cerr << "rbtlse: --da, --db, --dc and --dd must be given together\n";
    return kExitIo;
  }
  MatrixPtr a = load(o.a), b = load(o.b), c = load(o.c), d = load(o.d);

  rbtlse_solution* raw = nullptr;
  check(rbtlse_solve(kind, a.get(), b.get(), c.get(), d.get(), nullptr, &raw), "solve");
  SolutionPtr sol(raw);

  std::size_t n = 0, nd = 0;
  check(rbtlse_solution_dims(sol.get(), &n, &nd), "solution");
  std::vector<double> re(n * nd), im(n * nd);
  check(rbtlse_solution_x(sol.get(), re.data(), im.data()), "solution");
  rbtlse_diagnostics diag;
  check(rbtlse_solution_diagnostics(sol.get(), &diag), "diagnostics");

  double kappa = 0.0, eps_n = o.eps_n, forward = std::nan("");
  if (have_deltas) {
    MatrixPtr da = load(o.da), db = load(o.db), dc = load(o.dc), dd = load(o.dd);
    rbtlse_assessment as;
    check(rbtlse_solution_assess(sol.get(), da.get(), db.get(), dc.get(), dd.get(), o.iterative ? 1 : 0, &as),
          "perturbed solve");
    kappa = as.kappa;
    eps_n = as.eps_n;
    forward = as.forward_error;
  } else {
    check(rbtlse_solution_condition(sol.get(), o.iterative ? 1 : 0, &kappa), "condition number");
  }

  std::ostringstream rep;
  rep << "solution: " << (kind == RBTLSE_REAL ? "real" : "complex") << '\n';
  rep << "n: " << n << '\n' << "d: " << nd << '\n';
  rep << "X:\n";
  for (std::size_t i = 0; i < n; ++i) {
    rep << ' ';
    for (std::size_t j = 0; j < nd; ++j) {
      const std::size_t idx = i + j * n;
      rep << ' ' << fmt(re[idx]);
      if (kind == RBTLSE_COMPLEX) rep << (im[idx] < 0 ? "-" : "+") << fmt(std::abs(im[idx])) << 'i';
    }
    rep << '\n';
  }
  rep << "eps_equation: " << fmt(diag.eps_equation) << '\n';
  rep << "eps_constraint: " << fmt(diag.eps_constraint) << '\n';
  rep << "perturbation_norm: " << fmt(diag.residual_perturbation_norm) << '\n';
  rep << "gap: " << fmt(diag.gap) << '\n';
  rep << "v22_condition: " << fmt(diag.v22_condition) << '\n';
  rep << "kappa: " << fmt(kappa) << '\n';
  rep << "eps_n: " << fmt(eps_n) << '\n';
  rep << "U: " << fmt(kappa * eps_n) << '\n';
  if (have_deltas) rep << "forward_error: " << fmt(forward) << '\n';

  std::cout << rep.str();
  if (!o.report.empty()) {
    std::ofstream f(o.report, std::ios::trunc);
    if (!(f << rep.str()) || !f.flush()) {
      std::cerr << "rbtlse: cannot write report to " << o.report << '\n';
      return kExitIo;
    }
  }
  if (!o.x_out.empty()) {
    rbtlse_matrix* xm = nullptr;
    check(rbtlse_solution_x_matrix(sol.get(), &xm), "solution");
    MatrixPtr x(xm);
    check(rbtlse_matrix_save(x.get(), o.x_out.c_str()), "writing " + o.x_out);
  }
  return 0;
}

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--a", o.a, "RBMAT file for A (m x n)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--b", o.b, "RBMAT file for B (m x d)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--c", o.c, "RBMAT file for C (p x n)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--d", o.d, "RBMAT file for D (p x d)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--report", o.report, "also write the report to this file");
  cmd->add_option("--x-out", o.x_out, "write X as an RBMAT file");
  cmd->add_option("--eps-n", o.eps_n, "relative input perturbation size used for U when no deltas are given")
      ->capture_default_str();
  cmd->add_option("--da", o.da, "RBMAT perturbation of A");
  cmd->add_option("--db", o.db, "RBMAT perturbation of B");
  cmd->add_option("--dc", o.dc, "RBMAT perturbation of C");
  cmd->add_option("--dd", o.dd, "RBMAT perturbation of D");
  cmd->add_flag("--iterative-norm", o.iterative, "matrix-free spectral norm for kappa");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained total least squares over reduced biquaternion matrices"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run a seeded experiment and emit CSV");
  run_cmd->add_option("experiment", run.experiment, "experiment name")
      ->required()
      ->check(CLI::IsMember({"accuracy-real", "accuracy-complex", "bound-real", "bound-complex", "compare-lse"}));
  run_cmd->add_option("--t-min", run.t_min, "first t")->capture_default_str();
  run_cmd->add_option("--t-max", run.t_max, "last t")->capture_default_str();
  run_cmd->add_option("--t-step", run.t_step, "t increment")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--m-list", run.m_list, "comma-separated row counts for compare-lse (default 60,80,100,120)");
  run_cmd->add_option("--case", run.perturbation_case, "1: A and B perturbed, 2: B only")
      ->capture_default_str()
      ->check(CLI::IsMember({1, 2}));
  run_cmd->add_option("--seed", run.seed, "base seed")->capture_default_str();
  run_cmd->add_option("--trials", run.trials, "trials per point (default 20 for compare-lse, 1 otherwise)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "CSV path (stdout when omitted)");
  run_cmd->add_flag("--iterative-norm", run.iterative, "matrix-free spectral norm for kappa");
  run_cmd->add_option("--variant", run.variant, "compare-lse solution type")
      ->capture_default_str()
      ->check(CLI::IsMember({"real", "complex"}));
  run_cmd->add_option("--noise-scale", run.noise_scale, "compare-lse noise factor")->capture_default_str();

  SolveOptions solve_r, solve_c;
  auto* sr = app.add_subcommand("solve-real", "real solution X");
  add_solve_options(sr, solve_r);
  auto* sc = app.add_subcommand("solve-complex", "complex solution X");
  add_solve_options(sc, solve_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitIo;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*sr) return solve_command(RBTLSE_REAL, solve_r);
    if (*sc) return solve_command(RBTLSE_COMPLEX, solve_c);
  } catch (const Failure& f) {
    return report_failure(f);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "rbtlse: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "rbtlse: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
