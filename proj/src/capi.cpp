#include "rbtlse/rbtlse.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <variant>

#include "rbtlse/errors.hpp"
#include "rbtlse/experiments.hpp"
#include "rbtlse/perturbation.hpp"
#include "rbtlse/tlse.hpp"

using namespace rbtlse;

struct rbtlse_matrix {
  RBMatrix value;
};

struct rbtlse_solution {
  rbtlse_kind kind;
  TlseProblem problem;
  std::variant<TlseRealSolution, TlseComplexSolution> solution;
};

struct rbtlse_experiment {
  std::vector<ExperimentRecord> records;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

rbtlse_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return RBTLSE_ERR_DIMENSION_MISMATCH;
    case ErrorCode::InvalidArgument: return RBTLSE_ERR_INVALID_ARGUMENT;
    case ErrorCode::AssumptionViolated: return RBTLSE_ERR_ASSUMPTION_VIOLATED;
    case ErrorCode::GapConditionFailed: return RBTLSE_ERR_GAP_CONDITION;
    case ErrorCode::BlockNotInvertible: return RBTLSE_ERR_BLOCK_NOT_INVERTIBLE;
    case ErrorCode::DegenerateSpectrum: return RBTLSE_ERR_DEGENERATE_SPECTRUM;
    case ErrorCode::ConditioningUndefined: return RBTLSE_ERR_CONDITIONING_UNDEFINED;
    case ErrorCode::SizeLimit: return RBTLSE_ERR_SIZE_LIMIT;
    case ErrorCode::NonConvergence: return RBTLSE_ERR_NON_CONVERGENCE;
    case ErrorCode::ParseError: return RBTLSE_ERR_PARSE;
    case ErrorCode::IoError: return RBTLSE_ERR_IO;
  }
  return RBTLSE_ERR_INTERNAL;
}

rbtlse_status fail(rbtlse_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
rbtlse_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RBTLSE_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RBTLSE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RBTLSE_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

ToleranceConfig to_config(const rbtlse_tolerance* tol) {
  ToleranceConfig cfg;
  if (tol != nullptr) {
    cfg.gap_rel = tol->gap_rel;
    cfg.gap_abs = tol->gap_abs;
    cfg.v22_cond_max = tol->v22_cond_max;
    cfg.positive_sigma = tol->positive_sigma;
    cfg.enforce_row_count = tol->enforce_row_count != 0;
  }
  return cfg;
}

double or_nan(const std::optional<double>& v) { return v ? *v : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

extern "C" {

const char* rbtlse_last_error(void) { return g_last_error.c_str(); }

const char* rbtlse_status_name(rbtlse_status status) {
  switch (status) {
    case RBTLSE_OK: return "Ok";
    case RBTLSE_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case RBTLSE_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case RBTLSE_ERR_ASSUMPTION_VIOLATED: return "AssumptionViolated";
    case RBTLSE_ERR_GAP_CONDITION: return "GapConditionFailed";
    case RBTLSE_ERR_BLOCK_NOT_INVERTIBLE: return "BlockNotInvertible";
    case RBTLSE_ERR_DEGENERATE_SPECTRUM: return "DegenerateSpectrum";
    case RBTLSE_ERR_CONDITIONING_UNDEFINED: return "ConditioningUndefined";
    case RBTLSE_ERR_SIZE_LIMIT: return "SizeLimit";
    case RBTLSE_ERR_NON_CONVERGENCE: return "NonConvergence";
    case RBTLSE_ERR_PARSE: return "ParseError";
    case RBTLSE_ERR_IO: return "IoError";
    case RBTLSE_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

int rbtlse_status_is_solver_error(rbtlse_status status) {
  switch (status) {
    case RBTLSE_ERR_ASSUMPTION_VIOLATED:
    case RBTLSE_ERR_GAP_CONDITION:
    case RBTLSE_ERR_BLOCK_NOT_INVERTIBLE:
    case RBTLSE_ERR_DEGENERATE_SPECTRUM:
    case RBTLSE_ERR_CONDITIONING_UNDEFINED:
    case RBTLSE_ERR_SIZE_LIMIT:
    case RBTLSE_ERR_NON_CONVERGENCE: return 1;
    default: return 0;
  }
}

rbtlse_status rbtlse_matrix_create(size_t rows, size_t cols, rbtlse_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new rbtlse_matrix{RBMatrix(static_cast<Index>(rows), static_cast<Index>(cols))};
  });
}

rbtlse_status rbtlse_matrix_from_components(size_t rows, size_t cols, const double* c0, const double* c1,
                                            const double* c2, const double* c3, rbtlse_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const Index r = static_cast<Index>(rows), c = static_cast<Index>(cols);
    require(r * c == 0 || (c0 && c1 && c2 && c3), "component pointer is NULL");
    auto load = [&](const double* p) {
      return r * c == 0 ? RealMatrix(r, c) : RealMatrix(Eigen::Map<const RealMatrix>(p, r, c));
    };
    *out = new rbtlse_matrix{RBMatrix::from_components(load(c0), load(c1), load(c2), load(c3))};
  });
}

rbtlse_status rbtlse_matrix_load(const char* path, rbtlse_matrix** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path or out is NULL");
    *out = new rbtlse_matrix{load_rbmat(path)};
  });
}

rbtlse_status rbtlse_matrix_save(const rbtlse_matrix* m, const char* path) {
  return guarded([&] {
    require(m != nullptr && path != nullptr, "matrix or path is NULL");
    save_rbmat(path, m->value);
  });
}

rbtlse_status rbtlse_matrix_dims(const rbtlse_matrix* m, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(m != nullptr, "matrix is NULL");
    if (rows) *rows = static_cast<size_t>(m->value.rows());
    if (cols) *cols = static_cast<size_t>(m->value.cols());
  });
}

rbtlse_status rbtlse_matrix_component(const rbtlse_matrix* m, int index, double* out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "matrix or out is NULL");
    require(index >= 0 && index < 4, "component index must be 0..3");
    const RealMatrix& c = m->value.component(index);
    std::copy(c.data(), c.data() + c.size(), out);
  });
}

double rbtlse_matrix_norm(const rbtlse_matrix* m) {
  return m == nullptr ? std::numeric_limits<double>::quiet_NaN() : frobenius_norm(m->value);
}

void rbtlse_matrix_destroy(rbtlse_matrix* m) { delete m; }

void rbtlse_tolerance_defaults(rbtlse_tolerance* tol) {
  if (tol == nullptr) return;
  const ToleranceConfig cfg;
  tol->gap_rel = cfg.gap_rel;
  tol->gap_abs = cfg.gap_abs;
  tol->v22_cond_max = cfg.v22_cond_max;
  tol->positive_sigma = cfg.positive_sigma;
  tol->enforce_row_count = cfg.enforce_row_count ? 1 : 0;
}

rbtlse_status rbtlse_solve(rbtlse_kind kind, const rbtlse_matrix* a, const rbtlse_matrix* b,
                           const rbtlse_matrix* c, const rbtlse_matrix* d, const rbtlse_tolerance* tol,
                           rbtlse_solution** out) {
  return guarded([&] {
    require(a && b && c && d && out, "matrix or out is NULL");
    require(kind == RBTLSE_REAL || kind == RBTLSE_COMPLEX, "unknown solution kind");
    TlseProblem pr{a->value, b->value, c->value, d->value};
    const ToleranceConfig cfg = to_config(tol);
    auto* s = new rbtlse_solution{kind, pr, TlseRealSolution{}};
    try {
      if (kind == RBTLSE_REAL) {
        s->solution = solve_real(s->problem, cfg);
      } else {
        s->solution = solve_complex(s->problem, cfg);
      }
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

rbtlse_kind rbtlse_solution_kind(const rbtlse_solution* s) { return s ? s->kind : RBTLSE_REAL; }

rbtlse_status rbtlse_solution_dims(const rbtlse_solution* s, size_t* n, size_t* d) {
  return guarded([&] {
    require(s != nullptr, "solution is NULL");
    if (n) *n = static_cast<size_t>(s->problem.n());
    if (d) *d = static_cast<size_t>(s->problem.d());
  });
}

rbtlse_status rbtlse_solution_x(const rbtlse_solution* s, double* real, double* imag) {
  return guarded([&] {
    require(s != nullptr && real != nullptr, "solution or output is NULL");
    std::visit(
        [&](const auto& sol) {
          const Index count = sol.X.size();
          for (Index i = 0; i < count; ++i) {
            const auto v = sol.X.data()[i];
            real[i] = std::real(v);
            if (imag) imag[i] = std::imag(v);
          }
        },
        s->solution);
  });
}

rbtlse_status rbtlse_solution_x_matrix(const rbtlse_solution* s, rbtlse_matrix** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "solution or out is NULL");
    if (s->kind == RBTLSE_REAL) {
      *out = new rbtlse_matrix{RBMatrix::from_real(std::get<TlseRealSolution>(s->solution).X)};
    } else {
      *out = new rbtlse_matrix{RBMatrix::from_complex(std::get<TlseComplexSolution>(s->solution).X)};
    }
  });
}

rbtlse_status rbtlse_solution_perturbations(const rbtlse_solution* s, rbtlse_matrix** delta_a,
                                            rbtlse_matrix** delta_b) {
  return guarded([&] {
    require(s != nullptr, "solution is NULL");
    std::visit(
        [&](const auto& sol) {
          if (delta_a) *delta_a = new rbtlse_matrix{sol.delta_coefficient};
          if (delta_b) *delta_b = new rbtlse_matrix{sol.delta_rhs};
        },
        s->solution);
  });
}

rbtlse_status rbtlse_solution_diagnostics(const rbtlse_solution* s, rbtlse_diagnostics* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "solution or out is NULL");
    Residuals res;
    if (s->kind == RBTLSE_REAL) {
      res = residuals_real(s->problem, std::get<TlseRealSolution>(s->solution));
    } else {
      res = residuals_complex(s->problem, std::get<TlseComplexSolution>(s->solution));
    }
    std::visit(
        [&](const auto& sol) {
          out->gap = sol.gap;
          out->v22_condition = sol.v22_condition;
          out->residual_perturbation_norm = sol.residual_perturbation_norm;
          out->sigma_count = static_cast<size_t>(sol.sigma.size());
        },
        s->solution);
    out->eps_equation = res.equation;
    out->eps_constraint = res.constraint;
  });
}

rbtlse_status rbtlse_solution_sigma(const rbtlse_solution* s, double* out, size_t capacity) {
  return guarded([&] {
    require(s != nullptr && (out != nullptr || capacity == 0), "solution or out is NULL");
    std::visit(
        [&](const auto& sol) {
          const size_t count = std::min(capacity, static_cast<size_t>(sol.sigma.size()));
          std::copy(sol.sigma.data(), sol.sigma.data() + count, out);
        },
        s->solution);
  });
}

rbtlse_status rbtlse_solution_condition(const rbtlse_solution* s, int iterative, double* kappa) {
  return guarded([&] {
    require(s != nullptr && kappa != nullptr, "solution or kappa is NULL");
    ConditionOptions opts;
    if (iterative) opts.strategy = ConditionStrategy::Iterative;
    const ConditionReport rep = s->kind == RBTLSE_REAL
                                    ? condition_real(s->problem, std::get<TlseRealSolution>(s->solution), opts)
                                    : condition_complex(s->problem, std::get<TlseComplexSolution>(s->solution), opts);
    *kappa = rep.kappa;
  });
}

rbtlse_status rbtlse_solution_assess(const rbtlse_solution* s, const rbtlse_matrix* delta_a,
                                     const rbtlse_matrix* delta_b, const rbtlse_matrix* delta_c,
                                     const rbtlse_matrix* delta_d, int iterative, rbtlse_assessment* out) {
  return guarded([&] {
    require(s && delta_a && delta_b && delta_c && delta_d && out, "argument is NULL");
    ConditionOptions opts;
    if (iterative) opts.strategy = ConditionStrategy::Iterative;
    const PerturbationInstance inst{s->problem, delta_a->value, delta_b->value, delta_c->value, delta_d->value};
    const ConditionReport rep = s->kind == RBTLSE_REAL ? assess_real(inst, {}, opts) : assess_complex(inst, {}, opts);
    out->kappa = rep.kappa;
    out->eps_n = rep.eps_n;
    out->bound = rep.bound;
    out->forward_error = rep.forward_error.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

void rbtlse_solution_destroy(rbtlse_solution* s) { delete s; }

void rbtlse_experiment_config_defaults(rbtlse_experiment_config* cfg) {
  if (cfg == nullptr) return;
  const ExperimentConfig def;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->experiment = "accuracy-real";
  cfg->t_min = 1;
  cfg->t_max = 5;
  cfg->t_step = 1;
  cfg->perturbation_case = def.perturbation_case;
  cfg->variant = RBTLSE_REAL;
  cfg->seed = def.seed;
  cfg->trials = 0;
  cfg->noise_scale = def.noise_scale;
}

rbtlse_status rbtlse_experiment_run(const rbtlse_experiment_config* cfg, rbtlse_experiment** out) {
  return guarded([&] {
    require(cfg != nullptr && out != nullptr && cfg->experiment != nullptr, "config, experiment or out is NULL");
    ExperimentConfig ec;
    ec.kind = parse_experiment_kind(cfg->experiment);
    require(cfg->t_step >= 1, "t step must be >= 1");
    require(cfg->t_min <= cfg->t_max, "t-min must not exceed t-max");
    ec.t_values.clear();
    for (int t = cfg->t_min; t <= cfg->t_max; t += cfg->t_step) ec.t_values.push_back(t);
    if (cfg->m_list != nullptr) {
      ec.m_values.assign(cfg->m_list, cfg->m_list + cfg->m_count);
    }
    ec.perturbation_case = cfg->perturbation_case;
    ec.variant = cfg->variant == RBTLSE_COMPLEX ? SolutionVariant::Complex : SolutionVariant::Real;
    ec.seed = cfg->seed;
    if (cfg->trials > 0) ec.trials = cfg->trials;
    require(cfg->trials >= 0, "trials must be >= 0");
    if (cfg->magnitudes != nullptr) ec.magnitudes.assign(cfg->magnitudes, cfg->magnitudes + cfg->magnitude_count);
    ec.noise_scale = cfg->noise_scale;
    ec.iterative_norm = cfg->iterative_norm != 0;
    if (cfg->out_path != nullptr) ec.out_path = cfg->out_path;
    auto* e = new rbtlse_experiment;
    try {
      e->records = run_experiment(ec);
      e->csv = to_csv(e->records);
    } catch (...) {
      delete e;
      throw;
    }
    *out = e;
  });
}

size_t rbtlse_experiment_record_count(const rbtlse_experiment* e) { return e ? e->records.size() : 0; }

rbtlse_status rbtlse_experiment_record(const rbtlse_experiment* e, size_t index, rbtlse_record* out) {
  return guarded([&] {
    require(e != nullptr && out != nullptr, "experiment or out is NULL");
    require(index < e->records.size(), "record index out of range");
    const ExperimentRecord& r = e->records[index];
    out->t = r.t.value_or(-1);
    out->m = static_cast<size_t>(r.m);
    out->seed = r.seed;
    out->trial = r.trial;
    out->is_mean = r.is_mean ? 1 : 0;
    out->eps1 = or_nan(r.eps1);
    out->eps2 = or_nan(r.eps2);
    out->delta_norm = or_nan(r.delta_norm);
    out->fwd_err = or_nan(r.fwd_err);
    out->bound = or_nan(r.bound);
    out->eps_t = or_nan(r.eps_T);
    out->eps_l = or_nan(r.eps_L);
    out->bound_violated = r.bound_violated ? 1 : 0;
    out->error = r.error.c_str();
  });
}

const char* rbtlse_experiment_csv(const rbtlse_experiment* e) { return e ? e->csv.c_str() : ""; }

rbtlse_status rbtlse_experiment_write_csv(const rbtlse_experiment* e, const char* path) {
  return guarded([&] {
    require(e != nullptr && path != nullptr, "experiment or path is NULL");
    write_csv_atomic(path, e->records);
  });
}

void rbtlse_experiment_destroy(rbtlse_experiment* e) { delete e; }

}  // extern "C"
