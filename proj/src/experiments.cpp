#include "rbtlse/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rbtlse/errors.hpp"
#include "rbtlse/lse_baseline.hpp"

namespace rbtlse {

namespace {

constexpr Index kCompareN = 50;
constexpr Index kCompareD = 35;
constexpr Index kCompareP = 10;

bool is_compare(ExperimentKind k) { return k == ExperimentKind::CompareLse; }
bool is_complex_kind(ExperimentKind k) {
  return k == ExperimentKind::AccuracyComplex || k == ExperimentKind::BoundComplex;
}

std::string describe(const Error& e) { return std::string(to_string(e.code())) + ": " + e.what(); }

RBMatrix replicate(const RealMatrix& h) { return RBMatrix::from_components(h, h, h, h); }
RBMatrix replicate_j(const ComplexMatrix& h) { return RBMatrix::from_complex_pair(h, h); }

double stacked_norm(const RBMatrix& a, const RBMatrix& b, const RBMatrix& c, const RBMatrix& d) {
  const double na = frobenius_norm(a), nb = frobenius_norm(b), nc = frobenius_norm(c), nd = frobenius_norm(d);
  return std::sqrt(na * na + nb * nb + nc * nc + nd * nd);
}

ExperimentRecord base_record(const ExperimentConfig& cfg, std::uint64_t seed, int trial) {
  ExperimentRecord r;
  r.experiment = to_string(cfg.kind);
  if (is_compare(cfg.kind)) {
    r.experiment += cfg.variant == SolutionVariant::Real ? "-real" : "-complex";
    r.experiment += "-case" + std::to_string(cfg.perturbation_case);
  }
  r.seed = seed;
  r.trial = trial;
  return r;
}

void run_accuracy(const ExperimentConfig& cfg, std::vector<ExperimentRecord>& out) {
  const bool cplx = is_complex_kind(cfg.kind);
  for (int t : cfg.t_values) {
    const Sizes sz = cplx ? complex_sizes(t) : real_sizes(t);
    for (int trial = 0; trial < cfg.trial_count(); ++trial) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
      ExperimentRecord rec = base_record(cfg, seed, trial);
      rec.t = t;
      rec.m = sz.m;
      Rng rng(seed, static_cast<std::uint64_t>(t));
      const TlseProblem pr = gen_instance(cfg.kind, sz, rng);
      try {
        const Residuals res = cplx ? residuals_complex(pr, solve_complex(pr)) : residuals_real(pr, solve_real(pr));
        rec.eps1 = res.equation;
        rec.eps2 = res.constraint;
      } catch (const Error& e) {
        if (!e.is_solver_error()) throw;
        rec.error = describe(e);
      }
      out.push_back(std::move(rec));
    }
  }
}

void run_bound(const ExperimentConfig& cfg, std::vector<ExperimentRecord>& out) {
  const bool cplx = is_complex_kind(cfg.kind);
  ConditionOptions copts;
  if (cfg.iterative_norm) copts.strategy = ConditionStrategy::Iterative;
  for (int t : cfg.t_values) {
    const Sizes sz = cplx ? complex_sizes(t) : real_sizes(t);
    for (int trial = 0; trial < cfg.trial_count(); ++trial) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
      Rng rng(seed, static_cast<std::uint64_t>(t));
      const TlseProblem pr = gen_instance(cfg.kind, sz, rng);
      for (std::size_t k = 0; k < cfg.magnitudes.size(); ++k) {
        ExperimentRecord rec = base_record(cfg, seed, trial);
        rec.t = t;
        rec.m = sz.m;
        Rng delta_rng = rng.split(k);
        const PerturbationInstance inst = gen_perturbation(pr, cfg.magnitudes[k], delta_rng);
        try {
          const ConditionReport rep = cplx ? assess_complex(inst, {}, copts) : assess_real(inst, {}, copts);
          if (!std::isfinite(rep.kappa) || !std::isfinite(*rep.forward_error)) {
            throw Error(ErrorCode::ConditioningUndefined, "non-finite condition number or forward error");
          }
          rec.delta_norm = stacked_norm(inst.dA, inst.dB, inst.dC, inst.dD);
          rec.fwd_err = rep.forward_error;
          rec.bound = rep.bound;
          rec.bound_violated = *rep.forward_error > rep.bound * cfg.bound_slack;
        } catch (const Error& e) {
          if (!e.is_solver_error()) throw;
          rec.error = describe(e);
        }
        out.push_back(std::move(rec));
      }
    }
  }
}

void run_compare(const ExperimentConfig& cfg, std::vector<ExperimentRecord>& out) {
  ToleranceConfig tol;
  tol.enforce_row_count = false;
  for (Index m : cfg.m_values) {
    double sum_t = 0.0, sum_l = 0.0;
    int ok = 0;
    for (int trial = 0; trial < cfg.trial_count(); ++trial) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
      ExperimentRecord rec = base_record(cfg, seed, trial);
      rec.m = m;
      Rng rng(seed, static_cast<std::uint64_t>(m));
      const CompareInstance inst = gen_compare_instance(cfg.perturbation_case, m, rng, cfg.variant, cfg.noise_scale);
      const TlseProblem& pr = inst.perturbed;
      try {
        if (cfg.variant == SolutionVariant::Real) {
          rec.eps_T = (solve_real(pr, tol).X - inst.x_real).norm();
          rec.eps_L = (lse_solve_real(pr.A, pr.B, pr.C, pr.D, tol).X - inst.x_real).norm();
        } else {
          rec.eps_T = (solve_complex(pr, tol).X - inst.x_complex).norm();
          rec.eps_L = (lse_solve_complex(pr.A, pr.B, pr.C, pr.D, tol).X - inst.x_complex).norm();
        }
        sum_t += *rec.eps_T;
        sum_l += *rec.eps_L;
        ++ok;
      } catch (const Error& e) {
        if (!e.is_solver_error()) throw;
        rec.eps_T.reset();
        rec.eps_L.reset();
        rec.error = describe(e);
      }
      out.push_back(std::move(rec));
    }
    ExperimentRecord mean = base_record(cfg, cfg.seed, cfg.trial_count());
    mean.m = m;
    mean.is_mean = true;
    if (ok > 0) {
      mean.eps_T = sum_t / ok;
      mean.eps_L = sum_l / ok;
    } else {
      mean.error = "no successful trials";
    }
    out.push_back(std::move(mean));
  }
}

std::string csv_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::AccuracyReal: return "accuracy-real";
    case ExperimentKind::AccuracyComplex: return "accuracy-complex";
    case ExperimentKind::BoundReal: return "bound-real";
    case ExperimentKind::BoundComplex: return "bound-complex";
    case ExperimentKind::CompareLse: return "compare-lse";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::AccuracyReal, ExperimentKind::AccuracyComplex, ExperimentKind::BoundReal,
                 ExperimentKind::BoundComplex, ExperimentKind::CompareLse}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment '" + name + "'");
}

int ExperimentConfig::trial_count() const {
  if (trials) return *trials;
  return is_compare(kind) ? 20 : 1;
}

void ExperimentConfig::validate() const {
  if (trial_count() < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (is_compare(kind)) {
    if (perturbation_case != 1 && perturbation_case != 2) {
      throw Error(ErrorCode::InvalidArgument, "case must be 1 or 2");
    }
    if (m_values.empty()) throw Error(ErrorCode::InvalidArgument, "m list is empty");
    for (Index m : m_values) {
      if (m <= kCompareN) throw Error(ErrorCode::InvalidArgument, "compare runs need m > 50");
    }
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
      throw Error(ErrorCode::InvalidArgument, "noise scale must be finite and >= 0");
    }
    return;
  }
  if (t_values.empty()) throw Error(ErrorCode::InvalidArgument, "t range is empty");
  for (int t : t_values) {
    if (t < 1) throw Error(ErrorCode::InvalidArgument, "t must be >= 1");
  }
  if (kind == ExperimentKind::BoundReal || kind == ExperimentKind::BoundComplex) {
    if (magnitudes.empty()) throw Error(ErrorCode::InvalidArgument, "no perturbation magnitudes");
    for (double e : magnitudes) {
      if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorCode::InvalidArgument, "magnitudes must be positive");
    }
  }
}

Sizes real_sizes(int t) { return {30 * t, 10 * t, 2 * t, 2}; }
Sizes complex_sizes(int t) { return {50 * t, 6 * t, 2 * t, 3}; }

TlseProblem gen_instance(ExperimentKind kind, const Sizes& s, Rng& rng) {
  if (is_complex_kind(kind)) {
    RBMatrix a = rng.uniform_rb(s.m, s.n);
    RBMatrix b = rng.uniform_rb(s.m, s.d);
    RBMatrix c = rng.uniform_rb(s.p, s.n);
    RBMatrix d = rng.uniform_rb(s.p, s.d);
    return {std::move(a), std::move(b), std::move(c), std::move(d)};
  }
  RBMatrix a = rng.normal_rb(s.m, s.n);
  RBMatrix b = rng.normal_rb(s.m, s.d);
  RBMatrix c = rng.normal_rb(s.p, s.n);
  RBMatrix d = rng.normal_rb(s.p, s.d);
  return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

CompareInstance gen_compare_instance(int perturbation_case, Index m, Rng& rng, SolutionVariant variant,
                                     double noise_scale) {
  if (m <= kCompareN) throw Error(ErrorCode::InvalidArgument, "compare instance needs m > 50");
  if (perturbation_case != 1 && perturbation_case != 2) {
    throw Error(ErrorCode::InvalidArgument, "case must be 1 or 2");
  }
  const Index n = kCompareN, d = kCompareD, p = kCompareP;
  CompareInstance out;
  if (variant == SolutionVariant::Real) {
    RealMatrix e[4], c[4];
    for (auto& x : e) x = rng.normal_matrix(m, n);
    for (auto& x : c) x = rng.normal_matrix(p, n);
    out.x_real = rng.normal_matrix(n, d);
    const RBMatrix E = RBMatrix::from_components(e[0], e[1], e[2], e[3]);
    const RBMatrix C = RBMatrix::from_components(c[0], c[1], c[2], c[3]);
    const RBMatrix F = RBMatrix::from_components(e[0] * out.x_real, e[1] * out.x_real, e[2] * out.x_real,
                                                 e[3] * out.x_real);
    const RBMatrix D = RBMatrix::from_components(c[0] * out.x_real, c[1] * out.x_real, c[2] * out.x_real,
                                                 c[3] * out.x_real);
    if (perturbation_case == 1) {
      const RealMatrix g = rng.uniform_matrix(n + d, n + d);
      const RealMatrix h = noise_scale * (rng.uniform_matrix(m, n + d) * g);
      out.dA = replicate(h.leftCols(n));
      out.dB = replicate(h.rightCols(d));
    } else {
      const RealMatrix g = rng.uniform_matrix(d, d);
      const RealMatrix h = noise_scale * (rng.uniform_matrix(m, d) * g);
      out.dA = RBMatrix(m, n);
      out.dB = replicate(h);
    }
    out.consistent = {E, F, C, D};
  } else {
    ComplexMatrix mm[2], r[2];
    for (auto& x : mm) x = rng.normal_complex(m, n);
    for (auto& x : r) x = rng.normal_complex(p, n);
    out.x_complex = rng.normal_complex(n, d);
    const RBMatrix M = RBMatrix::from_complex_pair(mm[0], mm[1]);
    const RBMatrix R = RBMatrix::from_complex_pair(r[0], r[1]);
    const RBMatrix N = RBMatrix::from_complex_pair(mm[0] * out.x_complex, mm[1] * out.x_complex);
    const RBMatrix S = RBMatrix::from_complex_pair(r[0] * out.x_complex, r[1] * out.x_complex);
    if (perturbation_case == 1) {
      const ComplexMatrix tt = rng.uniform_complex(n + d, n + d);
      const ComplexMatrix ii = rng.uniform_complex(m, n + d);
      const ComplexMatrix j = noise_scale * (ii * tt);
      out.dA = replicate_j(j.leftCols(n));
      out.dB = replicate_j(j.rightCols(d));
    } else {
      const ComplexMatrix tt = rng.uniform_complex(d, d);
      const ComplexMatrix ii = rng.uniform_complex(m, d);
      const ComplexMatrix j = noise_scale * (ii * tt);
      out.dA = RBMatrix(m, n);
      out.dB = replicate_j(j);
    }
    out.consistent = {M, N, R, S};
  }
  out.perturbed = {out.consistent.A + out.dA, out.consistent.B + out.dB, out.consistent.C, out.consistent.D};
  return out;
}

PerturbationInstance gen_perturbation(const TlseProblem& base, double magnitude, Rng& rng) {
  PerturbationInstance inst{base,
                            rng.normal_rb(base.A.rows(), base.A.cols()),
                            rng.normal_rb(base.B.rows(), base.B.cols()),
                            rng.normal_rb(base.C.rows(), base.C.cols()),
                            rng.normal_rb(base.D.rows(), base.D.cols())};
  const double scale = magnitude / epsilon_n(inst);
  inst.dA = scale * inst.dA;
  inst.dB = scale * inst.dB;
  inst.dC = scale * inst.dC;
  inst.dD = scale * inst.dD;
  return inst;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRecord> records;
  switch (config.kind) {
    case ExperimentKind::AccuracyReal:
    case ExperimentKind::AccuracyComplex: run_accuracy(config, records); break;
    case ExperimentKind::BoundReal:
    case ExperimentKind::BoundComplex: run_bound(config, records); break;
    case ExperimentKind::CompareLse: run_compare(config, records); break;
  }
  if (!config.out_path.empty()) write_csv_atomic(config.out_path, records);
  return records;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << csv_text(r.experiment) << ',' << (r.t ? std::to_string(*r.t) : std::string()) << ',' << r.m << ','
       << r.seed << ',' << (r.is_mean ? std::string("mean") : std::to_string(r.trial)) << ','
       << csv_field(r.eps1) << ',' << csv_field(r.eps2) << ',' << csv_field(r.delta_norm) << ','
       << csv_field(r.fwd_err) << ',' << csv_field(r.bound) << ',' << csv_field(r.eps_T) << ','
       << csv_field(r.eps_L) << ',' << csv_text(r.error) << '\n';
  }
  return os.str();
}

void write_csv_atomic(const std::string& path, const std::vector<ExperimentRecord>& records) {
  namespace fs = std::filesystem;
  const std::string text = to_csv(records);
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + tmp.string() + "' for writing");
    out << text;
    if (!out.flush()) throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move CSV into place at '" + path + "'");
  }
}

}  // namespace rbtlse
