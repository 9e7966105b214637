#pragma once

// Seeded experiment harness: instance generators and the run loops behind
// the `rbtlse run` command.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbtlse/perturbation.hpp"
#include "rbtlse/rng.hpp"

namespace rbtlse {

enum class ExperimentKind { AccuracyReal, AccuracyComplex, BoundReal, BoundComplex, CompareLse };
enum class SolutionVariant { Real, Complex };

const char* to_string(ExperimentKind kind);
/// Throws InvalidArgument on an unknown name.
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::AccuracyReal;
  std::vector<int> t_values{1, 3, 5};
  std::vector<Index> m_values{60, 80, 100, 120};
  int perturbation_case = 1;  // compare runs: 1 = A and B perturbed, 2 = B only
  SolutionVariant variant = SolutionVariant::Real;
  std::uint64_t seed = 1;
  /// Unset: 20 for compare runs, 1 otherwise.
  std::optional<int> trials;
  std::vector<double> magnitudes{1e-11, 1e-8, 1e-5};
  /// Noise factor of the compare-run construction.
  double noise_scale = 0.01;
  bool iterative_norm = false;
  /// Forward error may exceed the bound by this factor before a row is flagged.
  double bound_slack = 1.05;
  std::string out_path;

  int trial_count() const;
  /// Throws InvalidArgument when sizes or options cannot be run.
  void validate() const;
};

struct ExperimentRecord {
  std::string experiment;
  std::optional<int> t;
  Index m = 0;
  std::uint64_t seed = 0;
  int trial = 0;
  bool is_mean = false;  // per-m average row of a compare run
  std::optional<double> eps1, eps2;
  std::optional<double> delta_norm, fwd_err, bound;
  std::optional<double> eps_T, eps_L;
  std::string error;
  /// Bound rows only: fwd_err > bound * slack.
  bool bound_violated = false;
};

struct Sizes {
  Index m = 0, n = 0, p = 0, d = 0;
};

/// Real accuracy and bound runs: m = 30t, n = 10t, p = 2t, d = 2.
Sizes real_sizes(int t);
/// Complex accuracy and bound runs: m = 50t, n = 6t, p = 2t, d = 3.
Sizes complex_sizes(int t);

/// Real kinds draw every component from N(0, 1); complex kinds draw every
/// component (real and imaginary parts of both complex halves) from U[0, 1).
TlseProblem gen_instance(ExperimentKind kind, const Sizes& sizes, Rng& rng);

struct CompareInstance {
  TlseProblem consistent;
  TlseProblem perturbed;
  RealMatrix x_real;        // real variant
  ComplexMatrix x_complex;  // complex variant
  RBMatrix dA;
  RBMatrix dB;
};

/// Inconsistent constrained system around a known exact solution (n = 50,
/// d = 35, p = 10). Requires m > 50.
CompareInstance gen_compare_instance(int perturbation_case, Index m, Rng& rng, SolutionVariant variant,
                                     double noise_scale = 0.01);

/// Random deltas scaled so that epsilon_n equals `magnitude` exactly.
PerturbationInstance gen_perturbation(const TlseProblem& base, double magnitude, Rng& rng);

/// Runs the experiment; writes the CSV when config.out_path is set.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "experiment,t,m,seed,trial,eps1,eps2,delta_norm,fwd_err,bound,eps_T,eps_L,error";

std::string to_csv(const std::vector<ExperimentRecord>& records);
/// Writes to a temporary sibling file and renames it over `path`.
void write_csv_atomic(const std::string& path, const std::vector<ExperimentRecord>& records);

}  // namespace rbtlse
