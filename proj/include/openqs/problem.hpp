#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "openqs/controllability.hpp"
#include "openqs/optimize.hpp"

namespace openqs {

/// Tolerance bundle used by the CLI pipelines. The environment variable
/// OPENQS_TOL_PROFILE in {strict, default, relaxed} scales every entry by
/// 0.1 / 1 / 10.
struct Tolerances {
  double rank_tol = 1e-9;
  double psd_tol = 1e-8;
  double membership_tol = 1e-8;
  double residual_tol = 1e-9;
  double unital_tol = 1e-10;

  void scale(double factor);
};

struct OptimizationConfig {
  double horizon = 1.0;
  int segments = 16;
  std::optional<double> amplitude_bound;
};

/// A problem file: system matrices, optional spin graph, optional targets,
/// tolerance overrides and the seed. Matrices are stored as
/// {rows, cols, re, im} with row-major flat lists.
struct ProblemSpec {
  int schema_version = 1;
  int dim = 0;
  std::uint64_t seed = 0;
  Matrix drift_hamiltonian;             // defaults to zero
  std::vector<Matrix> control_hamiltonians;
  std::vector<Matrix> lindblad_ops;
  std::optional<SpinGraph> spin_graph;
  std::optional<ControlTarget> target;
  OptimizationConfig optimization;
  Tolerances tolerances;

  LindbladGenerator generator() const;
  ControlProblem control_problem() const;
};

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

ProblemSpec problem_from_json(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

/// Superoperator matrix file: { schema_version, dim, matrix }.
QuantumChannel load_channel(const std::string& path);

/// FNV-1a (64-bit) content hash of a file, hex encoded.
std::string file_digest(const std::string& path);

/// Assembles the deterministic part of a command report. Volatile data
/// (wall time) is never part of it; callers print that separately.
nlohmann::json make_report(const std::string& command,
                           const std::string& input_digest,
                           std::uint64_t seed, const Tolerances& tol,
                           nlohmann::json results);

}  // namespace openqs
