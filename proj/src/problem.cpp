#include "openqs/problem.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace openqs {

using nlohmann::json;

void Tolerances::scale(double factor) {
  rank_tol *= factor;
  psd_tol *= factor;
  membership_tol *= factor;
  residual_tol *= factor;
  unital_tol *= factor;
}

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(static_cast<size_t>(m.size()));
  im.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("re")) {
    throw InputError("matrix: expected an object with rows, cols, re[, im]");
  }
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  if (rows < 1 || cols < 1) throw InputError("matrix: non-positive dimensions");
  const auto re = j.at("re").get<std::vector<double>>();
  std::vector<double> im;
  if (j.contains("im")) {
    im = j.at("im").get<std::vector<double>>();
  } else {
    im.assign(re.size(), 0.0);
  }
  if (re.size() != static_cast<size_t>(rows * cols) || im.size() != re.size()) {
    throw InputError("matrix: re/im length does not match rows*cols");
  }
  Matrix m(rows, cols);
  size_t idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++idx) {
      m(r, c) = Complex(re[idx], im[idx]);
    }
  }
  ensure_finite(m, "matrix");
  return m;
}

namespace {

double tol_profile_factor() {
  const char* profile = std::getenv("OPENQS_TOL_PROFILE");
  if (!profile) return 1.0;
  const std::string p(profile);
  if (p == "strict") return 0.1;
  if (p == "relaxed") return 10.0;
  if (p == "default" || p.empty()) return 1.0;
  throw InputError("OPENQS_TOL_PROFILE must be strict, default or relaxed");
}

void expect_square(const Matrix& m, int dim, const std::string& what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw InputError(what + ": expected a " + std::to_string(dim) + "x" +
                     std::to_string(dim) + " matrix");
  }
}

}  // namespace

ProblemSpec problem_from_json(const json& j) {
  ProblemSpec spec;
  if (!j.is_object()) throw InputError("problem: top level must be an object");
  spec.schema_version = j.value("schema_version", 1);
  if (spec.schema_version != 1) {
    throw InputError("problem: unrecognized schema_version " +
                     std::to_string(spec.schema_version));
  }
  if (!j.contains("dim")) throw InputError("problem: missing field 'dim'");
  spec.dim = j.at("dim").get<int>();
  if (spec.dim < 2 || spec.dim > 64) {
    throw InputError("problem: dim out of supported range [2, 64]");
  }
  spec.seed = j.value("seed", std::uint64_t{0});

  if (j.contains("drift_hamiltonian")) {
    spec.drift_hamiltonian = matrix_from_json(j.at("drift_hamiltonian"));
    expect_square(spec.drift_hamiltonian, spec.dim, "drift_hamiltonian");
  } else {
    spec.drift_hamiltonian = Matrix::Zero(spec.dim, spec.dim);
  }
  if (j.contains("control_hamiltonians")) {
    for (const auto& mj : j.at("control_hamiltonians")) {
      Matrix m = matrix_from_json(mj);
      expect_square(m, spec.dim, "control_hamiltonians");
      spec.control_hamiltonians.push_back(std::move(m));
    }
  }
  if (j.contains("lindblad_ops")) {
    for (const auto& mj : j.at("lindblad_ops")) {
      Matrix m = matrix_from_json(mj);
      expect_square(m, spec.dim, "lindblad_ops");
      spec.lindblad_ops.push_back(std::move(m));
    }
  }
  if (j.contains("spin_graph")) {
    const auto& g = j.at("spin_graph");
    const int n = g.at("n").get<int>();
    std::vector<std::tuple<int, int, double>> couplings;
    if (g.contains("couplings")) {
      for (const auto& e : g.at("couplings")) {
        if (!e.is_array() || e.size() != 3) {
          throw InputError("spin_graph: couplings entries must be [k, l, J]");
        }
        couplings.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(),
                               e.at(2).get<double>());
      }
    }
    spec.spin_graph = SpinGraph::checked(n, std::move(couplings));
  }
  if (j.contains("targets")) {
    const auto& t = j.at("targets");
    const std::string type = t.at("type").get<std::string>();
    if (type == "map") {
      MapTarget target;
      if (t.contains("unitary")) {
        Matrix u = matrix_from_json(t.at("unitary"));
        expect_square(u, spec.dim, "targets.unitary");
        target.superop = kron(u.conjugate(), u);
      } else if (t.contains("superoperator")) {
        target.superop = matrix_from_json(t.at("superoperator"));
        expect_square(target.superop, spec.dim * spec.dim,
                      "targets.superoperator");
      } else {
        throw InputError("targets: map target needs 'unitary' or 'superoperator'");
      }
      spec.target = target;
    } else if (type == "state") {
      StateTransferTarget target;
      target.rho0 = matrix_from_json(t.at("initial"));
      target.rho_final = matrix_from_json(t.at("final"));
      expect_square(target.rho0, spec.dim, "targets.initial");
      expect_square(target.rho_final, spec.dim, "targets.final");
      spec.target = target;
    } else {
      throw InputError("targets: type must be 'map' or 'state'");
    }
  }
  if (j.contains("optimization")) {
    const auto& o = j.at("optimization");
    spec.optimization.horizon = o.value("horizon", 1.0);
    spec.optimization.segments = o.value("segments", 16);
    if (o.contains("amplitude_bound")) {
      spec.optimization.amplitude_bound = o.at("amplitude_bound").get<double>();
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    spec.tolerances.rank_tol = t.value("rank_tol", spec.tolerances.rank_tol);
    spec.tolerances.psd_tol = t.value("psd_tol", spec.tolerances.psd_tol);
    spec.tolerances.membership_tol =
        t.value("membership_tol", spec.tolerances.membership_tol);
    spec.tolerances.residual_tol =
        t.value("residual_tol", spec.tolerances.residual_tol);
    spec.tolerances.unital_tol =
        t.value("unital_tol", spec.tolerances.unital_tol);
  }
  spec.tolerances.scale(tol_profile_factor());
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("problem file " + path + ": " + e.what());
  }
  try {
    return problem_from_json(j);
  } catch (const json::exception& e) {
    throw InputError("problem file " + path + ": " + e.what());
  }
}

QuantumChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("matrix file " + path + ": " + e.what());
  }
  try {
    const int version = j.value("schema_version", 1);
    if (version != 1) throw InputError("matrix file: unrecognized schema_version");
    const int dim = j.at("dim").get<int>();
    Matrix m = matrix_from_json(j.at("matrix"));
    return QuantumChannel::from_superop(dim, std::move(m));
  } catch (const json::exception& e) {
    throw InputError("matrix file " + path + ": " + e.what());
  }
}

LindbladGenerator ProblemSpec::generator() const {
  return LindbladGenerator::checked(drift_hamiltonian, control_hamiltonians,
                                    lindblad_ops);
}

ControlProblem ProblemSpec::control_problem() const {
  if (!target) throw InputError("problem: no optimization target present");
  ControlProblem p;
  p.generator = generator();
  p.target = *target;
  p.horizon = optimization.horizon;
  p.segments = optimization.segments;
  p.amplitude_bound = optimization.amplitude_bound;
  p.seed = seed;
  return p;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file for digest: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buffer[4096];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  char out[32];
  std::snprintf(out, sizeof(out), "fnv1a:%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(out);
}

json make_report(const std::string& command, const std::string& input_digest,
                 std::uint64_t seed, const Tolerances& tol, json results) {
  json report;
  report["schema_version"] = 1;
  report["command"] = command;
  report["input_digest"] = input_digest;
  report["seed"] = seed;
  report["tolerances"] = {
      {"rank_tol", tol.rank_tol},
      {"psd_tol", tol.psd_tol},
      {"membership_tol", tol.membership_tol},
      {"residual_tol", tol.residual_tol},
      {"unital_tol", tol.unital_tol},
  };
  report["results"] = std::move(results);
  return report;
}

}  // namespace openqs
