#include "openqs/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "openqs/problem.hpp"

namespace openqs {

using nlohmann::json;

namespace {

// All structured outputs are written atomically after the computation
// succeeded, so a failing command leaves no partial files behind.
void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open output file: " + path);
  out << content;
  if (!out) throw InputError("failed writing output file: " + path);
}

void emit_report(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(std::stod(item));
  }
  if (grid.empty()) throw InputError("empty grid specification");
  return grid;
}

json spectrum_json(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian),
                                           Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  return json(vals);
}

// Stationary state of the drift generator; maximally mixed when the kernel
// is degenerate or yields no valid state.
Matrix drift_fixed_point(const Superoperator& l) {
  const int n = l.dim;
  Eigen::ComplexEigenSolver<Matrix> es(l.matrix);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Matrix fallback = Matrix::Identity(n, n) / static_cast<double>(n);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) > 1e-10 * scale) continue;
    Matrix rho = hermitian_part(unvec(es.eigenvectors().col(i), n));
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-8) continue;
    rho /= tr;
    Eigen::SelfAdjointEigenSolver<Matrix> sa(rho, Eigen::EigenvaluesOnly);
    if (sa.eigenvalues().minCoeff() < -1e-6) continue;
    if ((l.matrix * vec(rho)).norm() > 1e-8 * scale) continue;
    return rho;
  }
  return fallback;
}

int cmd_simulate(const std::string& problem_path, double t_final, int steps,
                 const std::string& initial_state_path,
                 const std::string& out_path) {
  if (t_final <= 0.0) throw InputError("--t-final must be positive");
  if (steps < 1) throw InputError("--steps must be at least 1");
  const ProblemSpec spec = load_problem(problem_path);
  const LindbladGenerator gen = spec.generator();

  DensityMatrix rho0 = DensityMatrix::maximally_mixed(spec.dim);
  if (!initial_state_path.empty()) {
    std::ifstream in(initial_state_path);
    if (!in) throw InputError("cannot open state file: " + initial_state_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw InputError(std::string("state file: ") + e.what());
    }
    rho0 = DensityMatrix::checked(
        matrix_from_json(j.contains("matrix") ? j.at("matrix") : j),
        spec.tolerances.psd_tol);
  }

  std::vector<double> grid(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    grid[static_cast<size_t>(i)] = t_final * i / steps;
  }
  const Trajectory traj = propagate(gen, Schedule::drift_only(), rho0, grid,
                                    spec.tolerances.psd_tol);

  const Superoperator drift = full_generator(
      gen, RealVector::Zero(static_cast<Eigen::Index>(gen.control_hamiltonians.size())));
  const Matrix rho_star = drift_fixed_point(drift);

  std::ostringstream csv;
  csv << "time";
  for (int r = 0; r < spec.dim; ++r)
    for (int c = 0; c < spec.dim; ++c) csv << ",re_" << r << "_" << c;
  for (int r = 0; r < spec.dim; ++r)
    for (int c = 0; c < spec.dim; ++c) csv << ",im_" << r << "_" << c;
  csv << ",purity,trace_dist_to_fixed\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const Matrix& rho = traj.states[i].rho;
    csv << format_double(traj.times[i]);
    for (int r = 0; r < spec.dim; ++r)
      for (int c = 0; c < spec.dim; ++c)
        csv << "," << format_double(rho(r, c).real());
    for (int r = 0; r < spec.dim; ++r)
      for (int c = 0; c < spec.dim; ++c)
        csv << "," << format_double(rho(r, c).imag());
    csv << "," << format_double(traj.states[i].purity());
    csv << "," << format_double(trace_norm(rho - rho_star));
    csv << "\n";
  }
  write_file(out_path, csv.str());
  return 0;
}

int cmd_check_generator(const std::string& problem_path,
                        const std::string& out_path) {
  const ProblemSpec spec = load_problem(problem_path);
  const LindbladGenerator gen = spec.generator();
  const Superoperator l = full_generator(
      gen, RealVector::Zero(static_cast<Eigen::Index>(gen.control_hamiltonians.size())));

  const WedgeMembershipReport wedge = kl_wedge_membership(
      l, spec.tolerances.membership_tol, spec.tolerances.residual_tol);
  const bool unital = is_unital(gen, spec.tolerances.unital_tol);
  bool purity_dec = false;
  std::string purity_note;
  try {
    purity_dec = is_purity_decreasing(gen, {0.1, 0.5, 1.0, 2.0});
  } catch (const ValidationError& e) {
    purity_note = e.what();
  }

  json results;
  results["wedge_membership"] = {
      {"member", wedge.member},
      {"residual", wedge.residual},
      {"min_kossakowski_eigenvalue", wedge.min_kossakowski_eigenvalue},
      {"kossakowski_spectrum", spectrum_json(wedge.kossakowski)},
      {"hamiltonian", matrix_to_json(wedge.hamiltonian)},
  };
  if (!wedge.diagnosis.empty()) {
    results["wedge_membership"]["diagnosis"] = wedge.diagnosis;
  }
  results["unital"] = unital;
  results["purity_decreasing"] = purity_dec;
  if (!purity_note.empty()) results["purity_note"] = purity_note;

  emit_report(make_report("check-generator", file_digest(problem_path),
                          spec.seed, spec.tolerances, std::move(results)),
              out_path);
  return 0;
}

int cmd_check_channel(const std::string& matrix_path, double t_eff,
                      const std::string& out_path) {
  QuantumChannel channel = load_channel(matrix_path);
  Tolerances tol;  // matrix files carry no overrides

  json results;
  const bool herm = is_hermiticity_preserving(channel, tol.membership_tol);
  results["hermiticity_preserving"] = herm;
  results["trace_preserving"] = is_trace_preserving(channel, tol.unital_tol * 100);
  if (herm) {
    const CpReport cp = is_completely_positive(channel, tol.membership_tol);
    results["completely_positive"] = cp.completely_positive;
    results["min_choi_eigenvalue"] = cp.min_choi_eigenvalue;
  }

  if (channel.completely_positive && channel.completely_positive->value &&
      channel.trace_preserving && channel.trace_preserving->value) {
    try {
      const TiMarkovReport markov =
          is_ti_markovian(channel, tol.membership_tol);
      json m;
      m["verdict"] = to_string(markov.verdict);
      if (!markov.diagnosis.empty()) m["diagnosis"] = markov.diagnosis;
      if (markov.generator) {
        m["generator"] = matrix_to_json(markov.generator->matrix);
      }
      if (markov.wedge) {
        m["min_kossakowski_eigenvalue"] =
            markov.wedge->min_kossakowski_eigenvalue;
        m["residual"] = markov.wedge->residual;
      }
      results["ti_markovian"] = std::move(m);
    } catch (const InputError& e) {
      results["ti_markovian"] = {{"verdict", "not-applicable"},
                                 {"diagnosis", e.what()}};
    }
  }

  if (t_eff > 0.0) {
    const EffectiveLiouvillianReport eff =
        effective_liouvillian(channel, t_eff, tol.residual_tol * 100);
    json e;
    e["has_log"] = eff.has_log;
    if (eff.has_log) {
      e["reproduces"] = eff.reproduces;
      e["reproduction_error"] = eff.reproduction_error;
      e["l_eff"] = matrix_to_json(eff.l_eff.matrix);
      if (eff.wedge) {
        e["wedge_member"] = eff.wedge->member;
        e["min_kossakowski_eigenvalue"] =
            eff.wedge->min_kossakowski_eigenvalue;
      }
    } else {
      e["diagnosis"] = eff.diagnosis;
    }
    results["effective_liouvillian"] = std::move(e);
  }

  emit_report(make_report("check-channel", file_digest(matrix_path),
                          /*seed=*/0, tol, std::move(results)),
              out_path);
  return 0;
}

int cmd_controllability(const std::string& problem_path, bool spin_graph_only,
                        const std::string& out_path) {
  const ProblemSpec spec = load_problem(problem_path);
  json results;

  if (spec.spin_graph) {
    const SpinGraphReport rep = spin_graph_analysis(*spec.spin_graph, true,
                                                    spec.tolerances.rank_tol);
    json g;
    g["component_sizes"] = rep.component_sizes;
    g["group"] = rep.group;
    g["predicted_dim"] = rep.predicted_dim;
    if (rep.verified_dim) g["verified_dim"] = *rep.verified_dim;
    results["spin_graph"] = std::move(g);
  } else if (spin_graph_only) {
    throw InputError("--spin-graph-only given but the problem has no spin_graph");
  }

  if (!spin_graph_only) {
    const LindbladGenerator gen = spec.generator();
    try {
      const AccessibilityReport acc =
          accessibility_test(gen, spec.tolerances.rank_tol);
      results["accessibility"] = {{"accessible", acc.accessible},
                                  {"dim", acc.dim},
                                  {"target_dim", acc.target_dim}};
    } catch (const InputError& e) {
      results["accessibility"] = {{"skipped", e.what()}};
    }
    const HControllabilityReport h =
        h_controllability_test(gen, spec.tolerances.rank_tol);
    results["h_controllability"] = {
        {"dim", h.dim},
        {"required", h.required},
        {"sufficient_condition_met", h.sufficient_condition_met}};
    try {
      const WhControllabilityReport wh =
          wh_controllability_test(gen, spec.tolerances.rank_tol);
      results["wh_controllability"] = {
          {"dim", wh.dim},
          {"required", wh.required},
          {"drift_algebra_full", wh.drift_algebra_full},
          {"gamma_scalar", wh.gamma_scalar},
          {"gamma", wh.gamma},
          {"scalar_deviation", wh.scalar_deviation},
          {"sufficient_condition_met", wh.sufficient_condition_met}};
    } catch (const InputError& e) {
      results["wh_controllability"] = {{"skipped", e.what()}};
    }
  }

  emit_report(make_report("controllability", file_digest(problem_path),
                          spec.seed, spec.tolerances, std::move(results)),
              out_path);
  return 0;
}

int cmd_closure(const std::string& problem_path, const std::string& which,
                const std::string& out_path, const std::string& basis_path) {
  const ProblemSpec spec = load_problem(problem_path);
  const LindbladGenerator gen = spec.generator();
  const Complex i_unit(0, 1);

  std::vector<Matrix> generators;
  std::string ambient;
  if (which == "kc") {
    ambient = "su(N)";
    for (const Matrix& h : gen.control_hamiltonians) {
      Matrix t = h;
      t -= (h.trace() / static_cast<double>(gen.dim)) *
           Matrix::Identity(gen.dim, gen.dim);
      generators.push_back(i_unit * t);
    }
  } else if (which == "kd") {
    ambient = "su(N)";
    std::vector<Matrix> hs = gen.control_hamiltonians;
    hs.insert(hs.begin(), gen.drift_hamiltonian);
    for (const Matrix& h : hs) {
      Matrix t = h;
      t -= (h.trace() / static_cast<double>(gen.dim)) *
           Matrix::Identity(gen.dim, gen.dim);
      generators.push_back(i_unit * t);
    }
  } else if (which == "open") {
    ambient = "gl(her0(N))";
    if (!is_unital(gen, spec.tolerances.unital_tol)) {
      throw InputError("closure --which open requires a unital generator");
    }
    const Superoperator drift = full_generator(
        gen,
        RealVector::Zero(static_cast<Eigen::Index>(gen.control_hamiltonians.size())));
    generators.push_back(restrict_to_traceless(drift).cast<Complex>());
    for (const Matrix& h : gen.control_hamiltonians) {
      Superoperator ih;
      ih.dim = gen.dim;
      ih.matrix = i_unit * hamiltonian_superop(h).matrix;
      generators.push_back(restrict_to_traceless(ih).cast<Complex>());
    }
  } else {
    throw InputError("--which must be kc, kd or open");
  }

  const int d = gen.dim * gen.dim;
  const LieBasis basis =
      lie_closure(generators, spec.tolerances.rank_tol, d * d + 8, ambient);

  json results;
  results["which"] = which;
  results["ambient"] = basis.ambient;
  results["dim"] = basis.dim;
  results["generations"] = basis.generations;
  results["certificate_residual"] = basis.certificate_residual;
  results["truncated"] = basis.truncated;
  results["ill_conditioned"] = basis.ill_conditioned;

  if (!basis_path.empty()) {
    json dump = json::array();
    for (const auto& e : basis.elements) dump.push_back(matrix_to_json(e));
    write_file(basis_path, dump.dump(2) + "\n");
    results["basis_file"] = basis_path;
  }

  emit_report(make_report("closure", file_digest(problem_path), spec.seed,
                          spec.tolerances, std::move(results)),
              out_path);
  return 0;
}

int cmd_optimize(const std::string& problem_path, const std::string& method,
                 int factors, int iters, int restarts, int cone_samples,
                 double require_fidelity, const std::string& out_prefix,
                 std::int64_t seed_override) {
  const ProblemSpec spec = load_problem(problem_path);
  ControlProblem problem = spec.control_problem();
  if (seed_override >= 0) {
    problem.seed = static_cast<std::uint64_t>(seed_override);
  }

  json results;
  if (method == "grape") {
    GrapeOptions opt;
    if (iters > 0) opt.max_iterations = iters;
    if (restarts > 0) opt.restarts = restarts;
    const GrapeResult r = grape_optimize(problem, opt);

    json pulse;
    pulse["dt"] = r.pulse.dt;
    pulse["segments"] = problem.segments;
    json amps = json::array();
    for (Eigen::Index k = 0; k < r.pulse.amplitudes.rows(); ++k) {
      json row = json::array();
      for (Eigen::Index j = 0; j < r.pulse.amplitudes.cols(); ++j) {
        row.push_back(r.pulse.amplitudes(k, j));
      }
      amps.push_back(row);
    }
    pulse["amplitudes"] = amps;
    pulse["fidelity"] = r.fidelity;
    write_file(out_prefix + ".pulse.json", pulse.dump(2) + "\n");

    std::ostringstream trace;
    trace << "step,fidelity\n";
    for (size_t i = 0; i < r.fidelity_trace.size(); ++i) {
      trace << i << "," << format_double(r.fidelity_trace[i]) << "\n";
    }
    write_file(out_prefix + ".trace.csv", trace.str());

    results["method"] = "grape";
    results["fidelity"] = r.fidelity;
    results["iterations"] = r.iterations;
    results["pulse_file"] = out_prefix + ".pulse.json";
    results["trace_file"] = out_prefix + ".trace.csv";
    emit_report(make_report("optimize", file_digest(problem_path), problem.seed,
                            spec.tolerances, std::move(results)),
                out_prefix + ".report.json");
    if (require_fidelity > 0.0 && r.fidelity < require_fidelity) {
      std::cerr << "optimize: fidelity " << r.fidelity
                << " below required " << require_fidelity << "\n";
      return 4;
    }
    return 0;
  }

  if (method == "wedge") {
    if (!std::holds_alternative<MapTarget>(problem.target)) {
      throw InputError("wedge optimization needs a map target");
    }
    const Superoperator gamma =
        dissipator_superop(problem.generator.dim, problem.generator.lindblad_ops);
    const GeneratorCone cone =
        conjugation_orbit_cone(gamma, cone_samples, problem.seed);
    QuantumChannel target = QuantumChannel::from_superop(
        problem.generator.dim, std::get<MapTarget>(problem.target).superop);

    WedgeOptimizeOptions opt;
    if (iters > 0) opt.max_iterations = iters;
    if (restarts > 0) opt.restarts = restarts;
    opt.seed = problem.seed;
    const WedgeOptimizeResult r =
        wedge_product_optimize(target, cone, std::max(1, factors), opt);

    json product;
    product["factors"] = r.factors;
    product["residual"] = r.residual;
    json hc = json::array(), cc = json::array();
    for (Eigen::Index i = 0; i < r.product.hamiltonian_coeffs.rows(); ++i) {
      json hrow = json::array(), crow = json::array();
      for (Eigen::Index m = 0; m < r.product.hamiltonian_coeffs.cols(); ++m) {
        hrow.push_back(r.product.hamiltonian_coeffs(i, m));
      }
      for (Eigen::Index k = 0; k < r.product.cone_coeffs.cols(); ++k) {
        crow.push_back(r.product.cone_coeffs(i, k));
      }
      hc.push_back(hrow);
      cc.push_back(crow);
    }
    product["hamiltonian_coeffs"] = hc;
    product["cone_coeffs"] = cc;
    write_file(out_prefix + ".product.json", product.dump(2) + "\n");

    std::ostringstream sched;
    sched << "factors,residual\n";
    for (const auto& [n, res] : r.schedule) {
      sched << n << "," << format_double(res) << "\n";
    }
    write_file(out_prefix + ".trace.csv", sched.str());

    results["method"] = "wedge";
    results["residual"] = r.residual;
    results["factors"] = r.factors;
    results["cone_generators"] = cone.generators.size();
    results["product_file"] = out_prefix + ".product.json";
    results["trace_file"] = out_prefix + ".trace.csv";
    emit_report(make_report("optimize", file_digest(problem_path), problem.seed,
                            spec.tolerances, std::move(results)),
                out_prefix + ".report.json");
    return 0;
  }

  throw InputError("--method must be grape or wedge");
}

int cmd_sweep(const std::string& problem_path, const std::string& grid_text,
              int iters, int restarts, const std::string& out_prefix,
              std::int64_t seed_override) {
  const ProblemSpec spec = load_problem(problem_path);
  ControlProblem problem = spec.control_problem();
  if (seed_override >= 0) problem.seed = static_cast<std::uint64_t>(seed_override);
  const std::vector<double> grid = parse_grid(grid_text);

  GrapeOptions opt;
  if (iters > 0) opt.max_iterations = iters;
  if (restarts > 0) opt.restarts = restarts;
  const SweepResult r = time_fidelity_sweep(problem, grid, opt);

  std::ostringstream csv;
  csv << "horizon,fidelity,discounted\n";
  for (const auto& p : r.points) {
    csv << format_double(p.horizon) << "," << format_double(p.fidelity) << ","
        << format_double(p.discounted) << "\n";
  }
  write_file(out_prefix + ".sweep.csv", csv.str());

  json results;
  results["sweep_file"] = out_prefix + ".sweep.csv";
  if (r.gamma) results["gamma"] = *r.gamma;
  results["best_discounted_horizon"] = r.best_discounted_horizon;
  emit_report(make_report("sweep", file_digest(problem_path), problem.seed,
                          spec.tolerances, std::move(results)),
              out_prefix + ".report.json");
  return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args) {
  CLI::App app{"open quantum system analysis and control"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "propagate the drift system");
  std::string sim_problem, sim_state, sim_out = "trajectory.csv";
  double sim_t_final = 1.0;
  int sim_steps = 100;
  simulate->add_option("--problem", sim_problem)->required();
  simulate->add_option("--t-final", sim_t_final);
  simulate->add_option("--steps", sim_steps);
  simulate->add_option("--initial-state", sim_state);
  simulate->add_option("--out", sim_out);

  // check-generator
  auto* checkgen = app.add_subcommand("check-generator",
                                      "classify a generator");
  std::string cg_problem, cg_out;
  checkgen->add_option("--problem", cg_problem)->required();
  checkgen->add_option("--out", cg_out);

  // check-channel
  auto* checkch = app.add_subcommand("check-channel", "classify a channel");
  std::string cc_matrix, cc_out;
  double cc_teff = 0.0;
  checkch->add_option("--matrix-file", cc_matrix)->required();
  checkch->add_option("--t-eff", cc_teff);
  checkch->add_option("--out", cc_out);

  // controllability
  auto* control = app.add_subcommand("controllability",
                                     "algebraic controllability analysis");
  std::string ct_problem, ct_out;
  bool ct_graph_only = false;
  control->add_option("--problem", ct_problem)->required();
  control->add_flag("--spin-graph-only", ct_graph_only);
  control->add_option("--out", ct_out);

  // closure
  auto* closure = app.add_subcommand("closure", "Lie closure dimensions");
  std::string cl_problem, cl_which = "open", cl_out, cl_basis;
  closure->add_option("--problem", cl_problem)->required();
  closure->add_option("--which", cl_which)
      ->check(CLI::IsMember({"kc", "kd", "open"}));
  closure->add_option("--out", cl_out);
  closure->add_option("--dump-basis", cl_basis);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "pulse or product synthesis");
  std::string op_problem, op_method = "grape", op_out = "optimize";
  int op_n = 1, op_iters = 0, op_restarts = 0, op_cone_samples = 64;
  double op_require = 0.0;
  std::int64_t op_seed = -1;
  optimize->add_option("--problem", op_problem)->required();
  optimize->add_option("--method", op_method)
      ->check(CLI::IsMember({"grape", "wedge"}));
  optimize->add_option("--n", op_n);
  optimize->add_option("--iters", op_iters);
  optimize->add_option("--restarts", op_restarts);
  optimize->add_option("--cone-samples", op_cone_samples);
  optimize->add_option("--require-fidelity", op_require);
  optimize->add_option("--out", op_out);
  optimize->add_option("--seed", op_seed);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "fidelity against total duration");
  std::string sw_problem, sw_grid, sw_out = "sweep";
  int sw_iters = 0, sw_restarts = 0;
  std::int64_t sw_seed = -1;
  sweep->add_option("--problem", sw_problem)->required();
  sweep->add_option("--t-grid", sw_grid)->required();
  sweep->add_option("--iters", sw_iters);
  sweep->add_option("--restarts", sw_restarts);
  sweep->add_option("--out", sw_out);
  sweep->add_option("--seed", sw_seed);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (simulate->parsed()) {
      code = cmd_simulate(sim_problem, sim_t_final, sim_steps, sim_state, sim_out);
    } else if (checkgen->parsed()) {
      code = cmd_check_generator(cg_problem, cg_out);
    } else if (checkch->parsed()) {
      code = cmd_check_channel(cc_matrix, cc_teff, cc_out);
    } else if (control->parsed()) {
      code = cmd_controllability(ct_problem, ct_graph_only, ct_out);
    } else if (closure->parsed()) {
      code = cmd_closure(cl_problem, cl_which, cl_out, cl_basis);
    } else if (optimize->parsed()) {
      code = cmd_optimize(op_problem, op_method, op_n, op_iters, op_restarts,
                          op_cone_samples, op_require, op_out, op_seed);
    } else if (sweep->parsed()) {
      code = cmd_sweep(sw_problem, sw_grid, sw_iters, sw_restarts, sw_out, sw_seed);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const UnreachableError& e) {
    std::cerr << "unreachable: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  // volatile metadata goes to stderr, never into report files
  std::cerr << "wall_time_ms=" << elapsed.count() << "\n";
  return code;
}

}  // namespace openqs
