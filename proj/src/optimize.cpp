#include "openqs/optimize.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "openqs/random.hpp"

namespace openqs {

namespace {

// ---------------------------------------------------------------------------
// GRAPE works in the real her(N) representation: the bilinear system reads
// X_dot = (A0 + sum_j u_j A_j) X with A0 the rep of -(i ad_{H_d} + Gamma)
// and A_j the rep of -i ad_{H_j}.

struct GrapeContext {
  int n = 0;
  int d = 0;  // n^2
  RealMatrix a0;
  std::vector<RealMatrix> aj;
  // state-transfer data
  bool map_target = false;
  RealVector r0, rf;
  double state_norm = 1.0;
  RealMatrix target0;  // traceless block of the map target
};

GrapeContext make_context(const ControlProblem& p) {
  GrapeContext ctx;
  ctx.n = p.generator.dim;
  ctx.d = ctx.n * ctx.n;
  const size_t m = p.generator.control_hamiltonians.size();
  const Superoperator drift =
      full_generator(p.generator, RealVector::Zero(static_cast<Eigen::Index>(m)));
  ctx.a0 = real_rep_full(Matrix(-drift.matrix), ctx.n);
  for (const Matrix& h : p.generator.control_hamiltonians) {
    ctx.aj.push_back(real_rep_full(
        Matrix(Complex(0, -1) * hamiltonian_superop(h).matrix), ctx.n));
  }
  if (std::holds_alternative<MapTarget>(p.target)) {
    ctx.map_target = true;
    const Matrix& t = std::get<MapTarget>(p.target).superop;
    if (t.rows() != ctx.d || t.cols() != ctx.d) {
      throw InputError("ControlProblem: map target must be n^2 x n^2");
    }
    const RealMatrix full = real_rep_full(t, ctx.n);
    ctx.target0 = full.block(1, 1, ctx.d - 1, ctx.d - 1);
  } else {
    const auto& st = std::get<StateTransferTarget>(p.target);
    const DensityMatrix rho0 = DensityMatrix::checked(st.rho0);
    const DensityMatrix rhof = DensityMatrix::checked(st.rho_final);
    if (rho0.dim != ctx.n || rhof.dim != ctx.n) {
      throw InputError("ControlProblem: state dimensions mismatch");
    }
    ctx.r0 = hermitian_coords(rho0.rho);
    ctx.rf = hermitian_coords(rhof.rho);
    ctx.state_norm = std::max(ctx.r0.norm() * ctx.rf.norm(), 1e-300);
  }
  return ctx;
}

RealMatrix segment_generator(const GrapeContext& ctx,
                             const Eigen::MatrixXd& u, int k) {
  RealMatrix m = ctx.a0;
  for (size_t j = 0; j < ctx.aj.size(); ++j) {
    m += u(k, static_cast<Eigen::Index>(j)) * ctx.aj[j];
  }
  return m;
}

struct PropagationCache {
  std::vector<RealMatrix> segment;  // E_k
  std::vector<RealMatrix> prefix;   // prefix[k] = E_k ... E_1, prefix[0] = I
  std::vector<RealMatrix> suffix;   // suffix[k] = E_n ... E_k, suffix[n+1] = I
};

PropagationCache propagate_segments(const GrapeContext& ctx,
                                    const Eigen::MatrixXd& u, double dt) {
  const int n_seg = static_cast<int>(u.rows());
  PropagationCache c;
  c.segment.resize(static_cast<size_t>(n_seg));
  c.prefix.resize(static_cast<size_t>(n_seg) + 1);
  c.suffix.resize(static_cast<size_t>(n_seg) + 2);
  c.prefix[0] = RealMatrix::Identity(ctx.d, ctx.d);
  for (int k = 0; k < n_seg; ++k) {
    c.segment[static_cast<size_t>(k)] =
        RealMatrix((dt * segment_generator(ctx, u, k)).exp());
    c.prefix[static_cast<size_t>(k) + 1] =
        c.segment[static_cast<size_t>(k)] * c.prefix[static_cast<size_t>(k)];
  }
  c.suffix[static_cast<size_t>(n_seg) + 1] = RealMatrix::Identity(ctx.d, ctx.d);
  for (int k = n_seg; k >= 1; --k) {
    c.suffix[static_cast<size_t>(k)] =
        c.suffix[static_cast<size_t>(k) + 1] * c.segment[static_cast<size_t>(k) - 1];
  }
  return c;
}

double fidelity_of(const GrapeContext& ctx, const RealMatrix& x_total) {
  if (ctx.map_target) {
    const RealMatrix x0 = x_total.block(1, 1, ctx.d - 1, ctx.d - 1);
    return (ctx.target0.transpose() * x0).trace() /
           static_cast<double>(ctx.d - 1);
  }
  return ctx.rf.dot(x_total * ctx.r0) / ctx.state_norm;
}

double fidelity_replaced(const GrapeContext& ctx, const PropagationCache& c,
                         int k, const RealMatrix& e_k) {
  const RealMatrix x = c.suffix[static_cast<size_t>(k) + 2] * e_k *
                       c.prefix[static_cast<size_t>(k)];
  return fidelity_of(ctx, x);
}

Eigen::MatrixXd grape_gradient(const GrapeContext& ctx,
                               const Eigen::MatrixXd& u, double dt,
                               const PropagationCache& cache, double rel_step) {
  const int n_seg = static_cast<int>(u.rows());
  const int m = static_cast<int>(u.cols());
  Eigen::MatrixXd grad(n_seg, m);
  for (int k = 0; k < n_seg; ++k) {
    for (int j = 0; j < m; ++j) {
      const double h = rel_step * std::max(1.0, std::abs(u(k, j)));
      Eigen::MatrixXd up = u, dn = u;
      up(k, j) += h;
      dn(k, j) -= h;
      const RealMatrix ep = RealMatrix((dt * segment_generator(ctx, up, k)).exp());
      const RealMatrix em = RealMatrix((dt * segment_generator(ctx, dn, k)).exp());
      grad(k, j) = (fidelity_replaced(ctx, cache, k, ep) -
                    fidelity_replaced(ctx, cache, k, em)) /
                   (2.0 * h);
    }
  }
  return grad;
}

Eigen::MatrixXd clip_amplitudes(Eigen::MatrixXd u,
                                const std::optional<double>& bound) {
  if (bound) {
    u = u.cwiseMax(-*bound).cwiseMin(*bound);
  }
  return u;
}

struct SingleRunResult {
  Eigen::MatrixXd u;
  double fidelity = 0.0;
  std::vector<double> trace;
  int iterations = 0;
};

SingleRunResult grape_single_run(const GrapeContext& ctx,
                                 const ControlProblem& p,
                                 Eigen::MatrixXd u,
                                 const GrapeOptions& opt) {
  const double dt = p.horizon / p.segments;
  u = clip_amplitudes(std::move(u), p.amplitude_bound);

  SingleRunResult run;
  PropagationCache cache = propagate_segments(ctx, u, dt);
  double f = fidelity_of(ctx, cache.prefix.back());
  if (!std::isfinite(f)) throw Error("grape: non-finite fidelity");
  run.trace.push_back(f);

  double alpha = 1.0;
  int stalled = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (f >= opt.stop_fidelity) break;
    const Eigen::MatrixXd grad = grape_gradient(ctx, u, dt, cache, opt.fd_step);
    const double gnorm = grad.norm();
    if (gnorm <= 1e-14) break;

    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Eigen::MatrixXd trial =
          clip_amplitudes(u + alpha * grad, p.amplitude_bound);
      const PropagationCache trial_cache = propagate_segments(ctx, trial, dt);
      const double f_trial = fidelity_of(ctx, trial_cache.prefix.back());
      if (!std::isfinite(f_trial)) throw Error("grape: non-finite fidelity");
      if (f_trial > f) {
        if (f_trial - f < 1e-13 * std::max(1.0, std::abs(f))) {
          ++stalled;
        } else {
          stalled = 0;
        }
        u = trial;
        cache = trial_cache;
        f = f_trial;
        run.trace.push_back(f);
        if (bt == 0) alpha *= 1.5;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    run.iterations = it + 1;
    if (!accepted || stalled >= 3) break;
  }
  run.u = u;
  run.fidelity = f;
  return run;
}

}  // namespace

ControlProblem ControlProblem::closed_analogue() const {
  ControlProblem closed = *this;
  closed.generator.lindblad_ops.clear();
  return closed;
}

double pulse_fidelity(const ControlProblem& p, const ControlPulse& pulse) {
  const GrapeContext ctx = make_context(p);
  const PropagationCache cache =
      propagate_segments(ctx, pulse.amplitudes, pulse.dt);
  return fidelity_of(ctx, cache.prefix.back());
}

double grape_fd_derivative(const ControlProblem& p, const ControlPulse& pulse,
                           int segment, int control, double step) {
  const GrapeContext ctx = make_context(p);
  const PropagationCache cache =
      propagate_segments(ctx, pulse.amplitudes, pulse.dt);
  Eigen::MatrixXd up = pulse.amplitudes, dn = pulse.amplitudes;
  up(segment, control) += step;
  dn(segment, control) -= step;
  const RealMatrix ep =
      RealMatrix((pulse.dt * segment_generator(ctx, up, segment)).exp());
  const RealMatrix em =
      RealMatrix((pulse.dt * segment_generator(ctx, dn, segment)).exp());
  return (fidelity_replaced(ctx, cache, segment, ep) -
          fidelity_replaced(ctx, cache, segment, em)) /
         (2.0 * step);
}

GrapeResult grape_optimize(const ControlProblem& p, const GrapeOptions& opt,
                           const std::optional<ControlPulse>& init) {
  if (p.segments < 1) throw InputError("grape: needs at least one segment");
  if (p.horizon <= 0.0) throw InputError("grape: horizon must be positive");
  const GrapeContext ctx = make_context(p);
  const int m = static_cast<int>(ctx.aj.size());

  GrapeResult best;
  best.fidelity = -std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, opt.restarts);
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd u0(p.segments, m);
    if (r == 0 && init) {
      if (init->amplitudes.rows() != p.segments ||
          init->amplitudes.cols() != m) {
        throw InputError("grape: init pulse shape mismatch");
      }
      u0 = init->amplitudes;
    } else {
      Rng rng(p.seed + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ull);
      for (int k = 0; k < p.segments; ++k) {
        for (int j = 0; j < m; ++j) {
          u0(k, j) = opt.init_amplitude * (2.0 * rng.uniform() - 1.0);
        }
      }
    }
    SingleRunResult run = grape_single_run(ctx, p, u0, opt);
    if (run.fidelity > best.fidelity) {
      best.fidelity = run.fidelity;
      best.pulse.dt = p.horizon / p.segments;
      best.pulse.amplitudes = run.u;
      best.fidelity_trace = run.trace;
      best.iterations = run.iterations;
    }
    if (best.fidelity >= opt.stop_fidelity) break;
  }
  return best;
}

SweepResult time_fidelity_sweep(const ControlProblem& p,
                                const std::vector<double>& t_grid,
                                const GrapeOptions& options) {
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
      throw InputError("time_fidelity_sweep: grid must be positive increasing");
    }
  }
  SweepResult result;
  double gamma = 0.0;
  if (is_unital(p.generator)) {
    const WhControllabilityReport wh = wh_controllability_test(p.generator);
    if (wh.gamma_scalar) {
      gamma = wh.gamma;
      result.gamma = gamma;
    }
  }

  std::optional<ControlPulse> warm;
  double best_disc = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    ControlProblem pt = p;
    pt.horizon = t;
    if (warm) warm->dt = t / p.segments;
    const GrapeResult r = grape_optimize(pt, options, warm);
    warm = r.pulse;
    SweepPoint point;
    point.horizon = t;
    point.fidelity = r.fidelity;
    point.discounted = r.fidelity * std::exp(-gamma * t);
    if (point.discounted > best_disc) {
      best_disc = point.discounted;
      result.best_discounted_horizon = t;
    }
    result.points.push_back(point);
  }
  return result;
}

// ---------------------------------------------------------------------------
// product-of-exponentials optimizer on her_0(N)

namespace {

struct WedgeContext {
  int d = 0;                       // n^2 - 1
  std::vector<RealMatrix> rot;     // rep of i ad_{F_m}
  const GeneratorCone* cone = nullptr;
  RealMatrix target0;
  double target_norm = 1.0;
};

RealMatrix factor_exponent(const WedgeContext& ctx, const WedgeProduct& w,
                           int i) {
  RealMatrix omega = RealMatrix::Zero(ctx.d, ctx.d);
  for (int m = 0; m < ctx.d; ++m) {
    omega -= w.hamiltonian_coeffs(i, m) * ctx.rot[static_cast<size_t>(m)];
  }
  for (size_t k = 0; k < ctx.cone->generators.size(); ++k) {
    const double lam = w.cone_coeffs(i, static_cast<Eigen::Index>(k));
    if (lam != 0.0) omega -= lam * ctx.cone->generators[k];
  }
  return omega;
}

struct WedgeEval {
  std::vector<RealMatrix> exponent;   // Omega_i
  std::vector<RealMatrix> factor;     // exp(Omega_i)
  std::vector<RealMatrix> prefix;     // prefix[i] = E_{i-1} ... E_1
  std::vector<RealMatrix> suffix;     // suffix[i] = E_n ... E_{i+1}
  RealMatrix product;
  double objective = 0.0;  // 0.5 ||P - T0||^2
};

WedgeEval evaluate(const WedgeContext& ctx, const WedgeProduct& w) {
  const int n = w.factors();
  WedgeEval ev;
  ev.exponent.resize(static_cast<size_t>(n));
  ev.factor.resize(static_cast<size_t>(n));
  ev.prefix.resize(static_cast<size_t>(n) + 1);
  ev.suffix.resize(static_cast<size_t>(n) + 1);
  ev.prefix[0] = RealMatrix::Identity(ctx.d, ctx.d);
  for (int i = 0; i < n; ++i) {
    ev.exponent[static_cast<size_t>(i)] = factor_exponent(ctx, w, i);
    ev.factor[static_cast<size_t>(i)] =
        RealMatrix(ev.exponent[static_cast<size_t>(i)].exp());
    ev.prefix[static_cast<size_t>(i) + 1] =
        ev.factor[static_cast<size_t>(i)] * ev.prefix[static_cast<size_t>(i)];
  }
  ev.suffix[static_cast<size_t>(n)] = RealMatrix::Identity(ctx.d, ctx.d);
  for (int i = n - 1; i >= 0; --i) {
    ev.suffix[static_cast<size_t>(i)] =
        ev.suffix[static_cast<size_t>(i) + 1] * ev.factor[static_cast<size_t>(i)];
  }
  ev.product = ev.prefix.back();
  ev.objective = 0.5 * (ev.product - ctx.target0).squaredNorm();
  return ev;
}

// Adjoint of the exponential derivative: <M, Dexp_W(D)> = <L(W^T, M), D>,
// with L(A, E) the top-right block of exp([[A, E], [0, A]]).
RealMatrix dexp_adjoint(const RealMatrix& w, const RealMatrix& m) {
  const Eigen::Index d = w.rows();
  RealMatrix block = RealMatrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = w.transpose();
  block.bottomRightCorner(d, d) = w.transpose();
  block.topRightCorner(d, d) = m;
  const RealMatrix e = block.exp();
  return e.topRightCorner(d, d);
}

void wedge_gradient(const WedgeContext& ctx, const WedgeProduct& w,
                    const WedgeEval& ev, Eigen::MatrixXd& grad_h,
                    Eigen::MatrixXd& grad_l) {
  const int n = w.factors();
  const int m_gens = static_cast<int>(ctx.cone->generators.size());
  grad_h.setZero(n, ctx.d);
  grad_l.setZero(n, m_gens);
  const RealMatrix r = ev.product - ctx.target0;
  for (int i = 0; i < n; ++i) {
    const RealMatrix m = ev.suffix[static_cast<size_t>(i) + 1].transpose() * r *
                         ev.prefix[static_cast<size_t>(i)].transpose();
    const RealMatrix d_omega = dexp_adjoint(ev.exponent[static_cast<size_t>(i)], m);
    for (int mm = 0; mm < ctx.d; ++mm) {
      grad_h(i, mm) = -(d_omega.cwiseProduct(ctx.rot[static_cast<size_t>(mm)])).sum();
    }
    for (int k = 0; k < m_gens; ++k) {
      grad_l(i, k) =
          -(d_omega.cwiseProduct(ctx.cone->generators[static_cast<size_t>(k)])).sum();
    }
  }
}

struct WedgeRun {
  WedgeProduct product;
  double objective = 0.0;
};

WedgeRun wedge_single_run(const WedgeContext& ctx, WedgeProduct w,
                          const WedgeOptimizeOptions& opt) {
  WedgeEval ev = evaluate(ctx, w);
  Eigen::MatrixXd grad_h, grad_l;
  Eigen::MatrixXd prev_h, prev_l, prev_gh, prev_gl;
  bool have_prev = false;
  int stalled = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    wedge_gradient(ctx, w, ev, grad_h, grad_l);
    const double gnorm = std::sqrt(grad_h.squaredNorm() + grad_l.squaredNorm());
    if (gnorm <= 1e-15) break;

    // Barzilai-Borwein candidate step, safeguarded by backtracking
    double alpha = 1.0 / std::max(gnorm, 1.0);
    if (have_prev) {
      const double sy = (w.hamiltonian_coeffs - prev_h).cwiseProduct(grad_h - prev_gh).sum() +
                        (w.cone_coeffs - prev_l).cwiseProduct(grad_l - prev_gl).sum();
      const double ss = (w.hamiltonian_coeffs - prev_h).squaredNorm() +
                        (w.cone_coeffs - prev_l).squaredNorm();
      if (sy > 1e-18 && ss > 0.0) {
        alpha = std::min(std::max(ss / sy, 1e-12), 1e8);
      }
    }
    prev_h = w.hamiltonian_coeffs;
    prev_l = w.cone_coeffs;
    prev_gh = grad_h;
    prev_gl = grad_l;
    have_prev = true;

    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      WedgeProduct trial = w;
      trial.hamiltonian_coeffs -= alpha * grad_h;
      trial.cone_coeffs =
          (trial.cone_coeffs - alpha * grad_l).cwiseMax(0.0);
      const WedgeEval trial_ev = evaluate(ctx, trial);
      if (trial_ev.objective < ev.objective) {
        if (ev.objective - trial_ev.objective <
            1e-17 * std::max(1.0, ev.objective)) {
          ++stalled;
        } else {
          stalled = 0;
        }
        w = std::move(trial);
        ev = trial_ev;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || stalled >= 5) break;
    if (std::sqrt(2.0 * ev.objective) / ctx.target_norm <= 0.2 * opt.tol) break;
  }
  return {std::move(w), ev.objective};
}

WedgeProduct random_product(const WedgeContext& ctx, int factors, Rng& rng) {
  const int m_gens = static_cast<int>(ctx.cone->generators.size());
  WedgeProduct w;
  w.hamiltonian_coeffs.setZero(factors, ctx.d);
  w.cone_coeffs.setZero(factors, m_gens);
  double gen_scale = 1.0;
  for (const auto& g : ctx.cone->generators) {
    gen_scale = std::max(gen_scale, g.norm());
  }
  for (int i = 0; i < factors; ++i) {
    for (int m = 0; m < ctx.d; ++m) {
      w.hamiltonian_coeffs(i, m) = 0.7 * rng.normal();
    }
    for (int k = 0; k < m_gens; ++k) {
      w.cone_coeffs(i, k) =
          rng.uniform() * 0.5 / (static_cast<double>(m_gens) * gen_scale);
    }
  }
  return w;
}

}  // namespace

RealMatrix wedge_factor_matrix(const WedgeProduct& product, int factor,
                               const GeneratorCone& cone) {
  WedgeContext ctx;
  ctx.d = cone.dim * cone.dim - 1;
  ctx.cone = &cone;
  const auto gm = gell_mann_basis(cone.dim);
  for (const auto& f : gm) {
    Superoperator ad;
    ad.dim = cone.dim;
    ad.matrix = Complex(0, 1) * hamiltonian_superop(f).matrix;
    ctx.rot.push_back(restrict_to_traceless(ad));
  }
  return RealMatrix(factor_exponent(ctx, product, factor).exp());
}

RealMatrix wedge_product_matrix(const WedgeProduct& product,
                                const GeneratorCone& cone) {
  RealMatrix p = RealMatrix::Identity(cone.dim * cone.dim - 1,
                                      cone.dim * cone.dim - 1);
  for (int i = 0; i < product.factors(); ++i) {
    p = wedge_factor_matrix(product, i, cone) * p;
  }
  return p;
}

WedgeOptimizeResult wedge_product_optimize(QuantumChannel& target,
                                           const GeneratorCone& cone,
                                           int factors,
                                           const WedgeOptimizeOptions& opt) {
  if (factors < 1) throw InputError("wedge_product_optimize: factors >= 1");
  if (cone.generators.empty()) {
    throw InputError("wedge_product_optimize: cone has no generators");
  }
  if (!is_trace_preserving(target, 1e-8)) {
    throw InputError("wedge_product_optimize: target must be trace-preserving");
  }

  WedgeContext ctx;
  ctx.d = cone.dim * cone.dim - 1;
  ctx.cone = &cone;
  const auto gm = gell_mann_basis(cone.dim);
  for (const auto& f : gm) {
    Superoperator ad;
    ad.dim = cone.dim;
    ad.matrix = Complex(0, 1) * hamiltonian_superop(f).matrix;
    ctx.rot.push_back(restrict_to_traceless(ad));
  }
  ctx.target0 = real_rep_traceless(target.matrix, cone.dim, 1e-7);
  ctx.target_norm = std::max(ctx.target0.norm(), 1e-300);

  WedgeOptimizeResult result;
  result.residual = std::numeric_limits<double>::infinity();
  std::optional<WedgeProduct> warm;

  for (int n = factors; n <= std::max(factors, opt.max_factors); ++n) {
    WedgeRun best_run;
    best_run.objective = std::numeric_limits<double>::infinity();
    const int restarts = std::max(1, opt.restarts);
    for (int r = 0; r < restarts; ++r) {
      WedgeProduct w0;
      Rng rng(opt.seed + 0x100 * static_cast<std::uint64_t>(n) +
              static_cast<std::uint64_t>(r));
      if (r == 0 && warm) {
        // extend the previous best with an identity factor
        w0.hamiltonian_coeffs.setZero(n, ctx.d);
        w0.cone_coeffs.setZero(n, static_cast<Eigen::Index>(cone.generators.size()));
        w0.hamiltonian_coeffs.topRows(warm->factors()) = warm->hamiltonian_coeffs;
        w0.cone_coeffs.topRows(warm->factors()) = warm->cone_coeffs;
      } else {
        w0 = random_product(ctx, n, rng);
      }
      WedgeRun run = wedge_single_run(ctx, std::move(w0), opt);
      if (run.objective < best_run.objective) best_run = std::move(run);
    }
    const double residual =
        std::sqrt(2.0 * best_run.objective) / ctx.target_norm;
    result.schedule.emplace_back(n, residual);
    if (residual < result.residual) {
      result.residual = residual;
      result.product = best_run.product;
      result.factors = n;
    }
    warm = best_run.product;
    if (result.residual <= opt.tol) break;
  }
  return result;
}

MinimalTimeResult minimal_time_estimate(const ControlProblem& p,
                                        double threshold,
                                        const std::vector<double>& t_grid,
                                        const GrapeOptions& options) {
  MinimalTimeResult result;
  result.best_fidelity = -std::numeric_limits<double>::infinity();
  const ControlProblem closed = p.closed_analogue();
  std::optional<ControlPulse> warm;
  for (double t : t_grid) {
    if (t < 0.0) throw InputError("minimal_time_estimate: negative duration");
    double f;
    if (t == 0.0) {
      // empty evolution: fidelity of the identity propagator
      ControlProblem pt = closed;
      pt.horizon = 1.0;
      ControlPulse idle;
      idle.dt = 0.0;
      idle.amplitudes.setZero(
          pt.segments,
          static_cast<Eigen::Index>(pt.generator.control_hamiltonians.size()));
      // dt = 0 propagators are the identity
      f = pulse_fidelity(pt, idle);
    } else {
      ControlProblem pt = closed;
      pt.horizon = t;
      if (warm) warm->dt = t / pt.segments;
      const GrapeResult r = grape_optimize(pt, options, warm);
      warm = r.pulse;
      f = r.fidelity;
    }
    if (f > result.best_fidelity) {
      result.best_fidelity = f;
      result.best_horizon = t;
    }
    if (f >= threshold) {
      result.reached = true;
      result.t_upper_bound = t;
      break;
    }
  }
  return result;
}

}  // namespace openqs
