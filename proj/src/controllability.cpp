#include "openqs/controllability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace openqs {

namespace {

Matrix traceless_part(const Matrix& h) {
  const Eigen::Index n = h.rows();
  return h - (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
}

}  // namespace

LieBasis lie_closure(const std::vector<Matrix>& generators, double rank_tol,
                     int max_dim, const std::string& ambient) {
  LieBasis out;
  out.ambient = ambient;
  OrthonormalBasis onb = orthonormalize(generators, rank_tol);
  out.elements = std::move(onb.elements);
  if (out.elements.empty()) return out;

  // Sweep over all basis pairs; stop after the first sweep that adds no new
  // direction. That clean sweep doubles as the closure certificate.
  while (!out.truncated) {
    out.generations += 1;
    const size_t sz = out.elements.size();
    bool added = false;
    double worst = 0.0;
    for (size_t j = 1; j < sz && !out.truncated; ++j) {
      for (size_t i = 0; i < j; ++i) {
        Matrix cand = out.elements[i] * out.elements[j] -
                      out.elements[j] * out.elements[i];
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& b : out.elements) cand -= hs_inner_re(b, cand) * b;
        }
        const double n = hs_norm(cand);
        worst = std::max(worst, n);
        if (n > rank_tol) {
          if (static_cast<int>(out.elements.size()) >= max_dim) {
            out.truncated = true;
            break;
          }
          out.elements.push_back(cand / n);
          added = true;
        }
      }
    }
    if (!added) {
      out.certificate_residual = worst;
      break;
    }
  }
  out.dim = static_cast<int>(out.elements.size());
  const double loose = 1e-7;
  if (out.certificate_residual > rank_tol && out.certificate_residual <= loose) {
    out.ill_conditioned = true;
  }
  return out;
}

AccessibilityReport accessibility_test(const LindbladGenerator& g,
                                       double rank_tol) {
  if (!is_unital(g)) {
    throw InputError(
        "accessibility_test: generator is not unital; the traceless "
        "reduction does not apply (affine analysis not supported)");
  }
  const int n = g.dim;
  const int d = n * n - 1;

  std::vector<Matrix> gens;
  const Superoperator drift = full_generator(
      g, RealVector::Zero(static_cast<Eigen::Index>(g.control_hamiltonians.size())));
  gens.push_back(restrict_to_traceless(drift).cast<Complex>());
  for (const Matrix& h : g.control_hamiltonians) {
    const Superoperator hs = hamiltonian_superop(h);
    Superoperator ih;
    ih.dim = n;
    ih.matrix = Complex(0, 1) * hs.matrix;
    gens.push_back(restrict_to_traceless(ih).cast<Complex>());
  }

  AccessibilityReport rep;
  rep.basis = lie_closure(gens, rank_tol, d * d + 8, "gl(her0(N))");
  rep.dim = rep.basis.dim;
  rep.target_dim = d * d;
  rep.accessible = rep.dim == rep.target_dim;
  return rep;
}

SpinGraph SpinGraph::checked(int n,
                             std::vector<std::tuple<int, int, double>> couplings) {
  if (n < 1) throw InputError("SpinGraph: qubit count must be positive");
  std::set<std::pair<int, int>> seen;
  for (auto& [k, l, j] : couplings) {
    if (k < 1 || l < 1 || k > n || l > n || k >= l) {
      throw InputError("SpinGraph: couplings must satisfy 1 <= k < l <= n");
    }
    if (j == 0.0) throw InputError("SpinGraph: zero coupling listed as edge");
    if (!seen.emplace(k, l).second) {
      throw InputError("SpinGraph: duplicate edge");
    }
  }
  SpinGraph g;
  g.n = n;
  g.couplings = std::move(couplings);
  return g;
}

SpinGraphReport spin_graph_analysis(const SpinGraph& graph, bool verify_closure,
                                    double rank_tol) {
  // union-find over vertices
  std::vector<int> parent(static_cast<size_t>(graph.n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  };
  for (const auto& [k, l, j] : graph.couplings) {
    parent[static_cast<size_t>(find(k - 1))] = find(l - 1);
  }
  std::vector<int> sizes(static_cast<size_t>(graph.n), 0);
  for (int v = 0; v < graph.n; ++v) sizes[static_cast<size_t>(find(v))] += 1;
  SpinGraphReport rep;
  for (int s : sizes) {
    if (s > 0) rep.component_sizes.push_back(s);
  }
  std::sort(rep.component_sizes.rbegin(), rep.component_sizes.rend());

  std::ostringstream group;
  rep.predicted_dim = 0;
  for (size_t i = 0; i < rep.component_sizes.size(); ++i) {
    const long long dim_j = (1LL << (2 * rep.component_sizes[i])) - 1;
    rep.predicted_dim += dim_j;
    if (i) group << " x ";
    group << "SU(" << (1 << rep.component_sizes[i]) << ")";
  }
  rep.group = group.str();

  if (verify_closure && graph.n <= 3) {
    const int n = graph.n;
    Matrix h_d = Matrix::Zero(1 << n, 1 << n);
    for (const auto& [k, l, j] : graph.couplings) {
      h_d += j * (pauli_at(k - 1, n, 2) * pauli_at(l - 1, n, 2));
    }
    std::vector<Matrix> gens;
    const Complex i_unit(0, 1);
    if (hs_norm(h_d) > 0) gens.push_back(i_unit * h_d);
    for (int q = 0; q < n; ++q) {
      gens.push_back(i_unit * pauli_at(q, n, 0));
      gens.push_back(i_unit * pauli_at(q, n, 1));
    }
    const LieBasis basis = lie_closure(gens, rank_tol, 1 << (2 * n + 1), "su(N)");
    rep.verified_dim = basis.dim;
  }
  return rep;
}

HControllabilityReport h_controllability_test(const LindbladGenerator& g,
                                              double rank_tol) {
  std::vector<Matrix> gens;
  const Complex i_unit(0, 1);
  for (const Matrix& h : g.control_hamiltonians) {
    gens.push_back(i_unit * traceless_part(h));
  }
  const LieBasis basis = lie_closure(gens, rank_tol, g.dim * g.dim + 8, "su(N)");
  HControllabilityReport rep;
  rep.dim = basis.dim;
  rep.required = g.dim * g.dim - 1;
  rep.sufficient_condition_met = rep.dim == rep.required;
  return rep;
}

double WhControllabilityReport::lambda_bound(double t_star) const {
  return std::exp(gamma * t_star);
}

WhControllabilityReport wh_controllability_test(const LindbladGenerator& g,
                                                double rank_tol,
                                                double scalar_tol) {
  if (!is_unital(g)) {
    throw InputError("wh_controllability_test: generator must be unital");
  }
  std::vector<Matrix> gens;
  const Complex i_unit(0, 1);
  gens.push_back(i_unit * traceless_part(g.drift_hamiltonian));
  for (const Matrix& h : g.control_hamiltonians) {
    gens.push_back(i_unit * traceless_part(h));
  }
  const LieBasis basis = lie_closure(gens, rank_tol, g.dim * g.dim + 8, "su(N)");

  WhControllabilityReport rep;
  rep.dim = basis.dim;
  rep.required = g.dim * g.dim - 1;
  rep.drift_algebra_full = rep.dim == rep.required;

  const Superoperator gamma_hat = dissipator_superop(g.dim, g.lindblad_ops);
  const RealMatrix g0 = restrict_to_traceless(gamma_hat);
  const int d = g.dim * g.dim - 1;
  rep.gamma = g0.trace() / static_cast<double>(d);
  rep.scalar_deviation =
      (g0 - rep.gamma * RealMatrix::Identity(d, d)).norm();
  rep.gamma_scalar =
      rep.scalar_deviation <= scalar_tol * std::max(1.0, g0.norm()) &&
      rep.gamma >= -scalar_tol;
  rep.sufficient_condition_met = rep.drift_algebra_full && rep.gamma_scalar;
  return rep;
}

}  // namespace openqs
