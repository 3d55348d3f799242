#pragma once

// Ground-state energies of k-local Hamiltonians with identical interaction
// terms on every k-subset of particles, reported per subset.
//
// Two routes are provided and deliberately kept independent: exact
// diagonalization of the N-particle operator compressed onto the symmetric
// subspace, and the mean-field (product ansatz) limit obtained by a damped
// self-consistent iteration.  The finite-N values increase monotonically
// with N and are bounded above by the mean-field value, which they approach
// as N grows.

#include "symsep/core.hpp"
#include "symsep/ops.hpp"
#include "symsep/random.hpp"
#include "symsep/symmetric.hpp"

#include <limits>
#include <string>

namespace symsep {

// Caps for the exact finite-N route: full space n^N and symmetric subspace.
inline constexpr long kMaxFullDim = 4096;
inline constexpr long kMaxSymmetricDim = 4000;

struct KLocalTerm {
  std::string name;
  HermitianOperator op;
};

// A family of k-body observables with a coefficient vector; the operator of
// interest is sum_i x_i * terms[i] acting on every k-subset of particles.
class KLocalSpec {
 public:
  KLocalSpec(int n, int k, std::vector<KLocalTerm> terms,
             std::vector<double> x)
      : n_(n), k_(k), terms_(std::move(terms)), x_(std::move(x)) {
    if (n_ < 1 || k_ < 1) {
      throw dimension_error("k-local spec: need n >= 1 and k >= 1");
    }
    if (terms_.empty()) {
      throw validation_error("k-local spec: no terms");
    }
    if (x_.size() != terms_.size()) {
      throw dimension_error("k-local spec: " + std::to_string(x_.size()) +
                            " coefficients for " +
                            std::to_string(terms_.size()) + " terms");
    }
    const long dim = ipow(n_, k_);
    for (const KLocalTerm& t : terms_) {
      if (t.op.dim() != dim) {
        throw dimension_error("k-local spec: term '" + t.name + "' has dim " +
                              std::to_string(t.op.dim()) + ", expected n^k = " +
                              std::to_string(dim));
      }
    }
  }

  int n() const { return n_; }
  int k() const { return k_; }
  const std::vector<KLocalTerm>& terms() const { return terms_; }
  const std::vector<double>& x() const { return x_; }

  KLocalSpec with_coefficients(std::vector<double> x) const {
    return KLocalSpec(n_, k_, terms_, std::move(x));
  }

 private:
  int n_;
  int k_;
  std::vector<KLocalTerm> terms_;
  std::vector<double> x_;
};

// sum_i x_i * terms[i] on a single k-subset.
inline HermitianOperator assemble_weighted(const KLocalSpec& spec) {
  const long dim = ipow(spec.n(), spec.k());
  Matrix a = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < spec.terms().size(); ++i) {
    a += spec.x()[i] * spec.terms()[i].op.matrix();
  }
  return HermitianOperator(std::move(a));
}

namespace detail {

inline int infer_factor_count(Eigen::Index dim, Eigen::Index n,
                              const std::string& what) {
  Eigen::Index d = 1;
  int k = 0;
  while (d < dim) {
    d *= n;
    ++k;
  }
  if (d != dim || k < 1) {
    throw dimension_error(what + ": operator dim " + std::to_string(dim) +
                          " is not a positive power of " + std::to_string(n));
  }
  return k;
}

}  // namespace detail

// One-particle operator B with <p|B|q> = sum over slots j of
// <psi..p_j..psi| a |psi..q_j..psi>.  It is the gradient map of
// f(psi) = <psi^k| a |psi^k> with respect to conj(psi), and satisfies
// <psi|B|psi> = k f(psi).
inline HermitianOperator effective_operator(const HermitianOperator& a,
                                            const PureState& psi) {
  const Eigen::Index n = psi.dim();
  const int k = detail::infer_factor_count(a.dim(), n, "effective_operator");
  Matrix b = Matrix::Zero(n, n);
  for (int j = 0; j < k; ++j) {
    // Columns of w are psi (x) ... (x) e_q (slot j) (x) ... (x) psi.
    Matrix w = Matrix::Identity(n, n);
    for (int s = 0; s < k; ++s) {
      if (s == j) continue;
      Matrix next(w.rows() * n, n);
      for (Eigen::Index q = 0; q < n; ++q) {
        if (s < j) {
          next.col(q) = kron(psi.amplitudes(), Vector(w.col(q)));
        } else {
          next.col(q) = kron(Vector(w.col(q)), psi.amplitudes());
        }
      }
      w = std::move(next);
    }
    b += w.adjoint() * a.matrix() * w;
  }
  return HermitianOperator(std::move(b));
}

// <psi^k| a |psi^k> for the inferred k.
inline double product_energy(const HermitianOperator& a,
                             const PureState& psi) {
  const int k =
      detail::infer_factor_count(a.dim(), psi.dim(), "product_energy");
  const Vector v = tensor_power(psi.amplitudes(), k);
  const Complex e = v.adjoint() * (a.matrix() * v);
  return e.real();
}

struct MeanFieldConfig {
  int restarts = 16;
  int max_iter = 500;
  double damping = 0.5;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct MeanFieldResult {
  double energy = 0.0;
  PureState minimizer;
  int iterations = 0;
  bool converged = false;
  std::vector<double> restart_energies;
};

// Minimizes f(psi) = <psi^k| a |psi^k> over unit vectors by damped
// self-consistent iteration with multi-start.
//
// Each step diagonalizes the effective operator at the current iterate,
// phase-aligns its lowest eigenvector v to the iterate (within a degenerate
// lowest cluster, gap < 1e-10, the member maximizing overlap is taken), and
// moves to normalize((1 - damping) psi + damping v).  The step damping is
// halved until the energy does not increase, so accepted iterates descend
// monotonically; a step with no acceptable size terminates the restart.
// Restarts draw independent seed-derived starting points; the best restart
// wins, ties broken by the lower restart index.
inline MeanFieldResult mean_field_minimize(const HermitianOperator& a, int k,
                                           const MeanFieldConfig& cfg = {}) {
  if (k < 1) throw dimension_error("mean_field_minimize: need k >= 1");
  if (cfg.restarts < 1 || cfg.max_iter < 1) {
    throw validation_error("mean_field_minimize: restarts and max_iter "
                           "must be positive");
  }
  if (!(cfg.damping > 0.0) || cfg.damping > 1.0) {
    throw validation_error("mean_field_minimize: damping outside (0, 1]");
  }
  Eigen::Index n = 1;
  {
    // Smallest integer n with n^k == dim(a).
    const double guess = std::pow(static_cast<double>(a.dim()),
                                  1.0 / static_cast<double>(k));
    n = static_cast<Eigen::Index>(std::llround(guess));
    if (n < 1 || ipow(n, k) != a.dim()) {
      throw dimension_error("mean_field_minimize: operator dim " +
                            std::to_string(a.dim()) + " is not n^" +
                            std::to_string(k));
    }
  }

  struct Best {
    double energy = std::numeric_limits<double>::infinity();
    Vector psi;
    int iterations = 0;
    bool converged = false;
  } best;
  std::vector<double> restart_energies;
  restart_energies.reserve(static_cast<std::size_t>(cfg.restarts));

  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_stream(cfg.seed, static_cast<std::uint64_t>(r)));
    PureState psi = rng.haar_state(static_cast<int>(n));
    double energy = product_energy(a, psi);
    bool converged = false;
    int iter = 0;
    for (; iter < cfg.max_iter; ++iter) {
      const HermitianOperator b = effective_operator(a, psi);
      const EigenSystem sys = eig_hermitian(b.matrix());

      // Lowest eigenvector; within a degenerate cluster, the direction
      // closest to the current iterate.
      Eigen::Index cluster = 1;
      while (cluster < sys.values.size() &&
             sys.values(cluster) - sys.values(0) < 1e-10) {
        ++cluster;
      }
      Vector v = sys.vectors.col(0);
      if (cluster > 1) {
        const auto basis = sys.vectors.leftCols(cluster);
        Vector proj = basis * (basis.adjoint() * psi.amplitudes());
        const double norm = proj.norm();
        if (norm > 1e-14) v = proj / norm;
      }
      const Complex overlap = psi.amplitudes().adjoint() * v;
      if (std::abs(overlap) > 0.0) v *= std::conj(overlap) / std::abs(overlap);

      // Damped update with backtracking so the energy never increases.
      double step = cfg.damping;
      bool accepted = false;
      PureState candidate = psi;
      double cand_energy = energy;
      for (int bt = 0; bt < 40; ++bt) {
        Vector mix = (1.0 - step) * psi.amplitudes() + step * v;
        const double norm = mix.norm();
        if (norm > 1e-14) {
          candidate = PureState(mix / norm);
          cand_energy = product_energy(a, candidate);
          if (cand_energy <= energy + 1e-15 * (1.0 + std::abs(energy))) {
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = true;  // no descent available at any step size
        break;
      }
      const double drop = energy - cand_energy;
      psi = candidate;
      energy = cand_energy;
      if (drop <= cfg.tol) {
        converged = true;
        ++iter;
        break;
      }
    }
    restart_energies.push_back(energy);
    if (energy < best.energy) {
      best = Best{energy, psi.amplitudes(), iter, converged};
    }
  }

  MeanFieldResult result{best.energy, PureState(best.psi), best.iterations,
                         best.converged, std::move(restart_energies)};
  const double recomputed = product_energy(a, result.minimizer);
  if (std::abs(recomputed - result.energy) > std::max(cfg.tol, 1e-12)) {
    throw consistency_error("mean_field_minimize: reported energy " +
                            std::to_string(result.energy) +
                            " does not match minimizer energy " +
                            std::to_string(recomputed));
  }
  return result;
}

// Exhaustive reference minimizers; slow but independent of the iteration.
// Grid version walks the Bloch sphere, so it requires n = 2.
inline double brute_force_minimize_grid(const HermitianOperator& a, int k,
                                        int n_theta, int n_phi) {
  const int n = static_cast<int>(
      std::llround(std::pow(static_cast<double>(a.dim()),
                            1.0 / static_cast<double>(k))));
  if (n != 2 || ipow(n, k) != a.dim()) {
    throw dimension_error(
        "brute_force_minimize_grid: Bloch grid requires one-particle dim 2");
  }
  if (n_theta < 2 || n_phi < 1) {
    throw validation_error("brute_force_minimize_grid: grid too small");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < n_theta; ++it) {
    const double theta =
        M_PI * static_cast<double>(it) / static_cast<double>(n_theta - 1);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi =
          2.0 * M_PI * static_cast<double>(ip) / static_cast<double>(n_phi);
      Vector v(2);
      v(0) = std::cos(theta / 2.0);
      v(1) = std::polar(std::sin(theta / 2.0), phi);
      best = std::min(best, product_energy(a, PureState(v)));
    }
  }
  return best;
}

inline double brute_force_minimize_sampled(const HermitianOperator& a, int k,
                                           int count, std::uint64_t seed) {
  if (count < 1) {
    throw validation_error("brute_force_minimize_sampled: count < 1");
  }
  const double guess = std::pow(static_cast<double>(a.dim()),
                                1.0 / static_cast<double>(k));
  const int n = static_cast<int>(std::llround(guess));
  if (n < 1 || ipow(n, k) != a.dim()) {
    throw dimension_error("brute_force_minimize_sampled: operator dim " +
                          std::to_string(a.dim()) + " is not n^k");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_stream(seed, static_cast<std::uint64_t>(i)));
    best = std::min(best, product_energy(a, rng.haar_state(n)));
  }
  return best;
}

struct FiniteNResult {
  int N = 0;
  double energy_per_subset = 0.0;
  int ground_multiplicity = 0;
};

// Exact ground energy for N particles: embeds the weighted k-body operator
// on every k-subset, compresses the sum onto the symmetric subspace, and
// divides the minimum eigenvalue by the subset count.
inline FiniteNResult finite_n_energy(const KLocalSpec& spec, int N) {
  const int k = spec.k();
  const int n = spec.n();
  if (N < k) {
    throw dimension_error("finite_n_energy: N = " + std::to_string(N) +
                          " < k = " + std::to_string(k));
  }
  const long full = ipow(n, N);
  const long dsym = binomial(n + N - 1, N);
  if (full > kMaxFullDim || dsym > kMaxSymmetricDim) {
    throw validation_error("finite_n_energy: n = " + std::to_string(n) +
                           ", N = " + std::to_string(N) +
                           " exceeds the exact-diagonalization budget");
  }
  const HermitianOperator a = assemble_weighted(spec);
  Matrix h = Matrix::Zero(full, full);
  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  while (true) {
    h += embed_on_slots(a.matrix(), n, N, subset);
    // Next k-combination of {0..N-1} in lexicographic order.
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == N - k + i) --i;
    if (i < 0) break;
    subset[static_cast<std::size_t>(i)] += 1;
    for (int j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] =
          subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  const SymmetricIsometry iso = dicke_basis(n, N);
  const Matrix compressed = iso.columns.adjoint() * h * iso.columns;
  const RealVector vals = eigenvalues_hermitian(compressed);
  const double lo = vals.minCoeff();
  const double tol = 1e-8 * std::max(1.0, std::abs(lo));
  int multiplicity = 0;
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    if (vals(j) <= lo + tol) ++multiplicity;
  }
  return FiniteNResult{N, lo / static_cast<double>(binomial(N, k)),
                       multiplicity};
}

struct DeFinettiReport {
  std::vector<FiniteNResult> finite;
  MeanFieldResult mean_field;
  std::vector<double> gaps;  // mean-field energy minus finite-N energy
};

// Per-subset energies for N = k .. n_max together with the mean-field
// limit.  The sequence must be monotone non-decreasing and bounded above by
// the mean-field value; violations beyond 1e-9 indicate an internal error.
inline DeFinettiReport definetti_convergence(const KLocalSpec& spec,
                                             int n_max,
                                             const MeanFieldConfig& cfg = {}) {
  if (n_max < spec.k()) {
    throw dimension_error("definetti_convergence: n_max = " +
                          std::to_string(n_max) + " < k");
  }
  DeFinettiReport report{
      {}, mean_field_minimize(assemble_weighted(spec), spec.k(), cfg), {}};
  for (int N = spec.k(); N <= n_max; ++N) {
    report.finite.push_back(finite_n_energy(spec, N));
  }
  for (std::size_t i = 1; i < report.finite.size(); ++i) {
    if (report.finite[i].energy_per_subset <
        report.finite[i - 1].energy_per_subset - 1e-9) {
      throw consistency_error(
          "definetti_convergence: energies decreased between N = " +
          std::to_string(report.finite[i - 1].N) + " and N = " +
          std::to_string(report.finite[i].N));
    }
  }
  if (!report.finite.empty() &&
      report.finite.back().energy_per_subset >
          report.mean_field.energy + 1e-9) {
    throw consistency_error(
        "definetti_convergence: finite-N energy exceeds the mean-field "
        "value");
  }
  for (const FiniteNResult& f : report.finite) {
    report.gaps.push_back(report.mean_field.energy - f.energy_per_subset);
  }
  return report;
}

}  // namespace symsep
