#pragma once

// Convex decompositions of multi-particle states into pure product terms,
// and the constructive rewrite of a symmetric separable state as a mixture
// of identical-factor products psi^(x N).
//
// The rewrite rests on two facts about a state supported on the symmetric
// subspace: every pure product vector in a decomposition of it must itself
// lie in that subspace, and a symmetric product vector has all one-particle
// marginals equal and pure.  Recovering that marginal per term is the whole
// algorithm.

#include "symsep/core.hpp"
#include "symsep/ops.hpp"
#include "symsep/symmetric.hpp"

namespace symsep {

struct PureProductTerm {
  double weight = 0.0;
  std::vector<PureState> factors;
};

namespace detail {

inline void check_weights(const std::vector<double>& weights,
                          const std::string& what) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || w > 1.0) {
      throw validation_error(what + ": term weight " + std::to_string(w) +
                             " outside (0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kEpsTrace) {
    throw validation_error(what + ": weights sum to " + std::to_string(sum));
  }
}

}  // namespace detail

// Mixture of pure product vectors on N factors of dimension n each.
class SeparableDecomposition {
 public:
  SeparableDecomposition(int n, int N, std::vector<PureProductTerm> terms)
      : n_(n), N_(N), terms_(std::move(terms)) {
    if (n_ < 1 || N_ < 1) {
      throw dimension_error("separable decomposition: need n, N >= 1");
    }
    if (terms_.empty()) {
      throw validation_error("separable decomposition: no terms");
    }
    std::vector<double> weights;
    for (const PureProductTerm& t : terms_) {
      weights.push_back(t.weight);
      if (static_cast<int>(t.factors.size()) != N_) {
        throw dimension_error("separable decomposition: term has " +
                              std::to_string(t.factors.size()) +
                              " factors, expected " + std::to_string(N_));
      }
      for (const PureState& f : t.factors) {
        if (f.dim() != n_) {
          throw dimension_error("separable decomposition: factor dim " +
                                std::to_string(f.dim()) + " != n");
        }
      }
    }
    detail::check_weights(weights, "separable decomposition");
  }

  int n() const { return n_; }
  int N() const { return N_; }
  const std::vector<PureProductTerm>& terms() const { return terms_; }

 private:
  int n_;
  int N_;
  std::vector<PureProductTerm> terms_;
};

struct SymmetricProductTerm {
  double weight = 0.0;
  PureState state;
};

// Mixture of N-fold powers of one-particle states.
class SymmetricProductDecomposition {
 public:
  SymmetricProductDecomposition(int n, int N,
                                std::vector<SymmetricProductTerm> terms)
      : n_(n), N_(N), terms_(std::move(terms)) {
    if (n_ < 1 || N_ < 1) {
      throw dimension_error("symmetric product decomposition: need n, N >= 1");
    }
    if (terms_.empty()) {
      throw validation_error("symmetric product decomposition: no terms");
    }
    std::vector<double> weights;
    for (const SymmetricProductTerm& t : terms_) {
      weights.push_back(t.weight);
      if (t.state.dim() != n_) {
        throw dimension_error("symmetric product decomposition: state dim " +
                              std::to_string(t.state.dim()) + " != n");
      }
    }
    detail::check_weights(weights, "symmetric product decomposition");
  }

  int n() const { return n_; }
  int N() const { return N_; }
  const std::vector<SymmetricProductTerm>& terms() const { return terms_; }

 private:
  int n_;
  int N_;
  std::vector<SymmetricProductTerm> terms_;
};

inline Vector product_vector(const PureProductTerm& term) {
  Vector v = term.factors.front().amplitudes();
  for (std::size_t i = 1; i < term.factors.size(); ++i) {
    v = kron(v, term.factors[i].amplitudes());
  }
  return v;
}

inline DensityMatrix assemble(const SeparableDecomposition& d) {
  const long dim = ipow(d.n(), d.N());
  Matrix rho = Matrix::Zero(dim, dim);
  for (const PureProductTerm& t : d.terms()) {
    const Vector v = product_vector(t);
    rho += t.weight * (v * v.adjoint());
  }
  return DensityMatrix(std::move(rho));
}

inline DensityMatrix assemble(const SymmetricProductDecomposition& d) {
  const long dim = ipow(d.n(), d.N());
  Matrix rho = Matrix::Zero(dim, dim);
  for (const SymmetricProductTerm& t : d.terms()) {
    const Vector v = tensor_power(t.state.amplitudes(), d.N());
    rho += t.weight * (v * v.adjoint());
  }
  return DensityMatrix(std::move(rho));
}

// Writes each identical-factor term out as an explicit product term.
inline SeparableDecomposition expand_to_product_terms(
    const SymmetricProductDecomposition& d) {
  std::vector<PureProductTerm> terms;
  terms.reserve(d.terms().size());
  for (const SymmetricProductTerm& t : d.terms()) {
    terms.push_back(PureProductTerm{
        t.weight,
        std::vector<PureState>(static_cast<std::size_t>(d.N()), t.state)});
  }
  return SeparableDecomposition(d.n(), d.N(), std::move(terms));
}

// Rewrites a separable decomposition of a symmetric state term by term as a
// mixture of identical-factor products, preserving weights and term count.
//
// The recovered one-particle state takes the marginal's top eigenvector
// with its largest-magnitude component rotated to the positive real axis
// (ties broken by the lowest index).
inline SymmetricProductDecomposition symmetrize_decomposition(
    const SeparableDecomposition& d, double eps = 1e-8) {
  const int n = d.n();
  const int N = d.N();
  const Projector p_sym = symmetrizer(n, N, Parity::symmetric);
  const DensityMatrix rho = assemble(d);
  {
    const Matrix residual =
        (Matrix::Identity(p_sym.dim(), p_sym.dim()) - p_sym.matrix()) *
        rho.matrix();
    const double r = max_abs(residual);
    if (r > eps) {
      throw non_symmetric_state_error(
          "state is not supported on the symmetric subspace: residual " +
          std::to_string(r));
    }
  }

  std::vector<SymmetricProductTerm> out;
  out.reserve(d.terms().size());
  for (std::size_t i = 0; i < d.terms().size(); ++i) {
    const PureProductTerm& term = d.terms()[i];
    const Vector phi = product_vector(term);
    const double r = (phi - p_sym.matrix() * phi).norm();
    if (r > eps) {
      throw non_symmetric_term_error(
          "product term " + std::to_string(i) +
          " leaves the symmetric subspace: residual " + std::to_string(r));
    }
    const Matrix marginal =
        partial_trace(phi * phi.adjoint(), n, N, std::vector<int>{0});
    const EigenSystem sys = eig_hermitian(marginal);
    Vector psi = sys.vectors.col(sys.values.size() - 1);
    Eigen::Index anchor = 0;
    for (Eigen::Index j = 1; j < psi.size(); ++j) {
      if (std::abs(psi(j)) > std::abs(psi(anchor))) anchor = j;
    }
    const Complex c = psi(anchor);
    if (std::abs(c) > 0.0) psi *= std::conj(c) / std::abs(c);
    out.push_back(SymmetricProductTerm{term.weight, PureState(psi)});
  }
  return SymmetricProductDecomposition(n, N, std::move(out));
}

// Eigendecomposition of a state as a pure-state mixture, dropping
// eigenvalues at or below eps; weights descend.
inline std::vector<std::pair<double, PureState>> spectral_decomposition(
    const DensityMatrix& rho, double eps = kEpsPositive) {
  const EigenSystem sys = eig_hermitian(rho.matrix());
  std::vector<std::pair<double, PureState>> out;
  for (Eigen::Index j = sys.values.size() - 1; j >= 0; --j) {
    if (sys.values(j) > eps) {
      out.emplace_back(sys.values(j), PureState(sys.vectors.col(j)));
    }
  }
  return out;
}

// True when every product term of the decomposition lies in the range of p.
// When the assembled state is supported on p this holds automatically; a
// false result therefore flags either a violated precondition or
// inconsistent terms.
inline bool verify_component_support(const SeparableDecomposition& d,
                                     const Projector& p,
                                     double eps = 1e-8) {
  if (p.dim() != ipow(d.n(), d.N())) {
    throw dimension_error("verify_component_support: projector dim " +
                          std::to_string(p.dim()) + " != n^N");
  }
  for (const PureProductTerm& t : d.terms()) {
    const Vector phi = product_vector(t);
    if ((phi - p.matrix() * phi).norm() > eps) return false;
  }
  return true;
}

}  // namespace symsep
