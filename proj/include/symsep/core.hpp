#pragma once

// Dense complex operator substrate for the symsep library: tolerance
// conventions, validated quantum-state wrappers, and a deterministic
// hermitian eigendecomposition that every higher-level routine shares.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symsep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default tolerances: hermiticity deviation, eigenvalue negativity, and
// trace / norm deviation.  Operations accept overrides where it matters.
inline constexpr double kEpsHermitian = 1e-10;
inline constexpr double kEpsPositive = 1e-10;
inline constexpr double kEpsTrace = 1e-10;

// Thrown when operand shapes cannot be combined (wrong tensor factor count,
// mismatched operator size, out-of-range slot index).
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a value fails its declared invariant (non-hermitian input,
// weights that do not sum to one, a vector that is not unit norm).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an internal cross-check fails; indicates a bug, not bad input.
struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Thrown when a state handed to the bosonic decomposition routine is not
// supported on the symmetric subspace.
struct non_symmetric_state_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an individual product term of an otherwise symmetric state
// leaves the symmetric subspace; signals inconsistent weights/factors.
struct non_symmetric_term_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void require_square(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw dimension_error(what + ": expected a nonempty square matrix, got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

inline bool is_hermitian(const Matrix& m, double eps = kEpsHermitian) {
  return m.rows() == m.cols() && max_abs(m - Matrix(m.adjoint())) <= eps;
}

inline long ipow(long base, int exp) {
  if (exp < 0) throw dimension_error("ipow: negative exponent");
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline long factorial(int n) {
  if (n < 0) throw dimension_error("factorial: negative argument");
  long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline long binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  long r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Ascending eigenvalues with deterministically fixed eigenvector phases:
// the first component whose magnitude exceeds 1e-8 of the column maximum is
// rotated to the positive real axis.  Within a degenerate cluster only the
// spanned subspace is meaningful; the returned basis of it is orthonormal.
struct EigenSystem {
  RealVector values;
  Matrix vectors;
};

inline EigenSystem eig_hermitian(const Matrix& a) {
  require_square(a, "eig_hermitian");
  if (!is_hermitian(a)) {
    throw validation_error("eig_hermitian: matrix is not hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw consistency_error("eig_hermitian: eigensolver did not converge");
  }
  EigenSystem sys{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index j = 0; j < sys.vectors.cols(); ++j) {
    auto col = sys.vectors.col(j);
    const double scale = col.cwiseAbs().maxCoeff();
    if (scale <= 0.0) continue;
    Eigen::Index anchor = 0;
    while (anchor + 1 < col.size() && std::abs(col(anchor)) <= 1e-8 * scale) {
      ++anchor;
    }
    const Complex c = col(anchor);
    if (std::abs(c) > 0.0) col *= std::conj(c) / std::abs(c);
  }
  return sys;
}

inline RealVector eigenvalues_hermitian(const Matrix& a) {
  require_square(a, "eigenvalues_hermitian");
  if (!is_hermitian(a)) {
    throw validation_error("eigenvalues_hermitian: matrix is not hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw consistency_error(
        "eigenvalues_hermitian: eigensolver did not converge");
  }
  return es.eigenvalues();
}

// Unit vector in C^d.
class PureState {
 public:
  explicit PureState(Vector amplitudes, double eps = kEpsTrace)
      : v_(std::move(amplitudes)) {
    if (v_.size() == 0) {
      throw validation_error("pure state: dimension must be positive");
    }
    const double norm2 = v_.squaredNorm();
    if (std::abs(norm2 - 1.0) > eps) {
      throw validation_error("pure state: vector is not unit norm, |psi|^2 = " +
                             std::to_string(norm2));
    }
  }

  const Vector& amplitudes() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  Matrix projector() const { return v_ * v_.adjoint(); }

 private:
  Vector v_;
};

// Square matrix equal to its own adjoint within eps.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m, double eps = kEpsHermitian)
      : m_(std::move(m)) {
    require_square(m_, "hermitian operator");
    const double dev = max_abs(m_ - Matrix(m_.adjoint()));
    if (dev > eps) {
      throw validation_error(
          "hermitian operator: |a - a^dagger|_max = " + std::to_string(dev));
    }
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

// Hermitian, positive semidefinite (eigenvalues >= -eps_p), unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m, double eps_h = kEpsHermitian,
                         double eps_p = kEpsPositive,
                         double eps_t = kEpsTrace)
      : m_(std::move(m)) {
    require_square(m_, "density matrix");
    const double dev = max_abs(m_ - Matrix(m_.adjoint()));
    if (dev > eps_h) {
      throw validation_error("density matrix: |rho - rho^dagger|_max = " +
                             std::to_string(dev));
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > eps_t) {
      throw validation_error("density matrix: trace = " + std::to_string(tr));
    }
    const double lo = eigenvalues_hermitian(m_).minCoeff();
    if (lo < -eps_p) {
      throw validation_error("density matrix: minimum eigenvalue = " +
                             std::to_string(lo));
    }
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

// Hermitian idempotent (p^2 = p within eps).  The zero matrix is a valid
// projector of rank zero.
class Projector {
 public:
  explicit Projector(Matrix m, double eps = kEpsHermitian) : m_(std::move(m)) {
    require_square(m_, "projector");
    const double herm = max_abs(m_ - Matrix(m_.adjoint()));
    if (herm > eps) {
      throw validation_error("projector: |p - p^dagger|_max = " +
                             std::to_string(herm));
    }
    const double idem = max_abs(m_ * m_ - m_);
    if (idem > eps) {
      throw validation_error("projector: |p^2 - p|_max = " +
                             std::to_string(idem));
    }
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  long rank() const { return std::lround(m_.trace().real()); }

 private:
  Matrix m_;
};

}  // namespace symsep
