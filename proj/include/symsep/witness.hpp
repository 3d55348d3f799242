#pragma once

// Entanglement witnesses for permutation structure: the two-particle swap
// expectation (negative only on entangled states, -1 on the antisymmetric
// subspace) and the minimum eigenvalue under partial transposition.

#include "symsep/core.hpp"
#include "symsep/ops.hpp"

namespace symsep {

// F |i,j> = |j,i> on C^n (x) C^n.
inline Matrix swap_operator(int n) {
  if (n < 1) throw dimension_error("swap_operator: need n >= 1");
  const long dim = static_cast<long>(n) * n;
  Matrix f = Matrix::Zero(dim, dim);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      f(j * n + i, i * n + j) = 1.0;
    }
  }
  return f;
}

// Tr(F rho): >= 0 on separable two-particle states, -1 on states supported
// on the antisymmetric subspace.
inline double swap_witness(const DensityMatrix& rho, int n) {
  if (rho.dim() != static_cast<long>(n) * n) {
    throw dimension_error("swap_witness: state dim " +
                          std::to_string(rho.dim()) + " != n^2");
  }
  return expectation(rho, HermitianOperator(swap_operator(n)));
}

// Transposes the listed factors: row and column digits on those slots are
// exchanged entry by entry.
inline Matrix partial_transpose(const Matrix& m, int n, int N,
                                const std::vector<int>& slots) {
  require_square(m, "partial_transpose");
  if (m.rows() != ipow(n, N)) {
    throw dimension_error("partial_transpose: matrix dimension " +
                          std::to_string(m.rows()) + " != n^N");
  }
  detail::check_slots(slots, N, "partial_transpose");
  Matrix out(m.rows(), m.cols());
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      long r2 = r;
      long c2 = c;
      for (int s : slots) {
        const long stride = detail::tensor_stride(n, N, s);
        const long rd = (r / stride) % n;
        const long cd = (c / stride) % n;
        r2 += (cd - rd) * stride;
        c2 += (rd - cd) * stride;
      }
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

// Minimum eigenvalue after transposing the given factor subset; a negative
// value certifies entanglement across that bipartition.  The subset must be
// a nonempty proper part of the factors.
inline double ppt_min_eigenvalue(const DensityMatrix& rho, int n, int N,
                                 const std::vector<int>& transposed) {
  if (rho.dim() != ipow(n, N)) {
    throw dimension_error("ppt_min_eigenvalue: state dim " +
                          std::to_string(rho.dim()) + " != n^N");
  }
  if (static_cast<int>(transposed.size()) >= N) {
    throw dimension_error(
        "ppt_min_eigenvalue: transposed subset must be a proper subset");
  }
  const Matrix pt = partial_transpose(rho.matrix(), n, N, transposed);
  return eigenvalues_hermitian(pt).minCoeff();
}

}  // namespace symsep
