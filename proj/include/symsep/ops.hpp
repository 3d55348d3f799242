#pragma once

// Tensor-product plumbing on dense matrices: Kronecker products, embedding
// of few-body operators into a larger factor chain, partial traces, and
// support computations.
//
// Index convention: the basis index of |b_0> (x) ... (x) |b_{N-1}| is
// sum_i b_i * n^(N-1-i), i.e. factor 0 is the most significant digit.

#include "symsep/core.hpp"

#include <algorithm>

namespace symsep {

namespace detail {

inline long tensor_stride(int n, int N, int slot) {
  return ipow(n, N - 1 - slot);
}

inline void check_slots(const std::vector<int>& slots, int N,
                        const std::string& what) {
  if (slots.empty()) throw dimension_error(what + ": empty slot list");
  std::vector<bool> seen(static_cast<std::size_t>(N), false);
  for (int s : slots) {
    if (s < 0 || s >= N) {
      throw dimension_error(what + ": slot " + std::to_string(s) +
                            " out of range for " + std::to_string(N) +
                            " factors");
    }
    if (seen[static_cast<std::size_t>(s)]) {
      throw dimension_error(what + ": slot " + std::to_string(s) +
                            " listed twice");
    }
    seen[static_cast<std::size_t>(s)] = true;
  }
}

// Offsets of every index of an n^m-dimensional sub-lattice placed on the
// given slots of an N-factor chain.
inline std::vector<long> slot_offsets(int n, int N,
                                      const std::vector<int>& slots) {
  const long count = ipow(n, static_cast<int>(slots.size()));
  std::vector<long> offsets(static_cast<std::size_t>(count), 0);
  for (long idx = 0; idx < count; ++idx) {
    long rem = idx;
    long off = 0;
    for (std::size_t j = slots.size(); j-- > 0;) {
      off += (rem % n) * tensor_stride(n, N, slots[j]);
      rem /= n;
    }
    offsets[static_cast<std::size_t>(idx)] = off;
  }
  return offsets;
}

}  // namespace detail

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

inline Vector tensor_power(const Vector& v, int count) {
  if (count < 1) throw dimension_error("tensor_power: count must be >= 1");
  Vector out = v;
  for (int i = 1; i < count; ++i) out = kron(out, v);
  return out;
}

// Places the k-factor operator a on the listed slots of an N-factor chain
// (factor j of a acts on slots[j]) and the identity everywhere else.
inline Matrix embed_on_slots(const Matrix& a, int n, int N,
                             const std::vector<int>& slots) {
  require_square(a, "embed_on_slots");
  const int k = static_cast<int>(slots.size());
  detail::check_slots(slots, N, "embed_on_slots");
  if (a.rows() != ipow(n, k)) {
    throw dimension_error("embed_on_slots: operator dimension " +
                          std::to_string(a.rows()) + " != n^k");
  }
  std::vector<int> rest;
  for (int s = 0; s < N; ++s) {
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) {
      rest.push_back(s);
    }
  }
  const long dim = ipow(n, N);
  const long da = a.rows();
  Matrix out = Matrix::Zero(dim, dim);
  const std::vector<long> on = detail::slot_offsets(n, N, slots);
  std::vector<long> off{0};
  if (!rest.empty()) off = detail::slot_offsets(n, N, rest);
  for (long t : off) {
    for (long r = 0; r < da; ++r) {
      for (long c = 0; c < da; ++c) {
        out(t + on[static_cast<std::size_t>(r)],
            t + on[static_cast<std::size_t>(c)]) += a(r, c);
      }
    }
  }
  return out;
}

// Traces out every factor not listed in keep; the output factors appear in
// the order keep lists them.
inline Matrix partial_trace(const Matrix& a, int n, int N,
                            const std::vector<int>& keep) {
  require_square(a, "partial_trace");
  if (a.rows() != ipow(n, N)) {
    throw dimension_error("partial_trace: matrix dimension " +
                          std::to_string(a.rows()) + " != n^N = " +
                          std::to_string(ipow(n, N)));
  }
  detail::check_slots(keep, N, "partial_trace");
  std::vector<int> traced;
  for (int s = 0; s < N; ++s) {
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) {
      traced.push_back(s);
    }
  }
  const std::vector<long> kept = detail::slot_offsets(n, N, keep);
  std::vector<long> gone{0};
  if (!traced.empty()) gone = detail::slot_offsets(n, N, traced);
  const long dk = static_cast<long>(kept.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long t : gone) {
    for (long r = 0; r < dk; ++r) {
      for (long c = 0; c < dk; ++c) {
        out(r, c) += a(t + kept[static_cast<std::size_t>(r)],
                       t + kept[static_cast<std::size_t>(c)]);
      }
    }
  }
  return out;
}

// Re(Tr(rho * a)); the imaginary part must vanish for valid operands.
inline double expectation(const DensityMatrix& rho,
                          const HermitianOperator& a) {
  if (rho.dim() != a.dim()) {
    throw dimension_error("expectation: state dim " +
                          std::to_string(rho.dim()) + " != operator dim " +
                          std::to_string(a.dim()));
  }
  const Complex tr =
      (rho.matrix().transpose().cwiseProduct(a.matrix())).sum();
  if (std::abs(tr.imag()) > 1e-10) {
    throw consistency_error("expectation: imaginary trace " +
                            std::to_string(tr.imag()));
  }
  return tr.real();
}

// Projector onto the span of eigenvectors with eigenvalue > eps; the least
// projector p with p rho p = rho at that resolution.
inline Projector support_projector(const DensityMatrix& rho,
                                   double eps = kEpsPositive) {
  const EigenSystem sys = eig_hermitian(rho.matrix());
  Matrix p = Matrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index j = 0; j < sys.values.size(); ++j) {
    if (sys.values(j) > eps) {
      p += sys.vectors.col(j) * sys.vectors.col(j).adjoint();
    }
  }
  return Projector(std::move(p));
}

inline bool is_supported_on(const DensityMatrix& rho, const Projector& p,
                            double eps = kEpsHermitian) {
  if (rho.dim() != p.dim()) {
    throw dimension_error("is_supported_on: state dim " +
                          std::to_string(rho.dim()) + " != projector dim " +
                          std::to_string(p.dim()));
  }
  const Matrix residual =
      (Matrix::Identity(p.dim(), p.dim()) - p.matrix()) * rho.matrix();
  return max_abs(residual) <= eps;
}

}  // namespace symsep
