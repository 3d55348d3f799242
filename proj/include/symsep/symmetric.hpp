#pragma once

// Permutation action on tensor factors and the bosonic (symmetric) /
// fermionic (antisymmetric) subspace machinery: symmetrizers, the Dicke
// occupation basis, and compression of operators onto the symmetric
// subspace.

#include "symsep/core.hpp"
#include "symsep/ops.hpp"

#include <numeric>

namespace symsep {

// Explicit permutation sums grow as N!; this cap keeps them tractable.
inline constexpr int kMaxPermutationFactors = 8;

// Bijection of factor positions {0, ..., N-1};  images[i] is where factor i
// is sent.  Acting on a product vector, the factor originally at position i
// ends up at position images[i].
struct PermutationMap {
  std::vector<int> images;

  explicit PermutationMap(std::vector<int> imgs) : images(std::move(imgs)) {
    detail::check_slots(images, static_cast<int>(images.size()),
                        "permutation");
  }

  static PermutationMap identity(int N) {
    std::vector<int> imgs(static_cast<std::size_t>(N));
    std::iota(imgs.begin(), imgs.end(), 0);
    return PermutationMap(std::move(imgs));
  }

  int size() const { return static_cast<int>(images.size()); }

  PermutationMap inverse() const {
    std::vector<int> inv(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      inv[static_cast<std::size_t>(images[i])] = static_cast<int>(i);
    }
    return PermutationMap(std::move(inv));
  }

  // Composition acting as "first pi, then tau".
  static PermutationMap compose(const PermutationMap& tau,
                                const PermutationMap& pi) {
    if (tau.size() != pi.size()) {
      throw dimension_error("permutation compose: size mismatch");
    }
    std::vector<int> imgs(pi.images.size());
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      imgs[i] = tau.images[static_cast<std::size_t>(pi.images[i])];
    }
    return PermutationMap(std::move(imgs));
  }

  // +1 for even, -1 for odd, via cycle count.
  int sign() const {
    std::vector<bool> seen(images.size(), false);
    int transpositions = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (seen[i]) continue;
      int len = 0;
      std::size_t j = i;
      while (!seen[j]) {
        seen[j] = true;
        j = static_cast<std::size_t>(images[j]);
        ++len;
      }
      transpositions += len - 1;
    }
    return transpositions % 2 == 0 ? 1 : -1;
  }
};

namespace detail {

// Destination of a basis index under a factor permutation: the digit at
// slot j moves to slot images[j].
inline long permute_index(long idx, int n, int N,
                          const std::vector<int>& images) {
  long out = 0;
  for (int j = N - 1; j >= 0; --j) {
    out += (idx % n) * tensor_stride(n, N, images[static_cast<std::size_t>(j)]);
    idx /= n;
  }
  return out;
}

}  // namespace detail

inline Vector permute_factors(const Vector& v, const PermutationMap& pi,
                              int n, int N) {
  if (pi.size() != N) {
    throw dimension_error("permute_factors: permutation size " +
                          std::to_string(pi.size()) + " != N");
  }
  if (v.size() != ipow(n, N)) {
    throw dimension_error("permute_factors: vector dimension " +
                          std::to_string(v.size()) + " != n^N");
  }
  Vector out(v.size());
  for (long s = 0; s < v.size(); ++s) {
    out(detail::permute_index(s, n, N, pi.images)) = v(s);
  }
  return out;
}

inline Matrix permutation_matrix(const PermutationMap& pi, int n) {
  const int N = pi.size();
  const long dim = ipow(n, N);
  Matrix u = Matrix::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    u(detail::permute_index(s, n, N, pi.images), s) = 1.0;
  }
  return u;
}

enum class Parity { symmetric, antisymmetric };

// Projector (1/N!) sum over permutations (signed for the antisymmetric
// parity).  The antisymmetric projector is legitimately zero when N > n.
inline Projector symmetrizer(int n, int N, Parity parity) {
  if (n < 1 || N < 1) {
    throw dimension_error("symmetrizer: need n >= 1 and N >= 1");
  }
  if (N > kMaxPermutationFactors) {
    throw validation_error("symmetrizer: N = " + std::to_string(N) +
                           " exceeds the explicit-sum cap of " +
                           std::to_string(kMaxPermutationFactors));
  }
  const long dim = ipow(n, N);
  const double weight = 1.0 / static_cast<double>(factorial(N));
  Matrix acc = Matrix::Zero(dim, dim);
  std::vector<int> imgs(static_cast<std::size_t>(N));
  std::iota(imgs.begin(), imgs.end(), 0);
  do {
    PermutationMap pi(imgs);
    const double coeff =
        parity == Parity::antisymmetric ? pi.sign() * weight : weight;
    for (long s = 0; s < dim; ++s) {
      acc(detail::permute_index(s, n, N, imgs), s) += coeff;
    }
  } while (std::next_permutation(imgs.begin(), imgs.end()));
  return Projector(std::move(acc));
}

// Occupation numbers of the n levels; sums to N.
struct DickeLabel {
  std::vector<int> counts;
};

// Isometry from the occupation basis into (C^n)^(x N): columns are the
// normalized symmetric superpositions of all arrangements with the given
// occupation counts, ordered by lexicographically ascending label.
struct SymmetricIsometry {
  int n = 0;
  int N = 0;
  std::vector<DickeLabel> labels;
  Matrix columns;  // ipow(n, N) rows, binomial(n+N-1, N) columns

  Eigen::Index full_dim() const { return columns.rows(); }
  Eigen::Index symmetric_dim() const { return columns.cols(); }
};

inline SymmetricIsometry dicke_basis(int n, int N) {
  if (n < 1 || N < 1) {
    throw dimension_error("dicke_basis: need n >= 1 and N >= 1");
  }
  const long dim = ipow(n, N);
  const long d_sym = binomial(n + N - 1, N);
  SymmetricIsometry iso;
  iso.n = n;
  iso.N = N;
  iso.columns = Matrix::Zero(dim, d_sym);

  // Enumerate occupation labels in lexicographically ascending order.
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  counts[static_cast<std::size_t>(n - 1)] = N;
  long col = 0;
  while (true) {
    iso.labels.push_back(DickeLabel{counts});
    long arrangements = factorial(N);
    for (int c : counts) arrangements /= factorial(c);
    const double coeff = 1.0 / std::sqrt(static_cast<double>(arrangements));

    // The sorted word enumerates each distinct arrangement exactly once.
    std::vector<int> word;
    word.reserve(static_cast<std::size_t>(N));
    for (int level = 0; level < n; ++level) {
      word.insert(word.end(),
                  static_cast<std::size_t>(counts[static_cast<std::size_t>(level)]),
                  level);
    }
    do {
      long idx = 0;
      for (int i = 0; i < N; ++i) {
        idx = idx * n + word[static_cast<std::size_t>(i)];
      }
      iso.columns(idx, col) = coeff;
    } while (std::next_permutation(word.begin(), word.end()));

    // Next label: increment the rightmost position that can carry more,
    // scanning from the second-to-last level leftwards.
    int i = n - 2;
    while (i >= 0) {
      int tail = 0;
      for (int j = i + 1; j < n; ++j) {
        tail += counts[static_cast<std::size_t>(j)];
      }
      if (tail > 0) break;
      --i;
    }
    if (i < 0) break;
    counts[static_cast<std::size_t>(i)] += 1;
    int rest = 0;
    for (int j = i + 1; j < n; ++j) {
      rest += counts[static_cast<std::size_t>(j)];
      counts[static_cast<std::size_t>(j)] = 0;
    }
    counts[static_cast<std::size_t>(n - 1)] = rest - 1;
    ++col;
  }
  if (col + 1 != d_sym) {
    throw consistency_error("dicke_basis: enumerated " +
                            std::to_string(col + 1) + " labels, expected " +
                            std::to_string(d_sym));
  }
  return iso;
}

inline HermitianOperator compress_to_symmetric(const HermitianOperator& a,
                                               const SymmetricIsometry& v) {
  if (a.dim() != v.full_dim()) {
    throw dimension_error("compress_to_symmetric: operator dim " +
                          std::to_string(a.dim()) + " != n^N = " +
                          std::to_string(v.full_dim()));
  }
  return HermitianOperator(v.columns.adjoint() * a.matrix() * v.columns);
}

inline bool is_symmetric_state(const DensityMatrix& rho, int n, int N,
                               Parity parity, double eps = kEpsHermitian) {
  if (rho.dim() != ipow(n, N)) {
    throw dimension_error("is_symmetric_state: state dim " +
                          std::to_string(rho.dim()) + " != n^N");
  }
  return is_supported_on(rho, symmetrizer(n, N, parity), eps);
}

}  // namespace symsep
