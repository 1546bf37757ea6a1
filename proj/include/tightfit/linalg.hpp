#pragma once

// Small dense linear algebra: cyclic Jacobi eigensolver, SPD square roots,
// modified Gram-Schmidt and Haar sampling on O(n). Dimensions are expected to
// stay small (n <= ~16); nothing here is tuned for large problems.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "tightfit/errors.hpp"

namespace tightfit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute residual tolerance used when a caller does not pass one.
inline constexpr double kDefaultTol = 1e-9;

/// Seeded pseudo-random source. Single owner; pass by reference.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return uniform() < 0.5; }

  Vector normal_vector(Eigen::Index n);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
  /// Uniform point on the unit sphere S^{n-1}.
  Vector unit_vector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Symmetric positive-definite matrix. Construction validates symmetry
/// (relative 1e-12) and strict positivity of the spectrum, then stores the
/// exactly symmetrized matrix.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m);

  static SpdMatrix identity(Eigen::Index n);
  static SpdMatrix diagonal(const Vector& d);
  /// Q diag(values) Qᵀ; throws not_positive_definite unless all values > 0.
  static SpdMatrix from_spectrum(const Vector& values, const Matrix& vectors);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace(); }
  /// Ascending eigenvalues.
  Vector eigenvalues() const;
  SpdMatrix inverse() const;
  SpdMatrix scaled(double factor) const;

  operator const Matrix&() const noexcept { return m_; }

 private:
  struct Trusted {};
  SpdMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// Square matrix with orthonormal columns (QᵀQ = I within 1e-12).
class OrthogonalMatrix {
 public:
  explicit OrthogonalMatrix(const Matrix& q);

  static OrthogonalMatrix identity(Eigen::Index n);

  const Matrix& matrix() const noexcept { return q_; }
  Eigen::Index dim() const noexcept { return q_.rows(); }
  Vector column(Eigen::Index k) const { return q_.col(k); }
  double determinant() const { return q_.determinant(); }

  operator const Matrix&() const noexcept { return q_; }

 private:
  Matrix q_;
};

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

struct SymmetricEigen {
  Vector values;             // ascending
  OrthogonalMatrix vectors;  // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition: M = Q diag(λ) Qᵀ.
SymmetricEigen symmetric_eigen(const Matrix& m);

SpdMatrix spd_sqrt(const SpdMatrix& m);
SpdMatrix spd_inv_sqrt(const SpdMatrix& m);

/// Q R factorization by modified Gram-Schmidt (with one reorthogonalization
/// pass) where diag(R) > 0. Works for tall inputs (n x k, k <= n).
struct GramSchmidtResult {
  Matrix q;  // n x k, orthonormal columns
  Matrix r;  // k x k, upper triangular, positive diagonal
};
GramSchmidtResult gram_schmidt_qr(const Matrix& basis);

/// Orthonormalizes the columns of a square basis, preserving the flag
/// span(b_1..b_i) for every i.
OrthogonalMatrix gram_schmidt(const Matrix& basis);

OrthogonalMatrix haar_random_orthogonal(Eigen::Index n, Rng& rng);

/// Orthogonal projector onto span of the columns of `basis`.
Matrix column_space_projector(const Matrix& basis);

}  // namespace tightfit
