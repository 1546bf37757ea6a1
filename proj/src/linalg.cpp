#include "tightfit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace tightfit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::not_positive_definite: return "not_positive_definite";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::origin_not_interior: return "origin_not_interior";
  }
  return "unknown";
}

Vector Rng::normal_vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

Vector Rng::unit_vector(Eigen::Index n) {
  for (;;) {
    Vector v = normal_vector(n);
    const double len = v.norm();
    if (len > 1e-300) return v / len;
  }
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi

SymmetricEigen symmetric_eigen(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorKind::dimension_mismatch, "symmetric_eigen: matrix is not square");
  require(is_symmetric(m), ErrorKind::precondition, "symmetric_eigen: matrix is not symmetric");
  const Eigen::Index n = m.rows();
  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);

  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-16 * scale) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  Vector values(n);
  Matrix vectors(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values[k] = a(order[k], order[k]);
    vectors.col(k) = v.col(order[k]);
  }
  return {values, OrthogonalMatrix(vectors)};
}

// ---------------------------------------------------------------------------
// SpdMatrix

SpdMatrix::SpdMatrix(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::dimension_mismatch,
          "SpdMatrix: matrix must be square and nonempty");
  require(is_symmetric(m), ErrorKind::precondition, "SpdMatrix: matrix is not symmetric");
  m_ = 0.5 * (m + m.transpose());
  const Vector values = symmetric_eigen(m_).values;
  require(values[0] > 0.0, ErrorKind::not_positive_definite,
          "SpdMatrix: smallest eigenvalue " + std::to_string(values[0]) + " is not positive");
}

SpdMatrix SpdMatrix::identity(Eigen::Index n) { return SpdMatrix(Matrix::Identity(n, n), Trusted{}); }

SpdMatrix SpdMatrix::diagonal(const Vector& d) {
  require(d.size() > 0 && d.minCoeff() > 0.0, ErrorKind::not_positive_definite,
          "SpdMatrix::diagonal: entries must be positive");
  return SpdMatrix(Matrix(d.asDiagonal()), Trusted{});
}

SpdMatrix SpdMatrix::from_spectrum(const Vector& values, const Matrix& vectors) {
  require(values.size() > 0 && values.minCoeff() > 0.0, ErrorKind::not_positive_definite,
          "SpdMatrix::from_spectrum: eigenvalues must be positive");
  Matrix m = vectors * values.asDiagonal() * vectors.transpose();
  m = (0.5 * (m + m.transpose())).eval();
  return SpdMatrix(std::move(m), Trusted{});
}

Vector SpdMatrix::eigenvalues() const { return symmetric_eigen(m_).values; }

SpdMatrix SpdMatrix::inverse() const {
  const auto eig = symmetric_eigen(m_);
  return from_spectrum(eig.values.cwiseInverse(), eig.vectors.matrix());
}

SpdMatrix SpdMatrix::scaled(double factor) const {
  require(factor > 0.0, ErrorKind::precondition, "SpdMatrix::scaled: factor must be positive");
  return SpdMatrix(factor * m_, Trusted{});
}

SpdMatrix spd_sqrt(const SpdMatrix& m) {
  const auto eig = symmetric_eigen(m.matrix());
  return SpdMatrix::from_spectrum(eig.values.cwiseSqrt(), eig.vectors.matrix());
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& m) {
  const auto eig = symmetric_eigen(m.matrix());
  return SpdMatrix::from_spectrum(eig.values.cwiseSqrt().cwiseInverse(), eig.vectors.matrix());
}

// ---------------------------------------------------------------------------
// OrthogonalMatrix

OrthogonalMatrix::OrthogonalMatrix(const Matrix& q) : q_(q) {
  require(q.rows() == q.cols() && q.rows() > 0, ErrorKind::dimension_mismatch,
          "OrthogonalMatrix: matrix must be square and nonempty");
  const double err = (q.transpose() * q - Matrix::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff();
  require(err <= 1e-12, ErrorKind::precondition,
          "OrthogonalMatrix: columns are not orthonormal (max |QᵀQ - I| = " + std::to_string(err) + ")");
}

OrthogonalMatrix OrthogonalMatrix::identity(Eigen::Index n) { return OrthogonalMatrix(Matrix::Identity(n, n)); }

// ---------------------------------------------------------------------------
// Gram-Schmidt

GramSchmidtResult gram_schmidt_qr(const Matrix& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  require(k >= 1 && k <= n, ErrorKind::dimension_mismatch, "gram_schmidt: need 1 <= columns <= rows");

  Matrix q = basis;
  Matrix r = Matrix::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double original = basis.col(j).norm();
    require(original > 0.0, ErrorKind::degenerate, "gram_schmidt: zero input vector");
    // Two MGS passes against the accepted columns.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double c = q.col(i).dot(q.col(j));
        r(i, j) += c;
        q.col(j) -= c * q.col(i);
      }
    }
    const double len = q.col(j).norm();
    // Relative loss of more than 12 digits means the input is numerically
    // rank deficient (condition number beyond 1e12).
    require(len > 1e-12 * original, ErrorKind::degenerate,
            "gram_schmidt: input vectors are linearly dependent");
    r(j, j) = len;
    q.col(j) /= len;
  }
  return {q, r};
}

OrthogonalMatrix gram_schmidt(const Matrix& basis) {
  require(basis.rows() == basis.cols(), ErrorKind::dimension_mismatch, "gram_schmidt: basis must be square");
  return OrthogonalMatrix(gram_schmidt_qr(basis).q);
}

OrthogonalMatrix haar_random_orthogonal(Eigen::Index n, Rng& rng) {
  require(n >= 1, ErrorKind::precondition, "haar_random_orthogonal: n must be positive");
  for (;;) {
    const Matrix g = rng.normal_matrix(n, n);
    GramSchmidtResult qr;
    try {
      qr = gram_schmidt_qr(g);
    } catch (const Error&) {
      continue;  // measure-zero event; redraw
    }
    Matrix q = qr.q;
    for (Eigen::Index j = 0; j < n; ++j)
      if (rng.coin()) q.col(j) = -q.col(j);
    return OrthogonalMatrix(q);
  }
}

Matrix column_space_projector(const Matrix& basis) {
  const Matrix q = gram_schmidt_qr(basis).q;
  return q * q.transpose();
}

}  // namespace tightfit
