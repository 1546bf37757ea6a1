#pragma once

// Shared generators for the test binaries.

#include <cmath>

#include "tightfit/linalg.hpp"

namespace testing_support {

using namespace tightfit;

/// Random SPD matrix with eigenvalues uniform in [lo, hi] and Haar eigenvectors.
inline SpdMatrix random_spd(Eigen::Index n, Rng& rng, double lo = 0.2, double hi = 2.0) {
  Vector values(n);
  for (Eigen::Index i = 0; i < n; ++i) values[i] = lo + (hi - lo) * rng.uniform();
  return SpdMatrix::from_spectrum(values, haar_random_orthogonal(n, rng).matrix());
}

/// Random SPD mapping matrix with Σλ = target (power 1) or Σλ² = target
/// (power 2). Eigenvalues are drawn in [0.1, 1] before rescaling.
inline SpdMatrix random_mapping(Eigen::Index n, Rng& rng, double target, int power = 1) {
  Vector values(n);
  for (Eigen::Index i = 0; i < n; ++i) values[i] = 0.1 + 0.9 * rng.uniform();
  if (power == 1) {
    values *= target / values.sum();
  } else {
    values *= std::sqrt(target / values.squaredNorm());
  }
  return SpdMatrix::from_spectrum(values, haar_random_orthogonal(n, rng).matrix());
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
