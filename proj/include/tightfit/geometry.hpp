#pragma once

// Origin-centered ellipsoids, the SPD map between a nested pair, support
// functions and tangent hyperplanes, subspace restriction and the lifted
// inner product on R^{n+1}.

#include "tightfit/linalg.hpp"

namespace tightfit {

/// E = { x : xᵀ M x = 1 }. Always centered at the origin.
class Ellipsoid {
 public:
  explicit Ellipsoid(SpdMatrix form) : form_(std::move(form)) {}

  static Ellipsoid unit_sphere(Eigen::Index n);
  static Ellipsoid sphere(Eigen::Index n, double radius);
  static Ellipsoid from_semi_axes(const Vector& semi_axes);
  /// The image T·S^{n-1} of the unit sphere under an SPD map T.
  static Ellipsoid image_of_unit_sphere(const SpdMatrix& t);

  const SpdMatrix& form() const noexcept { return form_; }
  Eigen::Index dim() const noexcept { return form_.dim(); }
  /// s·E.
  Ellipsoid scaled(double s) const;
  /// xᵀ M x (1 on the surface).
  double quadratic(const Vector& x) const { return x.dot(form_.matrix() * x); }
  bool is_unit_sphere(double tol = 1e-12) const;

 private:
  SpdMatrix form_;
};

/// Oriented hyperplane { x : <x, w> = t } with unit normal w and t > 0, so
/// the origin lies on the side <x, w> < t.
class Hyperplane {
 public:
  Hyperplane(Vector normal, double offset);

  const Vector& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  double signed_distance(const Vector& x) const { return x.dot(normal_) - offset_; }

 private:
  Vector normal_;
  double offset_;
};

/// Unique SPD A with A·outer = inner, i.e. A M_in A = M_out.
SpdMatrix solve_mapping_matrix(const Ellipsoid& outer, const Ellipsoid& inner);

/// h_E(w) = max_{x in E} <x, w> = sqrt(wᵀ M⁻¹ w). Requires |w| = 1.
double support_value(const Ellipsoid& e, const Vector& w);

struct Tangency {
  Hyperplane plane;
  Vector point;
};

/// Supporting hyperplane of E with outward normal w and its contact point.
Tangency tangent_hyperplane(const Ellipsoid& e, const Vector& w);

/// Conjugation taking a pair to the form used by the theorems (one of the
/// ellipsoids becomes the unit sphere). x_normal = to_normal * x.
struct NormalForm {
  Matrix to_normal;
  Matrix from_normal;
  SpdMatrix mapping;  // SPD map outer -> inner in normalized coordinates
  bool identity;      // true when no conjugation was necessary
};

/// Nested pair of concentric ellipsoids (inner ⊂ conv(outer)) together with
/// the mapping matrix A.
class EllipsoidPair {
 public:
  /// Throws precondition if inner is not contained in conv(outer).
  EllipsoidPair(Ellipsoid outer, Ellipsoid inner);

  /// Inner = unit sphere, outer = { x : |Ax| = 1 } (simplex setting).
  static EllipsoidPair inner_sphere(const SpdMatrix& a);
  /// Outer = unit sphere, inner = A·S^{n-1} (parallelotope setting).
  static EllipsoidPair outer_sphere(const SpdMatrix& a);

  const Ellipsoid& outer() const noexcept { return outer_; }
  const Ellipsoid& inner() const noexcept { return inner_; }
  const SpdMatrix& mapping() const noexcept { return a_; }
  Eigen::Index dim() const noexcept { return outer_.dim(); }

  /// Conjugation with inner -> unit sphere.
  NormalForm inner_normal_form() const;
  /// Conjugation with outer -> unit sphere.
  NormalForm outer_normal_form() const;

  /// tr and tr² of the normal-form mapping. Both normal forms share the
  /// spectrum sqrt(λ(M_in⁻¹ M_out)), so these are conjugation invariant.
  double normalized_trace() const;
  double normalized_trace_sq() const;
  Vector normalized_spectrum() const;

 private:
  Ellipsoid outer_;
  Ellipsoid inner_;
  SpdMatrix a_;
};

/// Restriction of the pair to the subspace spanned by the orthonormal
/// columns of w (n x k): quadratic forms WᵀMW on R^k; its mapping is A_W.
EllipsoidPair restrict_pair(const EllipsoidPair& pair, const Matrix& w);

/// Â = A ⊕ (+1) and A₋ = A ⊕ (−1) on R^{n+1}.
class LiftedMetric {
 public:
  explicit LiftedMetric(const SpdMatrix& a);

  const Matrix& a_hat() const noexcept { return a_hat_; }
  const Matrix& a_minus() const noexcept { return a_minus_; }
  Eigen::Index dim() const noexcept { return a_hat_.rows() - 1; }

 private:
  Matrix a_hat_;
  Matrix a_minus_;
};

/// (v, 1) ∈ R^{n+1}.
Vector lift(const Vector& v);

/// <<(v,1), (u,1)>> = <Av, u> + 1.
double lifted_inner(const LiftedMetric& metric, const Vector& v, const Vector& u);

}  // namespace tightfit
