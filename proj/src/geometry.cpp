#include "tightfit/geometry.hpp"

#include <cmath>

namespace tightfit {

namespace {

void require_unit(const Vector& w, const char* where) {
  require(std::abs(w.norm() - 1.0) <= 1e-9, ErrorKind::precondition,
          std::string(where) + ": direction must be a unit vector");
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

// ---------------------------------------------------------------------------
// Ellipsoid

Ellipsoid Ellipsoid::unit_sphere(Eigen::Index n) { return Ellipsoid(SpdMatrix::identity(n)); }

Ellipsoid Ellipsoid::sphere(Eigen::Index n, double radius) {
  require(radius > 0.0, ErrorKind::precondition, "Ellipsoid::sphere: radius must be positive");
  return Ellipsoid(SpdMatrix::diagonal(Vector::Constant(n, 1.0 / (radius * radius))));
}

Ellipsoid Ellipsoid::from_semi_axes(const Vector& semi_axes) {
  require(semi_axes.size() > 0 && semi_axes.minCoeff() > 0.0, ErrorKind::precondition,
          "Ellipsoid::from_semi_axes: semi-axes must be positive");
  return Ellipsoid(SpdMatrix::diagonal(semi_axes.cwiseProduct(semi_axes).cwiseInverse()));
}

Ellipsoid Ellipsoid::image_of_unit_sphere(const SpdMatrix& t) {
  // x = T y with |y| = 1  <=>  xᵀ T⁻² x = 1
  const Matrix t_inv = t.inverse().matrix();
  return Ellipsoid(SpdMatrix(symmetrized(t_inv * t_inv)));
}

Ellipsoid Ellipsoid::scaled(double s) const {
  require(s > 0.0, ErrorKind::precondition, "Ellipsoid::scaled: factor must be positive");
  return Ellipsoid(form_.scaled(1.0 / (s * s)));
}

bool Ellipsoid::is_unit_sphere(double tol) const {
  return (form_.matrix() - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// Hyperplane

Hyperplane::Hyperplane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  require(std::abs(normal_.norm() - 1.0) <= 1e-12, ErrorKind::precondition, "Hyperplane: normal must be unit");
  require(offset_ > 0.0, ErrorKind::origin_not_interior, "Hyperplane: offset must be positive");
}

// ---------------------------------------------------------------------------
// Mapping matrix, support, tangency

SpdMatrix solve_mapping_matrix(const Ellipsoid& outer, const Ellipsoid& inner) {
  require(outer.dim() == inner.dim(), ErrorKind::dimension_mismatch,
          "solve_mapping_matrix: ellipsoids have different dimensions");
  // A = C⁻¹ (C M_out C)^{1/2} C⁻¹ with C = M_in^{1/2}.
  const SpdMatrix c = spd_sqrt(inner.form());
  const SpdMatrix c_inv = spd_inv_sqrt(inner.form());
  const Matrix& cm = c.matrix();
  const SpdMatrix middle(symmetrized(cm * outer.form().matrix() * cm));
  const Matrix& ci = c_inv.matrix();
  return SpdMatrix(symmetrized(ci * spd_sqrt(middle).matrix() * ci));
}

double support_value(const Ellipsoid& e, const Vector& w) {
  require(w.size() == e.dim(), ErrorKind::dimension_mismatch, "support_value: dimension mismatch");
  require_unit(w, "support_value");
  const Vector y = e.form().matrix().ldlt().solve(w);
  return std::sqrt(w.dot(y));
}

Tangency tangent_hyperplane(const Ellipsoid& e, const Vector& w) {
  require(w.size() == e.dim(), ErrorKind::dimension_mismatch, "tangent_hyperplane: dimension mismatch");
  require_unit(w, "tangent_hyperplane");
  const Vector wn = w.normalized();
  const Vector y = e.form().matrix().ldlt().solve(wn);
  const double t = std::sqrt(wn.dot(y));
  return {Hyperplane(wn, t), y / t};
}

// ---------------------------------------------------------------------------
// EllipsoidPair

EllipsoidPair::EllipsoidPair(Ellipsoid outer, Ellipsoid inner)
    : outer_(std::move(outer)), inner_(std::move(inner)), a_(solve_mapping_matrix(outer_, inner_)) {
  const Vector spectrum = normalized_spectrum();
  require(spectrum.maxCoeff() <= 1.0 + 1e-9, ErrorKind::precondition,
          "EllipsoidPair: inner ellipsoid is not contained in the outer one");
}

EllipsoidPair EllipsoidPair::inner_sphere(const SpdMatrix& a) {
  const Eigen::Index n = a.dim();
  return EllipsoidPair(Ellipsoid(SpdMatrix(symmetrized(a.matrix() * a.matrix()))), Ellipsoid::unit_sphere(n));
}

EllipsoidPair EllipsoidPair::outer_sphere(const SpdMatrix& a) {
  return EllipsoidPair(Ellipsoid::unit_sphere(a.dim()), Ellipsoid::image_of_unit_sphere(a));
}

NormalForm EllipsoidPair::inner_normal_form() const {
  const Eigen::Index n = dim();
  if (inner_.is_unit_sphere()) {
    return {Matrix::Identity(n, n), Matrix::Identity(n, n), a_, true};
  }
  const Matrix l = spd_sqrt(inner_.form()).matrix();
  const Matrix l_inv = spd_inv_sqrt(inner_.form()).matrix();
  const SpdMatrix outer_form(symmetrized(l_inv * outer_.form().matrix() * l_inv));
  return {l, l_inv, spd_sqrt(outer_form), false};
}

NormalForm EllipsoidPair::outer_normal_form() const {
  const Eigen::Index n = dim();
  if (outer_.is_unit_sphere()) {
    return {Matrix::Identity(n, n), Matrix::Identity(n, n), a_, true};
  }
  const Matrix k = spd_sqrt(outer_.form()).matrix();
  const Matrix k_inv = spd_inv_sqrt(outer_.form()).matrix();
  const SpdMatrix inner_form(symmetrized(k_inv * inner_.form().matrix() * k_inv));
  return {k, k_inv, spd_inv_sqrt(inner_form), false};
}

Vector EllipsoidPair::normalized_spectrum() const {
  const Matrix l_inv = spd_inv_sqrt(inner_.form()).matrix();
  const Vector lambda = symmetric_eigen(symmetrized(l_inv * outer_.form().matrix() * l_inv)).values;
  return lambda.cwiseMax(0.0).cwiseSqrt();
}

double EllipsoidPair::normalized_trace() const { return normalized_spectrum().sum(); }

double EllipsoidPair::normalized_trace_sq() const { return normalized_spectrum().squaredNorm(); }

EllipsoidPair restrict_pair(const EllipsoidPair& pair, const Matrix& w) {
  require(w.rows() == pair.dim() && w.cols() >= 1, ErrorKind::dimension_mismatch,
          "restrict_pair: basis has wrong shape");
  const Eigen::Index k = w.cols();
  require((w.transpose() * w - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10, ErrorKind::degenerate,
          "restrict_pair: basis columns are not orthonormal");
  const Matrix outer = symmetrized(w.transpose() * pair.outer().form().matrix() * w);
  const Matrix inner = symmetrized(w.transpose() * pair.inner().form().matrix() * w);
  return EllipsoidPair(Ellipsoid(SpdMatrix(outer)), Ellipsoid(SpdMatrix(inner)));
}

// ---------------------------------------------------------------------------
// Lifted metric

LiftedMetric::LiftedMetric(const SpdMatrix& a) {
  const Eigen::Index n = a.dim();
  a_hat_ = Matrix::Zero(n + 1, n + 1);
  a_hat_.topLeftCorner(n, n) = a.matrix();
  a_minus_ = a_hat_;
  a_hat_(n, n) = 1.0;
  a_minus_(n, n) = -1.0;
}

Vector lift(const Vector& v) {
  Vector out(v.size() + 1);
  out << v, 1.0;
  return out;
}

double lifted_inner(const LiftedMetric& metric, const Vector& v, const Vector& u) {
  require(v.size() == metric.dim() && u.size() == metric.dim(), ErrorKind::dimension_mismatch,
          "lifted_inner: dimension mismatch");
  return lift(v).dot(metric.a_hat() * lift(u));
}

}  // namespace tightfit
