#include "tightfit/constructions.hpp"

#include <cmath>

namespace tightfit {

namespace {

FitStatus status_of(const VerificationReport& r) {
  if (r.tight) return FitStatus::tight;
  if (r.fits) return FitStatus::fitting_not_tight;
  return FitStatus::not_fitting;
}

double marginal_flag(double deviation, double tol) {
  const double d = std::abs(deviation);
  return (d > tol && d <= 1e-6) ? 1.0 : 0.0;
}

// Q' = GS(L Q): the orthogonal matrix to feed a normal-form construction so
// that mapping the result back by L⁻¹ still has φ = Q.
OrthogonalMatrix conjugated_frame(const NormalForm& nf, const OrthogonalMatrix& q) {
  if (nf.identity) return q;
  return gram_schmidt(nf.to_normal * q.matrix());
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct RawSimplex {
  Matrix vertices;  // n x (n+1)
  std::vector<OrthogonalizationStep> steps;
};

RawSimplex orthogonalize(const Matrix& a, const Matrix& q) {
  const Eigen::Index n = a.rows();
  RawSimplex out;
  out.vertices = Matrix::Zero(n, n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector u = q.col(j);
    Vector base = Vector::Zero(n);  // v⋆ of the span of v_1..v_{j-1}
    Vector dir = u;
    if (j > 0) {
      const Matrix vj = out.vertices.leftCols(j);
      const Eigen::LDLT<Matrix> gram((vj.transpose() * a * vj).eval());
      base = vj * gram.solve(Vector::Constant(j, -1.0));
      dir = u - vj * gram.solve(vj.transpose() * (a * u));
    }
    // |A(base + τ dir)|² = 1
    const Vector a_dir = a * dir;
    const Vector a_base = a * base;
    const double qa = a_dir.squaredNorm();
    const double qb = 2.0 * a_base.dot(a_dir);
    const double qc = a_base.squaredNorm() - 1.0;
    require(qa > 1e-24, ErrorKind::degenerate, "adjusted orthogonalization: u_j lies in the span of earlier vertices");
    require(qc < -1e-12, ErrorKind::degenerate,
            "adjusted orthogonalization: step " + std::to_string(j + 1) +
                " line does not cross E_out transversally");
    const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    const double big = -0.5 * (qb + std::copysign(disc, qb));
    const double r1 = big / qa;
    const double r2 = qc / big;
    OrthogonalizationStep step;
    step.p = std::max(r1, r2);
    step.discarded_root = std::min(r1, r2);
    require(step.p > 0.0, ErrorKind::degenerate, "adjusted orthogonalization: vanishing u_j coefficient");

    out.vertices.col(j) = base + step.p * dir;
    const Matrix frame = q.leftCols(j + 1).transpose();
    Matrix kept = out.vertices.leftCols(j + 1);
    step.orientation = sign_of((frame * kept).determinant());
    kept.col(j) = base + step.discarded_root * dir;
    step.discarded_orientation = sign_of((frame * kept).determinant());
    out.steps.push_back(step);
  }
  out.vertices.col(n) = v_star_unchecked(SpdMatrix(a), out.vertices.leftCols(n));
  return out;
}

void fill_star_diagnostics(std::map<std::string, double>& diag, const Matrix& a, const Vector& vs) {
  const Vector avs = a * vs;
  diag["av_star_sq"] = avs.squaredNorm();
  diag["trace_from_av_star"] = 1.0 + (avs.squaredNorm() - 1.0) / (1.0 + avs.dot(vs));
}

}  // namespace

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::tight: return "tight";
    case FitStatus::fitting_not_tight: return "fitting-not-tight";
    case FitStatus::not_fitting: return "not-fitting";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// φ

OrthogonalMatrix phi(const Matrix& basis) { return gram_schmidt(basis); }

OrthogonalMatrix phi(const LabeledSimplex& s) { return gram_schmidt(s.vertices().leftCols(s.dim())); }

OrthogonalMatrix phi(const LabeledParallelotope& p) { return gram_schmidt(p.generators()); }

OrthogonalMatrix phi(const LabeledCrossPolytope& c) {
  return gram_schmidt(c.vertices().colwise().normalized());
}

// ---------------------------------------------------------------------------
// Fuss

LabeledParallelotope fuss_parallelotope_unconstrained(const EllipsoidPair& pair, const OrthogonalMatrix& q) {
  require(q.dim() == pair.dim(), ErrorKind::dimension_mismatch, "fuss_parallelotope: dimension mismatch");
  const NormalForm nf = pair.outer_normal_form();
  const Matrix frame = conjugated_frame(nf, q).matrix();
  Matrix gens = frame;
  for (Eigen::Index k = 0; k < gens.cols(); ++k) gens.col(k) *= (nf.mapping.matrix() * frame.col(k)).norm();
  return LabeledParallelotope(nf.from_normal * gens);
}

ConstructionResult<LabeledParallelotope> fuss_parallelotope(const EllipsoidPair& pair, const OrthogonalMatrix& q,
                                                            double tol) {
  const double trace_sq = pair.normalized_trace_sq();
  if (std::abs(trace_sq - 1.0) > tol) {
    Error e(ErrorKind::infeasible, "fuss_parallelotope: tr A² = " + std::to_string(trace_sq) + " differs from 1");
    e.with("trace_sq", trace_sq)
        .with("circumradius", std::sqrt(trace_sq))
        .with("required_inner_scale", 1.0 / std::sqrt(trace_sq))
        .with("marginal", marginal_flag(trace_sq - 1.0, tol));
    throw e;
  }
  LabeledParallelotope p = fuss_parallelotope_unconstrained(pair, q);
  VerificationReport report = verify(p, pair, tol);
  const FitStatus status = status_of(report);
  return {std::move(p), status, std::move(report),
          {{"trace", pair.normalized_trace()},
           {"trace_sq", trace_sq},
           {"marginal", 0.0},
           {"normalized", pair.outer().is_unit_sphere() ? 0.0 : 1.0}}};
}

ConstructionResult<LabeledCrossPolytope> fuss_cross_polytope(const EllipsoidPair& pair, const OrthogonalMatrix& q,
                                                             double tol) {
  require(q.dim() == pair.dim(), ErrorKind::dimension_mismatch, "fuss_cross_polytope: dimension mismatch");
  const double trace_sq = pair.normalized_trace_sq();
  if (std::abs(trace_sq - 1.0) > tol) {
    Error e(ErrorKind::infeasible, "fuss_cross_polytope: tr A² = " + std::to_string(trace_sq) + " differs from 1");
    e.with("trace_sq", trace_sq).with("marginal", marginal_flag(trace_sq - 1.0, tol));
    throw e;
  }
  const NormalForm nf = pair.inner_normal_form();
  const Matrix frame = conjugated_frame(nf, q).matrix();
  // Polar of the Fuss parallelotope for the pair (S, A·S): v_k = q_k / |A q_k|.
  Matrix verts = frame;
  for (Eigen::Index k = 0; k < verts.cols(); ++k) verts.col(k) /= (nf.mapping.matrix() * frame.col(k)).norm();
  LabeledCrossPolytope c(nf.from_normal * verts);
  VerificationReport report = verify(c, pair, tol);
  const FitStatus status = status_of(report);
  return {std::move(c), status, std::move(report),
          {{"trace", pair.normalized_trace()},
           {"trace_sq", trace_sq},
           {"marginal", 0.0},
           {"normalized", nf.identity ? 0.0 : 1.0}}};
}

// ---------------------------------------------------------------------------
// Simplices

Vector v_star_unchecked(const SpdMatrix& a, const Matrix& vertices) {
  const Eigen::Index n = a.dim();
  require(vertices.rows() == n && vertices.cols() == n, ErrorKind::dimension_mismatch,
          "v_star: expected n vertices in R^n");
  // ⟨⟨(v,1),(v_i,1)⟩⟩ = 0  <=>  (Vᵀ A) v = −𝟙
  const Eigen::FullPivLU<Matrix> lu((vertices.transpose() * a.matrix()).eval());
  require(lu.isInvertible(), ErrorKind::degenerate, "v_star: vertices are linearly dependent");
  return lu.solve(Vector::Constant(n, -1.0));
}

VStar v_star(const EllipsoidPair& pair, const Matrix& vertices, double tol) {
  require(vertices.rows() == pair.dim() && vertices.cols() == pair.dim(), ErrorKind::dimension_mismatch,
          "v_star: expected n vertices in R^n");
  const NormalForm nf = pair.inner_normal_form();
  const Matrix& a = nf.mapping.matrix();
  const Matrix v = nf.to_normal * vertices;
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    require(std::abs((a * v.col(i)).squaredNorm() - 1.0) <= tol, ErrorKind::precondition,
            "v_star: vertex " + std::to_string(i + 1) + " is not on E_out");
    for (Eigen::Index j = i + 1; j < n; ++j)
      require(std::abs(v.col(i).dot(a * v.col(j)) + 1.0) <= tol, ErrorKind::precondition,
              "v_star: vertices are not lifted-orthogonal");
  }
  const Vector vs = v_star_unchecked(nf.mapping, v);
  std::map<std::string, double> diag;
  fill_star_diagnostics(diag, a, vs);
  return {nf.from_normal * vs, diag["av_star_sq"], diag["trace_from_av_star"]};
}

SimplexConstruction adjusted_orthogonalization(const EllipsoidPair& pair, const OrthogonalMatrix& q, double tol) {
  require(q.dim() == pair.dim(), ErrorKind::dimension_mismatch, "adjusted_orthogonalization: dimension mismatch");
  const NormalForm nf = pair.inner_normal_form();
  const Matrix& a = nf.mapping.matrix();
  const double trace = a.trace();
  if (trace > 1.0 + tol) {
    Error e(ErrorKind::infeasible,
            "trace bound violated: tr A = " + std::to_string(trace) + " > 1, no simplex fits");
    e.with("trace", trace);
    throw e;
  }
  RawSimplex raw = orthogonalize(a, conjugated_frame(nf, q).matrix());

  SimplexConstruction out{{LabeledSimplex(nf.from_normal * raw.vertices), FitStatus::not_fitting, {}, {}}, {}};
  out.report = verify(out.polytope, pair, tol);
  out.status = status_of(out.report);
  out.diagnostics = {{"trace", trace},
                     {"trace_sq", a.squaredNorm()},
                     {"marginal", marginal_flag(trace - 1.0, tol)},
                     {"normalized", nf.identity ? 0.0 : 1.0}};
  fill_star_diagnostics(out.diagnostics, a, raw.vertices.col(a.rows()));
  out.steps = std::move(raw.steps);
  return out;
}

Matrix adjusted_orthogonalization_vertices(const SpdMatrix& a, const OrthogonalMatrix& q) {
  require(q.dim() == a.dim(), ErrorKind::dimension_mismatch, "adjusted_orthogonalization: dimension mismatch");
  return orthogonalize(a.matrix(), q.matrix()).vertices;
}

SimplexConstruction fitting_simplex_sweep(const EllipsoidPair& pair, const OrthogonalMatrix& q, double s, double tol) {
  const double trace = pair.normalized_trace();
  require(trace <= 1.0 + tol, ErrorKind::infeasible, "fitting_simplex_sweep: tr A > 1");
  require(s >= trace - tol && s <= 1.0 + tol, ErrorKind::precondition,
          "fitting_simplex_sweep: s must lie in [tr A, 1]");
  const EllipsoidPair aux(pair.outer().scaled(std::max(s, trace)), pair.inner());
  SimplexConstruction out = adjusted_orthogonalization(aux, q, tol);
  out.report = verify(out.polytope, pair, tol);
  out.status = status_of(out.report);
  out.diagnostics["trace"] = trace;
  out.diagnostics["sweep_s"] = s;
  return out;
}

// ---------------------------------------------------------------------------
// Families

double tetrahedron_f(double a, double b, double c, double x, double y, double z) {
  return 1.0 / (a * a * x * x) + 1.0 / (b * b * y * y) + 1.0 / (c * c * z * z);
}

TetrahedronMember tetrahedron_family(double a, double b, double c, double x, double y, double z, double tol) {
  require(a > 1.0 && b > 1.0 && c > 1.0, ErrorKind::precondition, "tetrahedron_family: semi-axes must exceed 1");
  require(x > 0.0 && y > 0.0 && z > 0.0, ErrorKind::precondition,
          "tetrahedron_family: (x,y,z) must lie in the open first octant");
  require(std::abs(x * x + y * y + z * z - 1.0) <= 1e-9, ErrorKind::precondition,
          "tetrahedron_family: (x,y,z) must be a unit vector");
  Matrix v(3, 4);
  v << a * x, a * x, -a * x, -a * x,  //
      b * y, -b * y, b * y, -b * y,   //
      c * z, -c * z, -c * z, c * z;
  LabeledSimplex s(v);
  EllipsoidPair pair(Ellipsoid::from_semi_axes(Eigen::Vector3d(a, b, c)), Ellipsoid::unit_sphere(3));
  const double f = tetrahedron_f(a, b, c, x, y, z);
  VerificationReport report = verify(s, pair, tol);
  return {std::move(s), f, 1.0 / std::sqrt(f), std::move(pair), std::move(report)};
}

Eigen::Vector3d tetrahedron_f_minimizer(double a, double b, double c) {
  const double tr = 1.0 / a + 1.0 / b + 1.0 / c;
  return Eigen::Vector3d(std::sqrt(1.0 / (a * tr)), std::sqrt(1.0 / (b * tr)), std::sqrt(1.0 / (c * tr)));
}

FakeCube fake_cube(double r, double s) {
  require(r > 0.0 && s >= 1.0, ErrorKind::precondition, "fake_cube: need r > 0 and s >= 1");
  const double hi = r * s, lo = r / s;
  Matrix v(3, 8);
  // Top rectangle at z = r, bottom rectangle at z = −r, both counterclockwise.
  v << hi, -hi, -hi, hi, lo, -lo, -lo, lo,  //
      lo, lo, -lo, -lo, hi, hi, -hi, -hi,   //
      r, r, r, r, -r, -r, -r, -r;
  const std::vector<std::vector<int>> faces = {
      {0, 1, 2, 3}, {4, 7, 6, 5},  // z = ±r
      {0, 3, 7, 4}, {1, 5, 6, 2},  // ±x trapezoids
      {0, 4, 5, 1}, {2, 6, 7, 3},  // ±y trapezoids
  };
  const double big_r = r * std::sqrt(s * s + 1.0 + 1.0 / (s * s));
  return {GeneralPolytope::from_facet_indices(v, faces),
          EllipsoidPair(Ellipsoid::sphere(3, big_r), Ellipsoid::sphere(3, r)), big_r, 3.0 * r / big_r};
}

double classical_radii_residual(double big_r, double r, double d, int k) {
  require(k == 3 || k == 4, ErrorKind::precondition, "classical_radii_residual: k must be 3 or 4");
  require(r > 0.0 && d >= 0.0 && d + r < big_r, ErrorKind::precondition,
          "classical_radii_residual: need r > 0, d >= 0 and d + r < R");
  const int e = k - 2;
  return 1.0 / std::pow(big_r - d, e) + 1.0 / std::pow(big_r + d, e) - 1.0 / std::pow(r, e);
}

}  // namespace tightfit
