#include "tightfit/polytopes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tightfit {

namespace {

// |det| of the columns relative to the product of their lengths; a
// scale-free measure of how far a basis is from degenerate.
double relative_volume(const Matrix& columns) {
  double norms = 1.0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) norms *= columns.col(j).norm();
  if (norms == 0.0) return 0.0;
  return std::abs(columns.fullPivLu().determinant()) / norms;
}

void require_square_basis(const Matrix& m, const char* what) {
  require(m.rows() >= 1 && m.rows() == m.cols(), ErrorKind::dimension_mismatch,
          std::string(what) + ": expected n vectors in R^n");
  require(relative_volume(m) > 1e-12, ErrorKind::degenerate, std::string(what) + ": vectors are linearly dependent");
}

Hyperplane plane_from_dual_vector(const Vector& y) {
  const double len = y.norm();
  return Hyperplane(y / len, 1.0 / len);
}

// Orders the columns of `points` (all on a common plane with normal `axis`)
// counterclockwise around the axis.
std::vector<int> cyclic_order(const std::vector<int>& indices, const Matrix& points, const Vector& axis) {
  Vector center = Vector::Zero(points.rows());
  for (int i : indices) center += points.col(i);
  center /= static_cast<double>(indices.size());
  const Vector a = axis.normalized();
  Vector e1 = points.col(indices.front()) - center;
  e1 -= e1.dot(a) * a;
  e1.normalize();
  const Vector e2 = Eigen::Vector3d(a).cross(Eigen::Vector3d(e1));
  std::vector<std::pair<double, int>> keyed;
  for (int i : indices) {
    const Vector d = points.col(i) - center;
    keyed.emplace_back(std::atan2(d.dot(e2), d.dot(e1)), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (const auto& [angle, i] : keyed) out.push_back(i);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Labeled types

LabeledSimplex::LabeledSimplex(Matrix vertices) : vertices_(std::move(vertices)) {
  const Eigen::Index n = vertices_.rows();
  require(n >= 1 && vertices_.cols() == n + 1, ErrorKind::dimension_mismatch,
          "LabeledSimplex: expected n+1 vertices in R^n");
  Matrix lifted(n + 1, n + 1);
  lifted.topRows(n) = vertices_;
  lifted.row(n).setOnes();
  require(relative_volume(lifted) > 1e-12, ErrorKind::degenerate, "LabeledSimplex: vertices are affinely dependent");
  // Barycentric coordinates of the origin.
  Vector rhs = Vector::Zero(n + 1);
  rhs[n] = 1.0;
  const Vector lambda = lifted.fullPivLu().solve(rhs);
  require(lambda.minCoeff() > 1e-12, ErrorKind::origin_not_interior,
          "LabeledSimplex: origin is not interior to the simplex");
}

LabeledParallelotope::LabeledParallelotope(Matrix generators) : generators_(std::move(generators)) {
  require_square_basis(generators_, "LabeledParallelotope");
}

LabeledCrossPolytope::LabeledCrossPolytope(Matrix vertices) : vertices_(std::move(vertices)) {
  require_square_basis(vertices_, "LabeledCrossPolytope");
}

// ---------------------------------------------------------------------------
// GeneralPolytope

GeneralPolytope::GeneralPolytope(Matrix vertices, std::vector<Facet> facets)
    : vertices_(std::move(vertices)), facets_(std::move(facets)) {
  const Eigen::Index n = vertices_.rows();
  require(n >= 1 && vertices_.cols() > n, ErrorKind::dimension_mismatch,
          "GeneralPolytope: need more than n vertices in R^n");
  require(facets_.size() > static_cast<std::size_t>(n), ErrorKind::dimension_mismatch,
          "GeneralPolytope: need more than n facets");
  const double tol = 1e-9 * std::max(1.0, vertices_.colwise().norm().maxCoeff());
  for (const Facet& f : facets_) {
    require(f.plane.normal().size() == n, ErrorKind::dimension_mismatch, "GeneralPolytope: facet normal dimension");
    require(f.vertices.size() >= static_cast<std::size_t>(n), ErrorKind::degenerate,
            "GeneralPolytope: facet with fewer than n vertices");
    for (int i : f.vertices) {
      require(i >= 0 && i < vertices_.cols(), ErrorKind::precondition, "GeneralPolytope: facet index out of range");
      require(std::abs(f.plane.signed_distance(vertices_.col(i))) <= tol, ErrorKind::degenerate,
              "GeneralPolytope: facet vertex off its plane");
    }
    for (Eigen::Index i = 0; i < vertices_.cols(); ++i) {
      require(f.plane.signed_distance(vertices_.col(i)) <= tol, ErrorKind::degenerate,
              "GeneralPolytope: vertex outside a facet half-space");
    }
  }
}

GeneralPolytope GeneralPolytope::from_facet_indices(Matrix vertices, const std::vector<std::vector<int>>& facets) {
  std::vector<Facet> out;
  out.reserve(facets.size());
  for (const auto& idx : facets) {
    Matrix pts(vertices.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      require(idx[k] >= 0 && idx[k] < vertices.cols(), ErrorKind::precondition,
              "GeneralPolytope: facet index out of range");
      pts.col(static_cast<Eigen::Index>(k)) = vertices.col(idx[k]);
    }
    const Hyperplane plane = plane_through(pts);
    // A vertex beyond the plane means the origin was on the wrong side.
    const double tol = 1e-9 * std::max(1.0, vertices.colwise().norm().maxCoeff());
    for (Eigen::Index i = 0; i < vertices.cols(); ++i)
      require(plane.signed_distance(vertices.col(i)) <= tol, ErrorKind::origin_not_interior,
              "GeneralPolytope: origin is not interior");
    out.push_back({idx, plane});
  }
  return GeneralPolytope(std::move(vertices), std::move(out));
}

Eigen::Index dim(const Polytope& p) {
  return std::visit([](const auto& x) { return x.dim(); }, p);
}

const char* kind_name(const Polytope& p) {
  switch (p.index()) {
    case 0: return "simplex";
    case 1: return "parallelotope";
    case 2: return "crosspolytope";
    default: return "general";
  }
}

Hyperplane plane_through(const Matrix& points) {
  const Eigen::Index n = points.rows();
  require(points.cols() >= n, ErrorKind::degenerate, "plane_through: need at least n points");
  // Solve <p_k, y> = 1 for all k; the plane is <x, y/|y|> = 1/|y|.
  const Matrix pt = points.transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr(pt);
  qr.setThreshold(1e-12);
  require(qr.rank() == n, ErrorKind::degenerate, "plane_through: points do not span a hyperplane");
  const Vector ones = Vector::Ones(points.cols());
  const Vector y = qr.solve(ones);
  const double misfit = (pt * y - ones).cwiseAbs().maxCoeff();
  require(misfit <= 1e-9, misfit > 1e-3 ? ErrorKind::origin_not_interior : ErrorKind::degenerate,
          "plane_through: points are not coplanar, or the plane contains the origin");
  return plane_from_dual_vector(y);
}

// ---------------------------------------------------------------------------
// Facet enumeration

std::vector<Hyperplane> simplex_facets(const LabeledSimplex& s) {
  const Eigen::Index n = s.dim();
  std::vector<Hyperplane> planes;
  planes.reserve(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i <= n; ++i) {
    Matrix others(n, n);
    for (Eigen::Index j = 0, k = 0; j <= n; ++j)
      if (j != i) others.col(k++) = s.vertices().col(j);
    planes.push_back(plane_through(others));
  }
  return planes;
}

GeneralPolytope to_general(const LabeledSimplex& s) {
  const Eigen::Index n = s.dim();
  const auto planes = simplex_facets(s);
  std::vector<Facet> facets;
  for (Eigen::Index i = 0; i <= n; ++i) {
    std::vector<int> idx;
    for (Eigen::Index j = 0; j <= n; ++j)
      if (j != i) idx.push_back(static_cast<int>(j));
    facets.push_back({idx, planes[static_cast<std::size_t>(i)]});
  }
  return GeneralPolytope(s.vertices(), std::move(facets));
}

Matrix parallelotope_vertices(const LabeledParallelotope& p) {
  const Eigen::Index n = p.dim();
  const Eigen::Index count = Eigen::Index{1} << n;
  Matrix out(n, count);
  for (Eigen::Index mask = 0; mask < count; ++mask) {
    Vector v = Vector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) v += ((mask >> k) & 1 ? 1.0 : -1.0) * p.generators().col(k);
    out.col(mask) = v;
  }
  return out;
}

GeneralPolytope to_general(const LabeledParallelotope& p) {
  const Eigen::Index n = p.dim();
  const Matrix verts = parallelotope_vertices(p);
  // Facet k± is { x : ±(G⁻¹x)_k = 1 }.
  const Matrix dual = p.generators().inverse().transpose();
  std::vector<Facet> facets;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (int sign : {+1, -1}) {
      std::vector<int> idx;
      for (Eigen::Index mask = 0; mask < verts.cols(); ++mask)
        if ((((mask >> k) & 1) == 1) == (sign > 0)) idx.push_back(static_cast<int>(mask));
      if (n == 3) idx = cyclic_order(idx, verts, dual.col(k));
      facets.push_back({idx, plane_from_dual_vector(sign * dual.col(k))});
    }
  }
  return GeneralPolytope(verts, std::move(facets));
}

GeneralPolytope to_general(const LabeledCrossPolytope& c) {
  const Eigen::Index n = c.dim();
  Matrix verts(n, 2 * n);
  verts.leftCols(n) = c.vertices();
  verts.rightCols(n) = -c.vertices();
  const Matrix dual = c.vertices().inverse().transpose();
  std::vector<Facet> facets;
  const Eigen::Index count = Eigen::Index{1} << n;
  for (Eigen::Index mask = 0; mask < count; ++mask) {
    Vector eps(n);
    std::vector<int> idx;
    for (Eigen::Index k = 0; k < n; ++k) {
      const bool plus = (mask >> k) & 1;
      eps[k] = plus ? 1.0 : -1.0;
      idx.push_back(static_cast<int>(plus ? k : n + k));
    }
    facets.push_back({idx, plane_from_dual_vector(dual * eps)});
  }
  return GeneralPolytope(verts, std::move(facets));
}

GeneralPolytope to_general(const Polytope& p) {
  return std::visit(
      [](const auto& x) -> GeneralPolytope {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, GeneralPolytope>) {
          return x;
        } else {
          return to_general(x);
        }
      },
      p);
}

// ---------------------------------------------------------------------------
// Verification

VerificationReport verify(const Polytope& p, const EllipsoidPair& pair, double tol) {
  require(dim(p) == pair.dim(), ErrorKind::dimension_mismatch, "verify: polytope and pair dimensions differ");
  const GeneralPolytope g = to_general(p);
  VerificationReport report;

  double on_outer = 0.0, outside_outer = 0.0;
  for (Eigen::Index i = 0; i < g.vertex_count(); ++i) {
    const double q = pair.outer().quadratic(g.vertices().col(i));
    on_outer = std::max(on_outer, std::abs(q - 1.0));
    outside_outer = std::max(outside_outer, q - 1.0);
  }
  double tangency = 0.0, cuts = 0.0;
  for (const Facet& f : g.facets()) {
    const double gap = support_value(pair.inner(), f.plane.normal()) - f.plane.offset();
    tangency = std::max(tangency, std::abs(gap));
    cuts = std::max(cuts, gap);
  }
  report.residuals["vertex_on_outer"] = on_outer;
  report.residuals["vertex_outside_outer"] = std::max(0.0, outside_outer);
  report.residuals["facet_tangency"] = tangency;
  report.residuals["facet_cuts_inner"] = std::max(0.0, cuts);

  report.inscribed = on_outer <= tol;
  report.circumscribed = tangency <= tol;
  report.fits = cuts <= tol && outside_outer <= tol;
  report.tight = report.inscribed && report.circumscribed;
  return report;
}

// ---------------------------------------------------------------------------
// Duality

GeneralPolytope polar_dual(const GeneralPolytope& p) {
  const Eigen::Index n = p.dim();
  const auto& facets = p.facets();
  Matrix verts(n, static_cast<Eigen::Index>(facets.size()));
  for (std::size_t j = 0; j < facets.size(); ++j)
    verts.col(static_cast<Eigen::Index>(j)) = -facets[j].plane.normal() / facets[j].plane.offset();

  std::vector<Facet> dual_facets;
  for (Eigen::Index i = 0; i < p.vertex_count(); ++i) {
    std::vector<int> incident;
    for (std::size_t j = 0; j < facets.size(); ++j)
      if (std::find(facets[j].vertices.begin(), facets[j].vertices.end(), static_cast<int>(i)) !=
          facets[j].vertices.end())
        incident.push_back(static_cast<int>(j));
    const Vector v = p.vertices().col(i);
    const double len = v.norm();
    require(len > 0.0, ErrorKind::origin_not_interior, "polar_dual: vertex at the origin");
    if (n == 3) incident = cyclic_order(incident, verts, v);
    dual_facets.push_back({incident, Hyperplane(-v / len, 1.0 / len)});
  }
  return GeneralPolytope(verts, std::move(dual_facets));
}

LabeledCrossPolytope polar_dual(const LabeledParallelotope& p) {
  // Facet k− of P is <x, −G⁻ᵀe_k> = 1; its dual vertex is +G⁻ᵀe_k.
  return LabeledCrossPolytope(p.generators().inverse().transpose());
}

LabeledParallelotope polar_dual(const LabeledCrossPolytope& c) {
  return LabeledParallelotope(c.vertices().inverse().transpose());
}

LabeledSimplex polar_dual(const LabeledSimplex& s) {
  const auto planes = simplex_facets(s);
  Matrix verts(s.dim(), s.dim() + 1);
  for (std::size_t i = 0; i < planes.size(); ++i)
    verts.col(static_cast<Eigen::Index>(i)) = -planes[i].normal() / planes[i].offset();
  return LabeledSimplex(verts);
}

TangencyCertificate face_tangency_data(const LabeledSimplex& s, const Ellipsoid& inner) {
  require(s.dim() == inner.dim(), ErrorKind::dimension_mismatch, "face_tangency_data: dimension mismatch");
  TangencyCertificate cert;
  for (const Hyperplane& h : simplex_facets(s)) {
    cert.facets.push_back({h, tangent_hyperplane(inner, h.normal()).point});
  }
  return cert;
}

LabeledSimplex simplex_dual(const LabeledSimplex& s, const EllipsoidPair& pair, double tol) {
  const VerificationReport report = verify(s, pair, tol);
  require(report.tight, ErrorKind::precondition, "simplex_dual: simplex is not tight for the pair");
  const NormalForm nf = pair.inner_normal_form();
  const LabeledSimplex normalized(nf.to_normal * s.vertices());
  const auto planes = simplex_facets(normalized);
  const Matrix a_inv = nf.mapping.inverse().matrix();
  Matrix verts(s.dim(), s.dim() + 1);
  // In the normal form the contact point of facet i is its unit normal w_i.
  for (std::size_t i = 0; i < planes.size(); ++i)
    verts.col(static_cast<Eigen::Index>(i)) = -a_inv * planes[i].normal();
  return LabeledSimplex(nf.from_normal * verts);
}

TraceIdentityTerms trace_identity_terms(const LabeledSimplex& s, const EllipsoidPair& pair) {
  require(s.dim() == pair.dim(), ErrorKind::dimension_mismatch, "trace_identity_terms: dimension mismatch");
  const NormalForm nf = pair.inner_normal_form();
  const LabeledSimplex normalized(nf.to_normal * s.vertices());
  const auto planes = simplex_facets(normalized);
  const Matrix& a = nf.mapping.matrix();
  const Eigen::Index count = s.dim() + 1;

  TraceIdentityTerms terms;
  terms.numerators.resize(count);
  terms.denominators.resize(count);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vector v = normalized.vertex(i);
    const Hyperplane& h = planes[static_cast<std::size_t>(i)];
    terms.numerators[i] = h.normal().dot(a * v) + h.offset();
    terms.denominators[i] = h.normal().dot(v) - h.offset();
    sum += terms.numerators[i] / terms.denominators[i];
  }
  terms.trace = a.trace();
  terms.residual = std::abs(terms.trace - 1.0 - sum);
  return terms;
}

double trace_identity_residual(const LabeledSimplex& s, const EllipsoidPair& pair) {
  return trace_identity_terms(s, pair).residual;
}

double vertex_set_distance(const Matrix& a, const Matrix& b) {
  auto one_way = [](const Matrix& x, const Matrix& y) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i)
      worst = std::max(worst, (y.colwise() - x.col(i)).colwise().norm().minCoeff());
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

double max_vertex_norm(const GeneralPolytope& p) { return p.vertices().colwise().norm().maxCoeff(); }

}  // namespace tightfit
