#include "tightfit/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tightfit {

namespace {

// Unit normal of the affine hull of the columns of `pts`: eigenvector of the
// smallest eigenvalue of the edge-vector scatter matrix.
Vector null_space_normal(const Matrix& pts) {
  const Eigen::Index n = pts.rows();
  Matrix edges(n, pts.cols() - 1);
  for (Eigen::Index k = 1; k < pts.cols(); ++k) edges.col(k - 1) = pts.col(k) - pts.col(0);
  const Matrix scatter = edges * edges.transpose();
  return symmetric_eigen(0.5 * (scatter + scatter.transpose())).vectors.column(0);
}

double climb(const Matrix& t, const Vector& w, Vector y, Rng& rng) {
  double best = w.dot(t * y);
  double sigma = 0.1;
  int misses = 0;
  while (sigma > 1e-10) {
    Vector trial = y + sigma * rng.normal_vector(y.size());
    trial.normalize();
    const double value = w.dot(t * trial);
    if (value > best) {
      best = value;
      y = trial;
      misses = 0;
    } else if (++misses >= 12) {
      sigma *= 0.5;
      misses = 0;
    }
  }
  return best;
}

}  // namespace

double sampled_support(const Ellipsoid& e, const Vector& w, int samples, Rng& rng) {
  require(samples >= 1, ErrorKind::precondition, "sampled_support: need at least one sample");
  require(w.size() == e.dim(), ErrorKind::dimension_mismatch, "sampled_support: dimension mismatch");
  const Matrix t = spd_inv_sqrt(e.form()).matrix();
  const Vector tw = t * w;  // <T y, w> = <y, T w>
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) best = std::max(best, rng.unit_vector(e.dim()).dot(tw));
  return best;
}

double refined_support(const Ellipsoid& e, const Vector& w, int samples, Rng& rng) {
  require(samples >= 1, ErrorKind::precondition, "refined_support: need at least one sample");
  const Matrix t = spd_inv_sqrt(e.form()).matrix();
  Vector best_y;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Vector y = rng.unit_vector(e.dim());
    const double value = w.dot(t * y);
    if (value > best) {
      best = value;
      best_y = y;
    }
  }
  return climb(t, w, best_y, rng);
}

VerificationReport verify_by_sampling(const Polytope& p, const EllipsoidPair& pair, int samples, Rng& rng,
                                      double tol) {
  require(dim(p) == pair.dim(), ErrorKind::dimension_mismatch, "verify_by_sampling: dimension mismatch");
  const GeneralPolytope g = to_general(p);
  const Matrix& verts = g.vertices();
  const Eigen::Index n = g.dim();

  double on_outer = 0.0, outside_outer = 0.0;
  for (Eigen::Index i = 0; i < verts.cols(); ++i) {
    const Vector v = verts.col(i);
    const double q = v.dot(pair.outer().form().matrix() * v);
    on_outer = std::max(on_outer, std::abs(q - 1.0));
    outside_outer = std::max(outside_outer, q - 1.0);
  }

  double tangency = 0.0, cuts = -std::numeric_limits<double>::infinity();
  for (const Facet& f : g.facets()) {
    Matrix pts(n, static_cast<Eigen::Index>(f.vertices.size()));
    for (std::size_t k = 0; k < f.vertices.size(); ++k) pts.col(static_cast<Eigen::Index>(k)) = verts.col(f.vertices[k]);
    Vector w = null_space_normal(pts);
    double offset = (pts.transpose() * w).mean();
    if (offset < 0.0) {
      w = -w;
      offset = -offset;
    }
    const double gap = refined_support(pair.inner(), w, std::max(16, samples / 8), rng) - offset;
    tangency = std::max(tangency, std::abs(gap));
    cuts = std::max(cuts, gap);
  }

  // Random directions: sampled support of E_in against h_P(w) = max_v <v, w>.
  const Matrix t_in = spd_inv_sqrt(pair.inner().form()).matrix();
  Matrix boundary(n, samples);
  for (int k = 0; k < samples; ++k) boundary.col(k) = t_in * rng.unit_vector(n);
  for (int d = 0; d < 64; ++d) {
    const Vector w = rng.unit_vector(n);
    const double h_poly = (verts.transpose() * w).maxCoeff();
    const double h_in = (boundary.transpose() * w).maxCoeff();
    cuts = std::max(cuts, h_in - h_poly);
  }

  VerificationReport report;
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

ChordChain tangent_chord_chain(const EllipsoidPair& pair, const Vector& start) {
  require(pair.dim() == 2 && start.size() == 2, ErrorKind::dimension_mismatch, "tangent_chord_chain: n = 2 only");
  const NormalForm nf = pair.inner_normal_form();
  const Matrix m = nf.from_normal.transpose() * pair.outer().form().matrix() * nf.from_normal;
  Vector p = nf.to_normal * start;
  require(std::abs(p.dot(m * p) - 1.0) <= 1e-9, ErrorKind::precondition,
          "tangent_chord_chain: start point is not on E_out");

  ChordChain chain;
  chain.triangle = Matrix::Zero(2, 3);
  const Vector p0 = p;
  for (int step = 0; step < 3; ++step) {
    chain.triangle.col(step) = nf.from_normal * p;
    const double r = p.norm();
    require(r > 1.0, ErrorKind::degenerate, "tangent_chord_chain: point is not outside E_in");
    // Tangent point on the unit circle, turning counterclockwise.
    const double angle = std::atan2(p[1], p[0]) + std::acos(1.0 / r);
    const Vector touch = Eigen::Vector2d(std::cos(angle), std::sin(angle));
    const Vector d = touch - p;
    // Second intersection of p + λd with E_out.
    const double lambda = -2.0 * p.dot(m * d) / d.dot(m * d);
    p = p + lambda * d;
  }
  chain.closure_error = (nf.from_normal * (p - p0)).norm();
  chain.closed = chain.closure_error <= 1e-6;
  return chain;
}

std::vector<ChordChain> brute_force_simplex_2d(const EllipsoidPair& pair, int starts) {
  require(pair.dim() == 2, ErrorKind::dimension_mismatch, "brute_force_simplex_2d: n = 2 only");
  require(starts >= 1, ErrorKind::precondition, "brute_force_simplex_2d: need at least one start");
  const Matrix t_out = spd_inv_sqrt(pair.outer().form()).matrix();
  std::vector<ChordChain> out;
  out.reserve(static_cast<std::size_t>(starts));
  for (int k = 0; k < starts; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / starts;
    out.push_back(tangent_chord_chain(pair, t_out * Eigen::Vector2d(std::cos(theta), std::sin(theta))));
  }
  return out;
}

TetraSearch tetrahedron_f_search(double a, double b, double c, double step) {
  require(step > 0.0 && step < 0.5, ErrorKind::precondition, "tetrahedron_f_search: bad grid step");
  auto f = [&](double theta, double phi) {
    const double x = std::sin(theta) * std::cos(phi), y = std::sin(theta) * std::sin(phi), z = std::cos(theta);
    return 1.0 / (a * a * x * x) + 1.0 / (b * b * y * y) + 1.0 / (c * c * z * z);
  };
  const double half_pi = 0.5 * std::numbers::pi;
  double best = std::numeric_limits<double>::infinity(), bt = 0.0, bp = 0.0;
  for (double theta = step; theta < half_pi; theta += step)
    for (double phi = step; phi < half_pi; phi += step) {
      const double v = f(theta, phi);
      if (v < best) {
        best = v;
        bt = theta;
        bp = phi;
      }
    }
  // Compass search.
  for (double h = step; h > 1e-13;) {
    bool improved = false;
    for (const auto& [dt, dp] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}) {
      const double t = bt + dt, p = bp + dp;
      if (t <= 0.0 || t >= half_pi || p <= 0.0 || p >= half_pi) continue;
      const double v = f(t, p);
      if (v < best) {
        best = v;
        bt = t;
        bp = p;
        improved = true;
      }
    }
    if (!improved) h *= 0.5;
  }
  return {best, Eigen::Vector3d(std::sin(bt) * std::cos(bp), std::sin(bt) * std::sin(bp), std::cos(bt))};
}

}  // namespace tightfit
