#include "tightfit/icosahedron.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

namespace tightfit {

namespace {

using Vec2 = Eigen::Vector2d;
using Residual = std::function<Vec2(const Vec2&)>;

constexpr double kPi = std::numbers::pi;

Vector ring_point(double radius, double angle, double z) {
  return Eigen::Vector3d(radius * std::cos(angle), radius * std::sin(angle), z);
}

Vector on_sphere(double angle, double z) { return ring_point(std::sqrt(1.0 - z * z), angle, z); }

// Outward (w, t) of the plane through three points; orientation follows the
// sign of <centroid, normal>.
Hyperplane face_plane(const Vector& p, const Vector& q, const Vector& r) {
  Eigen::Vector3d n = Eigen::Vector3d(q - p).cross(Eigen::Vector3d(r - p));
  const Eigen::Vector3d centroid = (p + q + r) / 3.0;
  if (n.dot(centroid) < 0.0) n = -n;
  const double len = n.norm();
  require(len > 1e-14, ErrorKind::degenerate, "icosahedron: collapsed face");
  n /= len;
  return Hyperplane(n, n.dot(Eigen::Vector3d(p)));
}

double gap(const Hyperplane& h, double a, double b) {
  const Vector& w = h.normal();
  return std::sqrt(a * a * (w[0] * w[0] + w[1] * w[1]) + b * b * w[2] * w[2]) - h.offset();
}

void require_unit_interval(double x, const char* what) {
  require(x > 0.0 && x < 1.0, ErrorKind::precondition, std::string(what) + " must lie in (0,1)");
}

Eigen::Matrix2d fd_jacobian(const Residual& f, const Vec2& x) {
  Eigen::Matrix2d j;
  for (int k = 0; k < 2; ++k) {
    const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
    Vec2 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    j.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

// Residual that reports +inf outside the parameter domain so line search
// backs off instead of throwing.
Vec2 safe_eval(const Residual& f, const Vec2& x) {
  if (!(x[0] > 0.0 && x[0] <= 1.5 && x[1] > 0.0 && x[1] < 1.0))
    return Vec2::Constant(std::numeric_limits<double>::infinity());
  try {
    return f(x);
  } catch (const Error&) {
    return Vec2::Constant(std::numeric_limits<double>::infinity());
  }
}

struct NewtonOutcome {
  Vec2 x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

NewtonOutcome damped_newton(const Residual& f, Vec2 x) {
  NewtonOutcome out;
  Vec2 fx = safe_eval(f, x);
  for (int it = 0; it < 100; ++it) {
    out.iterations = it;
    if (fx.lpNorm<Eigen::Infinity>() < 1e-14) break;
    const Eigen::Matrix2d j = fd_jacobian(f, x);
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(j);
    if (!lu.isInvertible()) break;
    const Vec2 step = -lu.solve(fx);
    double lambda = 1.0;
    bool moved = false;
    while (lambda > 1e-10) {
      const Vec2 trial = x + lambda * step;
      const Vec2 ft = safe_eval(f, trial);
      if (ft.norm() < fx.norm()) {
        x = trial;
        fx = ft;
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) break;
  }
  out.x = x;
  out.residual = fx.lpNorm<Eigen::Infinity>();
  out.converged = out.residual < 1e-12;
  return out;
}

// Bisection on a for fixed shape parameter: the first residual is
// increasing in a.
double solve_a(const std::function<double(double)>& r1) {
  double lo = 1e-9, hi = 1.0;
  if (!(r1(lo) < 0.0 && r1(hi) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (r1(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Fallback: eliminate a, then scan the shape parameter for a sign change of
// the second residual and bisect it. Returns the root nearest `guess`.
NewtonOutcome bisection_fallback(const std::function<Vec2(double, double)>& f, double guess) {
  auto a_of = [&](double p) { return solve_a([&](double a) { return f(a, p)[0]; }); };
  auto g = [&](double p) {
    const double a = a_of(p);
    return std::isnan(a) ? std::numeric_limits<double>::quiet_NaN() : f(a, p)[1];
  };
  NewtonOutcome best;
  best.x = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
  best.residual = std::numeric_limits<double>::infinity();
  const int samples = 400;
  double prev_p = 0.0, prev_g = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i < samples; ++i) {
    const double p = static_cast<double>(i) / samples;
    double gp;
    try {
      gp = g(p);
    } catch (const Error&) {
      gp = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isnan(gp) && !std::isnan(prev_g) && (gp > 0.0) != (prev_g > 0.0)) {
      double lo = prev_p, hi = p, glo = prev_g;
      for (int k = 0; k < 200 && hi - lo > 1e-16; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      const Vec2 x(a_of(root), root);
      if (std::isnan(best.x[1]) || std::abs(root - guess) < std::abs(best.x[1] - guess)) {
        best.x = x;
        best.residual = f(x[0], x[1]).lpNorm<Eigen::Infinity>();
      }
    }
    prev_p = p;
    prev_g = gp;
  }
  best.converged = best.residual < 1e-12;
  return best;
}

double max_facet_gap(const IcosaMesh& mesh, double a, double b) {
  double worst = 0.0;
  for (const Facet& f : mesh.polytope.facets()) worst = std::max(worst, std::abs(gap(f.plane, a, b)));
  return worst;
}

IcosaSolution finish(const NewtonOutcome& n, const Residual& f, double b, bool fallback,
                     const std::function<IcosaMesh(double)>& build, const char* who) {
  if (!n.converged) {
    Error e(ErrorKind::infeasible, std::string(who) + ": no tangent configuration found");
    e.with("b", b).with("residual", n.residual);
    throw e;
  }
  IcosaSolution s;
  s.a = n.x[0];
  s.b = std::isnan(b) ? n.x[0] : b;
  s.param = n.x[1];
  s.iterations = n.iterations;
  s.used_fallback = fallback;
  // Building the mesh rejects combinatorial flips.
  s.residual_max = max_facet_gap(build(s.param), s.a, s.b);
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(fd_jacobian(f, n.x));
  s.jacobian_min_singular = svd.singularValues().minCoeff();
  return s;
}

IcosaSolution solve_system(const std::function<Vec2(double, double)>& raw, double b, Vec2 guess,
                           const std::function<IcosaMesh(double)>& build, const char* who) {
  const Residual f = [&](const Vec2& x) { return raw(x[0], x[1]); };
  NewtonOutcome n = damped_newton(f, guess);
  bool fallback = false;
  if (!n.converged) {
    fallback = true;
    NewtonOutcome alt = bisection_fallback(raw, guess[1]);
    if (alt.converged) {
      // Polish the bracketed root.
      NewtonOutcome polished = damped_newton(f, alt.x);
      n = polished.residual <= alt.residual ? polished : alt;
    } else {
      n = alt;
    }
  }
  return finish(n, f, b, fallback, build, who);
}

}  // namespace

double regular_icosa_inradius() { return std::sqrt((5.0 + 2.0 * std::sqrt(5.0)) / 15.0); }
double regular_icosa_z_penta() { return 1.0 / std::sqrt(5.0); }
double regular_icosa_c() { return std::sqrt((5.0 - 2.0 * std::sqrt(5.0)) / 15.0); }

IcosaMesh build_vertex_aligned(double z_penta) {
  require_unit_interval(z_penta, "build_vertex_aligned: z_penta");
  Matrix v(3, 12);
  v.col(0) = Eigen::Vector3d(0, 0, 1);
  for (int k = 0; k < 5; ++k) {
    v.col(1 + k) = on_sphere(2.0 * kPi * k / 5.0, z_penta);
    v.col(6 + k) = on_sphere(kPi / 5.0 + 2.0 * kPi * k / 5.0, -z_penta);
  }
  v.col(11) = Eigen::Vector3d(0, 0, -1);
  std::vector<std::vector<int>> faces;
  std::vector<int> cls;
  for (int k = 0; k < 5; ++k) {
    const int p = 1 + k, pn = 1 + (k + 1) % 5, q = 6 + k, qn = 6 + (k + 1) % 5;
    faces.push_back({0, p, pn});
    cls.push_back(0);
    faces.push_back({11, qn, q});
    cls.push_back(0);
    faces.push_back({p, q, pn});
    cls.push_back(1);
    faces.push_back({q, qn, pn});
    cls.push_back(1);
  }
  return {GeneralPolytope::from_facet_indices(v, faces), cls};
}

IcosaMesh build_face_aligned(double b, double c) {
  require_unit_interval(b, "build_face_aligned: b");
  require_unit_interval(c, "build_face_aligned: c");
  require(c < b, ErrorKind::degenerate, "build_face_aligned: need c < b");
  const double third = 2.0 * kPi / 3.0;
  Matrix v(3, 12);
  for (int k = 0; k < 3; ++k) {
    v.col(k) = on_sphere(third * k, b);                   // T
    v.col(3 + k) = on_sphere(kPi / 3.0 + third * k, c);   // U
    v.col(6 + k) = on_sphere(third * k, -c);              // L
    v.col(9 + k) = on_sphere(kPi / 3.0 + third * k, -b);  // B
  }
  std::vector<std::vector<int>> faces = {{0, 1, 2}, {9, 11, 10}};
  std::vector<int> cls = {0, 0};
  for (int k = 0; k < 3; ++k) {
    const int t = k, tn = (k + 1) % 3;
    const int u = 3 + k, up = 3 + (k + 2) % 3;       // U at T_k + 60°, T_k − 60°
    const int l = 6 + k, ln = 6 + (k + 1) % 3;       // L under T_k and T_{k+1}
    const int bb = 9 + k, bn = 9 + (k + 1) % 3;      // B_k at U_k's angle
    faces.push_back({t, tn, u});
    cls.push_back(1);
    faces.push_back({bb, ln, bn});
    cls.push_back(1);
    faces.push_back({t, u, l});
    cls.push_back(2);
    faces.push_back({t, l, up});
    cls.push_back(2);
    faces.push_back({bb, l, u});
    cls.push_back(2);
    faces.push_back({bb, u, ln});
    cls.push_back(2);
  }
  return {GeneralPolytope::from_facet_indices(v, faces), cls};
}

Ellipsoid oblate_ellipsoid(double a, double b) {
  return Ellipsoid::from_semi_axes(Eigen::Vector3d(a, a, b));
}

Vec2 alpha1_residuals(double a, double z, double b) {
  const Vector n = Eigen::Vector3d(0, 0, 1);
  const Vector p0 = on_sphere(0.0, z), p1 = on_sphere(2.0 * kPi / 5.0, z);
  const Vector q0 = on_sphere(kPi / 5.0, -z);
  return {gap(face_plane(n, p0, p1), a, b), gap(face_plane(p0, q0, p1), a, b)};
}

Vec2 alpha2_residuals(double a, double c, double b) {
  const Vector t0 = on_sphere(0.0, b), t1 = on_sphere(2.0 * kPi / 3.0, b);
  const Vector u0 = on_sphere(kPi / 3.0, c), l0 = on_sphere(0.0, -c);
  return {gap(face_plane(t0, t1, u0), a, b), gap(face_plane(t0, u0, l0), a, b)};
}

IcosaSolution solve_alpha1(double b) {
  require(b > 0.0 && b < 1.0, ErrorKind::precondition, "solve_alpha1: b must lie in (0,1)");
  return solve_system([b](double a, double z) { return alpha1_residuals(a, z, b); }, b,
                      Vec2(regular_icosa_inradius(), regular_icosa_z_penta()),
                      [](double z) { return build_vertex_aligned(z); }, "solve_alpha1");
}

IcosaSolution solve_alpha2(double b) {
  require(b > 0.0 && b < 1.0, ErrorKind::precondition, "solve_alpha2: b must lie in (0,1)");
  return solve_system([b](double a, double c) { return alpha2_residuals(a, c, b); }, b,
                      Vec2(regular_icosa_inradius(), regular_icosa_c()),
                      [b](double c) { return build_face_aligned(b, c); }, "solve_alpha2");
}

IcosaSolution solve_alpha1_fixed_point() {
  const Residual f = [](const Vec2& x) { return alpha1_residuals(x[0], x[1], x[0]); };
  const NewtonOutcome n = damped_newton(f, Vec2(0.75, 0.5));
  return finish(n, f, std::numeric_limits<double>::quiet_NaN(), false,
                [](double z) { return build_vertex_aligned(z); }, "solve_alpha1_fixed_point");
}

IcosaSolution solve_alpha2_fixed_point() {
  const Residual f = [](const Vec2& x) { return alpha2_residuals(x[0], x[1], x[0]); };
  const NewtonOutcome n = damped_newton(f, Vec2(0.75, 0.2));
  // The mesh needs the solved b = a, which is only known afterwards.
  const double a = n.x[0];
  return finish(n, f, std::numeric_limits<double>::quiet_NaN(), false,
                [a](double c) { return build_face_aligned(a, c); }, "solve_alpha2_fixed_point");
}

std::vector<AlphaRow> compare_alphas(const std::vector<double>& grid) {
  std::vector<AlphaRow> rows;
  rows.reserve(grid.size());
  for (double b : grid) {
    AlphaRow row;
    row.b = b;
    try {
      const IcosaSolution s1 = solve_alpha1(b);
      const IcosaSolution s2 = solve_alpha2(b);
      row.alpha1 = s1.a;
      row.z_penta = s1.param;
      row.alpha2 = s2.a;
      row.c = s2.param;
      row.abs_diff = std::abs(s1.a - s2.a);
      row.residual_max = std::max(s1.residual_max, s2.residual_max);
    } catch (const Error& e) {
      row.error = e.what();
      row.alpha1 = row.alpha2 = row.abs_diff = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string alphas_csv(const std::vector<AlphaRow>& rows) {
  std::string out = "b,alpha1,z_penta,alpha2,c,abs_diff,residual_max,error\n";
  char buf[512];
  for (const AlphaRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,", r.b, r.alpha1, r.z_penta, r.alpha2,
                  r.c, r.abs_diff, r.residual_max);
    out += buf;
    std::string err = r.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    out += err + "\n";
  }
  return out;
}

FeasibleRange scan_feasible_range(double lo, double hi, int steps) {
  require(steps >= 1 && lo < hi, ErrorKind::precondition, "scan_feasible_range: need lo < hi and steps >= 1");
  FeasibleRange range;
  range.lo = std::numeric_limits<double>::quiet_NaN();
  range.hi = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i <= steps; ++i) {
    const double b = lo + (hi - lo) * i / steps;
    bool ok = false;
    try {
      ok = solve_alpha1(b).residual_max < 1e-10 && solve_alpha2(b).residual_max < 1e-10;
    } catch (const Error&) {
      ok = false;
    }
    if (ok) {
      ++range.solved;
      if (std::isnan(range.lo)) range.lo = b;
      range.hi = b;
    } else {
      ++range.failed;
    }
  }
  return range;
}

}  // namespace tightfit
