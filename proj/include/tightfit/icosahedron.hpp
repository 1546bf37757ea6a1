#pragma once

// Centrally symmetric, combinatorially regular icosahedra inscribed in the
// unit sphere and circumscribed to the oblate ellipsoid
// x²/a² + y²/a² + z²/b² = 1, in two symmetric positions.
//
// Vertex-aligned: poles (0,0,±1) plus pentagons at z = ±z_penta, the lower
// one twisted by π/5. Face-aligned: a pair of opposite faces in the planes
// z = ±b, the remaining six vertices at z = ±c.

#include <string>
#include <vector>

#include "tightfit/polytopes.hpp"

namespace tightfit {

struct IcosaMesh {
  GeneralPolytope polytope;
  std::vector<int> facet_class;  // symmetry class per facet
};

/// Regular icosahedron in the unit sphere: inradius, z of the vertex-aligned
/// pentagons and z of the face-aligned middle vertices.
double regular_icosa_inradius();
double regular_icosa_z_penta();
double regular_icosa_c();

/// Vertex 0 = north pole, 1..5 upper pentagon (angles 2πk/5), 6..10 lower
/// pentagon (angles π/5 + 2πk/5), 11 = south pole. Classes: 0 cap, 1 band.
IcosaMesh build_vertex_aligned(double z_penta);

/// Vertices 0..2 top triangle (angles 0, 2π/3, 4π/3, height b), 3..5 at
/// height c (angles π/3, π, 5π/3), 6..8 at −c (angles 0, 2π/3, 4π/3), 9..11
/// bottom triangle at −b. Classes: 0 the two planes z = ±b, 1 the six faces
/// sharing an edge with them, 2 the twelve faces meeting three heights.
IcosaMesh build_face_aligned(double b, double c);

Ellipsoid oblate_ellipsoid(double a, double b);

struct IcosaSolution {
  double a = 0.0;         // equatorial semi-axis
  double b = 0.0;         // polar semi-axis
  double param = 0.0;     // z_penta or c
  double residual_max = 0.0;  // over all 20 facets, |h(w) − t|
  double jacobian_min_singular = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

/// a = α₁(b) together with z_penta.
IcosaSolution solve_alpha1(double b);
/// a = α₂(b) together with c.
IcosaSolution solve_alpha2(double b);

/// The same systems with the extra constraint a = b (inner sphere).
IcosaSolution solve_alpha1_fixed_point();
IcosaSolution solve_alpha2_fixed_point();

/// Both tangency residuals of the representative faces, for a given
/// configuration. Exposed for tests.
Eigen::Vector2d alpha1_residuals(double a, double z_penta, double b);
Eigen::Vector2d alpha2_residuals(double a, double c, double b);

struct AlphaRow {
  double b = 0.0;
  double alpha1 = 0.0, z_penta = 0.0;
  double alpha2 = 0.0, c = 0.0;
  double abs_diff = 0.0;
  double residual_max = 0.0;
  std::string error;  // empty when both solves succeeded
};

std::vector<AlphaRow> compare_alphas(const std::vector<double>& grid);
/// b, alpha1, z_penta, alpha2, c, abs_diff, residual_max (+ error column).
std::string alphas_csv(const std::vector<AlphaRow>& rows);

struct FeasibleRange {
  double lo = 0.0, hi = 0.0;  // smallest and largest grid b that solved
  int solved = 0, failed = 0;
};
/// Scans b over [lo, hi] in `steps` intervals and records where both
/// solvers succeed with residuals below 1e-10.
FeasibleRange scan_feasible_range(double lo, double hi, int steps);

}  // namespace tightfit
