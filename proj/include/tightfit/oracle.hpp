#pragma once

// Brute-force checks that avoid the closed-form paths: sampled support
// functions, facet normals recomputed from null spaces, the planar
// tangent-chord chain and a grid search for the tetrahedron family.

#include <vector>

#include "tightfit/polytopes.hpp"

namespace tightfit {

/// max over N boundary points x = M^{-1/2} y (y uniform on the sphere) of <x, w>.
double sampled_support(const Ellipsoid& e, const Vector& w, int samples, Rng& rng);

/// sampled_support followed by a random-perturbation hill climb on the
/// sphere parameter; accurate to roughly 1e-12 on well-conditioned inputs.
double refined_support(const Ellipsoid& e, const Vector& w, int samples, Rng& rng);

/// Same verdict fields and residual names as verify(). Facet normals come
/// from the null space of each facet's edge vectors; E_in ⊂ P is also
/// probed along `samples` random directions against max_v <v, w>.
VerificationReport verify_by_sampling(const Polytope& p, const EllipsoidPair& pair, int samples, Rng& rng,
                                      double tol = 1e-6);

struct ChordChain {
  Matrix triangle;      // 2 x 3: the start point and the next two points
  double closure_error = 0.0;  // |P_3 − P_0|
  bool closed = false;
};

/// For K starting points on E_out (equally spaced parameter angles), follow
/// tangent lines to E_in for three steps and record whether the chain
/// returns to the start within 1e-6. n = 2 only.
std::vector<ChordChain> brute_force_simplex_2d(const EllipsoidPair& pair, int starts);

/// Single chain from a given starting point on E_out.
ChordChain tangent_chord_chain(const EllipsoidPair& pair, const Vector& start);

struct TetraSearch {
  double f_min = 0.0;
  Eigen::Vector3d point;
};
/// Minimizes F over the first octant of the sphere on an angular grid with
/// the given step, then refines by pattern search.
TetraSearch tetrahedron_f_search(double a, double b, double c, double step);

}  // namespace tightfit
