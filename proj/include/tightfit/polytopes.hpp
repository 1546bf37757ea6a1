#pragma once

// Labeled polytopes, facet data, polar duality and verification of the
// fitting / tight conditions against an ellipsoid pair.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tightfit/geometry.hpp"

namespace tightfit {

/// Simplex with labeled vertices v_1..v_{n+1} (columns). The vertices are
/// affinely independent and the origin is strictly interior.
class LabeledSimplex {
 public:
  explicit LabeledSimplex(Matrix vertices);

  const Matrix& vertices() const noexcept { return vertices_; }
  Vector vertex(Eigen::Index i) const { return vertices_.col(i); }
  Eigen::Index dim() const noexcept { return vertices_.rows(); }

 private:
  Matrix vertices_;  // n x (n+1)
};

/// Centrally symmetric parallelotope with vertices ±g_1 ± ... ± g_n, labeled
/// by its generators (columns).
class LabeledParallelotope {
 public:
  explicit LabeledParallelotope(Matrix generators);

  const Matrix& generators() const noexcept { return generators_; }
  Eigen::Index dim() const noexcept { return generators_.rows(); }

 private:
  Matrix generators_;  // n x n
};

/// Centrally symmetric cross polytope with vertices ±v_1, ..., ±v_n; stores
/// v_1..v_n as columns.
class LabeledCrossPolytope {
 public:
  explicit LabeledCrossPolytope(Matrix vertices);

  const Matrix& vertices() const noexcept { return vertices_; }
  Eigen::Index dim() const noexcept { return vertices_.rows(); }

 private:
  Matrix vertices_;  // n x n
};

struct Facet {
  std::vector<int> vertices;  // cyclic order when n = 3
  Hyperplane plane;           // outward, positive offset
};

/// Vertex list plus explicitly supplied facet combinatorics.
class GeneralPolytope {
 public:
  /// Validates that every facet's vertices lie on its plane and every vertex
  /// lies in every facet half-space (relative tolerance 1e-9).
  GeneralPolytope(Matrix vertices, std::vector<Facet> facets);
  /// Builds the planes from the facet vertex lists; normals are oriented
  /// away from the origin, which must be interior.
  static GeneralPolytope from_facet_indices(Matrix vertices, const std::vector<std::vector<int>>& facets);

  const Matrix& vertices() const noexcept { return vertices_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  Eigen::Index dim() const noexcept { return vertices_.rows(); }
  Eigen::Index vertex_count() const noexcept { return vertices_.cols(); }

 private:
  Matrix vertices_;
  std::vector<Facet> facets_;
};

using Polytope = std::variant<LabeledSimplex, LabeledParallelotope, LabeledCrossPolytope, GeneralPolytope>;

Eigen::Index dim(const Polytope& p);
const char* kind_name(const Polytope& p);

/// Plane through the given points (columns) that does not contain the
/// origin, oriented so the origin lies on the negative side.
Hyperplane plane_through(const Matrix& points);

GeneralPolytope to_general(const LabeledSimplex& s);
GeneralPolytope to_general(const LabeledParallelotope& p);
GeneralPolytope to_general(const LabeledCrossPolytope& c);
GeneralPolytope to_general(const Polytope& p);

/// All 2^n vertices ±g_1 ± ... ± g_n; bit k of the column index set means +g_k.
Matrix parallelotope_vertices(const LabeledParallelotope& p);

/// Hyperplane H_i through every vertex except v_i.
std::vector<Hyperplane> simplex_facets(const LabeledSimplex& s);

struct VerificationReport {
  bool inscribed = false;
  bool circumscribed = false;
  bool fits = false;
  bool tight = false;
  /// vertex_on_outer      max |vᵀ M_out v − 1|
  /// vertex_outside_outer max(0, vᵀ M_out v − 1)
  /// facet_tangency       max |h_in(w) − t|
  /// facet_cuts_inner     max(0, h_in(w) − t)
  std::map<std::string, double> residuals;
};

VerificationReport verify(const Polytope& p, const EllipsoidPair& pair, double tol = kDefaultTol);

/// Polar body { y : <y, x> >= −1 for all x in P }. Vertex j of the dual is
/// −w_j / t_j for facet j of P; dual facet i corresponds to vertex i of P.
GeneralPolytope polar_dual(const GeneralPolytope& p);
LabeledCrossPolytope polar_dual(const LabeledParallelotope& p);
LabeledParallelotope polar_dual(const LabeledCrossPolytope& c);
LabeledSimplex polar_dual(const LabeledSimplex& s);

/// Per facet H_i (opposite v_i): the outward plane and the point where the
/// parallel supporting plane touches the inner ellipsoid.
struct TangencyCertificate {
  std::vector<Tangency> facets;
};
TangencyCertificate face_tangency_data(const LabeledSimplex& s, const Ellipsoid& inner);

/// Dual tight simplex ṽ_i = −A⁻¹ w_i (inner-sphere normal form). Requires S
/// to be tight for the pair within tol.
LabeledSimplex simplex_dual(const LabeledSimplex& s, const EllipsoidPair& pair, double tol = kDefaultTol);

/// Terms of tr A₋ = Σ_i <ŵ_i, A₋ v̂_i> / <ŵ_i, v̂_i> evaluated in the
/// inner-sphere normal form, with v̂ = (v, 1) and ŵ = (w, −t).
struct TraceIdentityTerms {
  Vector numerators;    // <w_i, A v_i> + t_i
  Vector denominators;  // <w_i, v_i> − t_i
  double trace = 0.0;   // tr A (normal form)
  double residual = 0.0;
};
TraceIdentityTerms trace_identity_terms(const LabeledSimplex& s, const EllipsoidPair& pair);
double trace_identity_residual(const LabeledSimplex& s, const EllipsoidPair& pair);

/// Largest distance from a column of `a` to its nearest column of `b`
/// (symmetrized). Used to compare vertex sets up to relabeling.
double vertex_set_distance(const Matrix& a, const Matrix& b);

/// Circumradius about the origin: max vertex norm.
double max_vertex_norm(const GeneralPolytope& p);

}  // namespace tightfit
