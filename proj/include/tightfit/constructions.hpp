#pragma once

// Constructive inverses of φ (Fuss parallelotope / cross polytope, adjusted
// orthogonalization for simplices), v⋆, the tetrahedron and fake-cube
// families and the classical two-circle radii relation.

#include <map>
#include <string>
#include <vector>

#include "tightfit/polytopes.hpp"

namespace tightfit {

enum class FitStatus { tight, fitting_not_tight, not_fitting };
const char* to_string(FitStatus s);

/// Names used in ConstructionResult::diagnostics:
///   trace, trace_sq          normal-form tr A and tr A²
///   av_star_sq               |A v⋆|² (simplex constructions only)
///   trace_from_av_star       1 + (|Av⋆|² − 1)/(1 + <Av⋆, v⋆>), equals tr A
///   marginal                 1 when 1e-9 < |tr A − 1| <= 1e-6
///   normalized               1 when the pair was conjugated to a normal form
template <class P>
struct ConstructionResult {
  P polytope;
  FitStatus status;
  VerificationReport report;
  std::map<std::string, double> diagnostics;
};

/// φ: Gram-Schmidt of the first n labeled vectors.
OrthogonalMatrix phi(const Matrix& basis);
OrthogonalMatrix phi(const LabeledSimplex& s);
OrthogonalMatrix phi(const LabeledParallelotope& p);
OrthogonalMatrix phi(const LabeledCrossPolytope& c);

/// Generators ℓ_k q_k with ℓ_k = |A q_k| (outer-sphere normal form). Requires
/// |tr A² − 1| <= tol, otherwise throws infeasible with diagnostics
/// trace_sq, circumradius = √(tr A²) and required_inner_scale = 1/√(tr A²).
ConstructionResult<LabeledParallelotope> fuss_parallelotope(const EllipsoidPair& pair, const OrthogonalMatrix& q,
                                                            double tol = kDefaultTol);

/// Same generators without the trace gate; circumscribed to E_in and
/// inscribed in the sphere of radius √(tr A²) (outer-sphere normal form).
LabeledParallelotope fuss_parallelotope_unconstrained(const EllipsoidPair& pair, const OrthogonalMatrix& q);

/// Polar dual of the Fuss parallelotope of the polar pair: vertices ±q_k/|A q_k|
/// in the inner-sphere normal form.
ConstructionResult<LabeledCrossPolytope> fuss_cross_polytope(const EllipsoidPair& pair, const OrthogonalMatrix& q,
                                                             double tol = kDefaultTol);

struct OrthogonalizationStep {
  double p = 0.0;               // coefficient of u_j in v_j (kept root)
  double discarded_root = 0.0;  // the other root of the quadratic
  double orientation = 0.0;     // sign of det(Q_jᵀ [v_1..v_j]) with the kept root
  double discarded_orientation = 0.0;
};

struct SimplexConstruction : ConstructionResult<LabeledSimplex> {
  std::vector<OrthogonalizationStep> steps;
};

/// Adjusted orthogonalization (inner-sphere normal form). Requires
/// tr A <= 1 + tol (infeasible otherwise). Throws degenerate when a step's
/// line misses E_out transversally or the u_j coefficient vanishes.
SimplexConstruction adjusted_orthogonalization(const EllipsoidPair& pair, const OrthogonalMatrix& q,
                                               double tol = kDefaultTol);

/// The raw procedure on an inner-sphere pair given by its mapping A, with no
/// trace gate: n constructed vertices and v_{n+1} = v⋆ as columns.
Matrix adjusted_orthogonalization_vertices(const SpdMatrix& a, const OrthogonalMatrix& q);

/// Fitting simplex for tr A < 1 built as the tight simplex of the auxiliary
/// pair (s·E_out, E_in), s ∈ [tr A, 1]. Every s gives the same φ; the report
/// is against the original pair.
SimplexConstruction fitting_simplex_sweep(const EllipsoidPair& pair, const OrthogonalMatrix& q, double s,
                                          double tol = kDefaultTol);

struct VStar {
  Vector v;                       // original coordinates
  double av_star_sq = 0.0;        // |A v⋆|² in the inner-sphere normal form
  double trace_from_av_star = 0.0;
};

/// The unique v⋆ whose lift is ⟨⟨·,·⟩⟩-orthogonal to the lifts of the n
/// columns of `vertices`. Checks that the inputs lie on E_out and are
/// pairwise lifted-orthogonal within tol.
VStar v_star(const EllipsoidPair& pair, const Matrix& vertices, double tol = 1e-8);

/// Solves the linear system only (no precondition on the inputs).
Vector v_star_unchecked(const SpdMatrix& a, const Matrix& vertices);

struct TetrahedronMember {
  LabeledSimplex simplex;
  double f = 0.0;   // (ax)⁻² + (by)⁻² + (cz)⁻²
  double t1 = 0.0;  // F^{-1/2}, distance from the origin to every face
  EllipsoidPair pair;
  VerificationReport report;
};

double tetrahedron_f(double a, double b, double c, double x, double y, double z);

/// Vertices (ax,by,cz), (ax,−by,−cz), (−ax,by,−cz), (−ax,−by,cz) between
/// E_out with semi-axes (a,b,c) and the unit sphere.
TetrahedronMember tetrahedron_family(double a, double b, double c, double x, double y, double z,
                                     double tol = kDefaultTol);

/// Point of the first octant of the sphere minimizing F: x² ∝ 1/a etc.
Eigen::Vector3d tetrahedron_f_minimizer(double a, double b, double c);

struct FakeCube {
  GeneralPolytope polytope;
  EllipsoidPair pair;   // spheres of radius R (outer) and r (inner)
  double circumradius;  // R = r√(s² + 1 + s⁻²)
  double trace;         // 3r/R
};

FakeCube fake_cube(double r, double s);

/// 1/(R−d)^{k−2} + 1/(R+d)^{k−2} − 1/r^{k−2}.
double classical_radii_residual(double big_r, double r, double d, int k);

}  // namespace tightfit
