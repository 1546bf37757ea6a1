// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Extra "check" fields print the corrected statements next
// to the literal ones where the two disagree.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "support.hpp"
#include "tightfit/constructions.hpp"
#include "tightfit/icosahedron.hpp"
#include "tightfit/oracle.hpp"

using namespace tightfit;
using testing_support::max_abs;
using testing_support::random_mapping;
using testing_support::random_spd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_residual(const VerificationReport& r) {
  double m = 0.0;
  for (const auto& [key, value] : r.residuals) m = std::max(m, value);
  return m;
}

Eigen::Index dim_for(int trial) { return 2 + trial % 7; }

// Redraws until the sampled mapping has spectrum in (0, 1], i.e. the pair is nested.
EllipsoidPair nested_pair(const std::function<EllipsoidPair()>& draw) {
  for (;;) {
    try {
      return draw();
    } catch (const Error&) {
    }
  }
}

Outcome fuss_round_trip() {
  Rng rng(1001);
  int ok = 0;
  double worst_res = 0.0, worst_phi = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = dim_for(trial);
    const EllipsoidPair pair = EllipsoidPair::outer_sphere(random_mapping(n, rng, 1.0, 2));
    const OrthogonalMatrix q = haar_random_orthogonal(n, rng);
    const auto c = fuss_parallelotope(pair, q);
    const VerificationReport r = verify(c.polytope, pair, 1e-9);
    const double dphi = max_abs(phi(c.polytope).matrix() - q.matrix());
    worst_res = std::max(worst_res, max_residual(r));
    worst_phi = std::max(worst_phi, dphi);
    if (r.tight && max_residual(r) < 1e-9 && dphi < 1e-9) ++ok;
  }
  return {ok == 100, fmt("tight with phi = Q: %d/100, max residual %.2e, max |phi - Q| %.2e", ok, worst_res, worst_phi)};
}

Outcome fuss_necessity() {
  Rng rng(1002);
  int literal = 0, sqrt_form = 0, rejected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = dim_for(trial);
    double target = 0.0;
    const EllipsoidPair pair = nested_pair([&] {
      target = 0.5 + 1.5 * rng.uniform();
      if (std::abs(target - 1.0) < 1e-3) target += 0.01;
      return EllipsoidPair::outer_sphere(random_mapping(n, rng, target, 2));
    });
    const OrthogonalMatrix q = haar_random_orthogonal(n, rng);
    double radius = 0.0;
    try {
      fuss_parallelotope(pair, q);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::infeasible) radius = e.diagnostics().at("circumradius");
    }
    // The construction itself, measured directly.
    const LabeledParallelotope p = fuss_parallelotope_unconstrained(pair, q);
    const double measured = max_vertex_norm(to_general(p));
    const double t = pair.normalized_trace_sq();
    if (std::abs(radius - measured) < 1e-12 && std::abs(measured - 1.0 / std::sqrt(t)) < 1e-9) ++literal;
    if (std::abs(measured - std::sqrt(t)) < 1e-9) ++sqrt_form;
    if (!verify(p, pair, 1e-9).tight) ++rejected;
  }
  return {literal == 100 && rejected == 100,
          fmt("R = 1/sqrt(tr A^2): %d/100; tight at radius 1 rejected: %d/100; check R = sqrt(tr A^2): %d/100", literal,
              rejected, sqrt_form)};
}

Outcome euler_round_trip() {
  Rng rng(1003);
  int ok = 0;
  double worst_res = 0.0, worst_phi = 0.0, worst_dual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = dim_for(trial);
    const EllipsoidPair pair = EllipsoidPair::inner_sphere(random_mapping(n, rng, 1.0));
    const OrthogonalMatrix q = haar_random_orthogonal(n, rng);
    try {
      const SimplexConstruction c = adjusted_orthogonalization(pair, q);
      const VerificationReport r = verify(c.polytope, pair, 1e-9);
      const double dphi = max_abs(phi(c.polytope).matrix() - q.matrix());
      const double ddual = max_abs(simplex_dual(c.polytope, pair).vertices() - c.polytope.vertices());
      worst_res = std::max(worst_res, max_residual(r));
      worst_phi = std::max(worst_phi, dphi);
      worst_dual = std::max(worst_dual, ddual);
      if (r.tight && dphi < 1e-9 && ddual < 1e-9) ++ok;
    } catch (const Error&) {
    }
  }
  return {ok == 100, fmt("tight, phi = Q and self-dual: %d/100, max residual %.2e, max |phi - Q| %.2e, max dual gap %.2e",
                         ok, worst_res, worst_phi, worst_dual)};
}

Outcome trace_trichotomy() {
  Rng rng(1004);
  int literal = 0, exact = 0, sampled = 0, above = 0, rejected = 0, below = 0, interior = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = dim_for(trial);
    double tr = 0.0;
    const EllipsoidPair pair = nested_pair([&] {
      tr = 0.5 + rng.uniform();
      if (std::abs(tr - 1.0) < 1e-3) tr += 0.01;
      return EllipsoidPair::inner_sphere(random_mapping(n, rng, tr));
    });
    const SpdMatrix& a = pair.mapping();
    const OrthogonalMatrix q = haar_random_orthogonal(n, rng);
    try {
      const Matrix v = adjusted_orthogonalization_vertices(a, q);
      const VStar vs = v_star(pair, v.leftCols(n));
      ++sampled;
      if (std::abs(vs.av_star_sq - tr) < 1e-8) ++literal;
      if (std::abs(vs.trace_from_av_star - tr) < 1e-8) ++exact;
    } catch (const Error&) {
      // The raw procedure can break down above tr A = 1.
    }
    if (tr > 1.0) {
      ++above;
      try {
        adjusted_orthogonalization(pair, q);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::infeasible) ++rejected;
      }
    } else {
      ++below;
      const SimplexConstruction c = adjusted_orthogonalization(pair, q);
      const double av = (a.matrix() * c.polytope.vertex(n)).squaredNorm();
      if (c.status == FitStatus::fitting_not_tight && av < 1.0 - 1e-9) ++interior;
    }
  }
  const bool pass = literal == sampled && rejected == above && interior == below;
  return {pass, fmt("|Av*|^2 = tr A: %d/%d; tr A > 1 rejected: %d/%d; tr A < 1 fitting-not-tight, v_{n+1} interior: "
                    "%d/%d; check 1 + (|Av*|^2 - 1)/(1 + <Av*, v*>) = tr A: %d/%d",
                    literal, sampled, rejected, above, interior, below, exact, sampled)};
}

Matrix random_simplex(Eigen::Index n, Rng& rng) {
  for (;;) {
    Matrix v = rng.normal_matrix(n, n + 1);
    Vector w(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) w[i] = 0.2 + rng.uniform();
    w /= w.sum();
    v.colwise() -= v * w;
    try {
      LabeledSimplex s(v);
      return v;
    } catch (const Error&) {
    }
  }
}

Outcome trace_identity() {
  Rng rng(1005);
  int ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = dim_for(trial);
    const EllipsoidPair pair = EllipsoidPair::inner_sphere(random_spd(n, rng, 0.05, 1.0));
    const double r = trace_identity_residual(LabeledSimplex(random_simplex(n, rng)), pair);
    worst = std::max(worst, r);
    if (r < 1e-9) ++ok;
  }
  return {ok == 200, fmt("residual < 1e-9: %d/200, max %.2e", ok, worst)};
}

std::pair<double, double> radii(const GeneralPolytope& p) {
  double big_r = 0.0, r = 1e300;
  for (Eigen::Index i = 0; i < p.vertices().cols(); ++i) big_r = std::max(big_r, p.vertices().col(i).norm());
  for (const Facet& f : p.facets()) r = std::min(r, f.plane.offset());
  return {big_r, r};
}

Outcome classical_consistency() {
  const EllipsoidPair tri = EllipsoidPair::inner_sphere(SpdMatrix::diagonal(Eigen::Vector2d(0.5, 0.5)));
  const auto [r3_big, r3] = radii(to_general(adjusted_orthogonalization(tri, OrthogonalMatrix::identity(2)).polytope));
  const double h = 1.0 / std::sqrt(2.0);
  const EllipsoidPair sq = EllipsoidPair::outer_sphere(SpdMatrix::diagonal(Eigen::Vector2d(h, h)));
  const auto [r4_big, r4] = radii(to_general(fuss_parallelotope(sq, OrthogonalMatrix::identity(2)).polytope));
  const double res3 = classical_radii_residual(r3_big, r3, 0.0, 3);
  const double res4 = classical_radii_residual(r4_big, r4, 0.0, 4);
  const bool pass = std::abs(res3) < 1e-12 && std::abs(res4) < 1e-12 && std::abs(r3_big - 2.0 * r3) < 1e-12 &&
                    std::abs(r4_big - std::sqrt(2.0) * r4) < 1e-12;
  return {pass, fmt("k=3: R=%.15g r=%.15g residual %.1e; k=4: R=%.15g r=%.15g residual %.1e", r3_big, r3, res3, r4_big,
                    r4, res4)};
}

Outcome trace_monotonicity() {
  Rng rng(1007);
  int ok = 0;
  double min_gap = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 3 + trial % 6;
    const EllipsoidPair p = EllipsoidPair::inner_sphere(random_spd(n, rng, 0.05, 1.0));
    const Eigen::Index k2 = 2 + rng.integer(0, static_cast<int>(n) - 2);
    const Eigen::Index k1 = 1 + rng.integer(0, static_cast<int>(k2) - 2);
    const Matrix w2 = haar_random_orthogonal(n, rng).matrix().leftCols(k2);
    const double gap =
        restrict_pair(p, w2).normalized_trace() - restrict_pair(p, w2.leftCols(k1)).normalized_trace();
    min_gap = std::min(min_gap, gap);
    if (gap > 0.0) ++ok;
  }
  return {ok == 100, fmt("strict: %d/100, smallest gap %.3e", ok, min_gap)};
}

Outcome tetrahedron() {
  const std::vector<Eigen::Vector3d> axes = {{2, 3, 6}, {3, 3, 3}, {1.5, 4, 7}, {2.2, 2.2, 9}, {5, 1.2, 3.3}};
  int ok = 0;
  double worst = 0.0;
  for (const Eigen::Vector3d& e : axes) {
    const double tr = 1.0 / e[0] + 1.0 / e[1] + 1.0 / e[2];
    const TetraSearch s = tetrahedron_f_search(e[0], e[1], e[2], 1e-3);
    worst = std::max(worst, std::abs(s.f_min - tr * tr));
    if (std::abs(s.f_min - tr * tr) < 1e-6) ++ok;
  }
  int tight = 0;
  const std::vector<Eigen::Vector3d> unit_trace = {{2, 3, 6}, {3, 3, 3}, {4, 4, 2}};
  for (const Eigen::Vector3d& e : unit_trace) {
    const Eigen::Vector3d x = tetrahedron_f_minimizer(e[0], e[1], e[2]);
    const TetrahedronMember m = tetrahedron_family(e[0], e[1], e[2], x[0], x[1], x[2], 1e-9);
    if (std::abs(m.f - 1.0) < 1e-12 && m.report.tight) ++tight;
  }
  return {ok == static_cast<int>(axes.size()) && tight == static_cast<int>(unit_trace.size()),
          fmt("grid min = (tr A)^2: %d/%zu, max gap %.2e; tight at F = 1: %d/%zu", ok, axes.size(), worst, tight,
              unit_trace.size())};
}

Outcome fake_cube_family() {
  int tight = 0;
  double worst = 0.0;
  for (double s : {1.0, 2.0, 3.0, 5.0, 10.0}) {
    const FakeCube c = fake_cube(1.0, s);
    const VerificationReport r = verify(c.polytope, c.pair, 1e-10);
    worst = std::max(worst, max_residual(r));
    if (r.tight && std::abs(c.circumradius - std::sqrt(s * s + 1.0 + 1.0 / (s * s))) < 1e-12) ++tight;
  }
  double lo = 1e300, hi = -1e300, jump = 0.0, prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double tr = fake_cube(1.0, std::pow(100.0, i / 2000.0)).pair.normalized_trace();
    lo = std::min(lo, tr);
    hi = std::max(hi, tr);
    if (i > 0) jump = std::max(jump, std::abs(tr - prev));
    prev = tr;
  }
  const bool covers = lo < 0.05 && hi > 0.95 && jump < 0.01;
  return {tight == 5 && covers,
          fmt("tight: %d/5, max residual %.2e; tr A over s in [1,100] spans [%.4f, %.4f], max step %.1e", tight, worst, lo,
              hi, jump)};
}

std::pair<Polytope, EllipsoidPair> oracle_instance(int kind, Eigen::Index n, Rng& rng) {
  const OrthogonalMatrix q = haar_random_orthogonal(n, rng);
  switch (kind) {
    case 0: {
      const EllipsoidPair pair = EllipsoidPair::inner_sphere(random_mapping(n, rng, 1.0));
      return {adjusted_orthogonalization(pair, q).polytope, pair};
    }
    case 1: {
      const EllipsoidPair pair = EllipsoidPair::inner_sphere(random_mapping(n, rng, 0.5 + 0.4 * rng.uniform()));
      return {adjusted_orthogonalization(pair, q).polytope, pair};
    }
    case 2: {
      const EllipsoidPair pair = EllipsoidPair::outer_sphere(random_mapping(n, rng, 1.0, 2));
      return {fuss_parallelotope(pair, q).polytope, pair};
    }
    case 3: {
      const EllipsoidPair pair = EllipsoidPair::inner_sphere(random_mapping(n, rng, 1.0, 2));
      return {fuss_cross_polytope(pair, q).polytope, pair};
    }
    default: {
      const EllipsoidPair pair = EllipsoidPair::inner_sphere(random_mapping(n, rng, 1.0));
      Matrix v = adjusted_orthogonalization(pair, q).polytope.vertices();
      v.col(0) *= 0.95;
      return {LabeledSimplex(v), pair};
    }
  }
}

Outcome oracle_agreement() {
  Rng rng(1010);
  int agree = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto [p, pair] = oracle_instance(trial % 5, 2 + trial % 4, rng);
    const VerificationReport a = verify(p, pair, 1e-6);
    const VerificationReport b = verify_by_sampling(p, pair, 2000, rng, 1e-6);
    if (a.inscribed == b.inscribed && a.circumscribed == b.circumscribed && a.fits == b.fits && a.tight == b.tight)
      ++agree;
  }
  // All 360 chains close within ±1e-9 of tr A = 1 and none close away from it.
  int matches = 0, cases = 0;
  std::string closures;
  const std::vector<std::pair<double, bool>> traces = {{0.9, false},       {0.99, false}, {0.999, false},
                                                      {1.0 - 1e-9, true}, {1.0, true},   {1.0 + 1e-9, true},
                                                      {1.001, false},     {1.01, false}, {1.1, false}};
  for (const auto& [tr, expect_all] : traces) {
    const EllipsoidPair pair = EllipsoidPair::inner_sphere(SpdMatrix::diagonal(Eigen::Vector2d(0.35 * tr, 0.65 * tr)));
    int closed = 0;
    for (const ChordChain& c : brute_force_simplex_2d(pair, 360)) closed += c.closed ? 1 : 0;
    ++cases;
    if (expect_all ? closed == 360 : closed == 0) ++matches;
    closures += fmt("%s%d", closures.empty() ? "" : ",", closed);
  }
  return {agree == 500 && matches == cases,
          fmt("verdicts agree: %d/500; chord closure pattern %d/%d (closed counts %s)", agree, matches, cases,
              closures.c_str())};
}

Outcome icosahedron() {
  std::vector<double> grid;
  for (int i = 0; i <= 6; ++i) grid.push_back(0.6 + 0.05 * i);
  const std::vector<AlphaRow> rows = compare_alphas(grid);
  int solved = 0;
  double worst = 0.0, max_diff = 0.0;
  for (const AlphaRow& r : rows) {
    if (r.error.empty() && r.residual_max < 1e-10) ++solved;
    worst = std::max(worst, r.residual_max);
    max_diff = std::max(max_diff, r.abs_diff);
  }
  const double r0 = regular_icosa_inradius();
  const IcosaSolution f1 = solve_alpha1_fixed_point();
  const IcosaSolution f2 = solve_alpha2_fixed_point();
  const double fixed = std::max({std::abs(f1.a - r0), std::abs(f1.b - r0), std::abs(f2.a - r0), std::abs(f2.b - r0)});
  return {solved == static_cast<int>(grid.size()) && fixed < 1e-8 && max_diff > 1e-3,
          fmt("grid solved: %d/%zu, max residual %.2e; fixed-point gap %.2e; max |a1 - a2| %.4e", solved, grid.size(),
              worst, fixed, max_diff)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Fuss round-trip", 5.0, fuss_round_trip},
      {2, "Fuss necessity", 0.0, fuss_necessity},
      {3, "Euler round-trip", 10.0, euler_round_trip},
      {4, "Trace trichotomy", 0.0, trace_trichotomy},
      {5, "Trace identity", 0.0, trace_identity},
      {6, "Classical consistency", 0.0, classical_consistency},
      {7, "Trace monotonicity", 0.0, trace_monotonicity},
      {8, "Tetrahedron family", 0.0, tetrahedron},
      {9, "Fake cube", 0.0, fake_cube_family},
      {10, "Oracle agreement", 0.0, oracle_agreement},
      {11, "Icosahedron experiment", 30.0, icosahedron},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s limit", c.time_limit);
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %-22s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
