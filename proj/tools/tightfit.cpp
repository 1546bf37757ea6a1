// tightfit: construct and verify polytopes between two concentric ellipsoids.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "tightfit/constructions.hpp"
#include "tightfit/icosahedron.hpp"
#include "tightfit/io.hpp"
#include "tightfit/oracle.hpp"

using namespace tightfit;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::infeasible: return 1;
    case ErrorKind::degenerate: return 3;
    default: return 2;
  }
}

void print_error(const std::string& kind, const std::string& message, const Json& diagnostics = Json::object()) {
  std::cerr << Json{{"error", kind}, {"message", message}, {"diagnostics", diagnostics}}.dump() << "\n";
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::precondition, "cannot write \"" + path + "\"");
  out << text;
}

OrthogonalMatrix choose_q(const std::string& q_arg, std::optional<std::uint64_t> seed, Eigen::Index n) {
  if (!q_arg.empty()) {
    OrthogonalMatrix q = orthogonal_from_json(read_json_argument(q_arg));
    require(q.dim() == n, ErrorKind::dimension_mismatch, "--q has the wrong dimension");
    return q;
  }
  require(seed.has_value(), ErrorKind::precondition, "either --q or --seed is required");
  Rng rng(*seed);
  return haar_random_orthogonal(n, rng);
}

template <class R>
Json result_json(const R& r, const OrthogonalMatrix& q) {
  return {{"polytope", to_json(Polytope(r.polytope))},
          {"status", to_string(r.status)},
          {"report", to_json(r.report)},
          {"diagnostics", r.diagnostics},
          {"q", to_json(q)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytopes fitting tightly between two concentric ellipsoids"};
  app.require_subcommand(1);

  // solve-a
  std::string outer_arg, inner_arg;
  double tol = kDefaultTol;
  auto* solve_a = app.add_subcommand("solve-a", "Mapping matrix A and trace criteria for a pair");
  solve_a->add_option("--outer", outer_arg, "Outer ellipsoid (JSON or file)")->required();
  solve_a->add_option("--inner", inner_arg, "Inner ellipsoid (JSON or file)")->required();
  solve_a->add_option("--tol", tol, "Feasibility tolerance");

  // construct
  std::string kind, pair_arg, q_arg;
  std::optional<std::uint64_t> seed;
  std::optional<double> sweep;
  auto* construct = app.add_subcommand("construct", "Build the polytope with φ = Q for a pair");
  construct->add_option("kind", kind, "simplex | parallelotope | crosspolytope")
      ->required()
      ->check(CLI::IsMember({"simplex", "parallelotope", "crosspolytope"}));
  construct->add_option("--pair", pair_arg, "Ellipsoid pair (JSON or file)")->required();
  auto* q_opt = construct->add_option("--q", q_arg, "Orthogonal matrix (JSON or file)");
  auto* seed_opt = construct->add_option("--seed", seed, "Seed for a Haar-random Q");
  q_opt->excludes(seed_opt);
  construct->add_option("--tol", tol, "Verification tolerance");
  construct->add_option("--sweep", sweep, "Simplex only: scale s in [tr A, 1] of the auxiliary outer ellipsoid");

  // verify
  std::string poly_arg;
  int samples = 0;
  std::uint64_t verify_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Check inscribed / circumscribed / fits / tight");
  verify_cmd->add_option("--polytope", poly_arg, "Polytope (JSON or file)")->required();
  verify_cmd->add_option("--pair", pair_arg, "Ellipsoid pair (JSON or file)")->required();
  verify_cmd->add_option("--tol", tol, "Tolerance");
  verify_cmd->add_option("--sample", samples, "Also run the sampling oracle with N samples");
  verify_cmd->add_option("--seed", verify_seed, "Seed for the sampling oracle");

  // family
  auto* family = app.add_subcommand("family", "Explicit families");
  family->require_subcommand(1);
  double fa = 0, fb = 0, fc = 0;
  std::optional<double> fx, fy, fz;
  auto* tetra = family->add_subcommand("tetra", "Tetrahedron family in the ellipsoid with semi-axes a, b, c");
  tetra->add_option("--a", fa)->required();
  tetra->add_option("--b", fb)->required();
  tetra->add_option("--c", fc)->required();
  tetra->add_option("--x", fx, "Direction (normalized); omitted = minimizer of F");
  tetra->add_option("--y", fy);
  tetra->add_option("--z", fz);
  tetra->add_option("--tol", tol);
  double cube_r = 1.0, cube_s = 1.0;
  auto* fakecube = family->add_subcommand("fakecube", "Tight non-parallelotope hexahedron");
  fakecube->add_option("--r", cube_r, "Inradius")->required();
  fakecube->add_option("--s", cube_s, "Shape parameter >= 1")->required();
  fakecube->add_option("--tol", tol);

  // classical
  double big_r = 0, small_r = 0, dist = 0;
  int k = 3;
  auto* classical = app.add_subcommand("classical", "Residual of the two-circle radii relation");
  classical->add_option("--R", big_r, "Outer radius")->required();
  classical->add_option("--r", small_r, "Inner radius")->required();
  classical->add_option("--d", dist, "Center distance");
  classical->add_option("--k", k, "3 (triangle) or 4 (quadrilateral)");

  // icosa
  auto* icosa = app.add_subcommand("icosa", "Icosahedra between the unit sphere and an oblate ellipsoid");
  icosa->require_subcommand(1);
  double b_min = 0.6, b_max = 0.9;
  int steps = 6;
  std::string out_path;
  auto* sweep_cmd = icosa->add_subcommand("sweep", "Tabulate α₁(b) and α₂(b)");
  sweep_cmd->add_option("--b-min", b_min);
  sweep_cmd->add_option("--b-max", b_max);
  sweep_cmd->add_option("--steps", steps, "Number of grid intervals");
  sweep_cmd->add_option("--out", out_path, "CSV output file (default stdout)");
  double b_value = 0.7;
  std::string position = "vertex";
  auto* icosa_solve = icosa->add_subcommand("solve", "Solve one configuration");
  icosa_solve->add_option("--b", b_value)->required();
  icosa_solve->add_option("--position", position)->check(CLI::IsMember({"vertex", "face"}));
  icosa_solve->add_option("--out", out_path, "Optional OBJ output");

  // export
  std::string format = "json";
  auto* export_cmd = app.add_subcommand("export", "Write a polytope as JSON, OBJ (n = 3) or SVG (n = 2)");
  export_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "obj", "svg"}));
  export_cmd->add_option("--polytope", poly_arg)->required();
  export_cmd->add_option("--pair", pair_arg, "Pair drawn in the SVG");
  export_cmd->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("bad_input", e.what());
    return 2;
  }

  try {
    if (*solve_a) {
      const EllipsoidPair pair(ellipsoid_from_json(read_json_argument(outer_arg)),
                               ellipsoid_from_json(read_json_argument(inner_arg)));
      const double tr = pair.normalized_trace(), tr2 = pair.normalized_trace_sq();
      std::string simplex = "infeasible";
      if (tr <= 1.0 + tol) simplex = std::abs(tr - 1.0) <= tol ? "tight" : "fitting";
      emit({{"A", matrix_to_json(pair.mapping().matrix())},
            {"trace", tr},
            {"trace_sq", tr2},
            {"closed_form_trace", pair.mapping().trace()},
            {"simplex", simplex},
            {"parallelotope", std::abs(tr2 - 1.0) <= tol ? "tight" : "infeasible"},
            {"crosspolytope", std::abs(tr2 - 1.0) <= tol ? "tight" : "infeasible"}});
    } else if (*construct) {
      const EllipsoidPair pair = pair_from_json(read_json_argument(pair_arg));
      const OrthogonalMatrix q = choose_q(q_arg, seed, pair.dim());
      if (kind == "simplex") {
        const SimplexConstruction r =
            sweep ? fitting_simplex_sweep(pair, q, *sweep, tol) : adjusted_orthogonalization(pair, q, tol);
        Json out = result_json(r, q);
        Json steps_json = Json::array();
        for (const auto& s : r.steps)
          steps_json.push_back({{"p", s.p}, {"discarded_root", s.discarded_root}, {"orientation", s.orientation},
                                {"discarded_orientation", s.discarded_orientation}});
        out["steps"] = steps_json;
        emit(out);
      } else if (kind == "parallelotope") {
        emit(result_json(fuss_parallelotope(pair, q, tol), q));
      } else {
        emit(result_json(fuss_cross_polytope(pair, q, tol), q));
      }
    } else if (*verify_cmd) {
      const Polytope p = polytope_from_json(read_json_argument(poly_arg));
      const EllipsoidPair pair = pair_from_json(read_json_argument(pair_arg));
      Json out = {{"report", to_json(verify(p, pair, tol))}};
      if (samples > 0) {
        Rng rng(verify_seed);
        out["oracle"] = to_json(verify_by_sampling(p, pair, samples, rng));
      }
      emit(out);
    } else if (*tetra) {
      Eigen::Vector3d dir;
      if (fx || fy || fz) {
        require(fx && fy && fz, ErrorKind::precondition, "--x, --y and --z go together");
        dir = Eigen::Vector3d(*fx, *fy, *fz);
        require(dir.norm() > 0.0, ErrorKind::precondition, "(x, y, z) must be nonzero");
        dir.normalize();
      } else {
        dir = tetrahedron_f_minimizer(fa, fb, fc);
      }
      const TetrahedronMember m = tetrahedron_family(fa, fb, fc, dir[0], dir[1], dir[2], tol);
      emit({{"polytope", to_json(Polytope(m.simplex))},
            {"pair", to_json(m.pair)},
            {"report", to_json(m.report)},
            {"diagnostics",
             {{"F", m.f}, {"t1", m.t1}, {"trace", m.pair.normalized_trace()}, {"x", dir[0]}, {"y", dir[1]}, {"z", dir[2]}}}});
    } else if (*fakecube) {
      const FakeCube fc_result = fake_cube(cube_r, cube_s);
      emit({{"polytope", to_json(Polytope(fc_result.polytope))},
            {"pair", to_json(fc_result.pair)},
            {"report", to_json(verify(fc_result.polytope, fc_result.pair, tol))},
            {"diagnostics", {{"R", fc_result.circumradius}, {"trace", fc_result.trace}}}});
    } else if (*classical) {
      emit({{"residual", classical_radii_residual(big_r, small_r, dist, k)}});
    } else if (*sweep_cmd) {
      require(steps >= 1 && b_min < b_max, ErrorKind::precondition, "need --steps >= 1 and --b-min < --b-max");
      std::vector<double> grid;
      for (int i = 0; i <= steps; ++i) grid.push_back(b_min + (b_max - b_min) * i / steps);
      const auto rows = compare_alphas(grid);
      write_text(out_path, alphas_csv(rows));
      if (!out_path.empty()) {
        double max_diff = 0.0;
        int failures = 0;
        for (const auto& r : rows) {
          if (r.error.empty()) max_diff = std::max(max_diff, r.abs_diff);
          else ++failures;
        }
        emit({{"rows", rows.size()}, {"failures", failures}, {"max_abs_diff", max_diff}, {"csv", out_path}});
      }
    } else if (*icosa_solve) {
      const IcosaSolution s = position == "vertex" ? solve_alpha1(b_value) : solve_alpha2(b_value);
      const IcosaMesh mesh =
          position == "vertex" ? build_vertex_aligned(s.param) : build_face_aligned(b_value, s.param);
      if (!out_path.empty()) write_text(out_path, export_obj(mesh.polytope));
      emit({{"position", position},
            {"a", s.a},
            {"b", s.b},
            {position == "vertex" ? "z_penta" : "c", s.param},
            {"residual_max", s.residual_max},
            {"jacobian_min_singular", s.jacobian_min_singular},
            {"polytope", to_json(Polytope(mesh.polytope))}});
    } else if (*export_cmd) {
      const Polytope p = polytope_from_json(read_json_argument(poly_arg));
      if (format == "json") {
        write_text(out_path, to_json(p).dump(2) + "\n");
      } else if (format == "obj") {
        write_text(out_path, export_obj(p));
      } else {
        std::optional<EllipsoidPair> pair;
        if (!pair_arg.empty()) pair.emplace(pair_from_json(read_json_argument(pair_arg)));
        write_text(out_path, export_svg(p, pair ? &*pair : nullptr));
      }
    }
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.what(), e.diagnostics());
    return exit_code(e.kind());
  } catch (const Json::exception& e) {
    print_error("bad_input", e.what());
    return 2;
  }
  return 0;
}
