#pragma once

// JSON interchange, OBJ meshes (n = 3) and SVG figures (n = 2).
//
//   Ellipsoid  {"dim": n, "form": [[...], ...]}            row-major, symmetric
//   Pair       {"outer": Ellipsoid, "inner": Ellipsoid}
//   Polytope   {"kind": "simplex"|"parallelotope"|"crosspolytope"|"general",
//               "dim": n, "vertices": [[...], ...], "facets": [...]}
//   Orthogonal {"dim": n, "matrix": [[...], ...]} or a bare row list
//
// Parallelotopes store their generators under "vertices" (also accepted as
// "generators"); cross polytopes store v_1..v_n. General facets are either
// index lists or {"vertices": [...], "normal": [...], "offset": t}.

#include <string>

#include <json.hpp>

#include "tightfit/polytopes.hpp"

namespace tightfit {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);  // list of rows
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
/// Columns as a list of points.
Json columns_to_json(const Matrix& m);
Matrix columns_from_json(const Json& j, Eigen::Index dim);

Json to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const Json& j);

Json to_json(const EllipsoidPair& p);
EllipsoidPair pair_from_json(const Json& j);

Json to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j);

Json to_json(const VerificationReport& r);

Json to_json(const OrthogonalMatrix& q);
OrthogonalMatrix orthogonal_from_json(const Json& j);

/// Inline JSON (text starting with '{' or '[') or a path to a JSON file.
/// Throws Error(precondition) on unreadable or malformed input.
Json read_json_argument(const std::string& text_or_path);

/// Wavefront OBJ with each facet fan-triangulated in its cyclic order and
/// oriented outward. n = 3 only.
std::string export_obj(const Polytope& p);

/// SVG with both ellipses and the polygon; 200 px per unit, y axis up,
/// viewBox fitted to the content. n = 2 only.
std::string export_svg(const Polytope& p, const EllipsoidPair* pair);

}  // namespace tightfit
