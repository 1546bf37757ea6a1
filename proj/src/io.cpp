#include "tightfit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tightfit {

namespace {

const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::precondition, std::string("JSON: missing field \"") + key + "\"");
  return j.at(key);
}

Eigen::Index checked_dim(const Json& j) {
  const Json& d = field(j, "dim");
  require(d.is_number_integer() && d.get<long>() >= 1, ErrorKind::precondition, "JSON: \"dim\" must be a positive integer");
  return d.get<Eigen::Index>();
}

double number(const Json& j) {
  require(j.is_number(), ErrorKind::precondition, "JSON: expected a number");
  return j.get<double>();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string px(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty() && j[0].is_array(), ErrorKind::precondition, "JSON: expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, ErrorKind::precondition,
            "JSON: ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::precondition, "JSON: expected a number list");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i]);
  return v;
}

Json columns_to_json(const Matrix& m) { return matrix_to_json(m.transpose()); }

Matrix columns_from_json(const Json& j, Eigen::Index dim) {
  const Matrix rows = matrix_from_json(j);
  require(rows.cols() == dim, ErrorKind::dimension_mismatch, "JSON: point has the wrong dimension");
  return rows.transpose();
}

Json to_json(const Ellipsoid& e) { return {{"dim", e.dim()}, {"form", matrix_to_json(e.form().matrix())}}; }

Ellipsoid ellipsoid_from_json(const Json& j) {
  const Eigen::Index n = checked_dim(j);
  const Matrix m = matrix_from_json(field(j, "form"));
  require(m.rows() == n && m.cols() == n, ErrorKind::dimension_mismatch, "JSON: \"form\" must be dim x dim");
  return Ellipsoid(SpdMatrix(m));
}

Json to_json(const EllipsoidPair& p) { return {{"outer", to_json(p.outer())}, {"inner", to_json(p.inner())}}; }

EllipsoidPair pair_from_json(const Json& j) {
  return EllipsoidPair(ellipsoid_from_json(field(j, "outer")), ellipsoid_from_json(field(j, "inner")));
}

Json to_json(const Polytope& p) {
  Json out = {{"kind", kind_name(p)}, {"dim", dim(p)}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LabeledSimplex>) {
          out["vertices"] = columns_to_json(x.vertices());
        } else if constexpr (std::is_same_v<T, LabeledParallelotope>) {
          out["vertices"] = columns_to_json(x.generators());
        } else if constexpr (std::is_same_v<T, LabeledCrossPolytope>) {
          out["vertices"] = columns_to_json(x.vertices());
        } else {
          out["vertices"] = columns_to_json(x.vertices());
          Json facets = Json::array();
          for (const Facet& f : x.facets())
            facets.push_back({{"vertices", f.vertices},
                              {"normal", vector_to_json(f.plane.normal())},
                              {"offset", f.plane.offset()}});
          out["facets"] = facets;
        }
      },
      p);
  return out;
}

Polytope polytope_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  const Eigen::Index n = checked_dim(j);
  const Json& pts = j.contains("vertices") ? j.at("vertices") : field(j, "generators");
  const Matrix v = columns_from_json(pts, n);
  if (kind == "simplex") return LabeledSimplex(v);
  if (kind == "parallelotope") return LabeledParallelotope(v);
  if (kind == "crosspolytope") return LabeledCrossPolytope(v);
  require(kind == "general", ErrorKind::precondition, "JSON: unknown polytope kind \"" + kind + "\"");
  const Json& facets = field(j, "facets");
  require(facets.is_array() && !facets.empty(), ErrorKind::precondition, "JSON: \"facets\" must be a list");
  const bool explicit_planes = facets[0].is_object();
  if (!explicit_planes) return GeneralPolytope::from_facet_indices(v, facets.get<std::vector<std::vector<int>>>());
  std::vector<Facet> out;
  for (const Json& f : facets) {
    Vector normal = vector_from_json(field(f, "normal"));
    const double len = normal.norm();
    require(len > 0.0, ErrorKind::precondition, "JSON: zero facet normal");
    // Outward convention: unit normal, positive offset.
    out.push_back({field(f, "vertices").get<std::vector<int>>(), Hyperplane(normal / len, number(field(f, "offset")) / len)});
  }
  return GeneralPolytope(v, std::move(out));
}

Json to_json(const VerificationReport& r) {
  return {{"inscribed", r.inscribed},
          {"circumscribed", r.circumscribed},
          {"fits", r.fits},
          {"tight", r.tight},
          {"residuals", r.residuals}};
}

Json to_json(const OrthogonalMatrix& q) { return {{"dim", q.dim()}, {"matrix", matrix_to_json(q.matrix())}}; }

OrthogonalMatrix orthogonal_from_json(const Json& j) {
  if (j.is_array()) return OrthogonalMatrix(matrix_from_json(j));
  const Eigen::Index n = checked_dim(j);
  const Matrix m = matrix_from_json(field(j, "matrix"));
  require(m.rows() == n && m.cols() == n, ErrorKind::dimension_mismatch, "JSON: \"matrix\" must be dim x dim");
  return OrthogonalMatrix(m);
}

Json read_json_argument(const std::string& text_or_path) {
  std::string text = text_or_path;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || (text[first] != '{' && text[first] != '[')) {
    std::ifstream in(text_or_path);
    require(static_cast<bool>(in), ErrorKind::precondition, "cannot read JSON file \"" + text_or_path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::precondition, std::string("malformed JSON: ") + e.what());
  }
}

std::string export_obj(const Polytope& p) {
  const GeneralPolytope g = to_general(p);
  require(g.dim() == 3, ErrorKind::dimension_mismatch, "export_obj: polytope must be 3-dimensional");
  std::string out = "# " + std::string(kind_name(p)) + "\n";
  for (Eigen::Index i = 0; i < g.vertex_count(); ++i) {
    const Vector v = g.vertices().col(i);
    out += "v " + fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]) + "\n";
  }
  for (const Facet& f : g.facets()) {
    std::vector<int> ring = f.vertices;
    // Newell normal of the ring; flip the ring if it points inward.
    Eigen::Vector3d newell = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const Eigen::Vector3d a = g.vertices().col(ring[k]);
      const Eigen::Vector3d b = g.vertices().col(ring[(k + 1) % ring.size()]);
      newell += a.cross(b);
    }
    if (newell.dot(Eigen::Vector3d(f.plane.normal())) < 0.0) std::reverse(ring.begin(), ring.end());
    for (std::size_t k = 1; k + 1 < ring.size(); ++k)
      out += "f " + std::to_string(ring[0] + 1) + " " + std::to_string(ring[k] + 1) + " " +
             std::to_string(ring[k + 1] + 1) + "\n";
  }
  return out;
}

std::string export_svg(const Polytope& p, const EllipsoidPair* pair) {
  const GeneralPolytope g = to_general(p);
  require(g.dim() == 2, ErrorKind::dimension_mismatch, "export_svg: polytope must be 2-dimensional");
  require(pair == nullptr || pair->dim() == 2, ErrorKind::dimension_mismatch, "export_svg: pair must be 2-dimensional");
  constexpr double kScale = 200.0;

  // Polygon vertices in angular order about the (interior) origin.
  std::vector<int> order(static_cast<std::size_t>(g.vertex_count()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::atan2(g.vertices()(1, a), g.vertices()(0, a)) < std::atan2(g.vertices()(1, b), g.vertices()(0, b));
  });

  std::vector<Matrix> curves;
  if (pair != nullptr) {
    for (const Ellipsoid* e : {&pair->outer(), &pair->inner()}) {
      const Matrix t = spd_inv_sqrt(e->form()).matrix();
      Matrix pts(2, 256);
      for (int k = 0; k < 256; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 256.0;
        pts.col(k) = t * Eigen::Vector2d(std::cos(th), std::sin(th));
      }
      curves.push_back(pts);
    }
  }

  double xmin = g.vertices().row(0).minCoeff(), xmax = g.vertices().row(0).maxCoeff();
  double ymin = g.vertices().row(1).minCoeff(), ymax = g.vertices().row(1).maxCoeff();
  for (const Matrix& c : curves) {
    xmin = std::min(xmin, c.row(0).minCoeff());
    xmax = std::max(xmax, c.row(0).maxCoeff());
    ymin = std::min(ymin, c.row(1).minCoeff());
    ymax = std::max(ymax, c.row(1).maxCoeff());
  }
  const double margin = 20.0;
  const double left = kScale * xmin - margin, top = -kScale * ymax - margin;
  const double width = kScale * (xmax - xmin) + 2 * margin, height = kScale * (ymax - ymin) + 2 * margin;

  auto points_attr = [&](const Matrix& pts, const std::vector<int>* idx) {
    std::string s;
    const Eigen::Index count = idx ? static_cast<Eigen::Index>(idx->size()) : pts.cols();
    for (Eigen::Index k = 0; k < count; ++k) {
      const Eigen::Index c = idx ? (*idx)[static_cast<std::size_t>(k)] : k;
      if (k > 0) s += ' ';
      s += px(kScale * pts(0, c)) + "," + px(-kScale * pts(1, c));
    }
    return s;
  };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + px(left) + " " + px(top) + " " +
                    px(width) + " " + px(height) + "\" width=\"" + px(width) + "\" height=\"" + px(height) + "\">\n";
  const char* strokes[] = {"#1f4e9c", "#b03a2e"};
  for (std::size_t k = 0; k < curves.size(); ++k)
    out += "  <polygon points=\"" + points_attr(curves[k], nullptr) + "\" fill=\"none\" stroke=\"" + strokes[k] +
           "\" stroke-width=\"1.5\"/>\n";
  out += "  <polygon points=\"" + points_attr(g.vertices(), &order) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  for (int i : order)
    out += "  <circle cx=\"" + px(kScale * g.vertices()(0, i)) + "\" cy=\"" + px(-kScale * g.vertices()(1, i)) +
           "\" r=\"3\" fill=\"#000000\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace tightfit
