#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const std::string& args) {
  const std::string err_path = "cli_test_stderr.txt";
  const std::string cmd = std::string(TIGHTFIT_CLI) + " " + args + " 2>" + err_path;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  std::remove(err_path.c_str());
  return r;
}

const std::string kTriPair =
    R"({"outer":{"dim":2,"form":[[0.25,0],[0,0.25]]},"inner":{"dim":2,"form":[[1,0],[0,1]]}})";
const std::string kLoosePair =
    R"({"outer":{"dim":2,"form":[[0.09,0],[0,0.16]]},"inner":{"dim":2,"form":[[1,0],[0,1]]}})";
const std::string kSquarePair =
    R"({"outer":{"dim":2,"form":[[1,0],[0,1]]},"inner":{"dim":2,"form":[[2,0],[0,2]]}})";

}  // namespace

TEST_CASE("construct simplex: example, determinism and the --q/--seed exclusion") {
  const Run r = run("construct simplex --pair " + quote(kTriPair) + " --q '[[1,0],[0,1]]'");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("status") == "tight");
  CHECK(j.at("polytope").at("kind") == "simplex");
  const Json& v = j.at("polytope").at("vertices");
  CHECK(v[0][0].get<double>() == doctest::Approx(2.0));
  CHECK(v[1][1].get<double>() == doctest::Approx(std::sqrt(3.0)));
  CHECK(v[2][1].get<double>() == doctest::Approx(-std::sqrt(3.0)));
  CHECK(j.at("steps").size() == 2);
  CHECK(j.at("diagnostics").at("trace").get<double>() == doctest::Approx(1.0));

  const Run a = run("construct simplex --pair " + quote(kTriPair) + " --seed 11");
  const Run b = run("construct simplex --pair " + quote(kTriPair) + " --seed 11");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run("construct simplex --pair " + quote(kTriPair) + " --seed 12").out != a.out);

  CHECK(run("construct simplex --pair " + quote(kTriPair) + " --seed 1 --q '[[1,0],[0,1]]'").code == 2);
}

TEST_CASE("construct: fitting-not-tight, sweep and infeasible exits") {
  const Run loose = run("construct simplex --pair " + quote(kLoosePair) + " --seed 3");
  REQUIRE(loose.code == 0);
  const Json j = Json::parse(loose.out);
  CHECK(j.at("status") == "fitting-not-tight");
  CHECK(j.at("diagnostics").at("trace_from_av_star").get<double>() == doctest::Approx(0.7).epsilon(1e-10));

  const Run sweep = run("construct simplex --pair " + quote(kLoosePair) + " --seed 3 --sweep 0.7");
  REQUIRE(sweep.code == 0);
  const Json js = Json::parse(sweep.out);
  CHECK(js.at("diagnostics").at("sweep_s").get<double>() == 0.7);
  CHECK(js.at("q") == j.at("q"));
  CHECK(js.at("polytope") != j.at("polytope"));

  const Run par = run("construct parallelotope --pair " + quote(kLoosePair) + " --seed 3");
  CHECK(par.code == 1);
  CHECK(par.out.empty());
  const Json err = Json::parse(par.err);
  CHECK(err.at("error") == "infeasible");
  CHECK(err.at("diagnostics").at("circumradius").get<double>() == doctest::Approx(0.5));

  const Run sq = run("construct parallelotope --pair " + quote(kSquarePair) + " --seed 3");
  CHECK(sq.code == 0);
  CHECK(Json::parse(sq.out).at("status") == "tight");
  const Run cr = run("construct crosspolytope --pair " + quote(kSquarePair) + " --seed 3");
  CHECK(cr.code == 0);
  CHECK(Json::parse(cr.out).at("status") == "tight");
}

TEST_CASE("verify: round trip through a file, sampling oracle and errors") {
  const Run c = run("construct simplex --pair " + quote(kTriPair) + " --seed 5");
  REQUIRE(c.code == 0);
  {
    std::ofstream f("cli_poly.json");
    f << Json::parse(c.out).at("polytope").dump();
  }
  const Run v = run("verify --polytope cli_poly.json --pair " + quote(kTriPair) + " --sample 2000 --seed 1");
  REQUIRE(v.code == 0);
  const Json j = Json::parse(v.out);
  CHECK(j.at("report").at("tight") == true);
  CHECK(j.at("oracle").at("tight") == true);
  std::remove("cli_poly.json");

  const Run flat = run("verify --polytope '{\"kind\":\"simplex\",\"dim\":2,\"vertices\":[[1,0],[2,0],[3,0]]}' --pair " +
                       quote(kTriPair));
  CHECK(flat.code == 3);
  CHECK(Json::parse(flat.err).at("error") == "degenerate");

  const Run missing = run("verify --polytope no_such_file.json --pair " + quote(kTriPair));
  CHECK(missing.code == 2);
  CHECK(Json::parse(missing.err).contains("message"));
  CHECK(run("").code == 2);
  CHECK(run("construct simplex").code == 2);
}

TEST_CASE("solve-a reports traces and verdicts") {
  const Run r = run("solve-a --outer '{\"dim\":2,\"form\":[[0.09,0],[0,0.16]]}' --inner '{\"dim\":2,\"form\":[[1,0],[0,1]]}'");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("trace").get<double>() == doctest::Approx(0.7));
  CHECK(j.at("trace_sq").get<double>() == doctest::Approx(0.25));
  CHECK(j.at("simplex") == "fitting");
  CHECK(j.at("parallelotope") == "infeasible");
}

TEST_CASE("families and the classical relation") {
  const Run t = run("family tetra --a 3 --b 3 --c 3 --x 1 --y 1 --z 1");
  REQUIRE(t.code == 0);
  const Json jt = Json::parse(t.out);
  CHECK(jt.at("report").at("tight") == true);
  CHECK(jt.at("diagnostics").at("F").get<double>() == doctest::Approx(1.0));

  const Run tmin = run("family tetra --a 2 --b 3 --c 6");
  REQUIRE(tmin.code == 0);
  CHECK(Json::parse(tmin.out).at("report").at("tight") == true);
  CHECK(run("family tetra --a 0.5 --b 3 --c 6").code == 2);

  const Run f = run("family fakecube --r 1 --s 3");
  REQUIRE(f.code == 0);
  CHECK(Json::parse(f.out).at("report").at("tight") == true);

  const Run cl = run("classical --R 2 --r 1 --d 0 --k 3");
  REQUIRE(cl.code == 0);
  CHECK(std::abs(Json::parse(cl.out).at("residual").get<double>()) < 1e-15);
  const Run cl4 = run("classical --R 1 --r 0.4 --k 3");
  CHECK(Json::parse(cl4.out).at("residual").get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("icosa: sweep CSV, summary and OBJ output") {
  const Run s = run("icosa sweep --steps 2");
  REQUIRE(s.code == 0);
  CHECK(s.out.rfind("b,alpha1,z_penta,alpha2,c,abs_diff,residual_max,error\n", 0) == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 4);
  CHECK(run("icosa sweep --steps 2").out == s.out);

  const Run f = run("icosa sweep --steps 2 --out cli_sweep.csv");
  REQUIRE(f.code == 0);
  CHECK(slurp("cli_sweep.csv") == s.out);
  const Json summary = Json::parse(f.out);
  CHECK(summary.at("rows") == 3);
  CHECK(summary.at("failures") == 0);
  CHECK(summary.at("max_abs_diff").get<double>() > 1e-3);
  std::remove("cli_sweep.csv");

  const Run o = run("icosa solve --b 0.7 --position face --out cli_ico.obj");
  REQUIRE(o.code == 0);
  CHECK(Json::parse(o.out).at("residual_max").get<double>() < 1e-10);
  const std::string obj = slurp("cli_ico.obj");
  std::size_t faces = 0;
  for (std::size_t pos = obj.find("\nf "); pos != std::string::npos; pos = obj.find("\nf ", pos + 1)) ++faces;
  CHECK(faces == 20);
  std::remove("cli_ico.obj");
  CHECK(run("icosa solve --b 0.7 --position edge").code == 2);
}

TEST_CASE("export: json, obj and svg") {
  const std::string tri = R"({"kind":"simplex","dim":2,"vertices":[[2,0],[-1,1.7320508075688772],[-1,-1.7320508075688772]]})";
  const Run j = run("export --format json --polytope " + quote(tri));
  REQUIRE(j.code == 0);
  CHECK(Json::parse(j.out).at("kind") == "simplex");
  const Run svg = run("export --format svg --polytope " + quote(tri) + " --pair " + quote(kTriPair));
  REQUIRE(svg.code == 0);
  CHECK(svg.out.find("<svg") == 0);
  CHECK(run("export --format obj --polytope " + quote(tri)).code != 0);

  const Run cube = run("export --format obj --polytope '{\"kind\":\"parallelotope\",\"dim\":3,\"vertices\":[[1,0,0],[0,1,0],[0,0,1]]}'");
  REQUIRE(cube.code == 0);
  CHECK(std::count(cube.out.begin(), cube.out.end(), '\n') == 1 + 8 + 12);
}
