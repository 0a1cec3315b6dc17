#include "edg/experiments.hpp"

#include <doctest.h>

using namespace edg;
using nlohmann::json;

TEST_CASE("config defaults, overrides and strict keys") {
  const ExperimentConfig d = ExperimentConfig::from_json(json::object());
  CHECK(d.domain == Domain::LShape);
  CHECK(d.levels == std::vector<int>{1, 2, 3, 4});
  CHECK(d.nu_list.size() == 5);
  CHECK(d.bc == BoundaryMode::Mixed);
  CHECK(d.penalty.alpha0 == 4.0);

  const ExperimentConfig c = ExperimentConfig::from_json(json::parse(R"j({"domain":"square","levels":[2],"alpha0":6,"bc":"mixed(x=0)"})j"));
  CHECK(c.domain == Domain::Square);
  CHECK(c.penalty.alpha0 == 6.0);
  CHECK(c.neumann_sides == std::vector<std::string>{"x=0"});

  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"penalty":{}})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"nu_list":[0.5]})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"levels":[-1]})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"domain":"circle"})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"levels":"two"})")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), ConfigError);
}

TEST_CASE("config JSON round trip and hash") {
  ExperimentConfig c;
  c.domain = Domain::Square;
  c.nu_list = {0.3, 0.49};
  c.seed = 42;
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  CHECK(c.hash().size() == 16);
  ExperimentConfig other = c;
  other.nu_list[1] = 0.499;
  CHECK(other.hash() != c.hash());
  // FNV-1a reference values
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("boundary condition strings") {
  BoundaryMode mode;
  std::vector<std::string> sides;
  parse_bc("pure-neumann", mode, sides);
  CHECK(mode == BoundaryMode::PureNeumann);
  parse_bc("mixed(y=0,y=1)", mode, sides);
  CHECK(mode == BoundaryMode::Mixed);
  CHECK(sides == std::vector<std::string>{"y=0", "y=1"});
  CHECK_THROWS_AS(parse_bc("robin", mode, sides), ConfigError);
  CHECK(to_string(BoundaryMode::PureDirichlet) == "pure-dirichlet");
  CHECK(domain_from_string(to_string(Domain::LShape)) == Domain::LShape);
}

TEST_CASE("gamma table is deterministic and well formed") {
  ExperimentConfig c;
  c.levels = {1, 2};
  c.nu_list = {0.25, 0.49};
  const TableResult a = cmd_gamma(c);
  const TableResult b = cmd_gamma(c);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.values.rows() == 2);
  CHECK(a.values.cols() == 2);
  CHECK(a.to_csv().rfind("quantity,level,nu,value,config_hash\n", 0) == 0);
  CHECK(a.to_csv().find(c.hash()) != std::string::npos);
  CHECK((a.values.array() > 0.0).all());
  CHECK((a.values.array() < 1.0).all());
  CHECK(a.to_markdown().find("| l=2") != std::string::npos);
}

TEST_CASE("significant digit formatting") {
  CHECK(format_sig4(0.068248) == "0.06825");
  CHECK(format_sig4(1.7073) == "1.707");
  CHECK(format_sig4(2.4016e-6) == "2.402e-06");
}

TEST_CASE("checkerboard needs a domain aligned with the regions") {
  ExperimentConfig c;
  c.material_regions = Checkerboard{};
  CHECK_THROWS_AS(build_mesh(c, 0), ConfigError);
  c.domain = Domain::Square;
  const Mesh m = build_mesh(c, 1);
  const MaterialField mat = build_material(c, m, 0.49);
  double lo = 1e300, hi = 0.0;
  for (Index t = 0; t < mat.size(); ++t) lo = std::min(lo, mat.element(t).lambda), hi = std::max(hi, mat.element(t).lambda);
  CHECK(lo == doctest::Approx(lame_from_engineering(1.0, 0.3).lambda));
  CHECK(hi == doctest::Approx(lame_from_engineering(1.0, 0.49).lambda));
}

TEST_CASE("traction-free solve with a manufactured linear field") {
  ExperimentConfig c;
  c.bc = BoundaryMode::PureNeumann;
  c.neumann_sides = {"all"};
  c.levels = {2};
  c.nu_list = {0.3};
  const LoadCase load = LoadCase::from_json(json::parse(R"({"manufactured_linear":{"gradient":[[0.1,0.2],[0.0,-0.3]]}})"),
                                            {1.0, 0.3});
  CHECK_THROWS_AS(cmd_solve(c, load, {}), SingularMatrixError);
  SolveOptions opt;
  opt.deflate = true;
  const SolveOutcome out = cmd_solve(c, load, opt);
  CHECK(out.pcg.converged);
  CHECK(out.cg.converged);
  REQUIRE(out.error_mod_rigid);
  CHECK(*out.error_mod_rigid < 1e-8);
  CHECK(out.pcg.iterations < out.cg.iterations);

  const LoadCase unbalanced = LoadCase::from_json(json::parse(R"({"body_force":[1,0]})"), {1.0, 0.3});
  CHECK_THROWS_AS(cmd_solve(c, unbalanced, opt), std::domain_error);
  opt.project_compat = true;
  CHECK(cmd_solve(c, unbalanced, opt).pcg.converged);
}

TEST_CASE("verification suites pass and report skips") {
  ExperimentConfig c;
  const VerifyReport r = cmd_verify(c);
  CHECK(r.ok());
  for (const auto& s : r.suites) CHECK_MESSAGE(s.status == SuiteStatus::Pass, s.name << ": " << s.detail);

  c.penalty.theta = 0;
  const VerifyReport nonsym = cmd_verify(c);
  CHECK(nonsym.ok());
  CHECK(nonsym.to_text().find("symmetry: SKIPPED") != std::string::npos);
}
