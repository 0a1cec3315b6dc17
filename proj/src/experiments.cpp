#include "edg/experiments.hpp"

#include "edg/matrix_market.hpp"
#include "edg/mesh_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace edg {

using nlohmann::json;

std::string to_string(Domain d) { return d == Domain::Square ? "square" : "lshape"; }

std::string to_string(BoundaryMode b) {
  switch (b) {
    case BoundaryMode::PureDirichlet: return "pure-dirichlet";
    case BoundaryMode::Mixed: return "mixed";
    case BoundaryMode::PureNeumann: return "pure-neumann";
  }
  return "mixed";
}

Domain domain_from_string(const std::string& s) {
  if (s == "square") return Domain::Square;
  if (s == "lshape" || s == "l-shape") return Domain::LShape;
  throw ConfigError("unknown domain '" + s + "' (expected square or lshape)");
}

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void parse_bc(const std::string& s, BoundaryMode& mode, std::vector<std::string>& sides) {
  if (s == "pure-dirichlet" || s == "dirichlet") {
    mode = BoundaryMode::PureDirichlet;
    sides.clear();
  } else if (s == "pure-neumann" || s == "neumann") {
    mode = BoundaryMode::PureNeumann;
    sides = {"all"};
  } else if (s == "mixed") {
    mode = BoundaryMode::Mixed;
  } else if (s.rfind("mixed(", 0) == 0 && s.back() == ')') {
    mode = BoundaryMode::Mixed;
    sides = split_list(s.substr(6, s.size() - 7), ',');
    if (sides.empty()) throw ConfigError("mixed boundary conditions need at least one Neumann side");
  } else {
    throw ConfigError("unknown boundary condition '" + s + "'");
  }
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"domain", "levels",    "nu_list",          "young",    "alpha0",
                                           "alpha1", "theta",     "beta0_lambda",     "bc",       "neumann_sides",
                                           "material_regions",    "zz_basis",         "mesh_file", "output", "seed"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

  ExperimentConfig c;
  try {
    if (j.contains("domain")) c.domain = domain_from_string(j.at("domain").get<std::string>());
    if (j.contains("levels")) c.levels = j.at("levels").get<std::vector<int>>();
    if (j.contains("nu_list")) c.nu_list = j.at("nu_list").get<std::vector<double>>();
    if (j.contains("young")) c.young = j.at("young").get<double>();
    if (j.contains("alpha0")) c.penalty.alpha0 = j.at("alpha0").get<double>();
    if (j.contains("alpha1")) c.penalty.alpha1 = j.at("alpha1").get<double>();
    if (j.contains("theta")) c.penalty.theta = j.at("theta").get<int>();
    if (j.contains("beta0_lambda")) c.penalty.beta0_lambda = j.at("beta0_lambda").get<double>();
    if (j.contains("bc")) parse_bc(j.at("bc").get<std::string>(), c.bc, c.neumann_sides);
    if (j.contains("neumann_sides")) c.neumann_sides = j.at("neumann_sides").get<std::vector<std::string>>();
    if (j.contains("material_regions") && !j.at("material_regions").is_null()) {
      const json& r = j.at("material_regions");
      Checkerboard cb;
      cb.first.young = r.value("young1", 1.0);
      cb.first.poisson = r.value("nu1", 0.3);
      cb.second_young = r.value("young2", 1.0);
      c.material_regions = cb;
    }
    if (j.contains("zz_basis")) c.zz_basis = j.at("zz_basis").get<std::string>();
    if (j.contains("mesh_file")) c.mesh_file = j.at("mesh_file").get<std::string>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.output == "md") c.output = "markdown";
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["domain"] = to_string(domain);
  j["levels"] = levels;
  j["nu_list"] = nu_list;
  j["young"] = young;
  j["alpha0"] = penalty.alpha0;
  j["alpha1"] = penalty.alpha1;
  j["theta"] = penalty.theta;
  j["beta0_lambda"] = penalty.beta0_lambda;
  j["bc"] = to_string(bc);
  j["neumann_sides"] = neumann_sides;
  if (material_regions) {
    j["material_regions"] = {{"young1", material_regions->first.young},
                             {"nu1", material_regions->first.poisson},
                             {"young2", material_regions->second_young}};
  } else {
    j["material_regions"] = nullptr;
  }
  j["zz_basis"] = zz_basis;
  j["mesh_file"] = mesh_file;
  j["output"] = output;
  j["seed"] = seed;
  return j;
}

void ExperimentConfig::validate() const {
  if (levels.empty()) throw ConfigError("levels must not be empty");
  for (int l : levels)
    if (l < 0 || l > 4) throw ConfigError("levels must lie in [0, 4], got " + std::to_string(l));
  if (nu_list.empty()) throw ConfigError("nu_list must not be empty");
  for (double nu : nu_list)
    if (!(nu >= 0.0 && nu < 0.5)) throw ConfigError("Poisson ratios must lie in [0, 0.5)");
  if (!(young > 0.0)) throw ConfigError("young must be positive");
  if (!(penalty.alpha0 >= 0.0) || !(penalty.alpha1 >= 0.0)) throw ConfigError("penalty parameters must be nonnegative");
  if (!(penalty.beta0_lambda >= 0.0)) throw ConfigError("beta0_lambda must be nonnegative");
  if (penalty.theta < -1 || penalty.theta > 1) throw ConfigError("theta must be -1, 0 or 1");
  if (zz_basis != "nodal" && zz_basis != "split") throw ConfigError("zz_basis must be nodal or split");
  if (output != "csv" && output != "markdown") throw ConfigError("output must be csv or markdown");
  if (bc == BoundaryMode::Mixed) {
    if (neumann_sides.empty()) throw ConfigError("mixed boundary conditions need at least one Neumann side");
    try {
      sides_predicate(neumann_sides);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (material_regions) {
    if (!(material_regions->first.young > 0.0) || !(material_regions->second_young > 0.0))
      throw ConfigError("material_regions: moduli must be positive");
    if (!(material_regions->first.poisson >= 0.0 && material_regions->first.poisson < 0.5))
      throw ConfigError("material_regions: nu1 must lie in [0, 0.5)");
  }
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

namespace {

bool in_region(int region, const Point& x, double tol) {
  const bool low_x = x.x() <= 0.5 + tol, high_x = x.x() >= 0.5 - tol;
  const bool low_y = x.y() <= 0.5 + tol, high_y = x.y() >= 0.5 - tol;
  const bool first = (low_x && low_y) || (high_x && high_y);
  const bool second = (low_x && high_y) || (high_x && low_y);
  return region == 1 ? first : second;
}

int checker_region(const Point& c) { return (c.x() < 0.5) == (c.y() < 0.5) ? 1 : 2; }

}  // namespace

Mesh build_mesh(const ExperimentConfig& cfg, int level) {
  Mesh coarse;
  if (!cfg.mesh_file.empty()) {
    coarse = load_mesh(cfg.mesh_file);
  } else {
    coarse = cfg.domain == Domain::Square ? unit_square_coarse() : lshape_coarse();
    switch (cfg.bc) {
      case BoundaryMode::PureDirichlet: coarse = classify_boundary(coarse, {}); break;
      case BoundaryMode::PureNeumann: coarse = classify_boundary(coarse, sides_predicate({"all"})); break;
      case BoundaryMode::Mixed: coarse = classify_boundary(coarse, sides_predicate(cfg.neumann_sides)); break;
    }
  }
  if (cfg.material_regions) {
    coarse = assign_regions(coarse, checker_region);
    for (const auto& t : coarse.triangles())
      for (Index v : t.vertices)
        if (!in_region(t.region, coarse.vertex(v), 1e-12))
          throw ConfigError("material regions are not aligned with the coarsest mesh");
  }
  return refine(coarse, level);
}

MaterialField build_material(const ExperimentConfig& cfg, const Mesh& mesh, double nu) {
  if (cfg.material_regions)
    return MaterialField::from_regions(mesh, {{1, cfg.material_regions->first}, {2, {cfg.material_regions->second_young, nu}}});
  return MaterialField::uniform(mesh, cfg.young, nu);
}

std::string format_sig4(double v) {
  char buf[64];
  if (v != 0.0 && std::abs(v) < 1e-3)
    std::snprintf(buf, sizeof buf, "%.3e", v);
  else
    std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

namespace {

std::string nu_label(double nu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", nu);
  return buf;
}

}  // namespace

std::string TableResult::to_csv() const {
  std::ostringstream out;
  out << "quantity,level,nu,value,config_hash\n";
  char buf[64];
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t k = 0; k < nus.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", values(static_cast<Index>(i), static_cast<Index>(k)));
      out << quantity << ',' << levels[i] << ',' << nu_label(nus[k]) << ',' << buf << ',' << config_hash << '\n';
    }
  }
  return out.str();
}

std::string TableResult::to_markdown() const {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({quantity});
  for (double nu : nus) rows.back().push_back("nu=" + nu_label(nu));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    rows.push_back({"l=" + std::to_string(levels[i])});
    for (std::size_t k = 0; k < nus.size(); ++k)
      rows.back().push_back(format_sig4(values(static_cast<Index>(i), static_cast<Index>(k))));
  }
  std::vector<std::size_t> width(rows.front().size(), 3);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());

  std::ostringstream out;
  const auto emit = [&](const std::vector<std::string>& r) {
    out << '|';
    for (std::size_t c = 0; c < r.size(); ++c) out << ' ' << r[c] << std::string(width[c] - r[c].size(), ' ') << " |";
    out << '\n';
  };
  emit(rows.front());
  out << '|';
  for (std::size_t c = 0; c < width.size(); ++c) out << std::string(width[c] + 2, '-') << '|';
  out << '\n';
  for (std::size_t r = 1; r < rows.size(); ++r) emit(rows[r]);
  out << "\nconfig hash: " << config_hash << '\n';
  for (const auto& n : notes) out << "note: " << n << '\n';
  return out.str();
}

namespace {

using CellFn = std::function<double(const Mesh&, const SplitLayout&, const BlockOperator&)>;

GammaOptions gamma_options(const ExperimentConfig& cfg) {
  GammaOptions g;
  g.lanczos.seed = cfg.seed;
  return g;
}

TableResult sweep(const ExperimentConfig& cfg, const std::string& quantity, const CellFn& cell) {
  cfg.validate();
  TableResult t;
  t.quantity = quantity;
  t.levels = cfg.levels;
  t.nus = cfg.nu_list;
  t.values.resize(static_cast<Index>(cfg.levels.size()), static_cast<Index>(cfg.nu_list.size()));
  t.seconds.resizeLike(t.values);
  t.config_hash = cfg.hash();
  if (cfg.domain == Domain::Square && cfg.mesh_file.empty())
    t.notes.push_back("square boundary conditions are an assumption: " + to_string(cfg.bc) +
                      (cfg.bc == BoundaryMode::Mixed ? " with Neumann sides " + json(cfg.neumann_sides).dump() : ""));
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    const Mesh mesh = build_mesh(cfg, cfg.levels[i]);
    const SplitLayout layout(mesh);
    const SparseMatrix q = basis_change_matrix(mesh, layout);
    for (std::size_t k = 0; k < cfg.nu_list.size(); ++k) {
      const auto start = std::chrono::steady_clock::now();
      const MaterialField mat = build_material(cfg, mesh, cfg.nu_list[k]);
      const BlockOperator blocks = block_partition(assemble_A(mesh, mat, cfg.penalty), q, layout.nz());
      const Index r = static_cast<Index>(i), c = static_cast<Index>(k);
      t.values(r, c) = cell(mesh, layout, blocks);
      t.seconds(r, c) = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  }
  return t;
}

void require_symmetric_method(const ExperimentConfig& cfg) {
  if (cfg.penalty.theta != -1) throw ConfigError("spectral tables need the symmetric method (theta = -1)");
}

}  // namespace

TableResult cmd_gamma(const ExperimentConfig& cfg) {
  require_symmetric_method(cfg);
  const GammaOptions g = gamma_options(cfg);
  return sweep(cfg, "gamma_sq", [&](const Mesh&, const SplitLayout&, const BlockOperator& b) { return cbs_gamma_sq(b, g); });
}

TableResult cmd_gamma_jump(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  if (!c.material_regions) c.material_regions = Checkerboard{};
  TableResult t = cmd_gamma(c);
  t.quantity = "gamma_sq_jump";
  return t;
}

TableResult cmd_cond(const ExperimentConfig& cfg, CondKind which) {
  require_symmetric_method(cfg);
  const GammaOptions g = gamma_options(cfg);
  if (which == CondKind::Precond)
    return sweep(cfg, "kappa_precond", [&](const Mesh&, const SplitLayout&, const BlockOperator& b) { return cond_precond(b, g); });
  const bool nodal = cfg.zz_basis == "nodal";
  TableResult t = sweep(cfg, "kappa_zz", [&](const Mesh& m, const SplitLayout& layout, const BlockOperator& b) {
    return zz_spectrum(b, nodal ? z_nodal_scaling(m, layout) : Vector(), g.lanczos).condition();
  });
  t.notes.push_back(std::string("Z basis: ") + (nodal ? "phi+ - phi- (nodal differences)" : "(phi+ - phi-)/2"));
  return t;
}

// ---------------------------------------------------------------------------
// solve

namespace {

Eigen::Vector2d json_vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::Matrix2d json_mat2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be a 2x2 array");
  Eigen::Matrix2d m;
  for (int r = 0; r < 2; ++r) m.row(r) = json_vec2(j[static_cast<std::size_t>(r)], what).transpose();
  return m;
}

Eigen::MatrixXd orthonormal_rigid_basis(const Mesh& mesh) {
  const Eigen::MatrixXd r = rigid_motion_basis(mesh).matrix();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
  return qr.householderQ() * Eigen::MatrixXd::Identity(r.rows(), r.cols());
}

Vector interpolate_linear(const Mesh& mesh, const Eigen::Matrix2d& g, const Eigen::Vector2d& c) {
  Vector u(6 * mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) u.segment<2>(6 * t + 2 * i) = g * mesh.face(mesh.element_face(t, i)).midpoint + c;
  return u;
}

}  // namespace

LoadCase LoadCase::from_json(const json& j, const MaterialField::Engineering& material) {
  if (!j.is_object()) throw ConfigError("load file must be a JSON object");
  LoadCase lc;
  try {
    for (const auto& [key, value] : j.items())
      if (key != "body_force" && key != "traction" && key != "manufactured_linear")
        throw ConfigError("unknown load key '" + key + "'");
    if (j.contains("manufactured_linear")) {
      if (j.contains("body_force") || j.contains("traction"))
        throw ConfigError("manufactured_linear excludes body_force and traction");
      const json& m = j.at("manufactured_linear");
      const Eigen::Matrix2d g = json_mat2(m.at("gradient"), "gradient");
      lc.exact_gradient = g;
      if (m.contains("shift")) lc.exact_shift = json_vec2(m.at("shift"), "shift");
      const Lame lame = lame_from_engineering(material.young, material.poisson);
      const Eigen::Matrix2d eps = 0.5 * (g + g.transpose());
      const Eigen::Matrix2d sigma = apply_elasticity_tensor<double>(eps, lame.mu, lame.lambda);
      lc.spec.traction = [sigma](const Point&, const Eigen::Vector2d& n) -> Eigen::Vector2d { return sigma * n; };
      return lc;
    }
    if (j.contains("body_force")) {
      const json& f = j.at("body_force");
      Eigen::Vector2d c = Eigen::Vector2d::Zero();
      Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
      if (f.is_array()) {
        c = json_vec2(f, "body_force");
      } else {
        if (f.contains("constant")) c = json_vec2(f.at("constant"), "body_force.constant");
        if (f.contains("gradient")) g = json_mat2(f.at("gradient"), "body_force.gradient");
      }
      lc.spec.body_force = [c, g](const Point& x) -> Eigen::Vector2d { return c + g * x; };
    }
    if (j.contains("traction")) {
      const Eigen::Vector2d tr = json_vec2(j.at("traction"), "traction");
      lc.spec.traction = [tr](const Point&, const Eigen::Vector2d&) -> Eigen::Vector2d { return tr; };
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("load file: ") + e.what());
  }
  return lc;
}

SolveOutcome cmd_solve(const ExperimentConfig& cfg, const LoadCase& load, const SolveOptions& opt) {
  cfg.validate();
  if (cfg.material_regions && load.exact_gradient)
    throw ConfigError("manufactured solutions need a homogeneous material");
  const int level = opt.level < 0 ? cfg.levels.back() : opt.level;
  const Mesh mesh = build_mesh(cfg, level);
  const double nu = cfg.nu_list.front();
  const MaterialField mat = build_material(cfg, mesh, nu);
  if (load.exact_gradient && mesh.count(FaceKind::Dirichlet) > 0)
    throw ConfigError("manufactured_linear needs traction data on the whole boundary (bc pure-neumann)");

  SolveOutcome out;
  out.a = assemble_A(mesh, mat, cfg.penalty);
  out.dofs = out.a.rows();
  Vector f = assemble_rhs(mesh, mat, load.spec);

  const SplitLayout layout(mesh);
  const SparseMatrix q = basis_change_matrix(mesh, layout);
  const BlockOperator blocks = block_partition(out.a, q, layout.nz());

  const bool singular = mesh.count(FaceKind::Dirichlet) == 0;
  Eigen::MatrixXd rigid;
  if (singular) {
    if (!opt.deflate)
      throw SingularMatrixError("traction-free system is singular (rigid motions); pass --deflate", 3);
    rigid = orthonormal_rigid_basis(mesh);
    const double fn = f.norm();
    const double incompat = fn > 0.0 ? (rigid.transpose() * f).norm() / fn : 0.0;
    if (incompat > 1e-10) {
      if (!opt.project_compat) {
        std::ostringstream msg;
        msg << "load is not balanced against rigid motions (relative component " << incompat
            << "); pass --project-compat";
        throw std::domain_error(msg.str());
      }
      f -= rigid * (rigid.transpose() * f);
    }
  }

  const SparseMatrix& a = out.a;
  LinearOperator a_op = as_operator(a);
  const PreconditionerB b(blocks, q, singular);
  LinearOperator b_op = b.as_operator();
  if (singular) {
    a_op = deflate(a_op, rigid);
    b_op = deflate(b_op, rigid);
  }
  SolveResult pcg_res = pcg(a_op, b_op, f, opt.tol, opt.maxit);
  const SolveResult cg_res = cg(a_op, f, opt.tol, opt.maxit);
  out.pcg = pcg_res.report;
  out.cg = cg_res.report;
  out.u = std::move(pcg_res.x);

  if (load.exact_gradient) {
    const Vector exact = interpolate_linear(mesh, *load.exact_gradient, load.exact_shift);
    Vector diff = out.u - exact;
    diff -= rigid * (rigid.transpose() * diff);
    Vector ref = exact - rigid * (rigid.transpose() * exact);
    out.error_mod_rigid = diff.norm() / std::max(ref.norm(), 1e-300);
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify

bool VerifyReport::ok() const {
  return std::none_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.status == SuiteStatus::Fail; });
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  for (const auto& s : suites) {
    const char* tag = s.status == SuiteStatus::Pass ? "PASS" : s.status == SuiteStatus::Fail ? "FAIL" : "SKIPPED";
    out << s.name << ": " << tag;
    if (!s.detail.empty()) out << " (" << s.detail << ")";
    out << '\n';
  }
  return out.str();
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_abs(const SparseMatrix& m) { return m.nonZeros() == 0 ? 0.0 : m.coeffs().cwiseAbs().maxCoeff(); }

ExperimentConfig with_bc(ExperimentConfig c, Domain d, BoundaryMode mode) {
  c.domain = d;
  c.bc = mode;
  c.mesh_file.clear();
  c.material_regions.reset();
  if (mode == BoundaryMode::Mixed) c.neumann_sides = {"y=0", "y=1"};
  return c;
}

SuiteResult suite_orthogonality(const ExperimentConfig& cfg) {
  SuiteResult r{"orthogonality", SuiteStatus::Pass, ""};
  double worst = 0.0;
  for (Domain d : {Domain::Square, Domain::LShape}) {
    for (BoundaryMode mode : {BoundaryMode::PureDirichlet, BoundaryMode::Mixed, BoundaryMode::PureNeumann}) {
      const ExperimentConfig c = with_bc(cfg, d, mode);
      const Mesh mesh = build_mesh(c, 1);
      const SplitLayout layout(mesh);
      const SparseMatrix a0 = assemble_A0(mesh, build_material(c, mesh, c.nu_list.front()), c.penalty);
      const BlockOperator b = block_partition(a0, basis_change_matrix(mesh, layout), layout.nz());
      const double rel = std::max(max_abs(b.zv), max_abs(b.vz)) / max_abs(a0);
      worst = std::max(worst, rel);
      if (rel > 1e-11) {
        r.status = SuiteStatus::Fail;
        r.detail = to_string(d) + "/" + to_string(mode) + ": off-diagonal block " + fmt("%.3e", rel);
        return r;
      }
    }
  }
  r.detail = "6 configurations, max relative off-diagonal " + fmt("%.2e", worst);
  return r;
}

SuiteResult suite_symmetry(const ExperimentConfig& cfg) {
  if (cfg.penalty.theta != -1)
    return {"symmetry", SuiteStatus::Skipped, "matrix not symmetric for theta = " + std::to_string(cfg.penalty.theta)};
  const Mesh mesh = build_mesh(cfg, 1);
  const SparseMatrix a = assemble_A(mesh, build_material(cfg, mesh, cfg.nu_list.front()), cfg.penalty);
  if (!is_symmetric(a, 1e-13)) return {"symmetry", SuiteStatus::Fail, "A - A^T exceeds 1e-13 max|A|"};
  return {"symmetry", SuiteStatus::Pass, ""};
}

SuiteResult suite_cardinality(const ExperimentConfig& cfg) {
  std::size_t n1 = 0, n2 = 0;
  for (Domain d : {Domain::Square, Domain::LShape}) {
    const ExperimentConfig c = with_bc(cfg, d, BoundaryMode::Mixed);
    for (int level = 0; level <= 4; ++level) {
      const Mesh mesh = build_mesh(c, level);
      for (Index f = 0; f < mesh.num_faces(); ++f) {
        n1 = std::max(n1, neighbor_set(mesh, f, 1).size());
        n2 = std::max(n2, neighbor_set(mesh, f, 2).size());
      }
    }
  }
  const std::string detail = "max |N1| = " + std::to_string(n1) + ", max |N2| = " + std::to_string(n2);
  const std::size_t k = 2 * kDim + 1;
  return {"cardinality", n1 <= k && n2 <= k * k ? SuiteStatus::Pass : SuiteStatus::Fail, detail};
}

SuiteResult suite_rho(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.domain = Domain::Square;
  c.mesh_file.clear();
  const Mesh mesh = build_mesh(c, 2);
  const double rho = rho_bound(assemble_S_D(mesh));
  const double bound = rho_upper_bound(mesh);
  const double ratio = verify_projected_jump_inequality(mesh, 200, cfg.seed);
  const bool ok = rho >= 1.0 - 1e-12 && rho <= bound && ratio <= 1.0 - 1.0 / rho + 1e-12;
  std::string detail = "rho = " + fmt("%.6g", rho) + ", bound " + fmt("%.6g", bound) + ", max ratio " + fmt("%.6g", ratio) +
                       " vs 1 - 1/rho = " + fmt("%.6g", 1.0 - 1.0 / rho);
  return {"rho", ok ? SuiteStatus::Pass : SuiteStatus::Fail, detail};
}

SuiteResult suite_cs_sampling(const ExperimentConfig& cfg) {
  if (cfg.penalty.theta != -1) return {"cs-sampling", SuiteStatus::Skipped, "needs the symmetric method"};
  const Mesh mesh = build_mesh(cfg, cfg.levels.front() == 0 ? 1 : std::min(cfg.levels.front(), 2));
  const SplitLayout layout(mesh);
  const BlockOperator b = block_partition(assemble_A(mesh, build_material(cfg, mesh, cfg.nu_list.front()), cfg.penalty),
                                          basis_change_matrix(mesh, layout), layout.nz());
  GammaOptions g;
  g.lanczos.seed = cfg.seed;
  const double gamma_sq = cbs_gamma_sq(b, g);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vector z = Vector::NullaryExpr(b.nz(), [&]() { return normal(rng); });
    const Vector v = Vector::NullaryExpr(b.nv(), [&]() { return normal(rng); });
    const double c = z.dot(b.zv * v);
    const double zz = z.dot(b.zz * z), vv = v.dot(b.vv * v);
    if (zz * vv > 0.0) worst = std::max(worst, c * c / (zz * vv));
  }
  const bool ok = worst <= gamma_sq * (1.0 + 1e-8) + 1e-15;
  return {"cs-sampling", ok ? SuiteStatus::Pass : SuiteStatus::Fail,
          "max sampled cos^2 " + fmt("%.4g", worst) + " <= gamma^2 " + fmt("%.4g", gamma_sq)};
}

SuiteResult suite_rigid_motion(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.bc = BoundaryMode::PureNeumann;
  c.mesh_file.clear();
  const Mesh mesh = build_mesh(c, 1);
  const SparseMatrix a = assemble_A(mesh, build_material(c, mesh, c.nu_list.front()), c.penalty);
  const RigidMotionBasis rm = rigid_motion_basis(mesh);
  double worst = 0.0;
  for (const Vector& r : rm.vectors) worst = std::max(worst, (a * r).norm() / (a.norm() * r.norm()));
  std::string detail = "max |A r| / (|A| |r|) = " + fmt("%.2e", worst);
  bool ok = worst <= 1e-11;
  if (c.penalty.theta == -1) {
    const SymmetricFactorization f(a, true);
    detail += ", null pivots " + std::to_string(f.null_dim());
    ok = ok && f.null_dim() == 3;
  }
  return {"rigid-motion", ok ? SuiteStatus::Pass : SuiteStatus::Fail, detail};
}

SuiteResult suite_round_trip(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (Domain d : {Domain::Square, Domain::LShape}) {
    const Mesh mesh = build_mesh(with_bc(cfg, d, BoundaryMode::Mixed), 1);
    const SplitLayout layout(mesh);
    for (int s = 0; s < 100; ++s) {
      const Vector u = Vector::NullaryExpr(6 * mesh.num_triangles(), [&]() { return normal(rng); });
      worst = std::max(worst, (recombine(mesh, layout, split(mesh, layout, u)) - u).cwiseAbs().maxCoeff());
    }
  }
  return {"round-trip", worst <= 1e-13 ? SuiteStatus::Pass : SuiteStatus::Fail, "max error " + fmt("%.2e", worst)};
}

SuiteResult suite_product_identity(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const double a = unif(rng), b = unif(rng), c = unif(rng), d = unif(rng);
    worst = std::max(worst, product_identity_residual(a, b, c, d, [](double x, double y) { return x * y; }));
    const Eigen::Vector2d va = Eigen::Vector2d::NullaryExpr([&]() { return unif(rng); });
    const Eigen::Vector2d vb = Eigen::Vector2d::NullaryExpr([&]() { return unif(rng); });
    const Eigen::Vector2d vc = Eigen::Vector2d::NullaryExpr([&]() { return unif(rng); });
    const Eigen::Vector2d vd = Eigen::Vector2d::NullaryExpr([&]() { return unif(rng); });
    worst = std::max(worst, product_identity_residual(va, vb, vc, vd,
                                                      [](const Eigen::Vector2d& x, const Eigen::Vector2d& y) { return x.dot(y); }));
  }
  return {"product-identity", worst <= 1e-14 ? SuiteStatus::Pass : SuiteStatus::Fail, "max residual " + fmt("%.2e", worst)};
}

SuiteResult suite_elasticity_tensor(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  bool ok = true;
  double lo = 1e300, hi = -1e300;
  for (double nu : cfg.nu_list) {
    const Lame l = lame_from_engineering(cfg.young, nu);
    for (int s = 0; s < 100; ++s) {
      Eigen::Matrix2d m = Eigen::Matrix2d::NullaryExpr([&]() { return normal(rng); });
      m = 0.5 * (m + m.transpose()).eval();
      const double q = apply_elasticity_tensor<double>(m, l.mu, l.lambda).cwiseProduct(m).sum() / m.squaredNorm();
      const double lower = 2.0 * l.mu, upper = 2.0 * l.mu + kDim * l.lambda;
      lo = std::min(lo, q / lower);
      hi = std::max(hi, q / upper);
      if (q < lower * (1.0 - 1e-12) || q > upper * (1.0 + 1e-12)) ok = false;
    }
  }
  return {"elasticity-tensor", ok ? SuiteStatus::Pass : SuiteStatus::Fail,
          "min q/(2mu) = " + fmt("%.6g", lo) + ", max q/(2mu+2lambda) = " + fmt("%.6g", hi)};
}

SuiteResult suite_coercivity(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.bc = BoundaryMode::PureNeumann;
  c.mesh_file.clear();
  std::string detail;
  for (int level : {1, 2}) {
    const Mesh mesh = build_mesh(c, level);
    for (double nu : {c.nu_list.front(), c.nu_list.back()}) {
      const SparseMatrix a = assemble_operators(mesh, build_material(c, mesh, nu), c.penalty).ip1(c.penalty.theta);
      const SparseMatrix sym = 0.5 * (a + SparseMatrix(a.transpose()));
      const Eigen::MatrixXd rm = rigid_motion_basis(mesh).matrix();
      LanczosOptions lo;
      lo.seed = cfg.seed;
      for (Index k = 0; k < rm.cols(); ++k) lo.deflate.push_back(rm.col(k));
      const EigenExtremes ev = lanczos_extremes(sym.rows(), as_operator(sym), {}, {}, lo);
      if (!(ev.lambda_min > 1e-10 * ev.lambda_max)) {
        return {"coercivity", SuiteStatus::Fail,
                "lambda_min = " + fmt("%.4g", ev.lambda_min) + " on the complement of rigid motions at level " +
                    std::to_string(level) + ", nu = " + nu_label(nu) + " (alpha0 = " + fmt("%g", c.penalty.alpha0) + ")"};
      }
      detail = "min lambda_min/lambda_max " + fmt("%.3g", ev.lambda_min / ev.lambda_max);
    }
  }
  return {"coercivity", SuiteStatus::Pass, detail};
}

}  // namespace

VerifyReport cmd_verify(const ExperimentConfig& cfg) {
  cfg.validate();
  using Suite = SuiteResult (*)(const ExperimentConfig&);
  const std::pair<const char*, Suite> suites[] = {
      {"orthogonality", suite_orthogonality}, {"symmetry", suite_symmetry},
      {"cardinality", suite_cardinality},     {"rho", suite_rho},
      {"cs-sampling", suite_cs_sampling},     {"rigid-motion", suite_rigid_motion},
      {"round-trip", suite_round_trip},       {"product-identity", suite_product_identity},
      {"elasticity-tensor", suite_elasticity_tensor}, {"coercivity", suite_coercivity}};
  VerifyReport report;
  for (const auto& [name, run] : suites) {
    try {
      report.suites.push_back(run(cfg));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      report.suites.push_back({name, SuiteStatus::Fail, e.what()});
    }
  }
  return report;
}

}  // namespace edg
