// elastic-dg: reproduces the CBS and condition-number tables, runs the
// verification suites and solves load cases.

#include "edg/experiments.hpp"
#include "edg/matrix_market.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

struct Overrides {
  std::string config;
  std::string domain;
  std::vector<int> levels;
  std::vector<double> nus;
  std::string bc;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--domain", o.domain, "square | lshape");
  cmd->add_option("--levels", o.levels, "refinement levels")->delimiter(',');
  cmd->add_option("--nu", o.nus, "Poisson ratios")->delimiter(',');
  cmd->add_option("--bc", o.bc, "pure-dirichlet | pure-neumann | mixed | mixed(y=0,y=1)");
  cmd->add_option("--out", o.out, "csv | md");
  cmd->add_option("--seed", o.seed, "seed for start vectors and samples");
}

edg::ExperimentConfig load_config(const Overrides& o, const char* default_domain = nullptr) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw edg::ConfigError(o.config + ": " + e.what());
    }
  }
  if (default_domain && !j.contains("domain")) j["domain"] = default_domain;
  if (!o.domain.empty()) j["domain"] = o.domain;
  if (!o.levels.empty()) j["levels"] = o.levels;
  if (!o.nus.empty()) j["nu_list"] = o.nus;
  if (!o.bc.empty()) {
    j["bc"] = o.bc;
    j.erase("neumann_sides");
  }
  if (!o.out.empty()) j["output"] = o.out;
  if (o.seed) j["seed"] = *o.seed;
  return edg::ExperimentConfig::from_json(j);
}

void print_table(const edg::TableResult& t, const edg::ExperimentConfig& cfg) {
  std::cout << (cfg.output == "markdown" ? t.to_markdown() : t.to_csv());
  std::cerr << "timing " << t.quantity << ": " << t.seconds.sum() << " s over " << t.seconds.size() << " cells\n";
}

void print_report(const char* name, const edg::SolveReport& r) {
  std::printf("%s iterations=%d relative_residual=%.3e converged=%s\n", name, r.iterations, r.relative_residual,
              r.converged ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior-penalty DG elasticity: CR + Z splitting diagnostics"};
  app.require_subcommand(1);

  Overrides gamma_o, jump_o, cond_o, solve_o, verify_o;
  auto* gamma = app.add_subcommand("gamma", "CBS constant gamma^2 per level and Poisson ratio");
  add_common(gamma, gamma_o);
  auto* jump = app.add_subcommand("gamma-jump", "gamma^2 with a checkerboard jump in the Poisson ratio");
  add_common(jump, jump_o);
  auto* cond = app.add_subcommand("cond", "kappa(B^-1 A) or kappa(A_zz)");
  add_common(cond, cond_o);
  std::string which = "precond";
  cond->add_option("--which", which, "precond | zz")->check(CLI::IsMember({"precond", "zz"}));

  auto* solve = app.add_subcommand("solve", "solve a load case with the block preconditioner");
  add_common(solve, solve_o);
  std::string load_path, solution_path, matrix_path;
  edg::SolveOptions sopt;
  solve->add_option("--load", load_path, "JSON load case")->required()->check(CLI::ExistingFile);
  solve->add_flag("--deflate", sopt.deflate, "deflate rigid motions on traction-free problems");
  solve->add_flag("--project-compat", sopt.project_compat, "project an unbalanced load onto the range");
  solve->add_option("--tol", sopt.tol, "relative residual tolerance");
  solve->add_option("--maxit", sopt.maxit, "iteration cap");
  solve->add_option("--level", sopt.level, "refinement level (default: last configured)");
  solve->add_option("--solution", solution_path, "write the solution, one value per line");
  solve->add_option("--export-matrix", matrix_path, "write the system matrix (Matrix Market)");

  auto* verify = app.add_subcommand("verify", "run the property suites");
  add_common(verify, verify_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    int code = kOk;
    if (gamma->parsed()) {
      const auto cfg = load_config(gamma_o);
      print_table(edg::cmd_gamma(cfg), cfg);
    } else if (jump->parsed()) {
      const auto cfg = load_config(jump_o, "square");
      print_table(edg::cmd_gamma_jump(cfg), cfg);
    } else if (cond->parsed()) {
      const auto cfg = load_config(cond_o);
      print_table(edg::cmd_cond(cfg, which == "zz" ? edg::CondKind::Zz : edg::CondKind::Precond), cfg);
    } else if (solve->parsed()) {
      const auto cfg = load_config(solve_o);
      std::ifstream in(load_path);
      nlohmann::json lj;
      try {
        lj = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw edg::ConfigError(load_path + ": " + e.what());
      }
      const edg::MaterialField::Engineering material{cfg.young, cfg.nu_list.front()};
      const auto load = edg::LoadCase::from_json(lj, material);
      const auto res = edg::cmd_solve(cfg, load, sopt);
      std::printf("dofs=%lld config_hash=%s\n", static_cast<long long>(res.dofs), cfg.hash().c_str());
      print_report("pcg", res.pcg);
      print_report("cg", res.cg);
      if (res.error_mod_rigid) std::printf("error_mod_rigid=%.3e\n", *res.error_mod_rigid);
      if (!solution_path.empty()) edg::save_vector(res.u, solution_path);
      if (!matrix_path.empty()) edg::save_matrix_market(res.a, matrix_path);
      if (!res.pcg.converged) code = kNumerical;
    } else if (verify->parsed()) {
      const auto cfg = load_config(verify_o);
      const auto report = edg::cmd_verify(cfg);
      std::cout << report.to_text();
      if (!report.ok()) code = kVerification;
    }
    std::cerr << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
    return code;
  } catch (const edg::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
