#pragma once

#include "edg/assembly.hpp"
#include "edg/splitting.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace edg {

/// Invalid configuration or command-line input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Domain { Square, LShape };

enum class BoundaryMode { PureDirichlet, Mixed, PureNeumann };

/// Two materials on the 2x2 checkerboard of the unit square; region 1 is
/// [0,.5]^2 and [.5,1]^2.
struct Checkerboard {
  MaterialField::Engineering first{1.0, 0.3};
  double second_young = 1.0;  // the second Poisson ratio comes from nu_list
};

struct ExperimentConfig {
  Domain domain = Domain::LShape;
  std::vector<int> levels{1, 2, 3, 4};
  std::vector<double> nu_list{0.25, 0.4, 0.49, 0.499, 0.49999};
  double young = 1.0;
  PenaltyParams penalty{};
  BoundaryMode bc = BoundaryMode::Mixed;
  std::vector<std::string> neumann_sides{"y=0", "y=1"};
  std::optional<Checkerboard> material_regions;
  /// Z basis for kappa(A_zz): "nodal" (phi+ - phi-) or "split" (psi^z).
  std::string zz_basis = "nodal";
  std::string mesh_file;  // overrides the built-in coarse mesh when set
  std::string output = "csv";
  std::uint64_t seed = 0x5eed;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Throws ConfigError.
  void validate() const;
  /// FNV-1a of the canonical JSON dump, as 16 hex digits.
  std::string hash() const;
};

std::string to_string(Domain d);
std::string to_string(BoundaryMode b);
Domain domain_from_string(const std::string& s);
/// "pure-dirichlet", "pure-neumann", "mixed" or "mixed(y=0,y=1)".
void parse_bc(const std::string& s, BoundaryMode& mode, std::vector<std::string>& sides);

std::uint64_t fnv1a(const std::string& bytes);

/// Coarse mesh with the configured boundary tags, refined `level` times.
Mesh build_mesh(const ExperimentConfig& cfg, int level);

/// Per-element materials at Poisson ratio `nu` (the second region's ratio
/// for checkerboard runs).
MaterialField build_material(const ExperimentConfig& cfg, const Mesh& mesh, double nu);

struct TableResult {
  std::string quantity;
  std::vector<int> levels;
  std::vector<double> nus;
  Eigen::MatrixXd values;   // levels x nus
  Eigen::MatrixXd seconds;  // wall time per cell
  std::string config_hash;
  std::vector<std::string> notes;

  std::string to_csv() const;
  /// Four significant digits.
  std::string to_markdown() const;
};

/// Four significant digits, scientific below 1e-3.
std::string format_sig4(double v);

TableResult cmd_gamma(const ExperimentConfig& cfg);
/// Checkerboard materials on the unit square; nu_list holds the second ratio.
TableResult cmd_gamma_jump(const ExperimentConfig& cfg);

enum class CondKind { Precond, Zz };
TableResult cmd_cond(const ExperimentConfig& cfg, CondKind which);

/// Load file contents:
///   {"body_force": [fx, fy]}                     constant force
///   {"body_force": {"constant": [..], "gradient": [[..],[..]]}}
///   {"traction": [tx, ty]}                       on every Neumann face
///   {"manufactured_linear": {"gradient": [[a,b],[c,d]], "shift": [..]}}
/// The manufactured case prescribes the tractions of u = G x + c.
struct LoadCase {
  LoadSpec spec;
  std::optional<Eigen::Matrix2d> exact_gradient;
  Eigen::Vector2d exact_shift = Eigen::Vector2d::Zero();

  static LoadCase from_json(const nlohmann::json& j, const MaterialField::Engineering& material);
};

struct SolveOptions {
  bool deflate = false;
  bool project_compat = false;
  double tol = 1e-10;
  int maxit = 5000;
  int level = -1;  // -1: last configured level
};

struct SolveOutcome {
  Vector u;
  SolveReport pcg;
  SolveReport cg;
  /// Distance to the manufactured solution modulo rigid motions, if any.
  std::optional<double> error_mod_rigid;
  Index dofs = 0;
  SparseMatrix a;  // the system matrix, for export
};

SolveOutcome cmd_solve(const ExperimentConfig& cfg, const LoadCase& load, const SolveOptions& opt);

enum class SuiteStatus { Pass, Fail, Skipped };

struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::Pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool ok() const;
  std::string to_text() const;
};

VerifyReport cmd_verify(const ExperimentConfig& cfg);

}  // namespace edg
