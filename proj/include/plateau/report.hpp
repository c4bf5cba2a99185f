#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plateau/field.hpp"
#include "plateau/solver.hpp"

namespace plateau {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  double a = 1.0;
  std::string k_source;
  Box box;
  std::optional<std::pair<double, double>> declared_bounds;
  int n_samples = 512;
  double tol = 1e-10;
  double tol_newton = 1e-10;
  std::vector<Branch> branches{Branch::Small, Branch::Large};
  bool out_json = true;
  bool out_csv = true;
  bool out_svg = false;
  int n_index = 200;  // interior points of the index discretisation
  int n_grid = 21;    // lattice points per axis for sampled bounds
  std::optional<double> theta0_guess;

  /// Throws Error on a violated invariant (a > 0, n_samples >= 64, ...).
  void validate() const;
};

/// Reads a JSON config; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

struct BranchOutcome {
  enum class Status { Solved, Skipped, Failed };
  Branch branch = Branch::Small;
  Status status = Status::Skipped;
  std::string message;
  std::vector<HomotopyStep> trace;
  std::optional<SolutionRecord> record;
};

struct RunReport {
  enum class Status { Ok, Refused, NumericalFailure, ValidatorFailure };
  Status status = Status::Ok;
  std::string message;
  RunConfig config;
  FieldBounds bounds;                  // bounds used for the hypotheses
  std::optional<FieldBounds> sampled;  // lattice estimate over the box
  bool bounds_conflict = false;
  PinchingReport pinching;
  std::vector<BranchOutcome> branches;

  int exit_code() const;
  const BranchOutcome* find(Branch b) const;
};

/// Full pipeline: parse, bound, gate on the hypotheses, continue every requested
/// branch (concurrently), compute indices and validators. Parse and config
/// errors throw, prefixed by the phase name; hypothesis refusals and numerical
/// failures are reported through RunReport::status.
RunReport run(const RunConfig& config);

/// Writes report.json, curve_<branch>.csv and (optionally) solution_<branch>.svg.
void write_outputs(const RunReport& report, const std::filesystem::path& dir);

/// `timestamp` is the only field that differs between identical runs.
nlohmann::json report_to_json(const RunReport& report, const std::string& timestamp);
nlohmann::json record_to_json(const SolutionRecord& record);
nlohmann::json arc_to_json(const AnalyticArc& arc);

/// CSV with header "t,x,y,vx,vy", 17 significant digits.
void write_curve_csv(const Curve& c, std::ostream& out);
/// Throws FormatError with the 1-based line number.
Curve read_curve_csv(std::istream& in, double a);

/// Standalone SVG: curve, chord, endpoint markers, branch and index label.
std::string render_svg(const SolutionRecord& record);
void emit_svg(const SolutionRecord& record, const std::filesystem::path& path);

struct ValidationSummary {
  std::map<std::string, ValidatorResult> checks;
  bool passed() const;
};

/// Runs the curve checks on a third-party curve file against the config's field.
ValidationSummary validate_curve(const Curve& curve, const RunConfig& config);
ValidationSummary validate_file(const std::filesystem::path& curve_path, const RunConfig& config);
nlohmann::json summary_to_json(const ValidationSummary& s);

}  // namespace plateau
