// Command-line front end: solve, analytic, spectrum, validate, pinch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "plateau/analytic_arc.hpp"
#include "plateau/degree.hpp"
#include "plateau/errors.hpp"
#include "plateau/report.hpp"

using namespace plateau;
using nlohmann::json;

namespace {

std::vector<double> split_numbers(const std::string& s, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  if (out.size() != expected) {
    throw Error(std::string(flag) + ": expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

struct Flags {
  std::string config_path;
  std::optional<double> a;
  std::optional<std::string> k;
  std::optional<std::string> box;
  std::optional<std::string> bounds;
  std::optional<std::string> branch;
  std::optional<int> n;
  std::optional<double> tol;
  std::optional<double> theta0_guess;
  std::string out = "out";
  bool svg = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; flags override its fields");
    app->add_option("--a", a, "half chord length");
    app->add_option("--k", k, "curvature expression in x, y, t");
    app->add_option("--box", box, "bounding box x0,y0,x1,y1");
    app->add_option("--bounds", bounds, "declared curvature bounds lo,hi");
    app->add_option("--branch", branch, "small|large|both")->check(CLI::IsMember({"small", "large", "both"}));
    app->add_option("--n", n, "number of curve samples");
    app->add_option("--tol", tol, "integrator tolerance");
    app->add_option("--theta0-guess", theta0_guess, "shoot directly from this initial angle");
  }

  RunConfig config() const {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error("cannot open " + config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw Error(std::string("config: ") + e.what());
      }
      c = config_from_json(j);
    }
    if (a) c.a = *a;
    if (k) c.k_source = *k;
    if (box) {
      const auto v = split_numbers(*box, 4, "--box");
      c.box = {v[0], v[1], v[2], v[3]};
    }
    if (bounds) {
      const auto v = split_numbers(*bounds, 2, "--bounds");
      c.declared_bounds = std::pair{v[0], v[1]};
    }
    if (branch) {
      if (*branch == "both") {
        c.branches = {Branch::Small, Branch::Large};
      } else {
        c.branches = {*branch == "small" ? Branch::Small : Branch::Large};
      }
    }
    if (n) c.n_samples = *n;
    if (tol) c.tol = *tol;
    if (theta0_guess) c.theta0_guess = *theta0_guess;
    if (svg) c.out_svg = true;
    if (c.k_source.empty()) throw Error("no curvature given (use --k or a config file)");
    return c;
  }
};

void print_branch_summary(const RunReport& r) {
  for (const auto& o : r.branches) {
    std::printf("%-5s ", to_string(o.branch));
    if (!o.record) {
      std::printf("%s: %s\n", o.status == BranchOutcome::Status::Skipped ? "skipped" : "failed", o.message.c_str());
      continue;
    }
    const auto& rec = *o.record;
    std::string index = "?";
    if (rec.index) index = rec.index->degenerate ? "degenerate" : std::to_string(rec.index->value);
    std::printf("theta0=%.12g v=%.12g length=%.12g class=%s index=%s validators=%s\n", rec.vars.theta0, rec.vars.v,
                rec.diagnostics.length, to_string(rec.klass.tag), index.c_str(),
                rec.all_validators_pass() ? "pass" : "FAIL");
    for (const auto& [name, v] : rec.validators) {
      if (v.applicable && !v.passed) std::printf("      failed %s: %.6g %s\n", name.c_str(), v.value, v.detail.c_str());
    }
  }
}

int cmd_solve(const Flags& f) {
  const RunReport r = run(f.config());
  if (r.status == RunReport::Status::Refused) {
    std::fprintf(stderr, "%s\n", r.message.c_str());
    return r.exit_code();
  }
  if (r.bounds_conflict) std::fprintf(stderr, "warning: declared bounds disagree with sampled field values\n");
  if (!r.message.empty()) std::fprintf(stderr, "%s\n", r.message.c_str());
  print_branch_summary(r);
  write_outputs(r, f.out);
  std::printf("outputs written to %s\n", f.out.c_str());
  return r.exit_code();
}

int cmd_analytic(const Flags& f, double k0) {
  const RunConfig c = [&] {
    Flags g = f;
    if (!g.k) g.k = std::to_string(k0);
    return g.config();
  }();
  json out = json::object();
  for (Branch b : c.branches) out[to_string(b)] = arc_to_json(make_arc(b, c.a, k0));
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int cmd_spectrum(const Flags& f, int count) {
  RunConfig c = f.config();
  const RunReport r = run(c);
  if (r.status == RunReport::Status::Refused) {
    std::fprintf(stderr, "%s\n", r.message.c_str());
    return r.exit_code();
  }
  const HomotopyField field = HomotopyField::exact(parse_expr(c.k_source));
  json out = json::object();
  for (const auto& o : r.branches) {
    if (!o.record) continue;
    const auto spec = dirichlet_spectrum(build_linearization(field, *o.record, c.n_index));
    json list = json::array();
    for (int i = 0; i < count && i < static_cast<int>(spec.size()); ++i) {
      list.push_back(json::array({spec[i].real(), spec[i].imag()}));
    }
    out[to_string(o.branch)] = {{"n", c.n_index}, {"lowest", list}};
  }
  std::printf("%s\n", out.dump(2).c_str());
  return r.status == RunReport::Status::NumericalFailure ? 3 : 0;
}

int cmd_validate(const Flags& f, const std::string& curve) {
  const ValidationSummary s = validate_file(curve, f.config());
  std::printf("%s\n", summary_to_json(s).dump(2).c_str());
  return s.passed() ? 0 : 4;
}

int cmd_pinch(const Flags& f) {
  const RunConfig c = f.config();
  c.validate();
  const CurvatureExpr expr = parse_expr(c.k_source);
  const FieldBounds sampled = estimate_bounds(expr, c.box, c.n_grid);
  FieldBounds used = sampled;
  if (c.declared_bounds) {
    used.k_inf = c.declared_bounds->first;
    used.k_sup = c.declared_bounds->second;
    used.provenance = FieldBounds::Provenance::Declared;
  }
  const PinchingReport p = check_pinching(used, c.a);
  json out{{"k_inf", used.k_inf},
           {"k_sup", used.k_sup},
           {"sampled", {{"k_inf", sampled.k_inf}, {"k_sup", sampled.k_sup}}},
           {"bounds_conflict", c.declared_bounds ? bounds_conflict(used, sampled) : false},
           {"holds_basic", p.holds_basic},
           {"holds_pinch", p.holds_pinch},
           {"ratio", p.ratio}};
  std::printf("%s\n", out.dump(2).c_str());
  return p.holds_basic ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar prescribed-curvature boundary value solver"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Flags solve_f, analytic_f, spectrum_f, validate_f, pinch_f;
  auto* solve = app.add_subcommand("solve", "continue both branches and write report, curves, svg");
  solve_f.attach(solve);
  solve->add_option("--out", solve_f.out, "output directory");
  solve->add_flag("--svg", solve_f.svg, "also render an SVG per branch");

  double k0 = 0.5;
  auto* analytic = app.add_subcommand("analytic", "print the circular arcs for a constant curvature");
  analytic_f.attach(analytic);
  analytic->add_option("--k0", k0, "constant curvature");

  int count = 10;
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of the linearised operator");
  spectrum_f.attach(spectrum);
  spectrum->add_option("--count", count, "how many eigenvalues to print");

  std::string curve;
  auto* validate = app.add_subcommand("validate", "run the curve checks on a CSV curve file");
  validate_f.attach(validate);
  validate->add_option("curve", curve, "curve CSV (t,x,y,vx,vy)")->required();

  auto* pinch = app.add_subcommand("pinch", "report field bounds and the pinching condition");
  pinch_f.attach(pinch);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_f);
    if (*analytic) {
      if (analytic_f.k) k0 = parse_expr(*analytic_f.k).eval(0.0, 0.0, 0.0);
      return cmd_analytic(analytic_f, k0);
    }
    if (*spectrum) return cmd_spectrum(spectrum_f, count);
    if (*validate) return cmd_validate(validate_f, curve);
    if (*pinch) return cmd_pinch(pinch_f);
  } catch (const HypothesisError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
