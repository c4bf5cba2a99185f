#include "plateau/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>

#include "plateau/analytic_arc.hpp"
#include "plateau/degree.hpp"
#include "plateau/errors.hpp"

namespace plateau {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void rethrow_in_phase(const std::string& phase, const Error& e) {
  throw Error(phase + ": " + e.what());
}

Branch branch_from_string(const std::string& s) {
  if (s == "small") return Branch::Small;
  if (s == "large") return Branch::Large;
  throw Error("unknown branch '" + s + "'");
}

json box_to_json(const Box& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error("box must be [x0, y0, x1, y1]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json bounds_to_json(const FieldBounds& b) {
  return {{"k_inf", b.k_inf},
          {"k_sup", b.k_sup},
          {"box", box_to_json(b.box)},
          {"provenance", b.provenance == FieldBounds::Provenance::Declared ? "declared" : "sampled"}};
}

json validator_to_json(const ValidatorResult& v) {
  return {{"applicable", v.applicable}, {"passed", v.passed}, {"value", v.value}, {"detail", v.detail}};
}

json index_to_json(const std::optional<IndexValue>& v) {
  if (!v) return nullptr;
  if (v->degenerate) return {{"value", "degenerate"}, {"pivot_ratio", v->pivot_ratio}};
  return {{"value", v->value}, {"pivot_ratio", v->pivot_ratio}};
}

const char* status_name(BranchOutcome::Status s) {
  switch (s) {
    case BranchOutcome::Status::Solved: return "solved";
    case BranchOutcome::Status::Skipped: return "skipped";
    case BranchOutcome::Status::Failed: return "failed";
  }
  return "?";
}

const char* status_name(RunReport::Status s) {
  switch (s) {
    case RunReport::Status::Ok: return "ok";
    case RunReport::Status::Refused: return "refused";
    case RunReport::Status::NumericalFailure: return "numerical_failure";
    case RunReport::Status::ValidatorFailure: return "validator_failure";
  }
  return "?";
}

BranchOutcome solve_branch(const CurvatureExpr& expr, const RunConfig& cfg, const FieldBounds& bounds, Branch branch) {
  BranchOutcome out;
  out.branch = branch;
  try {
    ContinuationOptions opts;
    opts.n_samples = cfg.n_samples;
    opts.shoot.ivp_tol = cfg.tol;
    opts.shoot.tol_newton = cfg.tol_newton;
    opts.shoot.box = cfg.box;

    const HomotopyField target = HomotopyField::exact(expr);
    SolutionRecord rec = [&] {
      if (!cfg.theta0_guess) {
        ContinuationResult res = continue_homotopy(expr, bounds, cfg.a, branch, opts);
        out.trace = std::move(res.trace);
        return std::move(res.record);
      }
      // Manual exploration: shoot the target directly from the given angle.
      const AnalyticArc arc = make_arc(branch, cfg.a, bounds.k_sup);
      const ShootResult sol = shoot(target, cfg.a, {*cfg.theta0_guess, arc_shooting_vars(arc).v}, opts.shoot);
      out.trace.push_back({1.0, sol.vars, sol.iterations});
      return make_record(target, bounds, cfg.a, branch, sol, cfg.n_samples, cfg.tol);
    }();

    rec.index = local_index(target, rec, cfg.n_index);
    rec.shooting_index = shooting_index(rec);
    const int expected = branch == Branch::Small ? 1 : -1;
    rec.validators["local_index"] = {true, !rec.index->degenerate && rec.index->value == expected,
                                     static_cast<double>(rec.index->value), "expected " + std::to_string(expected)};
    rec.validators["index_agreement"] = {true,
                                         !rec.index->degenerate && !rec.shooting_index->degenerate &&
                                             rec.index->value == rec.shooting_index->value,
                                         static_cast<double>(rec.shooting_index->value), "shooting index"};
    out.record = std::move(rec);
    out.status = BranchOutcome::Status::Solved;
  } catch (const Error& e) {
    out.status = BranchOutcome::Status::Failed;
    out.message = e.what();
  }
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  if (!(a > 0.0)) throw Error("config: a must be positive");
  if (n_samples < 64) throw Error("config: n_samples must be at least 64");
  if (!(tol > 0.0) || !(tol_newton > 0.0)) throw Error("config: tolerances must be positive");
  if (n_index < 50) throw Error("config: n_index must be at least 50");
  if (n_grid < 2) throw Error("config: n_grid must be at least 2");
  if (!(box.x1 > box.x0 && box.y1 > box.y0)) throw Error("config: box is empty or inverted");
  if (declared_bounds && declared_bounds->first > declared_bounds->second) {
    throw Error("config: declared bounds are inverted");
  }
  if (branches.empty()) throw Error("config: no branch requested");
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  static const std::vector<std::string> known{"a",       "k",          "box",      "bounds",  "n_samples",
                                              "tol",     "tol_newton", "branches", "outputs", "n_index",
                                              "n_grid",  "theta0_guess"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw Error("config: unknown key '" + key + "'");
  }
  RunConfig c;
  try {
    if (j.contains("a")) c.a = j["a"].get<double>();
    if (j.contains("k")) c.k_source = j["k"].get<std::string>();
    if (j.contains("box")) c.box = box_from_json(j["box"]);
    if (j.contains("bounds") && !j["bounds"].is_null()) {
      const auto& b = j["bounds"];
      if (!b.is_array() || b.size() != 2) throw Error("config: bounds must be [k_inf, k_sup]");
      c.declared_bounds = std::pair{b[0].get<double>(), b[1].get<double>()};
    }
    if (j.contains("n_samples")) c.n_samples = j["n_samples"].get<int>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("tol_newton")) c.tol_newton = j["tol_newton"].get<double>();
    if (j.contains("n_index")) c.n_index = j["n_index"].get<int>();
    if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<int>();
    if (j.contains("theta0_guess") && !j["theta0_guess"].is_null()) c.theta0_guess = j["theta0_guess"].get<double>();
    if (j.contains("branches")) {
      const auto& b = j["branches"];
      c.branches.clear();
      if (b.is_string() && b.get<std::string>() == "both") {
        c.branches = {Branch::Small, Branch::Large};
      } else if (b.is_string()) {
        c.branches = {branch_from_string(b.get<std::string>())};
      } else {
        for (const auto& item : b) c.branches.push_back(branch_from_string(item.get<std::string>()));
      }
    }
    if (j.contains("outputs")) {
      const auto& o = j["outputs"];
      for (const auto& [key, _] : o.items()) {
        if (key != "json" && key != "csv" && key != "svg") throw Error("config: unknown output '" + key + "'");
      }
      c.out_json = o.value("json", c.out_json);
      c.out_csv = o.value("csv", c.out_csv);
      c.out_svg = o.value("svg", c.out_svg);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json branches = json::array();
  for (Branch b : c.branches) branches.push_back(to_string(b));
  json j{{"a", c.a},
         {"k", c.k_source},
         {"box", box_to_json(c.box)},
         {"bounds", nullptr},
         {"n_samples", c.n_samples},
         {"tol", c.tol},
         {"tol_newton", c.tol_newton},
         {"branches", branches},
         {"outputs", {{"json", c.out_json}, {"csv", c.out_csv}, {"svg", c.out_svg}}},
         {"n_index", c.n_index},
         {"n_grid", c.n_grid},
         {"theta0_guess", nullptr}};
  if (c.declared_bounds) j["bounds"] = json::array({c.declared_bounds->first, c.declared_bounds->second});
  if (c.theta0_guess) j["theta0_guess"] = *c.theta0_guess;
  return j;
}

int RunReport::exit_code() const {
  switch (status) {
    case Status::Ok: return 0;
    case Status::Refused: return 2;
    case Status::NumericalFailure: return 3;
    case Status::ValidatorFailure: return 4;
  }
  return 1;
}

const BranchOutcome* RunReport::find(Branch b) const {
  for (const auto& o : branches) {
    if (o.branch == b) return &o;
  }
  return nullptr;
}

RunReport run(const RunConfig& config) {
  try {
    config.validate();
  } catch (const Error& e) {
    rethrow_in_phase("config", e);
  }
  std::optional<CurvatureExpr> parsed;
  try {
    parsed = parse_expr(config.k_source);
  } catch (const Error& e) {
    rethrow_in_phase("parse", e);
  }
  const CurvatureExpr& expr = *parsed;

  RunReport report;
  report.config = config;
  try {
    report.sampled = estimate_bounds(expr, config.box, config.n_grid);
  } catch (const Error& e) {
    rethrow_in_phase("bounds", e);
  }
  if (config.declared_bounds) {
    report.bounds.k_inf = config.declared_bounds->first;
    report.bounds.k_sup = config.declared_bounds->second;
    report.bounds.box = config.box;
    report.bounds.provenance = FieldBounds::Provenance::Declared;
    report.bounds_conflict = bounds_conflict(report.bounds, *report.sampled);
  } else {
    report.bounds = *report.sampled;
  }
  report.pinching = check_pinching(report.bounds, config.a);

  if (!report.pinching.holds_basic) {
    report.status = RunReport::Status::Refused;
    std::ostringstream msg;
    msg << "hypotheses refused: need 0 < inf k <= sup k < 1/a, got inf k = " << report.bounds.k_inf
        << ", sup k = " << report.bounds.k_sup << ", 1/a = " << 1.0 / config.a;
    report.message = msg.str();
    for (Branch b : config.branches) report.branches.push_back({b, BranchOutcome::Status::Skipped, "refused", {}, {}});
    return report;
  }

  std::vector<std::future<BranchOutcome>> jobs;
  std::vector<BranchOutcome> skipped;
  for (Branch b : config.branches) {
    if (b == Branch::Large && !report.pinching.holds_pinch) {
      skipped.push_back({b, BranchOutcome::Status::Skipped,
                         "pinching condition fails (ratio " + fmt17(report.pinching.ratio) + " >= inf k)", {}, {}});
      continue;
    }
    jobs.push_back(std::async(std::launch::async, solve_branch, std::cref(expr), std::cref(config),
                              std::cref(report.bounds), b));
  }
  for (auto& j : jobs) report.branches.push_back(j.get());
  for (auto& s : skipped) report.branches.push_back(std::move(s));
  std::sort(report.branches.begin(), report.branches.end(),
            [](const auto& l, const auto& r) { return l.branch < r.branch; });

  bool failed = false, invalid = false;
  for (const auto& o : report.branches) {
    if (o.status == BranchOutcome::Status::Failed) failed = true;
    if (o.record && !o.record->all_validators_pass()) invalid = true;
  }
  if (failed) {
    report.status = RunReport::Status::NumericalFailure;
  } else if (invalid) {
    report.status = RunReport::Status::ValidatorFailure;
  }
  if (!report.pinching.holds_pinch) report.message = "pinching fails: only the small branch is guaranteed";
  return report;
}

json record_to_json(const SolutionRecord& r) {
  json validators = json::object();
  for (const auto& [name, v] : r.validators) validators[name] = validator_to_json(v);
  const auto& d = r.diagnostics;
  return {{"branch", to_string(r.branch)},
          {"s", r.s},
          {"vars", {{"theta0", r.vars.theta0}, {"v", r.vars.v}}},
          {"class", {{"tag", to_string(r.klass.tag)}, {"reasons", r.klass.reasons}}},
          {"index", index_to_json(r.index)},
          {"shooting_index", index_to_json(r.shooting_index)},
          {"jacobian", r.jacobian},
          {"diagnostics",
           {{"length", d.length},
            {"k_gamma_min", d.k_gamma_min},
            {"k_gamma_max", d.k_gamma_max},
            {"gauss_bonnet_residual", d.gauss_bonnet_residual},
            {"rotation_angle", d.rotation_angle},
            {"newton_iters", d.newton_iters},
            {"final_miss_norm", d.final_miss_norm},
            {"prescription_residual", d.prescription_residual},
            {"prescription_residual_fd", d.prescription_residual_fd}}},
          {"validators", validators},
          {"n_samples", r.curve.size()}};
}

json report_to_json(const RunReport& report, const std::string& timestamp) {
  json branches = json::object();
  bool all_pass = true;
  json failures = json::array();
  for (const auto& o : report.branches) {
    json trace = json::array();
    for (const auto& st : o.trace) {
      trace.push_back({{"s", st.s}, {"theta0", st.vars.theta0}, {"v", st.vars.v}, {"newton_iters", st.newton_iters}});
    }
    json entry{{"status", status_name(o.status)}, {"message", o.message}, {"trace", trace}};
    if (o.record) {
      entry["record"] = record_to_json(*o.record);
      for (const auto& [name, v] : o.record->validators) {
        if (v.applicable && !v.passed) {
          all_pass = false;
          failures.push_back(std::string(to_string(o.branch)) + "." + name);
        }
      }
    }
    branches[to_string(o.branch)] = entry;
  }
  json out{{"version", kVersion},
           {"seed", 0},
           {"timestamp", timestamp},
           {"status", status_name(report.status)},
           {"message", report.message},
           {"config", config_to_json(report.config)},
           {"bounds", bounds_to_json(report.bounds)},
           {"sampled_bounds", report.sampled ? bounds_to_json(*report.sampled) : json(nullptr)},
           {"bounds_conflict", report.bounds_conflict},
           {"pinching",
            {{"holds_basic", report.pinching.holds_basic},
             {"holds_pinch", report.pinching.holds_pinch},
             {"ratio", report.pinching.ratio}}},
           {"branches", branches},
           {"validator_summary", {{"passed", all_pass}, {"failures", failures}}}};
  return out;
}

json arc_to_json(const AnalyticArc& arc) {
  const ShootingVars v = arc_shooting_vars(arc);
  return {{"branch", to_string(arc.branch)},
          {"a", arc.a},
          {"k0", arc.k0},
          {"alpha0", arc.alpha0},
          {"omega", arc.omega},
          {"center", {arc.center.x, arc.center.y}},
          {"radius", arc.radius},
          {"theta0", v.theta0},
          {"v", v.v},
          {"length", v.v}};
}

void write_curve_csv(const Curve& c, std::ostream& out) {
  out << "t,x,y,vx,vy\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2 p = c.points()[i], v = c.velocities()[i];
    out << fmt17(c.params()[i]) << ',' << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(v.x) << ','
        << fmt17(v.y) << '\n';
  }
}

Curve read_curve_csv(std::istream& in, double a) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError("empty curve file", line_no);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,vx,vy") throw FormatError("expected header 't,x,y,vx,vy'", line_no);

  std::vector<double> params;
  std::vector<Vec2> pts, vel;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double fields[5];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int f = 0; f < 5; ++f) {
      const auto res = std::from_chars(p, end, fields[f]);
      if (res.ec != std::errc()) throw FormatError("malformed number in column " + std::to_string(f + 1), line_no);
      p = res.ptr;
      if (f < 4) {
        if (p == end || *p != ',') {
          throw FormatError("expected 5 columns, found " + std::to_string(f + 1), line_no);
        }
        ++p;
      }
    }
    if (p != end) throw FormatError("trailing characters after 5 columns", line_no);
    params.push_back(fields[0]);
    pts.push_back({fields[1], fields[2]});
    vel.push_back({fields[3], fields[4]});
  }
  if (params.size() < 5) throw FormatError("curve needs at least 5 samples", line_no);
  try {
    return Curve(a, std::move(params), std::move(pts), std::move(vel));
  } catch (const GeometryError& e) {
    throw FormatError(e.what(), line_no);
  }
}

std::string render_svg(const SolutionRecord& record) {
  const Curve& c = record.curve;
  double x0 = -c.a(), x1 = c.a(), y0 = 0.0, y1 = 0.0;
  for (Vec2 p : c.points()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double mx = 0.1 * (x1 - x0), my = 0.1 * std::max(y1 - y0, 1e-3);
  x0 -= mx;
  x1 += mx;
  y0 -= my;
  y1 += my;
  const double width = x1 - x0, height = y1 - y0;
  const double px = 600.0;
  const double scale = px / width;
  const double py = height * scale;
  auto X = [&](double x) { return fmt17((x - x0) * scale); };
  auto Y = [&](double y) { return fmt17((y1 - y) * scale); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt17(px) << "\" height=\"" << fmt17(py + 30.0)
    << "\" viewBox=\"0 0 " << fmt17(px) << ' ' << fmt17(py + 30.0) << "\">\n";
  s << "  <rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "  <line x1=\"" << X(-c.a()) << "\" y1=\"" << Y(0.0) << "\" x2=\"" << X(c.a()) << "\" y2=\"" << Y(0.0)
    << "\" stroke=\"gray\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
  s << "  <polyline fill=\"none\" stroke=\"" << (record.branch == Branch::Small ? "steelblue" : "firebrick")
    << "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < c.size(); ++i) s << (i ? " " : "") << X(c.points()[i].x) << ',' << Y(c.points()[i].y);
  s << "\"/>\n";
  for (double ex : {c.a(), -c.a()}) {
    s << "  <circle cx=\"" << X(ex) << "\" cy=\"" << Y(0.0) << "\" r=\"4\" fill=\"black\"/>\n";
  }
  std::string index = "n/a";
  if (record.index) index = record.index->degenerate ? "degenerate" : std::to_string(record.index->value);
  s << "  <text x=\"10\" y=\"" << fmt17(py + 20.0) << "\" font-family=\"sans-serif\" font-size=\"14\">"
    << to_string(record.branch) << " solution, length " << fmt17(record.diagnostics.length).substr(0, 10)
    << ", index " << index << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const SolutionRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << render_svg(record);
  if (!out) throw Error("write failed for " + path.string());
}

void write_outputs(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const RunConfig& cfg = report.config;
  if (cfg.out_json) {
    std::ofstream out(dir / "report.json");
    if (!out) throw Error("cannot write " + (dir / "report.json").string());
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << report_to_json(report, stamp).dump(2) << '\n';
  }
  for (const auto& o : report.branches) {
    if (!o.record) continue;
    const std::string name = to_string(o.branch);
    if (cfg.out_csv) {
      std::ofstream out(dir / ("curve_" + name + ".csv"));
      if (!out) throw Error("cannot write curve file");
      write_curve_csv(o.record->curve, out);
    }
    if (cfg.out_svg) emit_svg(*o.record, dir / ("solution_" + name + ".svg"));
  }
}

bool ValidationSummary::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return !kv.second.applicable || kv.second.passed; });
}

ValidationSummary validate_curve(const Curve& curve, const RunConfig& config) {
  const CurvatureExpr expr = parse_expr(config.k_source);
  ValidationSummary s;
  auto& c = s.checks;
  auto guarded = [&](const std::string& name, auto&& f) {
    try {
      c[name] = f();
    } catch (const Error& e) {
      c[name] = {true, false, 0.0, e.what()};
    }
  };

  guarded("positive_curvature", [&] {
    const auto k = curvature_profile(curve);
    const double m = *std::min_element(k.begin(), k.end());
    return ValidatorResult{true, m > 0.0, m, ""};
  });
  guarded("prescription", [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const Vec2 p = curve.points()[i];
      worst = std::max(worst, std::abs(geodesic_curvature(curve, i) - expr.eval(p.x, p.y, curve.params()[i])));
    }
    return ValidatorResult{true, worst <= 1e-6, worst, "max |k_gamma - k|, tolerance 1e-6"};
  });
  guarded("boundary", [&] {
    const double e = boundary_error(curve);
    return ValidatorResult{true, e <= 1e-8 * config.a, e, ""};
  });
  guarded("simple", [&] { return ValidatorResult{true, is_simple_closed(curve), 0.0, ""}; });
  guarded("classification", [&] {
    const ClassTag tag = classify(curve);
    std::string why;
    for (const auto& r : tag.reasons) why += (why.empty() ? "" : "; ") + r;
    return ValidatorResult{true, tag.tag != ClassKind::Neither, 0.0, std::string(to_string(tag.tag)) + " " + why};
  });
  guarded("rotation_angle", [&] {
    const double r = rotation_angle(curve);
    return ValidatorResult{true, std::abs(r - 2.0 * kPi) <= tol::kRotation, r, ""};
  });
  guarded("gauss_bonnet", [&] {
    const double r = gauss_bonnet_residual(curve);
    return ValidatorResult{true, r <= 1e-6, r, ""};
  });
  auto lemma = [](const LemmaCheck& l) {
    std::string why;
    for (const auto& r : l.reasons) why += (why.empty() ? "" : "; ") + r;
    return ValidatorResult{l.applicable, !l.applicable || l.holds, l.value, why};
  };
  guarded("lemma_min_estimate", [&] { return lemma(check_lemma_min_estimate(curve)); });
  guarded("lemma_max_estimate", [&] { return lemma(check_lemma_max_estimate(curve)); });
  guarded("lemma_nonex", [&] { return lemma(check_lemma_nonex(curve)); });
  guarded("length_bound", [&] {
    FieldBounds b;
    if (config.declared_bounds) {
      b.k_inf = config.declared_bounds->first;
      b.k_sup = config.declared_bounds->second;
    } else {
      b = estimate_bounds(expr, config.box, config.n_grid);
    }
    ValidatorResult v{b.k_inf > 0.0, false, 0.0, ""};
    if (v.applicable) {
      const LengthCheck lc = check_length_bound(curve, b);
      v.passed = lc.holds;
      v.value = lc.length;
      v.detail = "bound " + fmt17(lc.bound);
    }
    return v;
  });
  return s;
}

ValidationSummary validate_file(const std::filesystem::path& curve_path, const RunConfig& config) {
  std::ifstream in(curve_path);
  if (!in) throw Error("cannot open " + curve_path.string());
  return validate_curve(read_curve_csv(in, config.a), config);
}

json summary_to_json(const ValidationSummary& s) {
  json checks = json::object();
  for (const auto& [name, v] : s.checks) checks[name] = validator_to_json(v);
  return {{"passed", s.passed()}, {"checks", checks}};
}

}  // namespace plateau
