#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levylap/errors.hpp"
#include "levylap/holonomy.hpp"
#include "levylap/levy.hpp"
#include "levylap/parallel.hpp"
#include "levylap/selftest.hpp"

namespace levylap::cli {

namespace {

constexpr double kFourPiSq = 4.0 * M_PI * M_PI;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        out_ << cells[i];
        continue;
      }
      out_ << '"';
      for (char c : cells[i]) out_ << (c == '"' ? "\"\"" : std::string(1, c));
      out_ << '"';
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

json to_json(const Mat4& m) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  return a;
}

json to_json(const Vec3& v) { return {v[0], v[1], v[2]}; }

json tolerances_json(const Tolerances& t) {
  return {{"instanton_ratio", t.instanton_ratio},
          {"codifferential", t.codifferential},
          {"action_relative", t.action_relative},
          {"charge_absolute", t.charge_absolute},
          {"lemma2_r_squared", t.lemma2_r_squared},
          {"nonvanishing", t.nonvanishing}};
}

CommandResult start(const std::string& name, const ExperimentConfig& cfg) {
  CommandResult r;
  r.report["command"] = name;
  r.report["config_hash"] = config_hash(cfg.resolved);
  r.report["seed"] = cfg.seed;
  r.report["config"] = cfg.resolved;
  r.report["tolerances"] = tolerances_json(cfg.tol);
  r.report["diagnostics"] = {{"route_discrepancy_max", nullptr}};
  return r;
}

void finish(CommandResult& r, bool pass) {
  r.exit_code = pass ? kPass : kCheckFailed;
  r.report["verdict"] = pass ? "pass" : "fail";
  r.report["exit_code"] = r.exit_code;
}

CommandResult verify_instanton(const ExperimentConfig& cfg, int jobs) {
  CommandResult out = start("verify-instanton", cfg);
  const int n = cfg.grid;
  const double hw = cfg.grid_half_width;
  auto coord = [&](int i) { return -hw + 2.0 * hw * i / (n - 1); };
  struct Slice {
    double ratio = 0.0, codiff = 0.0, fmax = 0.0;
  };
  std::vector<Slice> slices(n);
  parallel_for(std::size_t(n), unsigned(jobs), [&](std::size_t i0) {
    Slice s;
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) {
          const Point4 x{coord(int(i0)), coord(i1), coord(i2), coord(i3)};
          const auto c = connection::curvature(cfg.connection, cfg.chart, x);
          const Mat4 gi = inverse(cfg.chart.metric(x));
          const double f2 = connection::form_norm2(gi, c.f);
          const double p2 = connection::form_norm2(gi, c.plus);
          s.fmax = std::fmax(s.fmax, std::sqrt(f2));
          if (f2 > 0.0) s.ratio = std::fmax(s.ratio, std::sqrt(std::fmax(p2, 0.0) / f2));
          for (const Mat4& d : connection::codifferential(cfg.connection, cfg.chart, x))
            s.codiff = std::fmax(s.codiff, max_abs(d));
        }
    slices[i0] = s;
  });
  Csv t({"slice", "x0", "max_selfdual_ratio", "max_codifferential_entry", "max_curvature_norm"});
  double ratio = 0.0, codiff = 0.0;
  for (int i = 0; i < n; ++i) {
    ratio = std::fmax(ratio, slices[i].ratio);
    codiff = std::fmax(codiff, slices[i].codiff);
    t.row({std::to_string(i), num(coord(i)), num(slices[i].ratio), num(slices[i].codiff), num(slices[i].fmax)});
  }
  out.tables["verify_instanton.csv"] = t.str();
  const bool pass = ratio < cfg.tol.instanton_ratio && codiff < cfg.tol.codifferential;
  out.report["results"] = {{"connection", cfg.connection.name()},
                           {"chart", cfg.chart.name()},
                           {"grid_points", double(n) * n * n * n},
                           {"max_selfdual_ratio", ratio},
                           {"max_codifferential_entry", codiff}};
  finish(out, pass);
  return out;
}

CommandResult levy_cmd(const ExperimentConfig& cfg, int jobs) {
  CommandResult out = start("levy", cfg);
  const std::size_t nc = cfg.curves.size(), nw = cfg.rotations.size();
  std::vector<levy::LevyResult> res(nc * nw);
  parallel_for(nc, unsigned(jobs), [&](std::size_t i) {
    const auto tk = levy::transport_kernels(cfg.connection, cfg.chart, cfg.curves[i], cfg.transport);
    for (std::size_t j = 0; j < nw; ++j) res[i * nw + j] = levy::modified_levy_laplacian_transport(tk, cfg.rotations[j].w);
  });
  Csv t({"curve", "curve_name", "W", "W_side", "norm_term_ym", "norm_term_rot", "norm_term_rot_plus",
         "norm_term_rot_minus", "norm_value", "route_discrepancy", "split_discrepancy", "threshold", "vanishes"});
  json jobs_json = json::array();
  double route = 0.0, max_norm = 0.0;
  std::size_t vanishing = 0, dominant = 0, nonzero = 0;
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nw; ++j) {
      const auto& r = res[i * nw + j];
      const double ym = frobenius_norm(r.term_ym), rot = frobenius_norm(r.term_rot);
      const double rp = frobenius_norm(r.term_rot_plus), rm = frobenius_norm(r.term_rot_minus);
      route = std::fmax(route, r.route_discrepancy);
      max_norm = std::fmax(max_norm, r.norm());
      vanishing += r.vanishes();
      if (r.norm() > cfg.tol.nonvanishing) {
        ++nonzero;
        if (rp > ym && rp > rm) ++dominant;
      }
      const std::string side = algebra::to_string(cfg.rotations[j].w.side());
      t.row({std::to_string(i), cfg.curves[i].name(), cfg.rotations[j].id, side, num(ym), num(rot), num(rp), num(rm),
             num(r.norm()), num(r.route_discrepancy), num(r.split_discrepancy), num(r.threshold),
             r.vanishes() ? "1" : "0"});
      jobs_json.push_back({{"curve", i},
                           {"W", cfg.rotations[j].id},
                           {"W_side", side},
                           {"norm_term_ym", ym},
                           {"norm_term_rot_plus", rp},
                           {"norm_term_rot_minus", rm},
                           {"norm_value", r.norm()},
                           {"route_discrepancy", r.route_discrepancy},
                           {"threshold", r.threshold},
                           {"vanishes", r.vanishes()}});
    }
  out.tables["levy.csv"] = t.str();
  out.report["diagnostics"]["route_discrepancy_max"] = route;
  out.report["results"] = {{"connection", cfg.connection.name()},
                           {"chart", cfg.chart.name()},
                           {"jobs", jobs_json},
                           {"vanishing", vanishing},
                           {"total", nc * nw},
                           {"max_norm", max_norm},
                           {"nonvanishing", nonzero},
                           {"rot_plus_dominant", dominant},
                           {"expect", cfg.levy_expect}};
  const bool pass = cfg.levy_expect == "vanish" ? vanishing == nc * nw : nonzero > 0;
  finish(out, pass);
  return out;
}

CommandResult holonomy_cmd(const ExperimentConfig& cfg, int jobs) {
  CommandResult out = start("holonomy", cfg);
  const auto& hs = cfg.holonomy;
  holonomy::HolonomyClassification cls;
  try {
    if (hs.synthetic_so2) {
      cls = holonomy::classify_synthetic_so2(cfg.chart, hs.base, cfg.seed, hs.loops);
    } else {
      const auto loops = holonomy::loop_family(cfg.seed, hs.loops, hs.base, hs.scale);
      cls = holonomy::classify_holonomy(cfg.chart, loops, cfg.transport, jobs);
    }
  } catch (const ClassificationFailure& e) {
    out.report["results"] = {{"error", e.what()}};
    out.exit_code = kNumeric;
    out.report["verdict"] = "classification failure";
    out.report["exit_code"] = out.exit_code;
    return out;
  }
  Csv t({"loop", "angle", "log_1", "log_2", "log_3"});
  for (std::size_t i = 0; i < cls.logs.size(); ++i) {
    const auto& w = cls.logs[i];
    t.row({std::to_string(i), num(norm3(w)), num(w[0]), num(w[1]), num(w[2])});
  }
  out.tables["holonomy_loops.csv"] = t.str();

  json conditions = json::array();
  Csv c({"W", "side", "pass", "alpha_plus_1", "alpha_plus_2", "alpha_plus_3", "projection_v1", "projection_v2",
         "orbit_span", "note"});
  for (const auto& nr : cfg.rotations) {
    if (nr.w.side() != algebra::Side::Left) {
      const std::string note = "not a left rotation curve";
      c.row({nr.id, algebra::to_string(nr.w.side()), "0", "", "", "", "", "", "", note});
      conditions.push_back({{"W", nr.id}, {"side", algebra::to_string(nr.w.side())}, {"note", note}});
      continue;
    }
    const auto rep = holonomy::check_W_conditions(nr.w, cls);
    const int span = holonomy::orbit_span_report(cls, rep.alpha_plus, cfg.seed, hs.orbit_samples);
    c.row({nr.id, "Left", rep.pass ? "1" : "0", num(rep.alpha_plus[0]), num(rep.alpha_plus[1]),
           num(rep.alpha_plus[2]), num(rep.projection_v1), num(rep.projection_v2), std::to_string(span), rep.note});
    conditions.push_back({{"W", nr.id},
                          {"side", "Left"},
                          {"pass", rep.pass},
                          {"alpha_plus", to_json(rep.alpha_plus)},
                          {"alpha_plus_body", to_json(rep.alpha_plus_body)},
                          {"projection_v1", rep.projection_v1},
                          {"projection_v2", rep.projection_v2},
                          {"orbit_span", span},
                          {"note", rep.note}});
  }
  out.tables["w_conditions.csv"] = c.str();

  json res = {{"chart", cfg.chart.name()},
              {"class", holonomy::to_string(cls.cls)},
              {"algebra_dimension", cls.algebra_dimension},
              {"singular_values", cls.singular_values},
              {"sample_count", cls.sample_count},
              {"synthetic", hs.synthetic_so2},
              {"w_conditions", conditions}};
  if (cls.fixed_bivector) {
    res["fixed_axis"] = to_json(cls.fixed_axis);
    res["fixed_bivector"] = to_json(cls.fixed_bivector->c);
  }
  out.report["results"] = res;
  out.report["diagnostics"]["singular_value_cutoff"] = holonomy::ClassifierOptions{}.relative_cutoff;
  out.report["diagnostics"]["absolute_floor"] = holonomy::ClassifierOptions{}.absolute_floor;
  finish(out, hs.expect.empty() || hs.expect == holonomy::to_string(cls.cls));
  return out;
}

CommandResult charge_cmd(const ExperimentConfig& cfg, int jobs) {
  CommandResult out = start("charge", cfg);
  const auto r = connection::action_and_charge(cfg.connection, cfg.chart, cfg.region, jobs);
  const double s = r.action.value, k = r.charge.value;
  const double slack = cfg.tol.action_relative * kFourPiSq;
  bool pass = s >= kFourPiSq * std::fabs(k) - slack;
  json res = {{"connection", cfg.connection.name()},
              {"chart", cfg.chart.name()},
              {"action", s},
              {"charge", k},
              {"action_over_4pi2", s / kFourPiSq},
              {"action_tail_bound", r.action.tail_bound},
              {"charge_tail_bound", r.charge.tail_bound},
              {"samples", r.action.samples},
              {"bound_holds", pass}};
  if (cfg.expect_charge) {
    const double e = *cfg.expect_charge;
    const bool kok = std::fabs(k - e) <= cfg.tol.charge_absolute;
    const bool sok = e == 0.0 ? true : std::fabs(s - kFourPiSq * std::fabs(e)) <= slack * std::fabs(e);
    res["expected_charge"] = e;
    res["charge_matches"] = kok;
    res["action_saturates"] = sok;
    pass = pass && kok && sok;
  }
  Csv t({"action", "charge", "four_pi_sq_abs_charge", "action_tail_bound", "charge_tail_bound", "samples"});
  t.row({num(s), num(k), num(kFourPiSq * std::fabs(k)), num(r.action.tail_bound), num(r.charge.tail_bound),
         std::to_string(r.action.samples)});
  out.tables["charge.csv"] = t.str();
  out.report["results"] = res;
  out.report["diagnostics"]["quadrature_tail_bound"] = r.action.tail_bound;
  finish(out, pass);
  return out;
}

CommandResult lemma2_cmd(const ExperimentConfig& cfg, int) {
  CommandResult out = start("lemma2", cfg);
  const auto& nr = cfg.rotations[cfg.lemma2_rotation];
  const auto rep = levy::lemma2_limit(cfg.connection, cfg.chart, cfg.curves[cfg.lemma2_curve], nr.w, cfg.lemma2_r,
                                      cfg.transport);
  Csv t({"r", "residual", "fitted_bound"});
  json rows = json::array();
  for (const auto& row : rep.rows) {
    t.row({num(row.r), num(row.residual), num(rep.c_fit * row.r)});
    rows.push_back({{"r", row.r}, {"residual", row.residual}});
  }
  out.tables["lemma2.csv"] = t.str();
  const bool pass = rep.c_fit > 0.0 && rep.r_squared > cfg.tol.lemma2_r_squared && rep.bound_holds;
  out.report["results"] = {{"connection", cfg.connection.name()},
                           {"chart", cfg.chart.name()},
                           {"curve", cfg.curves[cfg.lemma2_curve].name()},
                           {"W", nr.id},
                           {"rows", rows},
                           {"endpoint", to_json(rep.endpoint)},
                           {"c_fit", rep.c_fit},
                           {"r_squared", rep.r_squared},
                           {"bound_holds", rep.bound_holds}};
  out.report["diagnostics"]["endpoint_route_discrepancy"] = max_abs(rep.endpoint - rep.endpoint_bivector);
  finish(out, pass);
  return out;
}

CommandResult selftest_cmd(const ExperimentConfig& cfg, int jobs) {
  CommandResult out = start("selftest", cfg);
  selftest::Options o;
  o.seed = cfg.seed;
  o.jobs = jobs;
  const auto checks = selftest::run(o);
  Csv t({"module", "check", "pass", "value", "relation", "tolerance", "detail"});
  json arr = json::array();
  for (const auto& c : checks) {
    const char* rel = c.lower_bound ? ">=" : "<=";
    t.row({c.module, c.name, c.passed ? "1" : "0", num(c.value), rel, num(c.tolerance), c.detail});
    arr.push_back({{"module", c.module},
                   {"check", c.name},
                   {"pass", c.passed},
                   {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                   {"relation", rel},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  out.tables["selftest.csv"] = t.str();
  out.report["results"] = {{"checks", arr}, {"count", checks.size()}};
  finish(out, selftest::all_passed(checks));
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-instanton", "levy", "holonomy", "charge", "lemma2", "selftest"};
  return names;
}

CommandResult run_command(const std::string& name, const ExperimentConfig& cfg, int jobs) {
  if (name == "verify-instanton") return verify_instanton(cfg, jobs);
  if (name == "levy") return levy_cmd(cfg, jobs);
  if (name == "holonomy") return holonomy_cmd(cfg, jobs);
  if (name == "charge") return charge_cmd(cfg, jobs);
  if (name == "lemma2") return lemma2_cmd(cfg, jobs);
  if (name == "selftest") return selftest_cmd(cfg, jobs);
  throw ConfigError("unknown command " + name);
}

void write_outputs(const CommandResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  fs::create_directories(root / "tables");
  {
    std::ofstream f(root / "report.json");
    f << r.report.dump(2) << '\n';
  }
  for (const auto& [name, text] : r.tables) {
    std::ofstream f(root / "tables" / name);
    f << text;
  }
}

}  // namespace levylap::cli
