#include "imm/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "imm/compatibility.hpp"
#include "imm/hopf.hpp"
#include "imm/stability.hpp"
#include "imm/variation.hpp"

namespace imm {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(json& timing) : timing_(timing) {}
  template <typename F>
  auto operator()(const std::string& stage, F&& f) {
    const auto t0 = Clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      timing_[stage] = std::chrono::duration<double>(Clock::now() - t0).count();
    } else {
      auto r = f();
      timing_[stage] = std::chrono::duration<double>(Clock::now() - t0).count();
      return r;
    }
  }

 private:
  json& timing_;
};

json opt_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json to_json(const ResidualReport& r) {
  return {{"name", r.name},
          {"resolution", r.resolution},
          {"max_abs", r.max_abs},
          {"l2", r.l2},
          {"convergence_order", opt_number(r.convergence_order)},
          {"at_roundoff", r.at_roundoff}};
}

json to_json(const EigenResult& e) {
  json levels = json::array();
  for (const auto& l : e.levels) {
    levels.push_back({{"mesh_size", l.mesh_size}, {"nodes", l.nodes}, {"lambda", l.lambda}, {"iterations", l.iterations}});
  }
  return {{"vacuous", e.vacuous},          {"weight_integral", e.weight_integral}, {"levels", levels},
          {"lambda", e.lambda},            {"extrapolated", e.extrapolated},       {"certified", e.certified}};
}

json to_json(const StabilityCertificate& c) {
  json constants = json::object();
  for (const auto& [k, v] : c.constants) constants[k] = v;
  return {{"route", c.route},
          {"verdict", to_string(c.verdict)},
          {"certified_mu", c.certified_mu},
          {"q", c.q_description},
          {"constants", constants},
          {"notes", c.notes},
          {"eigen", c.eigen ? to_json(*c.eigen) : json(nullptr)}};
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  json to_json() const { return {{"min", lo}, {"max", hi}}; }
};

FramePtr build_frame(const Surface& s, const RunConfig& cfg, DerivativeMode mode, double h) {
  s.patch->set_derivative_mode(mode, mode == DerivativeMode::finite_difference ? h : 1e-3);
  return make_frame(s, cfg.frame);
}

DerivativeMode base_mode(const RunConfig& cfg) {
  return cfg.derivative == "fd" ? DerivativeMode::finite_difference : DerivativeMode::analytic;
}

// ---------------------------------------------------------------- analyze

json analyze(const RunConfig& cfg, const Surface& s, Stopwatch& sw) {
  json per = json::array();
  for (int m : cfg.resolutions) {
    per.push_back(sw("analyze_" + std::to_string(m), [&] {
      const ParameterGrid grid(m);
      const SurfaceFields f(build_frame(s, cfg, base_mode(cfg), grid.h()), grid);
      const int k = f.codim();
      Range H, K, W, torsion, normal_curv;
      std::vector<Range> Hs(static_cast<std::size_t>(k)), Ks(static_cast<std::size_t>(k));
      double conf = 0.0;
      for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.in_disc(n)) continue;
        const SurfaceSample& p = f.at(n);
        H.add(p.H);
        K.add(p.K);
        W.add(p.W);
        conf = std::max(conf, p.conformality_defect);
        torsion.add(std::max(p.Tu.cwiseAbs().maxCoeff(), p.Tv.cwiseAbs().maxCoeff()));
        normal_curv.add(k > 1 ? std::fabs(ricci_curvature(p)(0, 1)) : 0.0);
        for (int a = 0; a < k; ++a) {
          Hs[static_cast<std::size_t>(a)].add(p.Hs[a]);
          Ks[static_cast<std::size_t>(a)].add(p.Ks[a]);
        }
      }
      json per_normal = json::array();
      for (int a = 0; a < k; ++a) {
        per_normal.push_back({{"H", Hs[static_cast<std::size_t>(a)].to_json()}, {"K", Ks[static_cast<std::size_t>(a)].to_json()}});
      }
      const ChiField c = chi(f);
      return json{{"resolution", m},
                  {"nodes", grid.node_count()},
                  {"H", H.to_json()},
                  {"K", K.to_json()},
                  {"W", W.to_json()},
                  {"per_normal", per_normal},
                  {"max_conformality_defect", conf},
                  {"max_torsion", torsion.hi},
                  {"max_normal_curvature", normal_curv.hi},
                  {"chi", {{"min", c.chi_min}, {"max", c.chi_max}}}};
    }));
  }
  const FramePtr frame = build_frame(s, cfg, base_mode(cfg), 1e-3);
  const double tc = sw("total_curvature", [&] { return total_curvature(*frame); });
  return {{"surface", s.name},
          {"dim", s.patch->dim()},
          {"codim", s.patch->dim() - 2},
          {"claims_conformal", s.patch->claims_conformal()},
          {"graph", s.patch->is_graph()},
          {"frame", frame->name()},
          {"total_curvature", tc},
          {"resolutions", per}};
}

// ---------------------------------------------------------------- residuals

json residuals(const RunConfig& cfg, const Surface& s, Stopwatch& sw, int& exit) {
  std::vector<ResidualReport> gauss, wein, cod, ricci;
  std::string codazzi_skipped;
  for (int m : cfg.resolutions) {
    sw("residuals_" + std::to_string(m), [&] {
      const ParameterGrid grid(m);
      const SurfaceFields f(build_frame(s, cfg, base_mode(cfg), grid.h()), grid);
      gauss.push_back(gauss_residual(f));
      ricci.push_back(ricci_residual(f));
      if (s.patch->claims_conformal() || f.max_conformality_defect() < 1e-6) {
        cod.push_back(codazzi_residual(f));
      } else {
        codazzi_skipped = "the Codazzi-Mainardi check is formulated in conformal parameters";
      }
      if (cfg.derivative == "mixed") {
        const SurfaceFields g(build_frame(s, cfg, DerivativeMode::finite_difference, grid.h()), grid);
        wein.push_back(weingarten_residual(g));
        s.patch->set_derivative_mode(DerivativeMode::analytic);
      } else {
        wein.push_back(weingarten_residual(f));
      }
    });
  }
  json table = json::array();
  json summary = json::object();
  bool all = true;
  for (auto* list : {&gauss, &wein, &cod, &ricci}) {
    if (list->empty()) continue;
    fill_convergence(*list);
    for (const auto& r : *list) table.push_back(to_json(r));
    const bool ok = list->size() < 2 || converges(*list, 1.9);
    all = all && ok;
    summary[list->front().name] = {{"converges", ok}, {"finest_max_abs", list->back().max_abs}};
  }
  json out = {{"surface", s.name}, {"residuals", table}, {"summary", summary}, {"all_converge", all}};
  if (!codazzi_skipped.empty()) out["codazzi_skipped"] = codazzi_skipped;
  if (!all) exit = exit_code::not_certified;
  return out;
}

// ---------------------------------------------------------------- variation

Direction make_direction(const std::string& preset, int k, unsigned long long seed) {
  if (preset == "constant") return Direction::constant(k, 0);
  if (preset == "rotating") {
    if (k < 2) throw config_error("direction 'rotating' needs codimension >= 2");
    return Direction::rotating(k, 0.3, 0.7, -0.4);
  }
  return Direction::random(k, seed);
}

TestFunction make_phi(const std::string& preset, unsigned long long seed) {
  if (preset == "radial") return TestFunction::radial(0.1, -0.2, 0.6);
  if (preset == "tensor") return TestFunction::tensor(0.1, 0.1, 0.5, 0.4);
  return TestFunction::random(seed);
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

json variation(const RunConfig& cfg, const Surface& s, Stopwatch& sw, int& exit) {
  const auto& o = cfg.variation;
  const FramePtr frame = build_frame(s, cfg, base_mode(cfg), 1e-3);
  const Weight w = make_weight(o.weight);
  weight_bounds(w, frame->patch());
  const int k = frame->codim();
  json cases = json::array();
  int admissible = 0;
  bool pass = true;
  for (int i = 0; i < o.cases; ++i) {
    const unsigned long long seed = o.seed + static_cast<unsigned long long>(i);
    cases.push_back(sw("case_" + std::to_string(i), [&] {
      const Direction d = make_direction(o.direction, k, seed);
      const TestFunction phi = make_phi(o.phi, seed);
      json c = {{"case", i}, {"seed", seed}, {"direction", d.name()}, {"phi", phi.describe()}};
      // pointwise area element against the epsilon stencil
      double area_rel = 0.0;
      for (const auto& q : phi.support_rule(8)) {
        const SurfaceSample p = sample_surface(*frame, q.u, q.v);
        const double a = second_variation_area_element(p, d, phi);
        if (!o.oracle) continue;
        area_rel = std::max(area_rel, rel(a, area_element_oracle(p, d, phi)));
      }
      const double first = first_variation(*frame, w, d, phi);
      c["first_variation"] = first;
      SecondVariationOptions unchecked;
      unchecked.check_criticality = false;
      const SecondVariation sv = second_variation_fermat(*frame, w, d, phi, unchecked);
      const bool ok = sv.criticality_defect <= crit_tol;
      c["admissible"] = ok;
      c["criticality_defect"] = sv.criticality_defect;
      c["closed_form"] = sv.value;
      c["terms"] = {{"gradient", sv.gradient_term}, {"curvature", sv.curvature_term}, {"torsion", sv.torsion_term}};
      if (o.oracle) {
        const double or1 = fd_variation_oracle(*frame, w, d, phi, 1, o.eps);
        const double or2 = fd_variation_oracle(*frame, w, d, phi, 2, o.eps);
        c["first_variation_oracle"] = or1;
        c["oracle"] = or2;
        c["rel_err"] = rel(sv.value, or2);
        c["area_element_rel_err"] = area_rel;
        if (ok && (rel(sv.value, or2) > 1e-4 || area_rel > 1e-5)) pass = false;
      }
      if (ok) ++admissible;
      return c;
    }));
  }
  if (admissible == 0) exit = exit_code::inapplicable;
  else if (!pass) exit = exit_code::not_certified;
  return {{"surface", s.name},       {"weight", w.name}, {"criticality_tol", crit_tol},
          {"admissible", admissible}, {"cases", cases},   {"all_within_tolerance", pass}};
}

// ---------------------------------------------------------------- hopf

void dump_hopf_fields(const std::string& path, const SurfaceFields& f) {
  const ParameterGrid& grid = f.grid();
  const auto H = hopf_field(f);
  std::vector<ComplexField> dbar;
  for (const auto& h : H) dbar.push_back(wirtinger_wbar(grid, h));
  const std::string out = resolve_output_path(path);
  if (const auto parent = std::filesystem::path(out).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream os(out);
  if (!os) throw config_error("cannot write '" + out + "'");
  os << "u,v,W,K";
  for (std::size_t a = 1; a <= H.size(); ++a) {
    os << ",re_H" << a << ",im_H" << a << ",re_dbar_H" << a << ",im_dbar_H" << a;
  }
  os << "\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    os << buf;
  };
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.in_disc(n)) continue;
    std::snprintf(buf, sizeof buf, "%.17g", grid.u(n));
    os << buf;
    put(grid.v(n));
    put(f.at(n).W);
    put(f.at(n).K);
    for (std::size_t a = 0; a < H.size(); ++a) {
      put(H[a].re[n]);
      put(H[a].im[n]);
      put(grid.interior(n) ? dbar[a].re[n] : 0.0);
      put(grid.interior(n) ? dbar[a].im[n] : 0.0);
    }
    os << "\n";
  }
}

json hopf(const RunConfig& cfg, const Surface& s, Stopwatch& sw, int& exit) {
  const int k = s.patch->dim() - 2;
  std::vector<ResidualReport> total;
  std::vector<std::vector<ResidualReport>> per(static_cast<std::size_t>(k));
  json levels = json::array();
  json zeros;
  for (std::size_t i = 0; i < cfg.resolutions.size(); ++i) {
    const int m = cfg.resolutions[i];
    sw("hopf_" + std::to_string(m), [&] {
      const ParameterGrid grid(m);
      const SurfaceFields f(build_frame(s, cfg, base_mode(cfg), grid.h()), grid);
      total.push_back(hopf_equation_residual(f));
      for (int a = 0; a < k; ++a) per[static_cast<std::size_t>(a)].push_back(hopf_equation_residual(f, a));
      const HolomorphyReport h = holomorphy_defect(f);
      json level = {{"resolution", m},
                    {"holomorphy_defect", h.max_defect},
                    {"max_mean_curvature", h.max_mean_curvature},
                    {"max_torsion", h.max_torsion},
                    {"minimal_and_torsion_free", h.minimal_and_torsion_free}};
      if (h.max_mean_curvature < 1e-6) {
        level["curvature_identity_max_abs"] = curvature_identity_residual(f).max_abs;
      } else {
        level["curvature_identity_max_abs"] = nullptr;
      }
      levels.push_back(level);
      if (i + 1 == cfg.resolutions.size()) {
        const ZeroCount z = gauss_zero_count(f, cfg.hopf.zero_radius);
        json loc = json::array();
        for (const auto& [u, v] : z.locations) loc.push_back({u, v});
        zeros = {{"radius", cfg.hopf.zero_radius}, {"clusters", z.clusters}, {"isolated", z.clusters >= 0},
                 {"zero_tol", z.zero_tol}, {"locations", loc}};
        if (!cfg.hopf.dump_fields.empty()) dump_hopf_fields(cfg.hopf.dump_fields, f);
      }
    });
  }
  fill_convergence(total);
  json per_sigma = json::array();
  for (auto& list : per) {
    fill_convergence(list);
    json t = json::array();
    for (const auto& r : list) t.push_back(to_json(r));
    per_sigma.push_back({{"residuals", t}, {"converges", list.size() < 2 || converges(list, 1.9)}});
  }
  json table = json::array();
  for (const auto& r : total) table.push_back(to_json(r));
  const bool ok = total.size() < 2 || converges(total, 1.9);
  if (!ok) exit = exit_code::not_certified;
  return {{"surface", s.name}, {"equation", {{"residuals", table}, {"converges", ok}}}, {"per_normal", per_sigma},
          {"levels", levels},   {"zeros", zeros}};
}

// ---------------------------------------------------------------- stability

json stability(const RunConfig& cfg, const Surface& s, Stopwatch& sw, int& exit) {
  const auto& o = cfg.stability;
  const FramePtr frame = build_frame(s, cfg, base_mode(cfg), 1e-3);
  CertificateOptions opt;
  opt.mesh_size = o.mesh_size;
  opt.resolution = cfg.resolutions.back();
  json extra = json::object();
  const StabilityCertificate c = sw("certificate", [&] {
    if (o.route == "definition") {
      const QField q = o.q == "zero" ? QField::zero() : QField::two_h_squared();
      return definition_certificate(frame, q, *o.mu, opt);
    }
    if (o.route == "graph") return graph_certificate(frame, make_weight(o.weight), opt);
    if (o.route == "fermat") return fermat_certificate(frame, make_weight(o.weight), opt);
    if (o.route == "flat") return flat_minimal_certificate(frame, opt);
    if (o.route == "threshold") return stability_threshold_check(frame, o.a, o.kappa0.value_or(0.1), opt);
    double omega0 = 0.0;
    if (o.omega0) {
      omega0 = *o.omega0;
    } else {
      const double Q = total_curvature_Q(*frame, *o.kappa0);
      omega0 = o.omega0_factor * Q;
      extra["omega0_from_Q"] = {{"Q", Q}, {"factor", o.omega0_factor}, {"omega0", omega0}};
    }
    return barbosa_docarmo_certificate(frame, *o.kappa0, omega0, opt);
  });
  if (c.verdict == Verdict::not_certified) exit = exit_code::not_certified;
  if (c.verdict == Verdict::inapplicable) exit = exit_code::inapplicable;
  json out = {{"surface", s.name}, {"frame", frame->name()}, {"certificate", to_json(c)}};
  if (!extra.empty()) out["derived"] = extra;
  // the mu-check on the same certificate, when requested explicitly
  if (o.mu && o.route != "definition") {
    const StabilityCertificate d =
        sw("direct_check", [&] { return mu_stability_check(*frame, QField::zero(), *o.mu, o.mesh_size); });
    out["direct_check"] = to_json(d);
  }
  return out;
}

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(const json& x) {
  if (x.is_null()) return "";
  if (x.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x.get<double>());
    return buf;
  }
  if (x.is_string()) return x.get<std::string>();
  return x.dump();
}

}  // namespace

std::string tool_version() { return IMM_VERSION; }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration:
    case ErrorKind::parse:
    case ErrorKind::degenerate_immersion:
    case ErrorKind::weight:
      return exit_code::input;
    case ErrorKind::frame_construction:
    case ErrorKind::non_flat_bundle:
    case ErrorKind::precondition:
    case ErrorKind::oracle:
    case ErrorKind::domain:
      return exit_code::inapplicable;
    case ErrorKind::internal:
      return exit_code::internal;
  }
  return exit_code::internal;
}

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  json timing = json::object();
  Stopwatch sw(timing);
  const Surface s = sw("surface", [&] { return resolve_surface(cfg.surface); });
  json results;
  if (cfg.command == "analyze") results = analyze(cfg, s, sw);
  else if (cfg.command == "residuals") results = residuals(cfg, s, sw, out.exit_code);
  else if (cfg.command == "variation") results = variation(cfg, s, sw, out.exit_code);
  else if (cfg.command == "hopf") results = hopf(cfg, s, sw, out.exit_code);
  else if (cfg.command == "stability") results = stability(cfg, s, sw, out.exit_code);
  else throw config_error("unknown command '" + cfg.command + "'");

  json& r = out.report;
  r["schema_version"] = schema_version;
  r["tool_version"] = tool_version();
  r["config"] = to_json(cfg);
  r["results"] = results;
  r["exit_code"] = out.exit_code;
  if (cfg.timestamp) {
    r["timing"] = timing;
    r["timestamp"] = timestamp_utc();
  }
  return out;
}

json error_report(ErrorKind kind, const std::string& message) {
  return {{"schema_version", schema_version},
          {"tool_version", tool_version()},
          {"error", {{"kind", to_string(kind)}, {"message", message}, {"exit_code", exit_code_for(kind)}}}};
}

std::string to_csv(const json& report) {
  std::ostringstream os;
  if (report.contains("error")) {
    os << "kind,message\n" << num(report["error"]["kind"]) << ",\"" << num(report["error"]["message"]) << "\"\n";
    return os.str();
  }
  const std::string cmd = report["config"]["command"];
  const json& res = report["results"];
  auto residual_rows = [&](const json& table) {
    os << "name,resolution,max_abs,l2,convergence_order\n";
    for (const auto& r : table) {
      os << num(r["name"]) << ',' << num(r["resolution"]) << ',' << num(r["max_abs"]) << ',' << num(r["l2"]) << ','
         << num(r["convergence_order"]) << '\n';
    }
  };
  if (cmd == "analyze") {
    os << "resolution,quantity,min,max\n";
    for (const auto& l : res["resolutions"]) {
      for (const char* q : {"H", "K", "W", "chi"}) {
        os << num(l["resolution"]) << ',' << q << ',' << num(l[q]["min"]) << ',' << num(l[q]["max"]) << '\n';
      }
    }
  } else if (cmd == "residuals") {
    residual_rows(res["residuals"]);
  } else if (cmd == "hopf") {
    json table = res["equation"]["residuals"];
    for (const auto& p : res["per_normal"]) {
      for (const auto& r : p["residuals"]) table.push_back(r);
    }
    residual_rows(table);
  } else if (cmd == "variation") {
    os << "case,admissible,closed_form,oracle,rel_err,area_element_rel_err\n";
    for (const auto& c : res["cases"]) {
      os << num(c["case"]) << ',' << num(c["admissible"]) << ',' << num(c["closed_form"]) << ','
         << num(c.value("oracle", json())) << ',' << num(c.value("rel_err", json())) << ','
         << num(c.value("area_element_rel_err", json())) << '\n';
    }
  } else if (cmd == "stability") {
    const json& c = res["certificate"];
    os << "key,value\nroute," << num(c["route"]) << "\nverdict," << num(c["verdict"]) << "\ncertified_mu,"
       << num(c["certified_mu"]) << '\n';
    for (const auto& [k, v] : c["constants"].items()) os << k << ',' << num(v) << '\n';
  }
  return os.str();
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("IMMSTAB_OUTPUT_DIR"); dir && *dir) {
    return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

void write_report(const RunConfig& cfg, const json& report) {
  const std::string text = cfg.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string out = resolve_output_path(cfg.output);
  if (const auto parent = std::filesystem::path(out).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw config_error("cannot write '" + out + "'");
  os << text;
}

}  // namespace imm
