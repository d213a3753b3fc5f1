#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "imm/config.hpp"
#include "imm/errors.hpp"
#include "imm/run.hpp"

namespace {

struct Flags {
  std::string config, surface, resolution, frame, derivative, output, format;
  bool no_timestamp = false;
  // variation
  std::string weight, direction, phi;
  std::optional<bool> oracle;
  std::optional<int> cases;
  std::optional<unsigned long long> seed;
  std::optional<double> eps;
  // hopf
  std::string dump_fields;
  std::optional<double> zero_radius;
  // stability
  std::string route, q;
  std::optional<double> kappa0, omega0, omega0_factor, mu, mesh_size, a;
};

void common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Run configuration file (key = value with [sections])");
  sub->add_option("--surface", f.surface, "Catalog name, e.g. enneper or sphere_patch(2), or a surface file");
  sub->add_option("--resolution", f.resolution, "Lattice resolution(s), comma separated, e.g. 64,128,256");
  sub->add_option("--frame", f.frame, "Normal frame: gram_schmidt | parallel | analytic | default");
  sub->add_option("--derivative", f.derivative, "Patch derivatives: analytic | fd | mixed");
  sub->add_option("--output", f.output, "Report path (relative paths honour IMMSTAB_OUTPUT_DIR); stdout if absent");
  sub->add_option("--format", f.format, "Report format: json | csv");
  sub->add_flag("--no-timestamp", f.no_timestamp, "Omit timestamp and timing for byte-reproducible reports");
}

void apply_flags(const Flags& f, imm::RunConfig& cfg) {
  auto set = [](std::string& dst, const std::string& src) {
    if (!src.empty()) dst = src;
  };
  set(cfg.surface, f.surface);
  if (!f.resolution.empty()) {
    imm::IniFile ini;
    ini.sections.push_back({"run", {{"resolution", f.resolution, 0}}});
    imm::apply_ini(ini, "<command line>", cfg);
  }
  set(cfg.frame, f.frame);
  set(cfg.derivative, f.derivative);
  set(cfg.output, f.output);
  set(cfg.format, f.format);
  if (f.no_timestamp) cfg.timestamp = false;

  set(cfg.variation.weight, f.weight);
  set(cfg.variation.direction, f.direction);
  set(cfg.variation.phi, f.phi);
  if (f.oracle) cfg.variation.oracle = *f.oracle;
  if (f.cases) cfg.variation.cases = *f.cases;
  if (f.seed) cfg.variation.seed = *f.seed;
  if (f.eps) cfg.variation.eps = *f.eps;

  set(cfg.hopf.dump_fields, f.dump_fields);
  if (f.zero_radius) cfg.hopf.zero_radius = *f.zero_radius;

  auto& s = cfg.stability;
  set(s.route, f.route);
  set(s.q, f.q);
  set(s.weight, f.weight);
  if (f.kappa0) s.kappa0 = f.kappa0;
  if (f.omega0) s.omega0 = f.omega0;
  if (f.omega0_factor) s.omega0_factor = *f.omega0_factor;
  if (f.mu) s.mu = f.mu;
  if (f.mesh_size) s.mesh_size = *f.mesh_size;
  if (f.a) s.a = *f.a;
}

int fail(imm::ErrorKind kind, const std::string& message) {
  std::cout << imm::error_report(kind, message).dump(2) << "\n";
  return imm::exit_code_for(kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"immstab: geometry and mu-stability analysis of immersed surfaces in R^n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", imm::tool_version());
  Flags f;

  auto* analyze = app.add_subcommand("analyze", "Curvatures, area element, torsion and chi over the unit disc");
  auto* residuals = app.add_subcommand("residuals", "Gauss, Weingarten, Codazzi and Ricci residuals with convergence orders");
  auto* variation = app.add_subcommand("variation", "Second variation of the Fermat functional against an epsilon oracle");
  auto* hopf = app.add_subcommand("hopf", "Hopf differentials: holomorphy, Codazzi-derived equation, zeros of K");
  auto* stability = app.add_subcommand("stability", "mu-stability certificates");
  for (auto* sub : {analyze, residuals, variation, hopf, stability}) common_options(sub, f);

  variation->add_option("--weight", f.weight, "Weight preset: const | exp_x3 | radial");
  variation->add_option("--direction", f.direction, "Normal direction preset: constant | rotating | random");
  variation->add_option("--phi", f.phi, "Test function preset: radial | tensor | random");
  variation->add_option("--oracle", f.oracle, "Run the finite-difference oracle (true | false)");
  variation->add_option("--cases", f.cases, "Number of seeded cases");
  variation->add_option("--seed", f.seed, "Seed of the first case");
  variation->add_option("--eps", f.eps, "Oracle stencil step");

  hopf->add_option("--dump-fields", f.dump_fields, "Write per-node Hopf fields at the finest resolution to this CSV");
  hopf->add_option("--zero-radius", f.zero_radius, "Radius of the sub-disc searched for zeros of K");

  stability->add_option("--route", f.route, "Certificate route: definition | graph | cap | fermat | flat | threshold");
  stability->add_option("--kappa0", f.kappa0, "Conformal-factor constant kappa0 > 0 (cap, threshold)");
  stability->add_option("--omega0", f.omega0, "Spherical cap area in (0, 4 pi) (cap); default omega0-factor * Q");
  stability->add_option("--omega0-factor", f.omega0_factor, "omega0 = factor * Q when --omega0 is absent");
  stability->add_option("--mu", f.mu, "mu for the definition route, or an extra direct check");
  stability->add_option("--mesh-size", f.mesh_size, "Coarsest finite-element edge length");
  stability->add_option("--q", f.q, "q for the definition route: zero | two_h_squared");
  stability->add_option("--weight", f.weight, "Weight preset for graph and fermat routes");
  stability->add_option("--a", f.a, "Threshold parameter a in (0, 2]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(imm::ErrorKind::configuration, e.what());
  }

  imm::RunConfig cfg;
  try {
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (!f.config.empty()) imm::apply_ini(imm::read_ini(f.config), f.config, cfg);
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    apply_flags(f, cfg);
    imm::finalize(cfg);
    const imm::RunOutcome out = imm::run(cfg);
    imm::write_report(cfg, out.report);
    return out.exit_code;
  } catch (const imm::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail(imm::ErrorKind::internal, e.what());
  }
}
