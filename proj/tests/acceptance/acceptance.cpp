// Acceptance suite: one pass/fail line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only (exit 1 on failure)

#include <algorithm>
#include <array>
#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "imm/catalog.hpp"
#include "imm/compatibility.hpp"
#include "imm/errors.hpp"
#include "imm/fem.hpp"
#include "imm/hopf.hpp"
#include "imm/legendre.hpp"
#include "imm/stability.hpp"
#include "imm/variation.hpp"

using namespace imm;

namespace {

const double pi = std::acos(-1.0);

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void require(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { lines.push_back("  note  " + what); }
};

template <typename... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string orders(const std::vector<ResidualReport>& r) {
  std::string s;
  for (const auto& x : r) {
    s += fmt(" %d:%.2e", x.resolution, x.max_abs);
    if (x.convergence_order) s += fmt("(p=%.2f)", *x.convergence_order);
  }
  return s;
}

const std::vector<int> study = {64, 128, 256};

// ------------------------------------------------------------------ 1

Outcome structural_identities() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& name : catalog_names()) {
    const Surface s = make_surface(name);
    std::vector<ResidualReport> g, w, c, r;
    for (int m : study) {
      const ParameterGrid grid(m);
      s.patch->set_derivative_mode(DerivativeMode::analytic);
      const SurfaceFields f(make_frame(s), grid);
      g.push_back(gauss_residual(f));
      c.push_back(codazzi_residual(f));
      r.push_back(ricci_residual(f));
      // the Weingarten identity is algebraic in analytic jets; differentiate the frame numerically instead
      s.patch->set_derivative_mode(DerivativeMode::finite_difference, grid.h());
      w.push_back(weingarten_residual(SurfaceFields(make_frame(s), grid)));
    }
    s.patch->set_derivative_mode(DerivativeMode::analytic);
    for (auto* l : {&g, &w, &c, &r}) {
      fill_convergence(*l);
      const bool ok = converges(*l, 1.9) && l->back().max_abs < 1e-5;
      o.require(ok, name + " " + l->front().name + orders(*l));
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, fmt("runtime %.1f s < 60 s", t));
  return o;
}

// ------------------------------------------------------------------ 2, 3

struct VariationCase {
  std::string surface, weight;
  unsigned long long seed;
};

std::vector<VariationCase> variation_cases() {
  std::vector<VariationCase> cases;
  for (const char* s : {"enneper", "clifford", "holograph_w2"}) {
    for (const char* w : {"const", "exp_x3"}) {
      for (unsigned long long seed = 100; seed < 108; ++seed) cases.push_back({s, w, seed});
    }
  }
  return cases;
}

Outcome second_variation_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int admissible = 0, skipped = 0;
  double worst = 0.0;
  for (const auto& c : variation_cases()) {
    const FramePtr f = make_frame(make_surface(c.surface));
    const Weight w = make_weight(c.weight);
    const Direction d = Direction::random(f->codim(), c.seed);
    const TestFunction phi = TestFunction::random(c.seed);
    SecondVariationOptions unchecked;
    unchecked.check_criticality = false;
    const SecondVariation sv = second_variation_fermat(*f, w, d, phi, unchecked);
    if (sv.criticality_defect > crit_tol) {
      ++skipped;
      continue;
    }
    const double oracle = fd_variation_oracle(*f, w, d, phi, 2);
    const double rel = std::fabs(sv.value - oracle) / std::fabs(oracle);
    worst = std::max(worst, rel);
    ++admissible;
    o.require(rel < 1e-4, fmt("%s/%s seed %llu: closed %.10f oracle %.10f rel %.1e", c.surface.c_str(),
                              c.weight.c_str(), c.seed, sv.value, oracle, rel));
  }
  o.note(fmt("%d cases skipped: X is not critical for the weight (max |Gamma_X . N| |H_p - H| > %.0e)", skipped,
             crit_tol));
  o.require(admissible >= 20, fmt("%d admissible cases >= 20 (worst rel %.1e)", admissible, worst));
  // a non-constant weight at a critical surface, outside the listed surfaces
  {
    const FramePtr f = make_frame(make_surface("grim_reaper"));
    const Weight w = make_weight("exp_x3");
    double sup = 0.0;
    for (unsigned long long seed = 100; seed < 104; ++seed) {
      const Direction d = Direction::random(1, seed);
      const TestFunction phi = TestFunction::random(seed);
      const double a = second_variation_fermat(*f, w, d, phi).value, b = fd_variation_oracle(*f, w, d, phi, 2);
      sup = std::max(sup, std::fabs(a - b) / std::fabs(b));
    }
    o.note(fmt("supplement grim_reaper/exp_x3, 4 cases: worst rel %.1e", sup));
  }
  const double t = seconds_since(t0);
  o.require(t < 120.0, fmt("runtime %.1f s < 120 s", t));
  return o;
}

Outcome area_element() {
  Outcome o;
  double worst = 0.0;
  int nodes = 0, cases = 0;
  for (const auto& c : variation_cases()) {
    if (c.weight != "const") continue;  // the area element does not see the weight
    const FramePtr f = make_frame(make_surface(c.surface));
    const Direction d = Direction::random(f->codim(), c.seed);
    const TestFunction phi = TestFunction::random(c.seed);
    double sup = 0.0;
    for (const auto& q : phi.support_rule(8)) {
      const SurfaceSample s = sample_surface(*f, q.u, q.v);
      const double a = second_variation_area_element(s, d, phi), b = area_element_oracle(s, d, phi);
      sup = std::max(sup, std::fabs(a - b) / std::fabs(b));
      ++nodes;
    }
    ++cases;
    worst = std::max(worst, sup);
    o.require(sup < 1e-5, fmt("%s seed %llu: nodewise rel %.1e", c.surface.c_str(), c.seed, sup));
  }
  o.note(fmt("%d cases, %d nodes, worst rel %.1e", cases, nodes, worst));
  return o;
}

// ------------------------------------------------------------------ 4

void hopf_suite(Outcome& o, const std::string& label, const std::function<FramePtr()>& frame, bool counts) {
  FramePtr f;
  try {
    f = frame();
  } catch (const Error& e) {
    if (counts) o.require(false, label + ": " + to_string(e.kind()) + ": " + e.what());
    else o.note(label + ": " + e.what());
    return;
  }
  std::vector<ResidualReport> eq;
  double holo = 0.0, ident = 0.0;
  for (int m : study) {
    const SurfaceFields fields(f, ParameterGrid(m));
    eq.push_back(hopf_equation_residual(fields));
    if (m == study.back()) {
      holo = holomorphy_defect(fields).max_defect;
      ident = curvature_identity_residual(fields).max_abs;
    }
  }
  fill_convergence(eq);
  auto check = [&](bool ok, const std::string& what) {
    if (counts) o.require(ok, label + ": " + what);
    else o.note(label + (ok ? " ok: " : " FAIL: ") + what);
  };
  check(holo < 1e-6, fmt("holomorphy defect at 256 = %.2e < 1e-6", holo));
  check(ident < 1e-9, fmt("curvature identities |H|^2 + 4KW^2 = %.2e < 1e-9", ident));
  check(converges(eq, 1.9), "Hopf equation" + orders(eq));
}

Outcome hopf() {
  Outcome o;
  hopf_suite(o, "enneper", [] { return make_frame(make_surface("enneper")); }, true);
  hopf_suite(o, "holograph_w2 (parallel frame)", [] { return make_frame(make_surface("holograph_w2"), "parallel"); },
             true);
  hopf_suite(o, "supplement enneper4 (parallel frame)", [] { return make_frame(make_surface("enneper4"), "parallel"); },
             false);
  // with its Gram-Schmidt frame the curved bundle shows up as a holomorphy defect
  const SurfaceFields hg(make_frame(make_surface("holograph_w2")), ParameterGrid(256));
  o.note(fmt("holograph_w2 with Gram-Schmidt frame: holomorphy defect %.2e, max torsion %.2e",
             holomorphy_defect(hg).max_defect, holomorphy_defect(hg).max_torsion));
  return o;
}

// ------------------------------------------------------------------ 5

Outcome chi_pde() {
  Outcome o;
  auto run = [&](const std::string& label, const std::string& surface, ChiMode mode, std::optional<Weight> w,
                 bool counts) {
    std::vector<ResidualReport> r;
    ChiOptions opt;
    opt.mode = mode;
    opt.weight = w;
    try {
      const FramePtr f = make_frame(make_surface(surface));
      for (int m : study) r.push_back(chi_pde_residual(SurfaceFields(f, ParameterGrid(m)), opt));
    } catch (const Error& e) {
      if (counts) o.require(false, label + ": " + to_string(e.kind()) + ": " + e.what());
      else o.note(label + ": " + e.what());
      return;
    }
    fill_convergence(r);
    if (counts) o.require(converges(r, 1.9), label + orders(r));
    else o.note(label + (converges(r, 1.9) ? " converges" : " does NOT converge") + orders(r));
  };
  run("graph form on holograph_w2", "holograph_w2", ChiMode::graph, std::nullopt, true);
  run("general form on enneper", "enneper", ChiMode::general, std::nullopt, true);
  run("supplement graph form on enneper", "enneper", ChiMode::graph, std::nullopt, false);
  run("supplement graph form on grim_reaper/exp_x3", "grim_reaper", ChiMode::graph, make_weight("exp_x3"), false);
  run("supplement general form on holograph_w2", "holograph_w2", ChiMode::general, std::nullopt, false);
  return o;
}

// ------------------------------------------------------------------ 6

Outcome eigen_calibration() {
  Outcome o;
  const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
  o.require(std::fabs(j01 * j01 - 5.78318596) < 1e-8, fmt("Bessel oracle j01^2 = %.10f", j01 * j01));
  const EigenResult e = weighted_first_eigenvalue([](double, double) { return 1.0; });
  const double rel = std::fabs(e.lambda - j01 * j01) / (j01 * j01);
  o.require(rel < 1e-3, fmt("unit weight lambda1 = %.8f, rel %.1e (extrapolated %.10f)", e.lambda, rel, e.extrapolated));
  const std::vector<std::function<double(double, double)>> weights = {
      [](double, double) { return 1.0; },
      [](double u, double v) { return std::pow(1 + u * u + v * v, 2); },
      [](double u, double v) { return 1.5 + std::sin(2 * u) * v; }};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double base = weighted_first_eigenvalue(weights[i]).lambda;
    for (double c : {0.25, 3.0, 40.0}) {
      const double scaled = weighted_first_eigenvalue([&](double u, double v) { return c * weights[i](u, v); }).lambda;
      const double err = std::fabs(scaled * c - base) / base;
      o.require(err < 1e-8, fmt("weight %zu, c = %g: |c lambda(c w) - lambda(w)| / lambda = %.1e", i, c, err));
    }
  }
  return o;
}

// ------------------------------------------------------------------ 7

Outcome cap_eigenvalue_check() {
  Outcome o;
  const CapEigenvalue h = cap_eigenvalue(2 * pi);
  o.require(std::fabs(h.mu - 2.0) < 1e-6, fmt("mu(2 pi) = %.12f (nu = %.12f)", h.mu, h.nu));
  double last = INFINITY;
  for (double k : {1.0, 2.0, 3.0, 3.9}) {
    const double mu = cap_eigenvalue(k * pi).mu;
    o.require(mu < last, fmt("mu(%.1f pi) = %.10f", k, mu));
    last = mu;
  }
  return o;
}

// ------------------------------------------------------------------ 8

Outcome barbosa_docarmo() {
  Outcome o;
  const FramePtr e = make_frame(make_surface("enneper"));
  const double Q = total_curvature_Q(*e, 0.01);
  const StabilityCertificate c = barbosa_docarmo_certificate(e, 0.01, 1.02 * Q);
  const double mu = c.certified_mu;
  o.note(fmt("Q = %.10f, omega0 = %.10f", Q, 1.02 * Q));
  o.require(c.verdict == Verdict::certified && mu > 0.0 && mu < 2.0, fmt("enneper certificate mu = %.10f in (0, 2)", mu));
  const double khat = *c.get("max_khat"), slack = *c.get("khat_slack");
  o.require(khat <= 1.0 + slack, fmt("max K-hat = %.8f <= 1 + %.1e", khat, slack));
  const StabilityCertificate d = mu_stability_check(*e, QField::zero(), mu > 0.0 ? mu : 1.0);
  o.require(d.verdict == Verdict::certified,
            fmt("direct check at mu = %.8f: lambda1 = %.8f", mu, d.eigen ? d.eigen->certified : 0.0));
  const StabilityCertificate p = barbosa_docarmo_certificate(make_frame(make_surface("plane3")), 1.0, 2 * pi);
  o.require(p.verdict == Verdict::certified && std::fabs(p.certified_mu - 2.0) < 1e-6,
            fmt("plane, omega0 = 2 pi: mu = %.12f", p.certified_mu));
  return o;
}

// ------------------------------------------------------------------ 9

Outcome graph_formula() {
  Outcome o;
  const GraphMuBound m = graph_mu_bound({0.5, 0.0, 0.0, 0.0}, 4);
  o.require(m.minimal && m.mu_max == 2.0, fmt("minimal graph: mu_max = %.15g", m.mu_max));
  const GraphMuBound b = graph_mu_bound({1.0, 1.0, 0.1, 0.1}, 4);
  const double hand = 2.0 - 0.6 * std::sqrt(2.0);
  o.require(std::fabs(b.mu_max - hand) < 1e-12, fmt("(1, 1, .1, .1, 4): mu_max = %.15f, hand %.15f", b.mu_max, hand));
  const StabilityCertificate g = graph_certificate(make_frame(make_surface("enneper")), make_weight("const"));
  o.note(fmt("enneper graph route: %s, mu = %.3f", to_string(g.verdict).c_str(), g.certified_mu));
  return o;
}

// ------------------------------------------------------------------ 10

Outcome flat_minimal() {
  Outcome o;
  auto route = [&](const std::string& surface, bool counts) {
    try {
      const StabilityCertificate c = flat_minimal_certificate(make_frame(make_surface(surface), "parallel"));
      const bool ok = c.verdict == Verdict::certified && c.certified_mu == 1.0;
      const std::string what = fmt("%s: mu_max = %.6g, verdict %s", surface.c_str(), c.get("mu_max").value_or(0.0),
                                   to_string(c.verdict).c_str());
      if (counts) o.require(ok, what);
      else o.note("supplement " + what);
    } catch (const Error& e) {
      if (counts) o.require(false, surface + ": " + to_string(e.kind()) + ": " + e.what());
      else o.note(surface + ": " + e.what());
    }
  };
  route("holograph_w2", true);
  route("enneper4", false);
  return o;
}

// ------------------------------------------------------------------ 11

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + IMMSTAB_EXE + "\" " + args + " 2>&1";
  Proc r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome determinism() {
  Outcome o;
  std::vector<std::filesystem::path> configs;
  for (const auto& e : std::filesystem::directory_iterator(ACCEPTANCE_DIR)) {
    if (e.path().extension() == ".cfg") configs.push_back(e.path());
  }
  std::sort(configs.begin(), configs.end());
  o.require(configs.size() >= 10, fmt("%zu acceptance configs", configs.size()));
  for (const auto& c : configs) {
    // the subcommand comes from the file's command key
    std::string command;
    FILE* f = std::fopen(c.c_str(), "r");
    char line[256];
    while (f && std::fgets(line, sizeof line, f)) {
      if (std::sscanf(line, "command = %63s", line) == 1) {
        command = line;
        break;
      }
    }
    if (f) std::fclose(f);
    const std::string args = command + " --config \"" + c.string() + "\" --no-timestamp";
    const Proc a = run_cli(args), b = run_cli(args);
    o.require(!a.out.empty() && a.out == b.out && a.code == b.code,
              fmt("%s: %zu bytes, exit %d", c.filename().c_str(), a.out.size(), a.code));
  }
  return o;
}

struct Criterion {
  const char* title;
  Outcome (*fn)();
};

const std::array<Criterion, 11> criteria = {{
    {"structural identities converge on the catalog", structural_identities},
    {"closed-form second variation matches the Fermat oracle", second_variation_oracle},
    {"area-element second variation matches the epsilon stencil", area_element},
    {"Hopf differentials: holomorphy, identities, equation", hopf},
    {"chi equations converge", chi_pde},
    {"eigen-solver calibration and scaling", eigen_calibration},
    {"cap eigenvalue and monotonicity", cap_eigenvalue_check},
    {"spherical-cap certificate end to end", barbosa_docarmo},
    {"graph mu bound formula", graph_formula},
    {"flat-normal-bundle minimal surfaces", flat_minimal},
    {"CLI determinism under --no-timestamp", determinism},
}};

bool run_one(int i) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = criteria[static_cast<std::size_t>(i - 1)].fn();
  } catch (const std::exception& e) {
    o.require(false, std::string("unexpected error: ") + e.what());
  }
  for (const auto& l : o.lines) std::printf("%s\n", l.c_str());
  std::printf("criterion %2d %s: %s (%.1f s)\n", i, o.pass ? "PASS" : "FAIL", criteria[static_cast<std::size_t>(i - 1)].title,
              seconds_since(t0));
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int i = std::atoi(argv[2]);
    if (i < 1 || i > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion must lie in [1, %zu]\n", criteria.size());
      return 2;
    }
    return run_one(i) ? 0 : 1;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
    return 2;
  }
  int failed = 0;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) failed += run_one(i) ? 0 : 1;
  return failed == 0 ? 0 : 1;
}
