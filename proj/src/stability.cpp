#include "imm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "imm/compatibility.hpp"
#include "imm/errors.hpp"
#include "imm/quadrature.hpp"

namespace imm {

namespace {

constexpr double pi = 3.14159265358979323846;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[240];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// n_s^1 y^2 - n_s^2 y^1
double cross12(const Mat& N, int s, const Vec& y) { return N(0, s) * y[1] - N(1, s) * y[0]; }

double max_frame_torsion(const SurfaceFields& f) {
  double m = 0.0;
  for (std::size_t n = 0; n < f.grid().size(); ++n) {
    if (!f.grid().in_disc(n)) continue;
    const SurfaceSample& s = f.at(n);
    if (s.codim() > 1) m = std::max({m, s.Tu.cwiseAbs().maxCoeff(), s.Tv.cwiseAbs().maxCoeff()});
  }
  return m;
}

void require_minimal(const SurfaceFields& f, const std::string& what) {
  const double h = max_mean_curvature(f);
  if (!(h < crit_tol)) throw precondition_error(what + " requires a minimal surface; " + fmt("max |H| = %.3e", h));
}

void require_torsion_free(const SurfaceFields& f, const std::string& what) {
  if (f.codim() == 1 || f.frame().torsion_free()) return;
  const double t = max_frame_torsion(f);
  if (!(t < torsion_tol)) {
    throw precondition_error(what + " requires a torsion-free normal frame; " +
                             fmt("max |T| = %.3e with the ", t) + f.frame().name() + " frame");
  }
}

// Preconditions of the graph form of the chi equation, each named.
void require_graph_setting(const SurfaceFields& f, const Weight& w) {
  f.require_conformal("graph mode");
  const ChiField c = chi(f);
  if (!(c.chi_min > 0.0 || c.chi_max < 0.0)) {
    throw precondition_error(fmt("graph mode requires a graph-like patch (J of one sign); chi ranges over [%.3e, %.3e]",
                                 c.chi_min, c.chi_max));
  }
  const double t = f.codim() == 1 ? 0.0 : max_frame_torsion(f);
  if (!(t < torsion_tol)) {
    throw precondition_error(fmt("graph mode requires a torsion-free frame; max |T| = %.3e (", t) + f.frame().name() +
                             " frame)");
  }
  double defect = 0.0;
  for (std::size_t n = 0; n < f.grid().size(); ++n) {
    if (!f.grid().in_disc(n)) continue;
    const SurfaceSample& s = f.at(n);
    for (int a = 0; a < s.codim(); ++a) {
      defect = std::max(defect, std::fabs(s.Hs[a] - prescribed_mean_curvature(w, s.X, s.N.col(a))));
    }
  }
  if (!(defect <= crit_tol)) {
    throw precondition_error("graph mode requires the mean curvature prescribed by weight " + w.name +
                             fmt("; max |H_s - H_s(X, N_s)| = %.3e", defect));
  }
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::not_certified: return "not-certified";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "?";
}

std::optional<double> StabilityCertificate::get(const std::string& key) const {
  for (const auto& [k, v] : constants) {
    if (k == key) return v;
  }
  return std::nullopt;
}

ChiField chi(const SurfaceFields& f) {
  ChiField c;
  c.J = f.scalar([](const SurfaceSample& s) { return s.Xu[0] * s.Xv[1] - s.Xu[1] * s.Xv[0]; });
  c.chi = f.scalar([](const SurfaceSample& s) { return (s.Xu[0] * s.Xv[1] - s.Xu[1] * s.Xv[0]) / s.W; });
  c.chi_min = std::numeric_limits<double>::infinity();
  c.chi_max = -c.chi_min;
  for (std::size_t n = 0; n < f.grid().size(); ++n) {
    if (!f.grid().in_disc(n)) continue;
    c.chi_min = std::min(c.chi_min, c.chi[n]);
    c.chi_max = std::max(c.chi_max, c.chi[n]);
  }
  return c;
}

ResidualReport chi_pde_residual(const SurfaceFields& f, const ChiOptions& opt) {
  const ParameterGrid& grid = f.grid();
  const int k = f.codim();
  const Weight w = opt.weight ? *opt.weight : make_weight("const");
  if (opt.mode == ChiMode::graph) {
    require_graph_setting(f, w);
  } else {
    f.require_conformal("chi_pde_residual");
  }
  const ChiField c = chi(f);
  const Field lap = grid.laplacian(c.chi);
  std::vector<Field> Hu, Hv;
  if (opt.mode == ChiMode::general) {
    for (int a = 0; a < k; ++a) {
      const Field Ha = f.scalar([a](const SurfaceSample& s) { return s.Hs[a]; });
      Hu.push_back(grid.d_u(Ha));
      Hv.push_back(grid.d_v(Ha));
    }
  }
  Field defect(grid.size(), 0.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const SurfaceSample& s = f.at(n);
    double rhs = 0.0;
    if (opt.mode == ChiMode::general) {
      const Mat S = ricci_curvature(s);
      for (int a = 0; a < k; ++a) {
        rhs += -2.0 * (2.0 * s.Hs[a] * s.Hs[a] - s.Ks[a]) * s.W * c.chi[n];
        const double pv = cross12(s.N, a, s.Xv), pu = cross12(s.N, a, s.Xu);
        rhs += 2.0 * (Hu[static_cast<std::size_t>(a)][n] * pv - Hv[static_cast<std::size_t>(a)][n] * pu);
        for (int b = 0; b < k; ++b) {
          if (b == a) continue;
          rhs += S(a, b) * (s.N(0, a) * s.N(1, b) - s.N(1, a) * s.N(0, b));
          const int m = opt.printed_torsion_pairing ? a : b;
          const double qv = cross12(s.N, m, s.Xv), qu = cross12(s.N, m, s.Xu);
          rhs += 2.0 * (qv * s.Tu(a, b) - qu * s.Tv(a, b)) * s.Hs[a];
        }
      }
    } else {
      rhs = -2.0 * (2.0 * s.H * s.H - s.K) * s.W * c.chi[n];
      const Vec hZ = w.gradient(s.X) / (2.0 * w.value(s.X));
      for (int a = 0; a < k; ++a) {
        const Vec Na = s.N.col(a);
        const double du = prescribed_mean_curvature_dX(w, s.X, Na, s.Xu) + hZ.dot(s.Nu.col(a));
        const double dv = prescribed_mean_curvature_dX(w, s.X, Na, s.Xv) + hZ.dot(s.Nv.col(a));
        rhs += 2.0 * du * cross12(s.N, a, s.Xv) - 2.0 * dv * cross12(s.N, a, s.Xu);
      }
    }
    defect[n] = std::fabs(lap[n] - rhs);
  }
  return make_report(opt.mode == ChiMode::graph ? "chi_pde_graph" : "chi_pde_general", grid, defect,
                     f.area_element());
}

GraphBounds graph_bounds(const SurfaceFields& f, const Weight& w) {
  GraphBounds b;
  const ChiField c = chi(f);
  b.chi_min = c.chi_min > 0.0 ? c.chi_min : -c.chi_max;  // orientation-normalised
  b.h_min = std::numeric_limits<double>::infinity();
  const int dim = f.dim();
  for (std::size_t n = 0; n < f.grid().size(); ++n) {
    if (!f.grid().in_disc(n)) continue;
    const SurfaceSample& s = f.at(n);
    b.h_min = std::min(b.h_min, s.H);
    const Vec hZ = w.gradient(s.X) / (2.0 * w.value(s.X));
    b.h2 = std::max(b.h2, hZ.norm());
    for (int a = 0; a < s.codim(); ++a) {
      Vec g(dim);
      for (int i = 0; i < dim; ++i) g[i] = prescribed_mean_curvature_dX(w, s.X, s.N.col(a), Vec::Unit(dim, i));
      b.h1 = std::max(b.h1, g.norm());
    }
  }
  return b;
}

GraphMuBound graph_mu_bound(const GraphBounds& b, int n) {
  if (n < 3) throw config_error("ambient dimension must be at least 3");
  GraphMuBound r;
  if (b.h1 < 0.0 || b.h2 < 0.0) throw config_error("h1 and h2 must be non-negative");
  if (b.h1 <= 1e-12 && b.h2 <= 1e-12) {
    r.minimal = true;
    r.mu_max = 2.0;
    r.certified = true;
    return r;
  }
  if (!(b.chi_min > 0.0)) throw precondition_error(fmt("graph bound requires chi_min > 0 (got %.3e)", b.chi_min));
  if (!(b.h_min > 0.0)) throw precondition_error(fmt("graph bound requires h_min > 0 (got %.3e)", b.h_min));
  r.bracket = (n - 2) * (b.h1 + b.h2) / b.h_min + 2.0 * b.h2;
  r.mu_max = 2.0 - std::sqrt(2.0) / b.chi_min * r.bracket;
  r.certified = r.mu_max > 0.0;
  return r;
}

QField QField::zero() {
  return {"q = 0", [](const SurfaceSample&) { return 0.0; }};
}

QField QField::two_h_squared() {
  return {"q = 2H^2", [](const SurfaceSample& s) { return 2.0 * s.H * s.H; }};
}

QField QField::weighted_area(const Weight& w) {
  return {"q = 2H^2 - H_X.N (weight " + w.name + ")", [w](const SurfaceSample& s) {
            const Vec N = s.N.col(0);
            const double H = prescribed_mean_curvature(w, s.X, N);
            return 2.0 * H * H - prescribed_mean_curvature_dX(w, s.X, N, N);
          }};
}

StabilityCertificate mu_stability_check(const FrameField& frame, const QField& q, double mu, double mesh_size) {
  if (!(mu > 0.0)) throw config_error("mu must be positive");
  auto weight = [&](double u, double v) {
    const SurfaceSample s = sample_surface(frame, u, v);
    const double qv = q.q(s);
    const double val = (qv - s.K) * s.W;
    if (val < -1e-10 * std::max(1.0, (std::fabs(qv) + std::fabs(s.K)) * s.W)) {
      throw precondition_error(fmt("q - K < 0 at (u, v) = (%.4f, %.4f): the stability inequality does not apply", u, v));
    }
    return std::max(0.0, val);
  };
  StabilityCertificate c;
  c.route = "definition";
  c.q_description = q.description;
  EigenResult e = weighted_first_eigenvalue(weight, mesh_size);
  c.set("mu", mu);
  c.set("weight_integral", e.weight_integral);
  if (e.vacuous) {
    c.verdict = Verdict::certified;
    c.certified_mu = mu;
    c.notes.push_back("weight (q - K) W vanishes: vacuously stable for every mu");
  } else {
    c.set("lambda1", e.lambda);
    c.set("lambda1_extrapolated", e.extrapolated);
    c.set("lambda1_certified", e.certified);
    c.set("margin", e.certified - mu);
    c.set("mesh_size", e.levels.back().mesh_size);
    c.verdict = e.certified >= mu * (1.0 + strict_guard) ? Verdict::certified : Verdict::not_certified;
    c.certified_mu = c.verdict == Verdict::certified ? mu : 0.0;
    if (c.verdict != Verdict::certified) c.notes.push_back(fmt("lambda1 = %.10g does not exceed mu = %.10g", e.certified, mu));
  }
  c.eigen = std::move(e);
  return c;
}

double total_curvature_Q(const FrameField& frame, double kappa0) {
  if (!(kappa0 > 0.0)) throw config_error("kappa0 must be positive");
  return integrate(unit_disc_rule(), [&](double u, double v) {
    const SurfaceSample s = sample_surface(frame, u, v);
    if (s.K > 1e-12) throw precondition_error(fmt("total curvature Q requires K <= 0; K = %.3e at a quadrature point", s.K));
    return (kappa0 - s.K) * s.W;
  });
}

double total_curvature(const FrameField& frame) {
  return integrate(unit_disc_rule(), [&](double u, double v) {
    const SurfaceSample s = sample_surface(frame, u, v);
    return -s.K * s.W;
  });
}

ConformalCurvature conformal_gauss_curvature(const SurfaceFields& f, double kappa0) {
  f.require_conformal("conformal_gauss_curvature");
  const ParameterGrid& grid = f.grid();
  ConformalCurvature r;
  r.kappa0 = kappa0;
  Field lg(grid.size(), 0.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.in_disc(n)) continue;
    const double gamma = kappa0 - f.at(n).K;
    if (!(gamma > 0.0)) throw precondition_error(fmt("conformal factor kappa0 - K = %.3e is not positive", gamma));
    lg[n] = 0.5 * std::log(gamma);
  }
  const Field lap = grid.laplacian(lg);
  r.khat.assign(grid.size(), 0.0);
  r.max_khat = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const SurfaceSample& s = f.at(n);
    r.khat[n] = (s.K - lap[n] / s.W) / (kappa0 - s.K);
    r.max_khat = std::max(r.max_khat, r.khat[n]);
  }
  return r;
}

StabilityCertificate barbosa_docarmo_certificate(FramePtr frame, double kappa0, double omega0,
                                                 const CertificateOptions& opt) {
  if (!(kappa0 > 0.0)) throw config_error("kappa0 must be positive");
  if (!(omega0 > 0.0 && omega0 < 4 * pi)) throw Error(ErrorKind::domain, "omega0 must lie in (0, 4 pi)");
  const SurfaceFields f(frame, ParameterGrid(opt.resolution));
  require_minimal(f, "the spherical-cap route");
  require_torsion_free(f, "the spherical-cap route");
  StabilityCertificate c;
  c.route = "cap_eigenvalue";
  c.q_description = "q = 0";
  const double Q = total_curvature_Q(*frame, kappa0);
  c.set("kappa0", kappa0);
  c.set("omega0", omega0);
  c.set("Q", Q);
  if (!(Q < omega0 * (1.0 - strict_guard))) {
    c.verdict = Verdict::not_certified;
    c.set("deficit", Q - omega0);
    c.notes.push_back(fmt("Q = %.10g is not below omega0 = %.10g", Q, omega0));
    return c;
  }
  const CapEigenvalue cap = cap_eigenvalue(omega0);
  c.set("theta0", cap.theta0);
  c.set("nu", cap.nu);
  c.set("mu", cap.mu);
  const ConformalCurvature kh = conformal_gauss_curvature(f, kappa0);
  const double slack = 5.0 * f.grid().h() * f.grid().h();
  c.set("max_khat", kh.max_khat);
  c.set("khat_slack", slack);
  bool ok = true;
  if (kh.max_khat > 1.0 + slack) {
    ok = false;
    c.notes.push_back(fmt("corroboration failed: max K-hat = %.6g exceeds 1 + %.2e", kh.max_khat, slack));
  }
  StabilityCertificate direct = mu_stability_check(*frame, QField::zero(), cap.mu, opt.mesh_size);
  for (const auto& [k, v] : direct.constants) {
    if (k != "mu") c.set("direct_" + k, v);
  }
  c.eigen = direct.eigen;
  if (direct.verdict != Verdict::certified) {
    ok = false;
    c.notes.push_back("direct eigenvalue check does not confirm mu");
  }
  c.verdict = ok ? Verdict::certified : Verdict::not_certified;
  c.certified_mu = ok ? cap.mu : 0.0;
  return c;
}

StabilityCertificate stability_threshold_check(FramePtr frame, double a, double kappa0, const CertificateOptions& opt) {
  if (!(a > 0.0 && a <= 2.0)) throw config_error("threshold parameter a must lie in (0, 2]");
  const SurfaceFields f(frame, ParameterGrid(opt.resolution));
  require_minimal(f, "the total-curvature threshold");
  const ConformalCurvature kh = conformal_gauss_curvature(f, kappa0);
  const double slack = 5.0 * f.grid().h() * f.grid().h();
  StabilityCertificate c;
  c.route = "threshold";
  c.q_description = "q = 0";
  c.set("a", a);
  c.set("kappa0", kappa0);
  c.set("max_khat", kh.max_khat);
  if (kh.max_khat > a + slack) {
    throw precondition_error(fmt("threshold check requires max K-hat <= a; max K-hat = %.6g, a = %.6g", kh.max_khat, a));
  }
  const double I = total_curvature(*frame);
  const double thr = 4 * pi / (1.0 + a);
  c.set("total_curvature", I);
  c.set("threshold", thr);
  if (std::fabs(I - thr) <= strict_guard * thr) {
    c.verdict = Verdict::not_certified;
    c.notes.push_back("boundary case: total curvature equals the threshold (strict comparison)");
  } else if (I < thr) {
    c.verdict = Verdict::certified;
    c.certified_mu = 2.0;
  } else {
    c.verdict = Verdict::not_certified;
    c.notes.push_back(fmt("total curvature %.10g exceeds 4 pi / (1 + a) = %.10g", I, thr));
  }
  return c;
}

StabilityCertificate definition_certificate(FramePtr frame, const QField& q, double mu, const CertificateOptions& opt) {
  return mu_stability_check(*frame, q, mu, opt.mesh_size);
}

namespace {

void attach_direct(StabilityCertificate& c, const StabilityCertificate& direct) {
  for (const auto& [k, v] : direct.constants) {
    if (k != "mu") c.set("direct_" + k, v);
  }
  c.eigen = direct.eigen;
  for (const auto& n : direct.notes) c.notes.push_back("direct check: " + n);
}

}  // namespace

StabilityCertificate graph_certificate(FramePtr frame, const Weight& w, const CertificateOptions& opt) {
  const SurfaceFields f(frame, ParameterGrid(opt.resolution));
  require_graph_setting(f, w);
  StabilityCertificate c;
  c.route = "graph_chi";
  c.q_description = "q = 2H^2";
  const GraphBounds b = graph_bounds(f, w);
  c.set("chi_min", b.chi_min);
  c.set("h_min", b.h_min);
  c.set("h1", b.h1);
  c.set("h2", b.h2);
  const GraphMuBound m = graph_mu_bound(b, f.dim());
  c.set("bracket", m.bracket);
  c.set("mu_max", m.mu_max);
  if (m.minimal) c.notes.push_back("minimal graph: mu_max = 2 and the chi_min condition is not needed");
  if (!m.certified) {
    c.verdict = Verdict::not_certified;
    c.notes.push_back("graph bound gives mu_max <= 0");
    return c;
  }
  const StabilityCertificate direct = mu_stability_check(*frame, QField::two_h_squared(), m.mu_max, opt.mesh_size);
  attach_direct(c, direct);
  c.verdict = direct.verdict;
  c.certified_mu = direct.verdict == Verdict::certified ? m.mu_max : 0.0;
  return c;
}

StabilityCertificate fermat_certificate(FramePtr frame, const Weight& w, const CertificateOptions& opt) {
  const FermatBound b = fermat_mu_bound(*frame, w);
  StabilityCertificate c;
  c.route = "fermat";
  c.q_description = b.q_description;
  c.set("gamma_min", b.gamma_min);
  c.set("gamma_max", b.gamma_max);
  c.set("min_q_minus_K", b.min_q_minus_k);
  c.set("mu_max", b.mu_max);
  const StabilityCertificate direct = mu_stability_check(*frame, QField::weighted_area(w), b.mu_max, opt.mesh_size);
  attach_direct(c, direct);
  c.verdict = direct.verdict;
  c.certified_mu = direct.verdict == Verdict::certified ? b.mu_max : 0.0;
  return c;
}

StabilityCertificate flat_minimal_certificate(FramePtr frame, const CertificateOptions& opt) {
  const SurfaceFields f(frame, ParameterGrid(opt.resolution));
  require_minimal(f, "the flat-normal-bundle route");
  StabilityCertificate c;
  c.route = "flat_minimal";
  c.q_description = "q = 0";
  const double tt = f.codim() == 1 ? 0.0 : total_torsion(*frame);
  const FlatMinimalBound b = minimal_flat_bound(f.dim(), tt);
  c.set("total_torsion", tt);
  c.notes.push_back(b.report);
  if (!b.certified) {
    c.verdict = Verdict::not_certified;
    return c;
  }
  c.set("mu_max", b.mu_max);
  const StabilityCertificate direct = mu_stability_check(*frame, QField::zero(), b.mu_max, opt.mesh_size);
  attach_direct(c, direct);
  c.verdict = direct.verdict;
  c.certified_mu = direct.verdict == Verdict::certified ? b.mu_max : 0.0;
  return c;
}

}  // namespace imm
