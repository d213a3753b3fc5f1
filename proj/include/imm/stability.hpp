#pragma once

// mu-stability: the projection mapping chi and its PDE, the eigenvalue form
// of the stability inequality, and the certification routes (definition,
// graph/chi bound, spherical-cap eigenvalue, weighted area, flat minimal).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imm/fem.hpp"
#include "imm/geometry.hpp"
#include "imm/legendre.hpp"
#include "imm/variation.hpp"

namespace imm {

/// Relative guard for strict inequalities (ties never certify).
inline constexpr double strict_guard = 1e-9;

struct ChiField {
  Field J, chi;  // J = x1_u x2_v - x2_u x1_v, chi = J / W on disc nodes
  double chi_min = 0.0, chi_max = 0.0;
};
ChiField chi(const SurfaceFields& f);

enum class ChiMode { general, graph };

struct ChiOptions {
  ChiMode mode = ChiMode::general;
  /// Pair n_sigma (as typeset) instead of n_omega with T^omega_{sigma,i} in the torsion-H term.
  bool printed_torsion_pairing = false;
  /// Prescribed-mean-curvature oracle for graph mode (default: constant weight).
  std::optional<Weight> weight;
};

/// Defect of the flat-Laplacian equation for chi on interior nodes.
///  general: -2 sum (2H_s^2 - K_s) W chi + sum S^w_{s,12} (n_s^1 n_w^2 - n_s^2 n_w^1)
///           + 2 sum {(n_w^1 x_v^2 - n_w^2 x_v^1) T^w_{s,1} - (n_w^1 x_u^2 - n_w^2 x_u^1) T^w_{s,2}} H_s
///           + 2 sum {H_{s,u} (n_s^1 x_v^2 - n_s^2 x_v^1) - H_{s,v} (n_s^1 x_u^2 - n_s^2 x_u^1)}
///  graph:   -2 (2H^2 - K) W chi + 2 sum (H_{s,X} . X_u + H_{s,Z} . N_{s,u}) (n_s^1 x_v^2 - n_s^2 x_v^1)
///           - 2 sum (H_{s,X} . X_v + H_{s,Z} . N_{s,v}) (n_s^1 x_u^2 - n_s^2 x_u^1)
/// Graph mode requires a graph-like patch (J of one sign), a torsion-free frame
/// and a surface whose mean curvature equals the oracle's.
ResidualReport chi_pde_residual(const SurfaceFields& f, const ChiOptions& opt = {});

struct GraphBounds {
  double chi_min = 0.0, h_min = 0.0, h1 = 0.0, h2 = 0.0;
};

/// Samples chi_min, min |H|, max |H_{s,X}|, max |H_{s,Z}| on the lattice.
GraphBounds graph_bounds(const SurfaceFields& f, const Weight& w);

struct GraphMuBound {
  double mu_max = 0.0;
  double bracket = 0.0;
  bool minimal = false;  // h1 = h2 = 0: mu_max = 2, chi_min not needed
  bool certified = false;
};
GraphMuBound graph_mu_bound(const GraphBounds& b, int n);

enum class Verdict { certified, not_certified, inapplicable };
std::string to_string(Verdict v);

struct StabilityCertificate {
  std::string route;
  Verdict verdict = Verdict::not_certified;
  double certified_mu = 0.0;
  std::string q_description;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<std::string> notes;
  std::optional<EigenResult> eigen;

  void set(const std::string& key, double value) { constants.emplace_back(key, value); }
  std::optional<double> get(const std::string& key) const;
};

/// q as a function of the geometry at one point.
struct QField {
  std::string description;
  std::function<double(const SurfaceSample&)> q;
  static QField zero();
  static QField two_h_squared();
  /// 2 H_p^2 - H_X . N with the prescribed mean curvature of a weight (n = 3).
  static QField weighted_area(const Weight& w);
};

/// Certified iff lambda_1 of -Laplace f = lambda (q - K) W f satisfies
/// lambda_1 >= mu (1 + strict_guard). Throws precondition_error when q - K < 0.
StabilityCertificate mu_stability_check(const FrameField& frame, const QField& q, double mu, double mesh_size = 0.1);

/// double integral over B of (kappa0 - K) W; requires K <= 0 and kappa0 > 0.
double total_curvature_Q(const FrameField& frame, double kappa0);
/// double integral over B of (-K) W.
double total_curvature(const FrameField& frame);

struct ConformalCurvature {
  Field khat;         // (K - (1/W) Laplace log sqrt(gamma)) / gamma on interior nodes
  double max_khat = 0.0;
  double kappa0 = 0.0;
};
ConformalCurvature conformal_gauss_curvature(const SurfaceFields& f, double kappa0);

struct CertificateOptions {
  double mesh_size = 0.1;
  int resolution = 128;  // lattice for the K-hat corroboration and minimality checks
};

StabilityCertificate barbosa_docarmo_certificate(FramePtr frame, double kappa0, double omega0,
                                                 const CertificateOptions& opt = {});

/// Certified (mu = 2) iff the total curvature lies strictly below 4 pi / (1 + a).
StabilityCertificate stability_threshold_check(FramePtr frame, double a, double kappa0 = 0.1,
                                               const CertificateOptions& opt = {});

StabilityCertificate definition_certificate(FramePtr frame, const QField& q, double mu,
                                            const CertificateOptions& opt = {});
StabilityCertificate graph_certificate(FramePtr frame, const Weight& w, const CertificateOptions& opt = {});
StabilityCertificate fermat_certificate(FramePtr frame, const Weight& w, const CertificateOptions& opt = {});
StabilityCertificate flat_minimal_certificate(FramePtr frame, const CertificateOptions& opt = {});

}  // namespace imm
