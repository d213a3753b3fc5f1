#pragma once

// Fermat functional F[X] = double integral of Gamma(X) W over B, its first and second
// variations along normal directions N_g = g^sigma N_sigma, and an
// independent finite-difference-in-epsilon oracle.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "imm/geometry.hpp"
#include "imm/quadrature.hpp"

namespace imm {

inline constexpr double crit_tol = 1e-6;

struct Weight {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::optional<double> declared_min, declared_max;
};

/// Presets: "const" (1), "exp_x3" (exp(x^3)), "radial" (1 + |X|^2).
Weight make_weight(const std::string& preset);

struct WeightBounds {
  double min = 0.0, max = 0.0;
};

/// Samples Gamma over the patch image (polar rule points and the boundary
/// circle); declared bounds take precedence when present. Throws
/// ErrorKind::weight when a sampled value is not positive.
WeightBounds weight_bounds(const Weight& w, const ImmersionPatch& patch);

/// Unit coefficient field g(u,v) in R^{n-2}; fn writes unnormalized Duals and
/// the evaluation normalizes them.
class Direction {
 public:
  using Fn = std::function<void(const Dual& u, const Dual& v, Dual* g)>;
  Direction(std::string name, int codim, Fn fn) : name_(std::move(name)), k_(codim), fn_(std::move(fn)) {}
  const std::string& name() const { return name_; }
  int codim() const { return k_; }
  /// value g, and partial derivatives g_u, g_v
  void eval(double u, double v, Vec& g, Vec& gu, Vec& gv) const;

  static Direction constant(int codim, int index);
  /// (cos t, sin t) in normals (0, 1) with t = a + b u + c v; codim >= 2.
  static Direction rotating(int codim, double a, double b, double c);
  /// g = normalize(c0 + c1 u + c2 v) with coefficient vectors from a seed.
  static Direction random(int codim, unsigned long long seed);

 private:
  std::string name_;
  int k_;
  Fn fn_;
};

/// Compactly supported bump functions with analytic gradients.
class TestFunction {
 public:
  /// a (1 - r^2/rho^2)^2 on the disc of radius rho around (cu, cv)
  static TestFunction radial(double cu, double cv, double rho, double amplitude = 1.0);
  /// a (1 - x^2/ax^2)^2 (1 - y^2/ay^2)^2 on the rectangle |x| < ax, |y| < ay around (cu, cv)
  static TestFunction tensor(double cu, double cv, double ax, double ay, double amplitude = 1.0);
  /// Random bump fully inside the disc of radius 0.9.
  static TestFunction random(unsigned long long seed);

  double value(double u, double v) const;
  Eigen::Vector2d gradient(double u, double v) const;
  /// Quadrature rule on the support.
  std::vector<QuadPoint> support_rule(int order = 24) const;
  std::string describe() const;

 private:
  enum class Kind { radial, tensor } kind_ = Kind::radial;
  double cu_ = 0, cv_ = 0, a_ = 1, b_ = 1, amp_ = 1;
};

/// Unit normal N_g, its derivatives and the direction coefficients at one point.
struct DirectedNormal {
  Vec g, gu, gv;
  Vec N, Nu, Nv;
};
DirectedNormal directed_normal(const SurfaceSample& s, const Direction& d);

double fermat_value(const ImmersionPatch& patch, const Weight& w);

/// H_g = Gamma_X(X) . N / (2 Gamma(X)) at position X with normal N.
double prescribed_mean_curvature(const Weight& w, const Vec& X, const Vec& N);

/// d/dt [Gamma_X(X + t N) . N / (2 Gamma(X + t N))] at t = 0 (N frozen):
/// analytic gradient, one central-difference level for the Hessian part.
double prescribed_mean_curvature_dX(const Weight& w, const Vec& X, const Vec& N, const Vec& along);

/// double integral of {Gamma_X . N_g - 2 Gamma H_g} W phi with H_g = g^sigma H_sigma (geometric).
double first_variation(const FrameField& frame, const Weight& w, const Direction& d, const TestFunction& phi);

/// Pointwise second epsilon-derivative of the area element along phi N_g:
///   W g^{ij} phi_i phi_j + 2 K_g W phi^2 + W g^{ij} c_i . c_j phi^2,   c_i = g_i + T_i^T g,
/// which in conformal parameters is |grad phi|^2 + 2 K_g W phi^2 + |c|^2 phi^2.
double second_variation_area_element(const SurfaceSample& s, const Direction& d, const TestFunction& phi);

/// Direct epsilon-stencil (5 points, Richardson) second derivative of the
/// varied area element sqrt(|X~_u|^2 |X~_v|^2 - (X~_u . X~_v)^2) at one point.
double area_element_oracle(const SurfaceSample& s, const Direction& d, const TestFunction& phi, double eps = 1e-2);

enum class MeanCurvatureSource { prescribed, geometric };

struct SecondVariationOptions {
  MeanCurvatureSource h_source = MeanCurvatureSource::prescribed;
  bool torsion_term_with_area = false;  // diagnostic variant: multiply the torsion integral by W
  bool check_criticality = true;
};

struct SecondVariation {
  double value = 0.0;
  double gradient_term = 0.0, curvature_term = 0.0, torsion_term = 0.0;
  double criticality_defect = 0.0;  // max |Gamma_X . N_g| |H_prescribed - H_geometric| on supp phi
};

/// Closed-form second variation of the Fermat functional. With the default
/// options, throws precondition_error when the criticality defect exceeds crit_tol.
SecondVariation second_variation_fermat(const FrameField& frame, const Weight& w, const Direction& d,
                                        const TestFunction& phi, const SecondVariationOptions& opt = {});

/// First (order 1) or second (order 2) epsilon-derivative of
/// F[X + eps phi N_g] by a 5-point stencil with Richardson extrapolation.
double fd_variation_oracle(const FrameField& frame, const Weight& w, const Direction& d, const TestFunction& phi,
                           int order, double eps = 1e-2);

struct FermatBound {
  double mu_max = 0.0;
  double gamma_min = 0.0, gamma_max = 0.0;
  double min_q_minus_k = 0.0;  // sampled min of q - K
  std::string q_description;
};

/// mu_max = 2 Gamma_min / Gamma_max with q = 2H^2 - H_X . N (n = 3). Throws
/// precondition_error when q - K < 0 somewhere.
FermatBound fermat_mu_bound(const FrameField& frame, const Weight& w);

struct FlatMinimalBound {
  bool certified = false;
  double mu_max = 0.0;
  double total_torsion = 0.0;
  std::string report;
};
FlatMinimalBound minimal_flat_bound(int n, double total_torsion);

}  // namespace imm
