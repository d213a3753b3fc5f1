#pragma once

// Hopf differentials H_sigma = L_{sigma,11} - L_{sigma,22} - 2i L_{sigma,12} in
// conformal parameters, the Codazzi-derived equation for d/dw-bar H_sigma, and
// the zeros of the Gauss curvature of minimal surfaces.

#include <complex>
#include <vector>

#include "imm/geometry.hpp"

namespace imm {

struct ComplexField {
  Field re, im;
};

/// d/dw = (d_u - i d_v)/2 and d/dw-bar = (d_u + i d_v)/2 on interior nodes.
ComplexField wirtinger_w(const ParameterGrid& grid, const ComplexField& f);
ComplexField wirtinger_wbar(const ParameterGrid& grid, const ComplexField& f);

std::complex<double> hopf_value(const SurfaceSample& s, int sigma);
/// One field per normal.
std::vector<ComplexField> hopf_field(const SurfaceFields& f);

/// Defect of
///   d/dw-bar H_sigma = 2 W d/dw H_sigma
///       + sum_omega {(L_{omega,22} + i L_{omega,12}) T^sigma_{omega,1} - (L_{omega,12} + i L_{omega,11}) T^sigma_{omega,2}}
/// with T^sigma_{omega,i} = N_{omega,u^i} . N_sigma. Requires conformal parameters.
/// sigma < 0 aggregates all normals (max over sigma per node).
ResidualReport hopf_equation_residual(const SurfaceFields& f, int sigma = -1);

struct HolomorphyReport {
  double max_defect = 0.0;  // max |d/dw-bar H_sigma| on interior nodes
  double max_mean_curvature = 0.0;
  double max_torsion = 0.0;
  bool minimal_and_torsion_free = false;  // the case in which the defect must vanish
};
HolomorphyReport holomorphy_defect(const SurfaceFields& f);

/// sum_sigma |H_sigma|^2 + 4 K W^2 (and per normal |H_sigma|^2 + 4 K_sigma W^2).
/// Requires conformal parameters and a minimal surface.
ResidualReport curvature_identity_residual(const SurfaceFields& f);

struct ZeroCount {
  int clusters = 0;          // -1: K vanishes identically on the sub-disc (not isolated)
  double zero_tol = 0.0;
  std::vector<std::pair<double, double>> locations;  // representative (u, v) per cluster
};

/// Counts zeros of sum_sigma |H_sigma|^2 (equivalently of K) inside |w| <= radius:
/// connected clusters of lattice nodes below zero_tol = 1e-6 x median, plus
/// discrete local minima whose pointwise refinement drops below zero_tol.
ZeroCount gauss_zero_count(const SurfaceFields& f, double radius = 0.9);

}  // namespace imm
