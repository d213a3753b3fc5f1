#pragma once

// Residuals of the structure equations of a surface in R^n (Gauss,
// Weingarten, Codazzi-Mainardi, Ricci) on the interior lattice nodes.

#include <vector>

#include "imm/geometry.hpp"

namespace imm {

/// X_{ij} - Gamma^k_{ij} X_k - sum_sigma L_{sigma,ij} N_sigma
ResidualReport gauss_residual(const SurfaceFields& f);

/// N_{sigma,i} + L_{sigma,ij} g^{jk} X_k - T^omega_{sigma,i} N_omega
ResidualReport weingarten_residual(const SurfaceFields& f);

/// Both Codazzi-Mainardi identities in conformal parameters. Throws
/// precondition_error for non-conformal patches.
ResidualReport codazzi_residual(const SurfaceFields& f);

/// Normal-bundle curvature S^omega_{sigma,12} from the torsion fields:
///   S = d_v T_1 - d_u T_2 + T_1 T_2 - T_2 T_1    ((T_i)_{sigma,omega} = T^omega_{sigma,i})
struct NormalCurvature {
  int k = 0;
  std::vector<Field> S;  // S[sigma * k + omega]
  const Field& at(int sigma, int omega) const { return S[static_cast<std::size_t>(sigma * k + omega)]; }
};
NormalCurvature normal_curvature(const SurfaceFields& f);

/// Ricci side: g^{jk}(L_{sigma,1j} L_{omega,k2} - L_{sigma,2j} L_{omega,k1}), k x k.
Mat ricci_curvature(const SurfaceSample& s);

/// Defect between the torsion-derived and the shape-derived normal curvature.
ResidualReport ricci_residual(const SurfaceFields& f, const NormalCurvature& S);
ResidualReport ricci_residual(const SurfaceFields& f);

/// Max over interior nodes of |L - L_alt| (two definitions of the shape tensor).
double shape_discrepancy(const SurfaceFields& f);

}  // namespace imm
