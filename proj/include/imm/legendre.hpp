#pragma once

// First Dirichlet eigenvalue of a spherical cap {theta < theta0} on the unit
// sphere: mu = nu (nu + 1) with P_nu(cos theta0) = 0 the first zero in theta.

namespace imm {

/// P_nu(cos theta) and its theta-derivative from the hypergeometric series
/// 2F1(-nu, nu + 1; 1; sin^2(theta/2)); accurate while nu^2 sin^2(theta/2) is O(1).
void legendre_series(double nu, double theta, double& p, double& dp);

/// P_nu(cos theta0) by the series near the pole followed by adaptive
/// Dormand-Prince integration of the Legendre equation in theta.
double legendre_p(double nu, double theta0);

/// True when P_nu(cos theta) changes sign on (0, theta0].
bool legendre_zero_before(double nu, double theta0);

/// Cap with area omega0 in (0, 4 pi): theta0 = acos(1 - omega0 / (2 pi)).
double cap_angle(double omega0);

struct CapEigenvalue {
  double omega0 = 0.0, theta0 = 0.0;
  double nu = 0.0, mu = 0.0;
};

/// Bisection on nu in [0.01, 200]; throws domain errors outside that range.
CapEigenvalue cap_eigenvalue(double omega0);

}  // namespace imm
