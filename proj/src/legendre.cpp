#include "imm/legendre.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>

#include "imm/errors.hpp"

namespace imm {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double nu_lo = 0.01, nu_hi = 200.0;

using State = std::array<double, 2>;  // (P, dP/dtheta)

double series_start(double nu, double theta0) { return std::min(0.5 * theta0, 1.0 / (nu + 1.0)); }

// Integrates from the series start to theta_end; returns false as soon as P
// changes sign (when stop_on_zero).
bool integrate(double nu, double theta_end, bool stop_on_zero, State& y) {
  namespace odeint = boost::numeric::odeint;
  const double t0 = series_start(nu, theta_end);
  legendre_series(nu, t0, y[0], y[1]);
  const double c = nu * (nu + 1.0);
  auto rhs = [c](const State& s, State& d, double t) {
    d[0] = s[1];
    d[1] = -std::cos(t) / std::sin(t) * s[1] - c * s[0];
  };
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(y, t0, std::min(1e-3, 0.1 * (theta_end - t0)));
  while (stepper.current_time() < theta_end) {
    stepper.do_step(rhs);
    // the dense-output stepper may overshoot theta_end; that part is checked below
    if (stop_on_zero && stepper.current_time() <= theta_end && stepper.current_state()[0] <= 0.0) return false;
  }
  stepper.calc_state(theta_end, y);
  return true;
}

}  // namespace

void legendre_series(double nu, double theta, double& p, double& dp) {
  const double t = std::pow(std::sin(0.5 * theta), 2);
  const double dt = 0.5 * std::sin(theta);  // d t / d theta
  double term = 1.0, sum = 1.0, dsum = 0.0;
  for (int k = 0; k < 400; ++k) {
    // a_{k+1} / a_k = (k - nu)(k + nu + 1) / (k + 1)^2
    const double ratio = (k - nu) * (k + nu + 1.0) / ((k + 1.0) * (k + 1.0));
    dsum += term * ratio * (k + 1.0);  // (k+1) a_{k+1} t^k
    term *= ratio * t;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum) && k > 2) break;
  }
  p = sum;
  dp = dsum * dt;
}

double legendre_p(double nu, double theta0) {
  State y{};
  integrate(nu, theta0, false, y);
  return y[0];
}

bool legendre_zero_before(double nu, double theta0) {
  State y{};
  return !integrate(nu, theta0, true, y) || y[0] <= 0.0;
}

double cap_angle(double omega0) {
  if (!(omega0 > 0.0 && omega0 < 4 * pi)) throw Error(ErrorKind::domain, "cap area must lie in (0, 4 pi)");
  return std::acos(1.0 - omega0 / (2 * pi));
}

CapEigenvalue cap_eigenvalue(double omega0) {
  CapEigenvalue r;
  r.omega0 = omega0;
  r.theta0 = cap_angle(omega0);
  if (legendre_zero_before(nu_lo, r.theta0) || !legendre_zero_before(nu_hi, r.theta0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "cap eigenvalue for omega0 = %.6g lies outside nu in [%.2g, %.3g]", omega0, nu_lo,
                  nu_hi);
    throw Error(ErrorKind::domain, buf);
  }
  double lo = nu_lo, hi = nu_hi;
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (legendre_zero_before(mid, r.theta0) ? hi : lo) = mid;
  }
  r.nu = 0.5 * (lo + hi);
  r.mu = r.nu * (r.nu + 1.0);
  return r;
}

}  // namespace imm
