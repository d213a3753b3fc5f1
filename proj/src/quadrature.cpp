#include "imm/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "imm/errors.hpp"

namespace imm {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw Error(ErrorKind::internal, "gauss_legendre needs n >= 1");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n == 1 ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

std::vector<QuadPoint> disc_rule(double cu, double cv, double radius, int n_r, int n_theta) {
  std::vector<double> x, w;
  gauss_legendre(n_r, x, w);
  std::vector<QuadPoint> out;
  out.reserve(static_cast<std::size_t>(n_r * n_theta));
  const double dt = 2.0 * std::numbers::pi / n_theta;
  for (int a = 0; a < n_r; ++a) {
    const double r = 0.5 * radius * (x[static_cast<std::size_t>(a)] + 1.0);
    const double wr = 0.5 * radius * w[static_cast<std::size_t>(a)] * r;
    for (int b = 0; b < n_theta; ++b) {
      const double t = (b + 0.5) * dt;
      out.push_back({cu + r * std::cos(t), cv + r * std::sin(t), wr * dt});
    }
  }
  return out;
}

std::vector<QuadPoint> rect_rule(double u0, double u1, double v0, double v1, int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  std::vector<QuadPoint> out;
  out.reserve(static_cast<std::size_t>(n * n));
  const double hu = 0.5 * (u1 - u0), hv = 0.5 * (v1 - v0);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      out.push_back({u0 + hu * (x[static_cast<std::size_t>(a)] + 1.0), v0 + hv * (x[static_cast<std::size_t>(b)] + 1.0),
                     hu * hv * w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)]});
    }
  }
  return out;
}

const std::vector<QuadPoint>& unit_disc_rule() {
  static const std::vector<QuadPoint> rule = disc_rule(0.0, 0.0, 1.0, 48, 96);
  return rule;
}

}  // namespace imm
