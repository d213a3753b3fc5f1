#pragma once

#include <vector>

namespace imm {

struct QuadPoint {
  double u, v, w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Polar rule on the disc |(u,v) - c| <= radius: Gauss-Legendre in r
/// (n_r points, weight includes the Jacobian r) times the trapezoid rule in
/// the angle (n_theta points), which is spectrally accurate for periodic data.
std::vector<QuadPoint> disc_rule(double cu, double cv, double radius, int n_r, int n_theta);

/// Tensor Gauss-Legendre rule on [u0,u1] x [v0,v1].
std::vector<QuadPoint> rect_rule(double u0, double u1, double v0, double v1, int n);

/// Default rule on the whole unit disc.
const std::vector<QuadPoint>& unit_disc_rule();

template <typename F>
double integrate(const std::vector<QuadPoint>& rule, F&& f) {
  double s = 0.0;
  for (const auto& q : rule) s += q.w * f(q.u, q.v);
  return s;
}

}  // namespace imm
