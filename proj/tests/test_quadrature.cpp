#include <cmath>

#include "doctest.h"
#include "imm/quadrature.hpp"

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  std::vector<double> x, w;
  imm::gauss_legendre(6, x, w);
  for (int p = 0; p <= 11; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    CHECK(s == doctest::Approx(p % 2 ? 0.0 : 2.0 / (p + 1)).epsilon(1e-14));
  }
}

TEST_CASE("disc and rectangle rules") {
  const double pi = std::acos(-1.0);
  const auto& disc = imm::unit_disc_rule();
  CHECK(imm::integrate(disc, [](double, double) { return 1.0; }) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(imm::integrate(disc, [](double u, double v) { return u * u + v * v; }) == doctest::Approx(pi / 2).epsilon(1e-14));
  const auto small = imm::disc_rule(0.2, -0.1, 0.5, 8, 16);
  CHECK(imm::integrate(small, [](double u, double) { return u; }) == doctest::Approx(0.2 * pi * 0.25).epsilon(1e-13));
  const auto rect = imm::rect_rule(0.0, 2.0, -1.0, 1.0, 4);
  CHECK(imm::integrate(rect, [](double u, double v) { return u * u * v * v; }) == doctest::Approx(16.0 / 9.0));
}
