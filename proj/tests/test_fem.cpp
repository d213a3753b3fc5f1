#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "imm/errors.hpp"
#include "imm/fem.hpp"

using namespace imm;

TEST_CASE("ring meshes and refinement") {
  const DiscMesh m = ring_mesh(10);
  CHECK(m.nodes.size() > 100);
  double area = 0.0;
  for (const auto& t : m.triangles) {
    const auto a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
    area += 0.5 * std::fabs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
  }
  CHECK(area == doctest::Approx(std::acos(-1.0)).epsilon(0.02));
  const DiscMesh r = refine(m);
  CHECK(r.triangles.size() == 4 * m.triangles.size());
  CHECK(r.h < 0.55 * m.h);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    if (r.boundary[i]) CHECK(r.nodes[i].norm() == doctest::Approx(1.0));
    else CHECK(r.nodes[i].norm() < 1.0);
  }
}

TEST_CASE("unit weight reproduces the first Bessel zero") {
  const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
  const EigenResult e = weighted_first_eigenvalue([](double, double) { return 1.0; });
  CHECK(std::fabs(e.lambda - j01 * j01) / (j01 * j01) < 1e-3);
  CHECK(std::fabs(e.extrapolated - j01 * j01) / (j01 * j01) < 1e-5);
  CHECK(e.certified <= e.lambda);
  // conforming elements approach from above
  for (std::size_t i = 1; i < e.levels.size(); ++i) CHECK(e.levels[i].lambda < e.levels[i - 1].lambda);
}

TEST_CASE("radial weight against the Bessel equation with a variable coefficient") {
  // w = 4 / (1 + r^2)^2 is the round metric: first Dirichlet eigenvalue of a
  // hemisphere, lambda = 2 (Legendre P_1 = cos theta vanishes at the equator)
  const EigenResult e = weighted_first_eigenvalue(
      [](double u, double v) { return 4.0 / std::pow(1 + u * u + v * v, 2); }, 0.1);
  CHECK(e.extrapolated == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("scaling law") {
  auto w = [](double u, double v) { return 1.0 + 0.5 * u * u + 0.25 * v; };
  const EigenResult a = weighted_first_eigenvalue(w);
  const EigenResult b = weighted_first_eigenvalue([&](double u, double v) { return 3.0 * w(u, v); });
  CHECK(std::fabs(b.lambda * 3.0 - a.lambda) / a.lambda < 1e-8);
}

TEST_CASE("degenerate weights") {
  CHECK(weighted_first_eigenvalue([](double, double) { return 0.0; }).vacuous);
  CHECK_THROWS_AS(weighted_first_eigenvalue([](double u, double) { return u; }), Error);
}
