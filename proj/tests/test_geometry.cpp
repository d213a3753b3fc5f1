#include <cmath>

#include "doctest.h"
#include "imm/catalog.hpp"
#include "imm/errors.hpp"
#include "imm/geometry.hpp"

using namespace imm;

namespace {

SurfaceSample at(const std::string& name, double u, double v) {
  return sample_surface(*make_frame(make_surface(name)), u, v);
}

}  // namespace

TEST_CASE("catalog curvatures against closed forms") {
  for (auto [u, v] : {std::pair{0.1, 0.2}, std::pair{-0.5, 0.6}, std::pair{0.7, -0.1}}) {
    const double r2 = u * u + v * v;
    SUBCASE("plane") {
      const auto s = at("plane4", u, v);
      CHECK(s.H == doctest::Approx(0.0));
      CHECK(s.K == doctest::Approx(0.0));
      CHECK(s.W == doctest::Approx(1.0));
    }
    SUBCASE("sphere of radius 2") {
      const auto s = at("sphere_patch(2)", u, v);
      CHECK(s.H == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(s.K == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(s.X.norm() == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(s.conformality_defect < 1e-13);
    }
    SUBCASE("Enneper") {
      const auto s = at("enneper", u, v);
      CHECK(s.W == doctest::Approx((1 + r2) * (1 + r2)).epsilon(1e-13));
      CHECK(s.K == doctest::Approx(-4.0 / std::pow(1 + r2, 4)).epsilon(1e-12));
      CHECK(std::fabs(s.H) < 1e-13);
    }
    SUBCASE("holomorphic graph w^2") {
      const auto s = at("holograph_w2", u, v);
      CHECK(s.W == doctest::Approx(1 + 4 * r2).epsilon(1e-13));
      CHECK(s.K == doctest::Approx(-8.0 / std::pow(1 + 4 * r2, 3)).epsilon(1e-12));
      CHECK(s.H < 1e-13);
    }
    SUBCASE("Clifford torus") {
      const auto s = at("clifford", u, v);
      CHECK(s.H == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::fabs(s.K) < 1e-13);
    }
    SUBCASE("cylinder") {
      const auto s = at("cmc_graph(0.5)", u, v);
      CHECK(std::fabs(s.H) == doctest::Approx(0.5).epsilon(1e-13));
      CHECK(std::fabs(s.K) < 1e-13);
    }
  }
}

TEST_CASE("general-metric curvature formulas") {
  // unit-speed helix-free check: shape matrix of a cylinder in a sheared chart
  Mat L(1, 3);
  L << 2.0, 0.5, 1.0;
  Vec H, K;
  curvatures_from_shape(L, 2.0, 0.3, 1.5, H, K);
  const double det = 2.0 * 1.5 - 0.09;
  CHECK(H[0] == doctest::Approx((2.0 * 1.5 - 2 * 0.5 * 0.3 + 1.0 * 2.0) / (2 * det)));
  CHECK(K[0] == doctest::Approx((2.0 * 1.0 - 0.25) / det));
}

TEST_CASE("degenerate immersions are rejected") {
  auto patch = std::make_shared<ExpressionPatch>("line", std::vector<Expression>{Expression::parse("u + v"),
                                                                               Expression::parse("u + v"),
                                                                               Expression::parse("0")});
  const GramSchmidtFrame frame(patch);
  try {
    sample_surface(frame, 0.2, 0.1);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_immersion);
  }
}

TEST_CASE("Christoffel symbols of a conformal metric") {
  // W = (1 + r^2)^2 on Enneper: Gamma^1_11 = d_u log W / 2 ... = 2u/(1+r^2)
  const SurfaceFields f(make_frame(make_surface("enneper")), ParameterGrid(128));
  const Christoffel c = f.christoffel();
  double worst = 0.0;
  for (std::size_t k = 0; k < f.grid().size(); ++k) {
    if (!f.grid().interior(k)) continue;
    const double u = f.grid().u(k), v = f.grid().v(k);
    worst = std::max(worst, std::fabs(c.gamma[0][0][k] - 2 * u / (1 + u * u + v * v)));
  }
  CHECK(worst < 1e-6);
  CHECK(f.max_conformality_defect() < 1e-12);
}
