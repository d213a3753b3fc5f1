#include <cmath>

#include "doctest.h"
#include "imm/errors.hpp"
#include "imm/grid.hpp"

using imm::ParameterGrid;

TEST_CASE("cell-centred lattice") {
  const ParameterGrid g(64);
  CHECK(g.h() == doctest::Approx(2.0 / 64));
  CHECK(g.coord(0) == doctest::Approx(-1.0 + g.h() / 2));
  CHECK(g.node_count() > g.interior_count());
  // node count approximates the disc area
  CHECK(g.node_count() * g.h() * g.h() == doctest::Approx(std::acos(-1.0)).epsilon(0.02));
  CHECK_THROWS_AS(ParameterGrid(4), imm::Error);
}

TEST_CASE("fourth-order differences converge at order four") {
  auto f = [](double u, double v) { return std::sin(2 * u + 1) * std::cos(v); };
  auto fuu = [](double u, double v) { return -4 * std::sin(2 * u + 1) * std::cos(v); };
  auto fv = [](double u, double v) { return -std::sin(2 * u + 1) * std::sin(v); };
  std::vector<imm::ResidualReport> lap, dv;
  for (int m : {32, 64, 128}) {
    const ParameterGrid g(m);
    const imm::Field F = g.sample(f);
    const imm::Field L = g.laplacian(F), D = g.d_v(F);
    imm::Field e1(g.size(), 0.0), e2(g.size(), 0.0), one(g.size(), 1.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!g.interior(k)) continue;
      const double u = g.u(k), v = g.v(k);
      e1[k] = L[k] - (fuu(u, v) - f(u, v));
      e2[k] = D[k] - fv(u, v);
    }
    lap.push_back(imm::make_report("lap", g, e1, one));
    dv.push_back(imm::make_report("dv", g, e2, one));
  }
  imm::fill_convergence(lap);
  imm::fill_convergence(dv);
  CHECK(*lap.back().convergence_order > 3.8);
  CHECK(*dv.back().convergence_order > 3.8);
  CHECK(imm::converges(lap, 1.9));
  CHECK_FALSE(imm::converges(lap, 4.5));
}

TEST_CASE("roundoff residuals count as converged") {
  std::vector<imm::ResidualReport> r(2);
  r[0].max_abs = 1e-14;
  r[0].resolution = 64;
  r[1].max_abs = 3e-14;
  r[1].resolution = 128;
  r[0].at_roundoff = r[1].at_roundoff = true;
  imm::fill_convergence(r);
  CHECK(imm::converges(r, 1.9));
}
