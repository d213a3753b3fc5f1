#include <cmath>
#include <complex>

#include "doctest.h"
#include "imm/catalog.hpp"
#include "imm/errors.hpp"
#include "imm/hopf.hpp"

using namespace imm;

TEST_CASE("Wirtinger derivatives of polynomials in w") {
  const ParameterGrid g(64);
  ComplexField f{g.sample([](double u, double v) { return u * u * u - 3 * u * v * v; }),
                 g.sample([](double u, double v) { return 3 * u * u * v - v * v * v; })};  // w^3
  const ComplexField dw = wirtinger_w(g, f), dbar = wirtinger_wbar(g, f);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.interior(k)) continue;
    const std::complex<double> w(g.u(k), g.v(k));
    e1 = std::max(e1, std::abs(std::complex<double>(dw.re[k], dw.im[k]) - 3.0 * w * w));
    e2 = std::max(e2, std::hypot(dbar.re[k], dbar.im[k]));
  }
  CHECK(e1 < 1e-12);
  CHECK(e2 < 1e-12);
}

TEST_CASE("Hopf differential of Enneper's surface is the constant 4") {
  const SurfaceSample s = sample_surface(*make_frame(make_surface("enneper")), 0.3, -0.6);
  const std::complex<double> h = hopf_value(s, 0);
  CHECK(std::abs(std::abs(h) - 4.0) < 1e-12);
}

TEST_CASE("holomorphy and the curvature identity on minimal surfaces") {
  const SurfaceFields f(make_frame(make_surface("enneper")), ParameterGrid(128));
  const HolomorphyReport h = holomorphy_defect(f);
  CHECK(h.minimal_and_torsion_free);
  CHECK(h.max_defect < 1e-6);
  CHECK(curvature_identity_residual(f).max_abs < 1e-9);
  const SurfaceFields sph(make_frame(make_surface("sphere_patch(2)")), ParameterGrid(32));
  CHECK_THROWS_AS(curvature_identity_residual(sph), Error);
}

TEST_CASE("Hopf equation converges with torsion and mean curvature present") {
  for (const char* name : {"holograph_w2", "sphere_patch(2)", "cmc_graph(0.5)", "enneper4", "clifford"}) {
    std::vector<ResidualReport> r;
    for (int m : {32, 64, 128}) {
      const SurfaceFields f(make_frame(make_surface(name)), ParameterGrid(m));
      r.push_back(hopf_equation_residual(f));
    }
    fill_convergence(r);
    CHECK_MESSAGE(converges(r, 1.9), name);
  }
}

TEST_CASE("per-normal residuals bound the aggregate") {
  const SurfaceFields f(make_frame(make_surface("holograph_w2")), ParameterGrid(64));
  const double all = hopf_equation_residual(f).max_abs;
  const double a = hopf_equation_residual(f, 0).max_abs, b = hopf_equation_residual(f, 1).max_abs;
  CHECK(all == std::max(a, b));
  CHECK_THROWS_AS(hopf_equation_residual(f, 2), Error);
}

TEST_CASE("zeros of the Gauss curvature") {
  const SurfaceFields w2(make_frame(make_surface("holograph_w2")), ParameterGrid(128));
  CHECK(gauss_zero_count(w2).clusters == 0);
  const SurfaceFields w3(make_frame(make_surface("holograph_w3")), ParameterGrid(128));
  const ZeroCount z = gauss_zero_count(w3);
  REQUIRE(z.clusters == 1);
  CHECK(std::hypot(z.locations[0].first, z.locations[0].second) < 0.02);
  const SurfaceFields plane(make_frame(make_surface("plane3")), ParameterGrid(32));
  CHECK(gauss_zero_count(plane).clusters == -1);
}
