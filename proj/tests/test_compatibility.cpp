#include <cmath>

#include "doctest.h"
#include "imm/catalog.hpp"
#include "imm/compatibility.hpp"
#include "imm/errors.hpp"

using namespace imm;

namespace {

struct Study {
  std::vector<ResidualReport> gauss, wein, cod, ricci;
};

Study study(const std::string& name, DerivativeMode mode, std::vector<int> res = {32, 64, 128}) {
  Study st;
  const Surface s = make_surface(name);
  for (int m : res) {
    const ParameterGrid g(m);
    s.patch->set_derivative_mode(mode, g.h());
    const SurfaceFields f(make_frame(s), g);
    st.gauss.push_back(gauss_residual(f));
    st.wein.push_back(weingarten_residual(f));
    st.cod.push_back(codazzi_residual(f));
    st.ricci.push_back(ricci_residual(f));
  }
  for (auto* l : {&st.gauss, &st.wein, &st.cod, &st.ricci}) fill_convergence(*l);
  return st;
}

}  // namespace

TEST_CASE("structure equations hold to discretization order") {
  for (const char* name : {"sphere_patch(2)", "holograph_w2", "enneper4", "grim_reaper"}) {
    const Study st = study(name, DerivativeMode::analytic);
    CHECK_MESSAGE(converges(st.gauss, 1.9), name);
    CHECK_MESSAGE(converges(st.wein, 1.9), name);
    CHECK_MESSAGE(converges(st.cod, 1.9), name);
    CHECK_MESSAGE(converges(st.ricci, 1.9), name);
  }
}

TEST_CASE("finite-difference patch derivatives converge too") {
  const Study st = study("grim_reaper", DerivativeMode::finite_difference, {64, 128, 256});
  CHECK(*st.wein.back().convergence_order > 3.5);
  CHECK(*st.gauss.back().convergence_order > 3.5);
}

TEST_CASE("a wrong shape tensor is detected") {
  // Ricci side from shape operators vs torsion side: a non-flat bundle has S != 0
  const SurfaceFields f(make_frame(make_surface("holograph_w2")), ParameterGrid(64));
  const NormalCurvature S = normal_curvature(f);
  double smax = 0.0;
  for (std::size_t k = 0; k < f.grid().size(); ++k) {
    if (f.grid().interior(k)) smax = std::max(smax, std::fabs(S.at(0, 1)[k]));
  }
  CHECK(smax > 1.0);
  // holomorphic graph w^2: |S| = 8 / (1 + 4 r^2)^2 ... at the origin the
  // normal curvature equals -K there (complex curve): K(0) = -8
  const SurfaceSample s = sample_surface(f.frame(), 0.0, 0.0);
  CHECK(std::fabs(ricci_curvature(s)(0, 1)) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(shape_discrepancy(f) < 1e-10);
}

TEST_CASE("Codazzi check needs conformal parameters") {
  auto patch = std::make_shared<ExpressionPatch>(
      "paraboloid", std::vector<Expression>{Expression::parse("u"), Expression::parse("v"),
                                            Expression::parse("u^2 + 2*v^2")});
  const SurfaceFields f(std::make_shared<GramSchmidtFrame>(patch), ParameterGrid(32));
  CHECK_THROWS_AS(codazzi_residual(f), Error);
  CHECK(gauss_residual(f).max_abs < 1e-2);
}
