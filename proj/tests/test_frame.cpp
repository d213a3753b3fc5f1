#include <cmath>

#include "doctest.h"
#include "imm/catalog.hpp"
#include "imm/errors.hpp"
#include "imm/geometry.hpp"

using namespace imm;

namespace {

double orthonormality_defect(const FrameField& frame, double u, double v) {
  const FrameSample s = frame.sample(u, v);
  const Mat dX = frame.patch().eval_dX(u, v);
  const Mat G = s.N.transpose() * s.N - Mat::Identity(s.N.cols(), s.N.cols());
  return std::max(G.cwiseAbs().maxCoeff(), (s.N.transpose() * dX).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("Gram-Schmidt frames are orthonormal and normal") {
  for (const auto& name : catalog_names()) {
    const Surface s = make_surface(name);
    const GramSchmidtFrame gs(s.patch, s.seed_order);
    for (auto [u, v] : {std::pair{0.0, 0.0}, std::pair{0.6, -0.3}, std::pair{-0.2, 0.9}}) {
      CHECK_MESSAGE(orthonormality_defect(gs, u, v) < 1e-12, name);
    }
  }
}

TEST_CASE("frame derivatives match central differences") {
  const FramePtr f = make_frame(make_surface("holograph_w2"), "gram_schmidt");
  const double u = 0.3, v = -0.4, h = 1e-5;
  const FrameSample s = f->sample(u, v);
  const Mat du = (f->sample(u + h, v).N - f->sample(u - h, v).N) / (2 * h);
  const Mat dv = (f->sample(u, v + h).N - f->sample(u, v - h).N) / (2 * h);
  CHECK((s.Nu - du).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((s.Nv - dv).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("torsion matrices are skew") {
  const FrameSample s = make_frame(make_surface("holograph_w2"))->sample(0.4, 0.5);
  Mat Tu, Tv;
  torsion_matrices(s, Tu, Tv);
  CHECK((Tu + Tu.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(Tu.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("parallel frame removes torsion on a flat normal bundle") {
  const FramePtr seed = make_frame(make_surface("enneper4"));
  CHECK(max_torsion(*seed) > 1e-2);
  const ParallelFrame p(seed);
  CHECK(p.holonomy().max_defect < 1e-6);
  CHECK(max_torsion(p) < torsion_tol);
  CHECK(orthonormality_defect(p, 0.5, 0.7) < 1e-10);
}

TEST_CASE("parallel frame refuses a curved normal bundle") {
  const FramePtr seed = make_frame(make_surface("holograph_w2"));
  const HolonomyReport h = ParallelFrame::measure_holonomy(*seed);
  CHECK(h.max_defect > 1.0);
  try {
    ParallelFrame p(seed);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_flat_bundle);
  }
}

TEST_CASE("rotated frames change torsion by the angle gradient") {
  const FramePtr base = make_frame(make_surface("clifford"));
  const RotatedFrame r(base, [](const Dual& u, const Dual& v) { return 0.3 * u - 0.2 * v; });
  const FrameSample s = r.sample(0.1, 0.2);
  Mat Tu, Tv;
  torsion_matrices(s, Tu, Tv);
  CHECK(std::fabs(Tu(0, 1)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::fabs(Tv(0, 1)) == doctest::Approx(0.2).epsilon(1e-12));
}
