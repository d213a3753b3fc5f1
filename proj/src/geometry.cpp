#include "imm/geometry.hpp"

#include <cmath>
#include <cstdio>

#include "imm/errors.hpp"
#include "imm/quadrature.hpp"

namespace imm {

void curvatures_from_shape(const Mat& L, double g11, double g12, double g22, Vec& Hs, Vec& Ks) {
  const double det = g11 * g22 - g12 * g12;
  const int k = static_cast<int>(L.rows());
  Hs.resize(k);
  Ks.resize(k);
  for (int s = 0; s < k; ++s) {
    const double l11 = L(s, 0), l12 = L(s, 1), l22 = L(s, 2);
    Hs[s] = (l11 * g22 - 2.0 * l12 * g12 + l22 * g11) / (2.0 * det);
    Ks[s] = (l11 * l22 - l12 * l12) / det;
  }
}

SurfaceSample sample_surface(const FrameField& frame, double u, double v) {
  const ImmersionPatch& patch = frame.patch();
  SurfaceSample s;
  s.u = u;
  s.v = v;
  PatchDerivatives d = patch.derivatives(u, v);
  s.X = std::move(d.X);
  s.Xu = std::move(d.Xu);
  s.Xv = std::move(d.Xv);
  s.Xuu = std::move(d.Xuu);
  s.Xuv = std::move(d.Xuv);
  s.Xvv = std::move(d.Xvv);
  s.g11 = s.Xu.squaredNorm();
  s.g12 = s.Xu.dot(s.Xv);
  s.g22 = s.Xv.squaredNorm();
  s.det = s.g11 * s.g22 - s.g12 * s.g12;
  if (!(s.det > w_tol * w_tol)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "degenerate immersion at node (u, v) = (%.6f, %.6f): det g = %.3e", u, v, s.det);
    throw Error(ErrorKind::degenerate_immersion, buf);
  }
  s.W = std::sqrt(s.det);
  s.conformality_defect = std::max(std::fabs(s.g11 - s.g22), std::fabs(s.g12)) / s.W;

  FrameSample f = frame.sample(u, v);
  s.N = std::move(f.N);
  s.Nu = std::move(f.Nu);
  s.Nv = std::move(f.Nv);
  const int k = s.codim();
  s.L.resize(k, 3);
  s.L_alt.resize(k, 4);
  for (int a = 0; a < k; ++a) {
    const auto n = s.N.col(a);
    s.L(a, 0) = s.Xuu.dot(n);
    s.L(a, 1) = s.Xuv.dot(n);
    s.L(a, 2) = s.Xvv.dot(n);
    s.L_alt(a, 0) = -s.Xu.dot(s.Nu.col(a));
    s.L_alt(a, 1) = -s.Xu.dot(s.Nv.col(a));
    s.L_alt(a, 2) = -s.Xv.dot(s.Nu.col(a));
    s.L_alt(a, 3) = -s.Xv.dot(s.Nv.col(a));
  }
  curvatures_from_shape(s.L, s.g11, s.g12, s.g22, s.Hs, s.Ks);
  s.H = s.Hs.norm();
  s.K = s.Ks.sum();
  s.mean_curvature_vector = s.N * s.Hs;
  s.Tu = s.Nu.transpose() * s.N;
  s.Tv = s.Nv.transpose() * s.N;
  s.Tu.diagonal().setZero();
  s.Tv.diagonal().setZero();
  return s;
}

SurfaceFields::SurfaceFields(FramePtr frame, const ParameterGrid& grid) : frame_(std::move(frame)), grid_(grid) {
  samples_.resize(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (grid_.in_disc(k)) samples_[k] = sample_surface(*frame_, grid_.u(k), grid_.v(k));
  }
}

Christoffel SurfaceFields::christoffel() const {
  const Field g11 = scalar([](const SurfaceSample& s) { return s.g11; });
  const Field g12 = scalar([](const SurfaceSample& s) { return s.g12; });
  const Field g22 = scalar([](const SurfaceSample& s) { return s.g22; });
  // dg[a][l]: derivative of metric component a (11, 12, 22) along u^l
  const std::array<std::array<Field, 2>, 3> dg = {{{grid_.d_u(g11), grid_.d_v(g11)},
                                                   {grid_.d_u(g12), grid_.d_v(g12)},
                                                   {grid_.d_u(g22), grid_.d_v(g22)}}};
  auto comp = [](int i, int j) { return i == j ? (i == 0 ? 0 : 2) : 1; };
  Christoffel c;
  for (auto& row : c.gamma) {
    for (auto& f : row) f.assign(grid_.size(), 0.0);
  }
  for (std::size_t n = 0; n < grid_.size(); ++n) {
    if (!grid_.interior(n)) continue;
    const auto gi = samples_[n].inverse_metric();
    auto ginv = [&](int a, int b) { return gi[static_cast<std::size_t>(comp(a, b))]; };
    auto d = [&](int i, int j, int l) { return dg[static_cast<std::size_t>(comp(i, j))][static_cast<std::size_t>(l)][n]; };
    for (int kk = 0; kk < 2; ++kk) {
      const std::pair<int, int> ij[3] = {{0, 0}, {0, 1}, {1, 1}};
      for (int idx = 0; idx < 3; ++idx) {
        const auto [i, j] = ij[idx];
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += ginv(kk, l) * (d(l, i, j) + d(j, l, i) - d(i, j, l));
        c.gamma[static_cast<std::size_t>(kk)][static_cast<std::size_t>(idx)][n] = 0.5 * s;
      }
    }
  }
  return c;
}

double SurfaceFields::max_conformality_defect() const {
  double m = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (grid_.in_disc(k)) m = std::max(m, samples_[k].conformality_defect);
  }
  return m;
}

void SurfaceFields::require_conformal(const std::string& what, double tol) const {
  const double d = max_conformality_defect();
  if (!(d <= tol)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s requires conformal parameters; conformality_defect = %.3e exceeds %.1e",
                  what.c_str(), d, tol);
    throw precondition_error(buf);
  }
}

double max_mean_curvature(const SurfaceFields& f) {
  double m = 0.0;
  for (std::size_t n = 0; n < f.grid().size(); ++n) {
    if (f.grid().in_disc(n)) m = std::max(m, f.at(n).H);
  }
  return m;
}

double total_torsion(const FrameField& frame) {
  return integrate(unit_disc_rule(), [&](double u, double v) {
    Mat Tu, Tv;
    torsion_matrices(frame.sample(u, v), Tu, Tv);
    return Tu.squaredNorm() + Tv.squaredNorm();
  });
}

double max_torsion(const FrameField& frame) {
  double m = 0.0;
  for (const auto& q : disc_rule(0.0, 0.0, 1.0, 12, 24)) {
    Mat Tu, Tv;
    torsion_matrices(frame.sample(q.u, q.v), Tu, Tv);
    m = std::max({m, Tu.cwiseAbs().maxCoeff(), Tv.cwiseAbs().maxCoeff()});
  }
  return m;
}

}  // namespace imm
