#include "imm/compatibility.hpp"

#include <cmath>

namespace imm {

ResidualReport gauss_residual(const SurfaceFields& f) {
  const ParameterGrid& grid = f.grid();
  const Christoffel c = f.christoffel();
  Field defect(grid.size(), 0.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const SurfaceSample& s = f.at(n);
    const Vec* second[3] = {&s.Xuu, &s.Xuv, &s.Xvv};
    double worst = 0.0;
    for (int idx = 0; idx < 3; ++idx) {
      Vec r = *second[idx] - c.gamma[0][static_cast<std::size_t>(idx)][n] * s.Xu -
              c.gamma[1][static_cast<std::size_t>(idx)][n] * s.Xv - s.N * s.L.col(idx);
      worst = std::max(worst, r.norm());
    }
    defect[n] = worst;
  }
  return make_report("gauss", grid, defect, f.area_element());
}

ResidualReport weingarten_residual(const SurfaceFields& f) {
  const ParameterGrid& grid = f.grid();
  Field defect(grid.size(), 0.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const SurfaceSample& s = f.at(n);
    const auto gi = s.inverse_metric();
    double worst = 0.0;
    for (int a = 0; a < s.codim(); ++a) {
      const double l11 = s.L(a, 0), l12 = s.L(a, 1), l22 = s.L(a, 2);
      // L_{a,ij} g^{jk}
      const double c1u = l11 * gi[0] + l12 * gi[1], c1v = l11 * gi[1] + l12 * gi[2];
      const double c2u = l12 * gi[0] + l22 * gi[1], c2v = l12 * gi[1] + l22 * gi[2];
      Vec ru = s.Nu.col(a) + c1u * s.Xu + c1v * s.Xv - s.N * s.Tu.row(a).transpose();
      Vec rv = s.Nv.col(a) + c2u * s.Xu + c2v * s.Xv - s.N * s.Tv.row(a).transpose();
      worst = std::max({worst, ru.norm(), rv.norm()});
    }
    defect[n] = worst;
  }
  return make_report("weingarten", grid, defect, f.area_element());
}

ResidualReport codazzi_residual(const SurfaceFields& f) {
  f.require_conformal("codazzi_residual");
  const ParameterGrid& grid = f.grid();
  const int k = f.codim();
  const Field W = f.area_element();
  const Field Wu = grid.d_u(W), Wv = grid.d_v(W);
  Field defect(grid.size(), 0.0);
  for (int a = 0; a < k; ++a) {
    const Field L11 = f.scalar([a](const SurfaceSample& s) { return s.L(a, 0); });
    const Field L12 = f.scalar([a](const SurfaceSample& s) { return s.L(a, 1); });
    const Field L22 = f.scalar([a](const SurfaceSample& s) { return s.L(a, 2); });
    const Field L12v = grid.d_v(L12), L22u = grid.d_u(L22);
    const Field L11v = grid.d_v(L11), L12u = grid.d_u(L12);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      if (!grid.interior(n)) continue;
      const SurfaceSample& s = f.at(n);
      double sum1 = 0.0, sum2 = 0.0;
      for (int w = 0; w < k; ++w) {
        const double t1 = s.Tu(w, a), t2 = s.Tv(w, a);  // T^a_{w,i}
        sum1 += s.L(w, 2) * t1 - s.L(w, 1) * t2;
        sum2 += s.L(w, 1) * t1 - s.L(w, 0) * t2;
      }
      const double r1 = L12v[n] - L22u[n] - (-s.Hs[a] * Wu[n] + sum1);
      const double r2 = L11v[n] - L12u[n] - (s.Hs[a] * Wv[n] + sum2);
      defect[n] = std::max({defect[n], std::fabs(r1), std::fabs(r2)});
    }
  }
  return make_report("codazzi", grid, defect, W);
}

NormalCurvature normal_curvature(const SurfaceFields& f) {
  const ParameterGrid& grid = f.grid();
  NormalCurvature S;
  S.k = f.codim();
  const int k = S.k;
  S.S.assign(static_cast<std::size_t>(k * k), Field(grid.size(), 0.0));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      const Field T1 = f.scalar([a, b](const SurfaceSample& s) { return s.Tu(a, b); });
      const Field T2 = f.scalar([a, b](const SurfaceSample& s) { return s.Tv(a, b); });
      const Field T1v = grid.d_v(T1), T2u = grid.d_u(T2);
      Field& out = S.S[static_cast<std::size_t>(a * k + b)];
      for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.interior(n)) continue;
        const SurfaceSample& s = f.at(n);
        const double comm = (s.Tu.row(a) * s.Tv.col(b))(0) - (s.Tv.row(a) * s.Tu.col(b))(0);
        out[n] = T1v[n] - T2u[n] + comm;
      }
    }
  }
  return S;
}

Mat ricci_curvature(const SurfaceSample& s) {
  const int k = s.codim();
  const auto gi = s.inverse_metric();
  Mat ginv(2, 2);
  ginv << gi[0], gi[1], gi[1], gi[2];
  Mat R = Mat::Zero(k, k);
  for (int a = 0; a < k; ++a) {
    Mat La(2, 2);
    La << s.L(a, 0), s.L(a, 1), s.L(a, 1), s.L(a, 2);
    for (int b = 0; b < k; ++b) {
      Mat Lb(2, 2);
      Lb << s.L(b, 0), s.L(b, 1), s.L(b, 1), s.L(b, 2);
      const Mat P = La * ginv * Lb;  // P_{ij} = L_{a,ik} g^{kl} L_{b,lj}
      R(a, b) = P(0, 1) - P(1, 0);
    }
  }
  return R;
}

ResidualReport ricci_residual(const SurfaceFields& f, const NormalCurvature& S) {
  const ParameterGrid& grid = f.grid();
  Field defect(grid.size(), 0.0);
  const int k = f.codim();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const Mat R = ricci_curvature(f.at(n));
    double worst = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) worst = std::max(worst, std::fabs(S.at(a, b)[n] - R(a, b)));
    }
    defect[n] = worst;
  }
  return make_report("ricci", grid, defect, f.area_element());
}

ResidualReport ricci_residual(const SurfaceFields& f) { return ricci_residual(f, normal_curvature(f)); }

double shape_discrepancy(const SurfaceFields& f) {
  const ParameterGrid& grid = f.grid();
  double m = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const SurfaceSample& s = f.at(n);
    for (int a = 0; a < s.codim(); ++a) {
      m = std::max({m, std::fabs(s.L(a, 0) - s.L_alt(a, 0)), std::fabs(s.L(a, 1) - s.L_alt(a, 1)),
                    std::fabs(s.L(a, 1) - s.L_alt(a, 2)), std::fabs(s.L(a, 2) - s.L_alt(a, 3))});
    }
  }
  return m;
}

}  // namespace imm
