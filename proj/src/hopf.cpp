#include "imm/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "imm/errors.hpp"
#include "imm/frame.hpp"

namespace imm {

namespace {

constexpr double minimal_tol = 1e-6;

ComplexField wirtinger(const ParameterGrid& grid, const ComplexField& f, double sign) {
  const Field ru = grid.d_u(f.re), rv = grid.d_v(f.re), iu = grid.d_u(f.im), iv = grid.d_v(f.im);
  ComplexField out{Field(grid.size(), 0.0), Field(grid.size(), 0.0)};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    // (d_u + sign i d_v)(re + i im) / 2
    out.re[n] = 0.5 * (ru[n] - sign * iv[n]);
    out.im[n] = 0.5 * (iu[n] + sign * rv[n]);
  }
  return out;
}

double hopf_norm2(const SurfaceSample& s) {
  double t = 0.0;
  for (int a = 0; a < s.codim(); ++a) t += std::norm(hopf_value(s, a));
  return t;
}

// Residual vector (Re H_sigma, Im H_sigma) at a parameter point.
struct HopfResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  const FrameField* frame;
  int k;
  HopfResidual(const FrameField* fr, int codim) : frame(fr), k(codim) {}
  int inputs() const { return 2; }
  int values() const { return 2 * k; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const SurfaceSample s = sample_surface(*frame, x[0], x[1]);
    for (int a = 0; a < s.codim(); ++a) {
      const auto h = hopf_value(s, a);
      r[2 * a] = h.real();
      r[2 * a + 1] = h.imag();
    }
    return 0;
  }
};

}  // namespace

ComplexField wirtinger_w(const ParameterGrid& grid, const ComplexField& f) { return wirtinger(grid, f, -1.0); }
ComplexField wirtinger_wbar(const ParameterGrid& grid, const ComplexField& f) { return wirtinger(grid, f, 1.0); }

std::complex<double> hopf_value(const SurfaceSample& s, int sigma) {
  return {s.L(sigma, 0) - s.L(sigma, 2), -2.0 * s.L(sigma, 1)};
}

std::vector<ComplexField> hopf_field(const SurfaceFields& f) {
  std::vector<ComplexField> out;
  for (int a = 0; a < f.codim(); ++a) {
    out.push_back({f.scalar([a](const SurfaceSample& s) { return hopf_value(s, a).real(); }),
                   f.scalar([a](const SurfaceSample& s) { return hopf_value(s, a).imag(); })});
  }
  return out;
}

ResidualReport hopf_equation_residual(const SurfaceFields& f, int sigma) {
  f.require_conformal("hopf_equation_residual");
  if (sigma >= f.codim()) throw config_error("normal index out of range");
  const ParameterGrid& grid = f.grid();
  const int k = f.codim();
  const auto H = hopf_field(f);
  Field defect(grid.size(), 0.0);
  for (int a = 0; a < k; ++a) {
    if (sigma >= 0 && a != sigma) continue;
    const ComplexField lhs = wirtinger_wbar(grid, H[static_cast<std::size_t>(a)]);
    const Field Ha = f.scalar([a](const SurfaceSample& s) { return s.Hs[a]; });
    const ComplexField Hw = wirtinger_w(grid, {Ha, Field(grid.size(), 0.0)});
    for (std::size_t n = 0; n < grid.size(); ++n) {
      if (!grid.interior(n)) continue;
      const SurfaceSample& s = f.at(n);
      std::complex<double> rhs = 2.0 * s.W * std::complex<double>(Hw.re[n], Hw.im[n]);
      for (int w = 0; w < k; ++w) {
        const double t1 = s.Tu(w, a), t2 = s.Tv(w, a);  // T^a_{w,i}
        rhs += std::complex<double>(s.L(w, 2), s.L(w, 1)) * t1 - std::complex<double>(s.L(w, 1), s.L(w, 0)) * t2;
      }
      defect[n] = std::max(defect[n], std::abs(std::complex<double>(lhs.re[n], lhs.im[n]) - rhs));
    }
  }
  return make_report(sigma < 0 ? "hopf_equation" : "hopf_equation[" + std::to_string(sigma + 1) + "]", grid, defect,
                     f.area_element());
}

HolomorphyReport holomorphy_defect(const SurfaceFields& f) {
  const ParameterGrid& grid = f.grid();
  HolomorphyReport r;
  for (const auto& h : hopf_field(f)) {
    const ComplexField d = wirtinger_wbar(grid, h);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      if (grid.interior(n)) r.max_defect = std::max(r.max_defect, std::hypot(d.re[n], d.im[n]));
    }
  }
  r.max_mean_curvature = max_mean_curvature(f);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.in_disc(n)) continue;
    const SurfaceSample& s = f.at(n);
    r.max_torsion = std::max({r.max_torsion, s.Tu.cwiseAbs().maxCoeff(), s.Tv.cwiseAbs().maxCoeff()});
  }
  r.minimal_and_torsion_free = r.max_mean_curvature < minimal_tol && r.max_torsion < torsion_tol;
  return r;
}

ResidualReport curvature_identity_residual(const SurfaceFields& f) {
  f.require_conformal("curvature_identity_residual");
  const double hmax = max_mean_curvature(f);
  if (!(hmax < minimal_tol)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "curvature identity needs a minimal surface; max |H| = %.3e", hmax);
    throw precondition_error(buf);
  }
  const ParameterGrid& grid = f.grid();
  Field defect(grid.size(), 0.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!grid.interior(n)) continue;
    const SurfaceSample& s = f.at(n);
    const double W2 = s.W * s.W;
    double worst = std::fabs(hopf_norm2(s) + 4.0 * s.K * W2);
    for (int a = 0; a < s.codim(); ++a) worst = std::max(worst, std::fabs(std::norm(hopf_value(s, a)) + 4.0 * s.Ks[a] * W2));
    defect[n] = worst;
  }
  return make_report("curvature_identity", grid, defect, f.area_element());
}

ZeroCount gauss_zero_count(const SurfaceFields& f, double radius) {
  const ParameterGrid& grid = f.grid();
  const int m = grid.resolution();
  const double h = grid.h();
  auto inside = [&](std::size_t n) { return grid.in_disc(n) && std::hypot(grid.u(n), grid.v(n)) <= radius; };
  const Field val = f.scalar([](const SurfaceSample& s) { return hopf_norm2(s); });

  // scale of the second fundamental form, to recognise H == 0 up to roundoff (umbilic patches)
  const Field shape = f.scalar([](const SurfaceSample& s) {
    return (s.L.col(0).squaredNorm() + 2.0 * s.L.col(1).squaredNorm() + s.L.col(2).squaredNorm()) + s.W * s.W * 1e-30;
  });
  auto median_of = [&](const Field& x) {
    std::vector<double> sorted;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      if (inside(n)) sorted.push_back(x[n]);
    }
    if (sorted.empty()) throw config_error("zero-count radius contains no lattice nodes");
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    return sorted[sorted.size() / 2];
  };
  const double median = median_of(val);
  ZeroCount out;
  out.zero_tol = 1e-6 * median;
  if (!(median > 1e-20 * median_of(shape))) {
    out.clusters = -1;
    return out;
  }

  // flood fill of sub-threshold nodes
  std::vector<int> label(grid.size(), -1);
  for (std::size_t n0 = 0; n0 < grid.size(); ++n0) {
    if (!inside(n0) || label[n0] >= 0 || !(val[n0] < out.zero_tol)) continue;
    const int id = static_cast<int>(out.locations.size());
    std::vector<std::size_t> stack{n0};
    label[n0] = id;
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      const int i = static_cast<int>(n % static_cast<std::size_t>(m)), j = static_cast<int>(n / static_cast<std::size_t>(m));
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int t = 0; t < 4; ++t) {
        const int a = i + di[t], b = j + dj[t];
        if (a < 0 || b < 0 || a >= m || b >= m) continue;
        const std::size_t nn = grid.index(a, b);
        if (inside(nn) && label[nn] < 0 && val[nn] < out.zero_tol) {
          label[nn] = id;
          stack.push_back(nn);
        }
      }
    }
    out.locations.emplace_back(grid.u(n0), grid.v(n0));
  }

  // Zeros between lattice nodes: refine discrete local minima pointwise.
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!inside(n) || label[n] >= 0) continue;
    const int i = static_cast<int>(n % static_cast<std::size_t>(m)), j = static_cast<int>(n / static_cast<std::size_t>(m));
    bool is_min = true;
    for (int a = i - 1; a <= i + 1 && is_min; ++a) {
      for (int b = j - 1; b <= j + 1; ++b) {
        if (a < 0 || b < 0 || a >= m || b >= m) { is_min = false; break; }
        const std::size_t nn = grid.index(a, b);
        if (!grid.in_disc(nn) || val[nn] < val[n]) { is_min = false; break; }
      }
    }
    if (!is_min) continue;
    HopfResidual fn(&f.frame(), f.codim());
    Eigen::NumericalDiff<HopfResidual> nd(fn, 1e-7);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<HopfResidual>> lm(nd);
    Eigen::VectorXd x(2);
    x << grid.u(n), grid.v(n);
    try {
      lm.minimize(x);
    } catch (const Error&) {
      continue;  // wandered off the immersion
    }
    if (std::hypot(x[0] - grid.u(n), x[1] - grid.v(n)) > 2.0 * h || std::hypot(x[0], x[1]) > radius) continue;
    if (!(hopf_norm2(sample_surface(f.frame(), x[0], x[1])) < out.zero_tol)) continue;
    bool known = false;
    for (const auto& [zu, zv] : out.locations) known = known || std::hypot(zu - x[0], zv - x[1]) < 2.0 * h;
    if (!known) out.locations.emplace_back(x[0], x[1]);
  }
  out.clusters = static_cast<int>(out.locations.size());
  return out;
}

}  // namespace imm
