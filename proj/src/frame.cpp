#include "imm/frame.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "imm/errors.hpp"

namespace imm {

void torsion_matrices(const FrameSample& f, Mat& Tu, Mat& Tv) {
  Tu = f.Nu.transpose() * f.N;
  Tv = f.Nv.transpose() * f.N;
  Tu.diagonal().setZero();
  Tv.diagonal().setZero();
}

namespace {

using DVec = std::vector<Dual>;

Dual dot(const DVec& a, const DVec& b) {
  Dual s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(DVec& y, const Dual& a, const DVec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= a * x[i];
}

void scale(DVec& y, const Dual& a) {
  for (auto& c : y) c /= a;
}

// Fourth-order central difference of a matrix-valued map along one axis.
template <typename F>
Mat central_difference(F&& f, double s) {
  return (f(-2.0 * s) - 8.0 * f(-s) + 8.0 * f(s) - f(2.0 * s)) / (12.0 * s);
}

}  // namespace

GramSchmidtFrame::GramSchmidtFrame(PatchPtr patch, std::vector<int> seed_order)
    : patch_(std::move(patch)), seeds_(std::move(seed_order)) {
  const int n = patch_->dim();
  if (seeds_.empty()) {
    for (int i = 2; i < n; ++i) seeds_.push_back(i);
  }
  if (static_cast<int>(seeds_.size()) != n - 2) {
    throw config_error("seed order needs exactly n-2 = " + std::to_string(n - 2) + " entries");
  }
  for (int s : seeds_) {
    if (s < 0 || s >= n) throw config_error("seed index out of range: " + std::to_string(s + 1));
  }
}

FrameSample GramSchmidtFrame::sample(double u, double v) const {
  const int n = patch_->dim();
  const int k = n - 2;
  FrameSample out;
  if (patch_->derivative_mode() == DerivativeMode::finite_difference) {
    out.N = values(u, v);
    const double s = patch_->fd_step();
    out.Nu = central_difference([&](double o) { return values(u + o, v); }, s);
    out.Nv = central_difference([&](double o) { return values(u, v + o); }, s);
    return out;
  }
  const PatchDerivatives d = patch_->derivatives(u, v);
  // tangent vectors as first-order jets: (X_u)_u = X_uu, (X_u)_v = X_uv, ...
  DVec t1(static_cast<std::size_t>(n)), t2(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    t1[static_cast<std::size_t>(c)] = Dual(d.Xu[c], d.Xuu[c], d.Xuv[c]);
    t2[static_cast<std::size_t>(c)] = Dual(d.Xv[c], d.Xuv[c], d.Xvv[c]);
  }
  scale(t1, sqrt(dot(t1, t1)));
  axpy(t2, dot(t2, t1), t1);
  axpy(t2, dot(t2, t1), t1);
  const Dual n2 = sqrt(dot(t2, t2));
  if (n2.v < frame_tol) throw Error(ErrorKind::degenerate_immersion, "rank dX < 2 while building frame");
  scale(t2, n2);
  std::vector<DVec> basis;
  out.N.resize(n, k);
  out.Nu.resize(n, k);
  out.Nv.resize(n, k);
  for (int sigma = 0; sigma < k; ++sigma) {
    DVec p(static_cast<std::size_t>(n), Dual(0.0));
    p[static_cast<std::size_t>(seeds_[static_cast<std::size_t>(sigma)])] = 1.0;
    // two passes: the seed may be nearly tangent, and a single pass leaves
    // tangential roundoff of relative size eps / |p|
    for (int pass = 0; pass < 2; ++pass) {
      axpy(p, dot(p, t1), t1);
      axpy(p, dot(p, t2), t2);
      for (const auto& b : basis) axpy(p, dot(p, b), b);
    }
    const Dual norm = sqrt(dot(p, p));
    if (norm.v < frame_tol) {
      throw Error(ErrorKind::frame_construction,
                  "Gram-Schmidt seed e" + std::to_string(seeds_[static_cast<std::size_t>(sigma)] + 1) +
                      " degenerates at (" + std::to_string(u) + ", " + std::to_string(v) +
                      "); try a different seed order");
    }
    scale(p, norm);
    for (int c = 0; c < n; ++c) {
      out.N(c, sigma) = p[static_cast<std::size_t>(c)].v;
      out.Nu(c, sigma) = p[static_cast<std::size_t>(c)].du;
      out.Nv(c, sigma) = p[static_cast<std::size_t>(c)].dv;
    }
    basis.push_back(std::move(p));
  }
  return out;
}

Mat GramSchmidtFrame::values(double u, double v) const {
  const int n = patch_->dim();
  const PatchDerivatives d = patch_->derivatives(u, v);
  Mat Q(n, 2);
  Q.col(0) = d.Xu.normalized();
  Q.col(1) = d.Xv - d.Xv.dot(Q.col(0)) * Q.col(0);
  Q.col(1) -= Q.col(1).dot(Q.col(0)) * Q.col(0);
  if (Q.col(1).norm() < frame_tol) throw Error(ErrorKind::degenerate_immersion, "rank dX < 2 while building frame");
  Q.col(1).normalize();
  Mat N(n, n - 2);
  for (int sigma = 0; sigma < n - 2; ++sigma) {
    Vec p = Vec::Unit(n, seeds_[static_cast<std::size_t>(sigma)]);
    for (int pass = 0; pass < 2; ++pass) {
      p -= p.dot(Q.col(0)) * Q.col(0);
      p -= p.dot(Q.col(1)) * Q.col(1);
      for (int b = 0; b < sigma; ++b) p -= p.dot(N.col(b)) * N.col(b);
    }
    if (p.norm() < frame_tol) {
      throw Error(ErrorKind::frame_construction, "Gram-Schmidt seed degenerates; try a different seed order");
    }
    N.col(sigma) = p.normalized();
  }
  return N;
}

AnalyticFrame::AnalyticFrame(PatchPtr patch, std::string name, Fn fn, bool torsion_free)
    : patch_(std::move(patch)), name_(std::move(name)), fn_(std::move(fn)), torsion_free_(torsion_free) {}

FrameSample AnalyticFrame::sample(double u, double v) const {
  const int n = patch_->dim(), k = n - 2;
  std::vector<Dual> buf(static_cast<std::size_t>(n * k));
  fn_(Dual(u, 1.0, 0.0), Dual(v, 0.0, 1.0), buf.data());
  FrameSample out;
  out.N.resize(n, k);
  out.Nu.resize(n, k);
  out.Nv.resize(n, k);
  for (int s = 0; s < k; ++s) {
    for (int c = 0; c < n; ++c) {
      const Dual& d = buf[static_cast<std::size_t>(s * n + c)];
      out.N(c, s) = d.v;
      out.Nu(c, s) = d.du;
      out.Nv(c, s) = d.dv;
    }
  }
  return out;
}

RotatedFrame::RotatedFrame(FramePtr base, Angle theta, int a, int b)
    : base_(std::move(base)), theta_(std::move(theta)), a_(a), b_(b) {
  const int k = base_->codim();
  if (a_ < 0 || b_ < 0 || a_ >= k || b_ >= k || a_ == b_) {
    throw config_error("rotation plane needs two distinct normal indices");
  }
}

FrameSample RotatedFrame::sample(double u, double v) const {
  FrameSample f = base_->sample(u, v);
  const Dual t = theta_(Dual(u, 1.0, 0.0), Dual(v, 0.0, 1.0));
  const Dual c = cos(t), s = sin(t);
  const Vec Na = f.N.col(a_), Nb = f.N.col(b_);
  const Vec Nau = f.Nu.col(a_), Nbu = f.Nu.col(b_);
  const Vec Nav = f.Nv.col(a_), Nbv = f.Nv.col(b_);
  f.N.col(a_) = c.v * Na + s.v * Nb;
  f.N.col(b_) = -s.v * Na + c.v * Nb;
  f.Nu.col(a_) = c.du * Na + c.v * Nau + s.du * Nb + s.v * Nbu;
  f.Nu.col(b_) = -s.du * Na - s.v * Nau + c.du * Nb + c.v * Nbu;
  f.Nv.col(a_) = c.dv * Na + c.v * Nav + s.dv * Nb + s.v * Nbv;
  f.Nv.col(b_) = -s.dv * Na - s.v * Nav + c.dv * Nb + c.v * Nbv;
  return f;
}

namespace {

// Connection matrix along a path with velocity (du, dv): du T_1 + dv T_2.
Mat connection(const FrameField& seed, double u, double v, double du, double dv) {
  Mat Tu, Tv;
  torsion_matrices(seed.sample(u, v), Tu, Tv);
  return du * Tu + dv * Tv;
}

Mat rotation2(double angle) {
  Mat R(2, 2);
  R << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return R;
}

// Integrates A' = M(t) A on [0, 1] from A(0) = A0 with the two-point Gauss
// Magnus scheme; path(t) returns M(t).
template <typename PathFn>
Mat magnus(const Mat& A0, int steps, PathFn&& path) {
  const int k = static_cast<int>(A0.rows());
  const double h = 1.0 / steps;
  const double g1 = 0.5 - std::sqrt(3.0) / 6.0, g2 = 0.5 + std::sqrt(3.0) / 6.0;
  if (k == 2) {
    // SO(2) is abelian: the Magnus series truncates to the integral of M.
    double angle = 0.0;
    for (int s = 0; s < steps; ++s) {
      const double t = s * h;
      angle += 0.5 * h * (path(t + g1 * h)(0, 1) + path(t + g2 * h)(0, 1));
    }
    return rotation2(angle) * A0;
  }
  Mat A = A0;
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const Mat M1 = path(t + g1 * h), M2 = path(t + g2 * h);
    const Mat omega = 0.5 * h * (M1 + M2) - (std::sqrt(3.0) / 12.0) * h * h * (M1 * M2 - M2 * M1);
    A = Mat(omega.exp()) * A;
  }
  return A;
}

}  // namespace

ParallelFrame::ParallelFrame(FramePtr seed, double holonomy_tol, int steps_per_ray)
    : seed_(std::move(seed)), steps_(steps_per_ray) {
  if (seed_->codim() < 1) throw config_error("parallel frame needs codimension >= 1");
  holonomy_ = measure_holonomy(*seed_);
  if (holonomy_.max_defect > holonomy_tol) {
    throw Error(ErrorKind::non_flat_bundle,
                "normal bundle is not flat: holonomy defect " + std::to_string(holonomy_.max_defect) +
                    " exceeds " + std::to_string(holonomy_tol) + "; no torsion-free frame exists");
  }
}

Mat ParallelFrame::transport(double u, double v) const {
  const int k = seed_->codim();
  if (k == 1) return Mat::Identity(1, 1);
  return magnus(Mat::Identity(k, k), steps_, [&](double t) { return connection(*seed_, t * u, t * v, u, v); });
}

FrameSample ParallelFrame::sample(double u, double v) const {
  const FrameSample base = seed_->sample(u, v);
  const int k = seed_->codim();
  if (k == 1) return base;
  Mat Tu, Tv;
  torsion_matrices(base, Tu, Tv);
  const Mat A = transport(u, v);
  FrameSample out;
  out.N = base.N * A;
  // flat gauge: A_i = T_i A
  out.Nu = base.Nu * A + base.N * (Tu * A);
  out.Nv = base.Nv * A + base.N * (Tv * A);
  return out;
}

HolonomyReport ParallelFrame::measure_holonomy(const FrameField& seed, int steps_per_circle) {
  HolonomyReport rep;
  const int k = seed.codim();
  rep.radii = {0.25, 0.5, 0.75, 1.0};
  for (double r : rep.radii) {
    double defect = 0.0;
    if (k > 1) {
      const Mat A0 = Mat::Identity(k, k);
      const double two_pi = 2.0 * std::numbers::pi;
      const Mat A1 = magnus(A0, steps_per_circle, [&](double t) {
        const double th = two_pi * t;
        return connection(seed, r * std::cos(th), r * std::sin(th), -two_pi * r * std::sin(th),
                          two_pi * r * std::cos(th));
      });
      defect = (A1 - A0).norm();
    }
    rep.defects.push_back(defect);
    rep.max_defect = std::max(rep.max_defect, defect);
  }
  return rep;
}

}  // namespace imm
