#include "imm/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <array>
#include <random>

#include "imm/errors.hpp"

namespace imm {

namespace {

constexpr double pi = 3.14159265358979323846;

// Tangential shape data of the direction: Lg = g^sigma L_sigma (11, 12, 22).
std::array<double, 3> directed_shape(const SurfaceSample& s, const Vec& g) {
  const Eigen::RowVectorXd l = g.transpose() * s.L;
  return {l[0], l[1], l[2]};
}

// normal components of N_{g,i}: g_i + T_i^T g
double torsion_density(const SurfaceSample& s, const DirectedNormal& d) {
  const Vec cu = d.gu + s.Tu.transpose() * d.g;
  const Vec cv = d.gv + s.Tv.transpose() * d.g;
  const auto gi = s.inverse_metric();
  return s.W * (gi[0] * cu.squaredNorm() + 2.0 * gi[1] * cu.dot(cv) + gi[2] * cv.squaredNorm());
}

double gradient_density(const SurfaceSample& s, const Eigen::Vector2d& dphi) {
  const auto gi = s.inverse_metric();
  return s.W * (gi[0] * dphi[0] * dphi[0] + 2.0 * gi[1] * dphi[0] * dphi[1] + gi[2] * dphi[1] * dphi[1]);
}

double directed_gauss(const SurfaceSample& s, const Vec& g) {
  const auto l = directed_shape(s, g);
  return (l[0] * l[2] - l[1] * l[1]) / s.det;
}

double checked_gamma(const Weight& w, const Vec& X) {
  const double G = w.value(X);
  if (!(G > 0.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "weight %s is not positive (%.3e) on the surface", w.name.c_str(), G);
    throw Error(ErrorKind::weight, buf);
  }
  return G;
}

}  // namespace

Weight make_weight(const std::string& preset) {
  Weight w;
  w.name = preset;
  if (preset == "const" || preset == "constant") {
    w.name = "const";
    w.value = [](const Vec&) { return 1.0; };
    w.gradient = [](const Vec& X) { return Vec(Vec::Zero(X.size())); };
    w.declared_min = 1.0;
    w.declared_max = 1.0;
  } else if (preset == "exp_x3") {
    w.value = [](const Vec& X) { return std::exp(X[2]); };
    w.gradient = [](const Vec& X) {
      Vec g = Vec::Zero(X.size());
      g[2] = std::exp(X[2]);
      return g;
    };
  } else if (preset == "radial") {
    w.value = [](const Vec& X) { return 1.0 + X.squaredNorm(); };
    w.gradient = [](const Vec& X) { return Vec(2.0 * X); };
  } else {
    throw config_error("unknown weight preset '" + preset + "' (expected const, exp_x3, radial)");
  }
  return w;
}

WeightBounds weight_bounds(const Weight& w, const ImmersionPatch& patch) {
  WeightBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  auto visit = [&](double u, double v) {
    const double G = checked_gamma(w, patch.eval_X(u, v));
    b.min = std::min(b.min, G);
    b.max = std::max(b.max, G);
  };
  for (const auto& q : unit_disc_rule()) visit(q.u, q.v);
  for (int i = 0; i < 256; ++i) visit(std::cos(2 * pi * i / 256), std::sin(2 * pi * i / 256));
  if (w.declared_min) b.min = *w.declared_min;
  if (w.declared_max) b.max = *w.declared_max;
  if (!(b.min > 0.0)) throw Error(ErrorKind::weight, "weight lower bound is not positive");
  return b;
}

void Direction::eval(double u, double v, Vec& g, Vec& gu, Vec& gv) const {
  std::vector<Dual> c(static_cast<std::size_t>(k_));
  fn_(Dual(u, 1.0, 0.0), Dual(v, 0.0, 1.0), c.data());
  Dual n2(0.0);
  for (const auto& x : c) n2 += x * x;
  if (!(n2.v > 1e-24)) throw Error(ErrorKind::domain, "direction field " + name_ + " vanishes");
  const Dual inv = Dual(1.0) / sqrt(n2);
  g.resize(k_);
  gu.resize(k_);
  gv.resize(k_);
  for (int i = 0; i < k_; ++i) {
    const Dual x = c[static_cast<std::size_t>(i)] * inv;
    g[i] = x.v;
    gu[i] = x.du;
    gv[i] = x.dv;
  }
}

Direction Direction::constant(int codim, int index) {
  if (index < 0 || index >= codim) throw config_error("direction index out of range");
  return Direction("e" + std::to_string(index + 1), codim, [codim, index](const Dual&, const Dual&, Dual* g) {
    for (int i = 0; i < codim; ++i) g[i] = Dual(i == index ? 1.0 : 0.0);
  });
}

Direction Direction::rotating(int codim, double a, double b, double c) {
  if (codim < 2) throw config_error("rotating direction needs codimension >= 2");
  return Direction("rotating", codim, [=](const Dual& u, const Dual& v, Dual* g) {
    const Dual t = Dual(a) + b * u + c * v;
    for (int i = 0; i < codim; ++i) g[i] = Dual(0.0);
    g[0] = cos(t);
    g[1] = sin(t);
  });
}

Direction Direction::random(int codim, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Vec c0(codim), c1(codim), c2(codim);
  for (int i = 0; i < codim; ++i) c0[i] = nd(rng);
  c0 *= 2.0 / c0.norm();
  const double scale = 0.3 / std::sqrt(static_cast<double>(codim));
  for (int i = 0; i < codim; ++i) {
    c1[i] = scale * ud(rng);
    c2[i] = scale * ud(rng);
  }
  return Direction("random(" + std::to_string(seed) + ")", codim, [=](const Dual& u, const Dual& v, Dual* g) {
    for (int i = 0; i < codim; ++i) g[i] = Dual(c0[i]) + c1[i] * u + c2[i] * v;
  });
}

TestFunction TestFunction::radial(double cu, double cv, double rho, double amplitude) {
  if (!(rho > 0.0) || std::hypot(cu, cv) + rho >= 1.0) throw config_error("radial bump support must lie inside the disc");
  TestFunction t;
  t.kind_ = Kind::radial;
  t.cu_ = cu;
  t.cv_ = cv;
  t.a_ = t.b_ = rho;
  t.amp_ = amplitude;
  return t;
}

TestFunction TestFunction::tensor(double cu, double cv, double ax, double ay, double amplitude) {
  if (!(ax > 0.0 && ay > 0.0) || std::hypot(std::fabs(cu) + ax, std::fabs(cv) + ay) >= 1.0) {
    throw config_error("tensor bump support must lie inside the disc");
  }
  TestFunction t;
  t.kind_ = Kind::tensor;
  t.cu_ = cu;
  t.cv_ = cv;
  t.a_ = ax;
  t.b_ = ay;
  t.amp_ = amplitude;
  return t;
}

TestFunction TestFunction::random(unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const double r = 0.4 * ud(rng), th = 2 * pi * ud(rng);
  const double cu = r * std::cos(th), cv = r * std::sin(th);
  const double room = 0.9 - r;
  if (seed % 2 == 0) return radial(cu, cv, room * (0.5 + 0.5 * ud(rng)), 0.5 + ud(rng));
  const double ax = room * (0.35 + 0.35 * ud(rng)), ay = room * (0.35 + 0.35 * ud(rng));
  return tensor(cu, cv, ax, ay, 0.5 + ud(rng));
}

double TestFunction::value(double u, double v) const {
  const double x = u - cu_, y = v - cv_;
  if (kind_ == Kind::radial) {
    const double s = 1.0 - (x * x + y * y) / (a_ * a_);
    return s > 0.0 ? amp_ * s * s : 0.0;
  }
  const double p = 1.0 - x * x / (a_ * a_), q = 1.0 - y * y / (b_ * b_);
  return (p > 0.0 && q > 0.0) ? amp_ * p * p * q * q : 0.0;
}

Eigen::Vector2d TestFunction::gradient(double u, double v) const {
  const double x = u - cu_, y = v - cv_;
  if (kind_ == Kind::radial) {
    const double s = 1.0 - (x * x + y * y) / (a_ * a_);
    if (s <= 0.0) return Eigen::Vector2d::Zero();
    const double c = -4.0 * amp_ * s / (a_ * a_);
    return {c * x, c * y};
  }
  const double p = 1.0 - x * x / (a_ * a_), q = 1.0 - y * y / (b_ * b_);
  if (p <= 0.0 || q <= 0.0) return Eigen::Vector2d::Zero();
  return {amp_ * (-4.0 * x / (a_ * a_)) * p * q * q, amp_ * (-4.0 * y / (b_ * b_)) * p * p * q};
}

std::vector<QuadPoint> TestFunction::support_rule(int order) const {
  if (kind_ == Kind::radial) return disc_rule(cu_, cv_, a_, order, 2 * order);
  return rect_rule(cu_ - a_, cu_ + a_, cv_ - b_, cv_ + b_, order);
}

std::string TestFunction::describe() const {
  char buf[160];
  if (kind_ == Kind::radial) {
    std::snprintf(buf, sizeof buf, "radial(c=(%.4g,%.4g), rho=%.4g, a=%.4g)", cu_, cv_, a_, amp_);
  } else {
    std::snprintf(buf, sizeof buf, "tensor(c=(%.4g,%.4g), %.4g x %.4g, a=%.4g)", cu_, cv_, a_, b_, amp_);
  }
  return buf;
}

DirectedNormal directed_normal(const SurfaceSample& s, const Direction& d) {
  if (d.codim() != s.codim()) throw config_error("direction codimension does not match the surface");
  DirectedNormal r;
  d.eval(s.u, s.v, r.g, r.gu, r.gv);
  r.N = s.N * r.g;
  r.Nu = s.Nu * r.g + s.N * r.gu;
  r.Nv = s.Nv * r.g + s.N * r.gv;
  return r;
}

double fermat_value(const ImmersionPatch& patch, const Weight& w) {
  return integrate(unit_disc_rule(), [&](double u, double v) {
    const Mat J = patch.eval_dX(u, v);
    const double g11 = J.col(0).squaredNorm(), g12 = J.col(0).dot(J.col(1)), g22 = J.col(1).squaredNorm();
    return checked_gamma(w, patch.eval_X(u, v)) * std::sqrt(std::max(0.0, g11 * g22 - g12 * g12));
  });
}

double prescribed_mean_curvature(const Weight& w, const Vec& X, const Vec& N) {
  return w.gradient(X).dot(N) / (2.0 * checked_gamma(w, X));
}

double prescribed_mean_curvature_dX(const Weight& w, const Vec& X, const Vec& N, const Vec& along) {
  const double h = 1e-3 / std::max(1.0, along.norm());
  auto f = [&](double t) { return prescribed_mean_curvature(w, X + t * along, N); };
  return (f(-2 * h) - 8 * f(-h) + 8 * f(h) - f(2 * h)) / (12 * h);
}

double first_variation(const FrameField& frame, const Weight& w, const Direction& d, const TestFunction& phi) {
  return integrate(phi.support_rule(), [&](double u, double v) {
    const SurfaceSample s = sample_surface(frame, u, v);
    const DirectedNormal n = directed_normal(s, d);
    const double Hg = n.g.dot(s.Hs);
    const double G = checked_gamma(w, s.X);
    return (w.gradient(s.X).dot(n.N) - 2.0 * G * Hg) * s.W * phi.value(u, v);
  });
}

double second_variation_area_element(const SurfaceSample& s, const Direction& d, const TestFunction& phi) {
  const DirectedNormal n = directed_normal(s, d);
  const double p = phi.value(s.u, s.v);
  return gradient_density(s, phi.gradient(s.u, s.v)) + 2.0 * directed_gauss(s, n.g) * s.W * p * p +
         torsion_density(s, n) * p * p;
}

namespace {

// Varied area element for X~_i = X_i + eps (phi_i N + phi N_i).
double varied_area(const SurfaceSample& s, const DirectedNormal& n, double p, const Eigen::Vector2d& dp, double eps) {
  const Vec xu = s.Xu + eps * (dp[0] * n.N + p * n.Nu);
  const Vec xv = s.Xv + eps * (dp[1] * n.N + p * n.Nv);
  const double det = xu.squaredNorm() * xv.squaredNorm() - std::pow(xu.dot(xv), 2);
  if (!(det > 0.0)) throw Error(ErrorKind::oracle, "varied immersion degenerates inside the epsilon stencil");
  return std::sqrt(det);
}

// 5-point stencils at step e applied to samples f(-2e), f(-e), f(0), f(e), f(2e)
double stencil(int order, const double* f, double e) {
  if (order == 1) return (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * e);
  return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * e * e);
}

// Richardson combination of the step-e and step-e/2 stencils from seven
// samples at offsets -2, -1, -1/2, 0, 1/2, 1, 2 (times e).
double richardson(int order, const std::array<double, 7>& f, double e) {
  const double coarse[5] = {f[0], f[1], f[3], f[5], f[6]};
  const double fine[5] = {f[1], f[2], f[3], f[4], f[5]};
  const double dc = stencil(order, coarse, e), df = stencil(order, fine, e / 2);
  return df + (df - dc) / 15.0;
}

constexpr std::array<double, 7> offsets = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

}  // namespace

double area_element_oracle(const SurfaceSample& s, const Direction& d, const TestFunction& phi, double eps) {
  const DirectedNormal n = directed_normal(s, d);
  const double p = phi.value(s.u, s.v);
  const Eigen::Vector2d dp = phi.gradient(s.u, s.v);
  std::array<double, 7> f{};
  for (std::size_t i = 0; i < 7; ++i) f[i] = varied_area(s, n, p, dp, offsets[i] * eps);
  return richardson(2, f, eps);
}

SecondVariation second_variation_fermat(const FrameField& frame, const Weight& w, const Direction& d,
                                        const TestFunction& phi, const SecondVariationOptions& opt) {
  SecondVariation r;
  for (const auto& q : phi.support_rule()) {
    const SurfaceSample s = sample_surface(frame, q.u, q.v);
    const DirectedNormal n = directed_normal(s, d);
    const double G = checked_gamma(w, s.X);
    const double p = phi.value(q.u, q.v);
    const double Hgeo = n.g.dot(s.Hs);
    const double Hp = prescribed_mean_curvature(w, s.X, n.N);
    const double gN = w.gradient(s.X).dot(n.N);
    r.criticality_defect = std::max(r.criticality_defect, std::fabs(gN) * std::fabs(Hp - Hgeo));
    const double H = opt.h_source == MeanCurvatureSource::prescribed ? Hp : Hgeo;
    const double HXN = prescribed_mean_curvature_dX(w, s.X, n.N, n.N);
    const double Kg = directed_gauss(s, n.g);
    r.gradient_term += q.w * G * gradient_density(s, phi.gradient(q.u, q.v));
    r.curvature_term += q.w * 2.0 * (HXN - 2.0 * H * H + Kg) * G * s.W * p * p;
    r.torsion_term += q.w * G * torsion_density(s, n) * p * p * (opt.torsion_term_with_area ? s.W : 1.0);
  }
  if (opt.check_criticality && !(r.criticality_defect <= crit_tol)) {
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "surface is not critical for weight %s along %s: max |Gamma_X.N| |H_prescribed - H| = %.3e "
                  "exceeds %.1e",
                  w.name.c_str(), d.name().c_str(), r.criticality_defect, crit_tol);
    throw precondition_error(buf);
  }
  r.value = r.gradient_term + r.curvature_term + r.torsion_term;
  return r;
}

double fd_variation_oracle(const FrameField& frame, const Weight& w, const Direction& d, const TestFunction& phi,
                           int order, double eps) {
  if (order != 1 && order != 2) throw config_error("oracle order must be 1 or 2");
  std::array<double, 7> F{};
  for (const auto& q : phi.support_rule()) {
    const SurfaceSample s = sample_surface(frame, q.u, q.v);
    const DirectedNormal n = directed_normal(s, d);
    const double p = phi.value(q.u, q.v);
    const Eigen::Vector2d dp = phi.gradient(q.u, q.v);
    for (std::size_t i = 0; i < 7; ++i) {
      const double e = offsets[i] * eps;
      F[i] += q.w * checked_gamma(w, s.X + e * p * n.N) * varied_area(s, n, p, dp, e);
    }
  }
  return richardson(order, F, eps);
}

FermatBound fermat_mu_bound(const FrameField& frame, const Weight& w) {
  if (frame.patch().dim() != 3) throw precondition_error("the weighted-area bound applies to surfaces in R^3 only");
  const WeightBounds b = weight_bounds(w, frame.patch());
  FermatBound r;
  r.gamma_min = b.min;
  r.gamma_max = b.max;
  r.mu_max = 2.0 * b.min / b.max;
  r.q_description = "q = 2H^2 - H_X.N";
  r.min_q_minus_k = std::numeric_limits<double>::infinity();
  for (const auto& q : disc_rule(0.0, 0.0, 1.0, 24, 48)) {
    const SurfaceSample s = sample_surface(frame, q.u, q.v);
    const Vec N = s.N.col(0);
    const double H = prescribed_mean_curvature(w, s.X, N);
    const double qv = 2.0 * H * H - prescribed_mean_curvature_dX(w, s.X, N, N);
    r.min_q_minus_k = std::min(r.min_q_minus_k, qv - s.K);
  }
  if (r.min_q_minus_k < -1e-10) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "q - K < 0 on the surface (min %.3e); the weighted-area bound does not apply",
                  r.min_q_minus_k);
    throw precondition_error(buf);
  }
  return r;
}

FlatMinimalBound minimal_flat_bound(int n, double total_torsion) {
  if (n < 3) throw config_error("ambient dimension must be at least 3");
  FlatMinimalBound r;
  r.total_torsion = total_torsion;
  char buf[200];
  if (total_torsion <= torsion_tol) {
    r.certified = true;
    r.mu_max = n == 2 ? 0.0 : 2.0 / (n - 2);
    std::snprintf(buf, sizeof buf, "torsion-free frame: mu_max = 2/(n-2) = %.6g", r.mu_max);
  } else {
    std::snprintf(buf, sizeof buf, "frame torsion %.3e exceeds %.1e; no stability bound from this route",
                  total_torsion, torsion_tol);
  }
  r.report = buf;
  return r;
}

}  // namespace imm
