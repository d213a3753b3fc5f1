#include "imm/catalog.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "imm/errors.hpp"

namespace imm {
namespace {

struct Plane {
  int n;
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    x[0] = u;
    x[1] = v;
    for (int c = 2; c < n; ++c) x[c] = T(0.0);
  }
};

// Conformal (inverse stereographic) chart of the sphere of radius r whose
// unit-disc image is the cap x^3 = sqrt(r^2 - x1^2 - x2^2) over the unit disc.
struct SpherePatch {
  double r, a;
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    const T rho2 = a * a * (u * u + v * v);
    const T inv = T(1.0) / (T(1.0) + rho2);
    x[0] = (2.0 * r * a) * u * inv;
    x[1] = (2.0 * r * a) * v * inv;
    x[2] = r * (T(1.0) - rho2) * inv;
  }
};

struct Enneper {
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    x[0] = u - u * u * u / 3.0 + u * v * v;
    x[1] = v + u * u * v - v * v * v / 3.0;
    x[2] = u * u - v * v;
  }
};

// Enneper's surface inside the hyperplane spanned by e1, e2 and
// (0, 0, cos b, sin b) of R^4.
struct Enneper4 {
  double c, s;
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    T e[3];
    Enneper{}(u, v, e);
    x[0] = e[0];
    x[1] = e[1];
    x[2] = c * e[2];
    x[3] = s * e[2];
  }
};

struct Clifford {
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    using std::cos;
    using std::sin;
    const double k = 1.0 / std::sqrt(2.0);
    x[0] = k * cos(u);
    x[1] = k * sin(u);
    x[2] = k * cos(v);
    x[3] = k * sin(v);
  }
};

// Graph of a holomorphic function f(w) = w^p, w = u + iv.
struct HoloGraph {
  int p;
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    T re(1.0), im(0.0);
    for (int i = 0; i < p; ++i) {
      const T nre = re * u - im * v;
      im = re * v + im * u;
      re = nre;
    }
    x[0] = u;
    x[1] = v;
    x[2] = re;
    x[3] = im;
  }
};

// Circular cylinder of radius R = 1/(2 h0), arc-length parametrized: H = h0.
struct Cylinder {
  double R;
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    using std::cos;
    using std::sin;
    x[0] = R * sin(u / R);
    x[1] = v;
    x[2] = R * cos(u / R);
  }
};

// Translating soliton x3 = log cosh x1; arc-length in u, so conformal with W = 1.
struct GrimReaper {
  template <typename T>
  void operator()(const T& u, const T& v, T* x) const {
    using std::atan;
    using std::cosh;
    using std::log;
    using std::sinh;
    x[0] = atan(sinh(u));
    x[1] = v;
    x[2] = log(cosh(u));
  }
};

double parse_param(const std::string& spec, const std::string& base, double fallback) {
  if (spec == base) return fallback;
  if (spec.size() < base.size() + 2 || spec.compare(0, base.size() + 1, base + "(") != 0 || spec.back() != ')') {
    throw config_error("malformed surface spec '" + spec + "'");
  }
  const std::string arg = spec.substr(base.size() + 1, spec.size() - base.size() - 2);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc() || ptr != arg.data() + arg.size()) {
    throw Error(ErrorKind::parse, "surface parameter '" + arg + "' is not a number");
  }
  return value;
}

std::string base_name(const std::string& spec) {
  const auto p = spec.find('(');
  return p == std::string::npos ? spec : spec.substr(0, p);
}

std::string canonical(const std::string& base, double param) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(%.17g)", base.c_str(), param);
  return buf;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"plane3", "plane4", "sphere_patch(2)", "enneper",
                                                 "clifford", "holograph_w2", "cmc_graph(0.5)"};
  return names;
}

Surface make_surface(const std::string& spec) {
  const std::string base = base_name(spec);
  Surface s;
  if (base == "plane3" || base == "plane4") {
    if (spec != base) throw config_error(base + " takes no parameter");
    const int n = base == "plane3" ? 3 : 4;
    s.name = base;
    s.patch = make_patch(base, n, Plane{n}, true, true);
    s.frame_fn = [n](const Dual&, const Dual&, Dual* N) {
      for (int i = 0; i < n * (n - 2); ++i) N[i] = 0.0;
      for (int c = 0; c < n - 2; ++c) N[c * n + c + 2] = 1.0;
    };
    s.frame_torsion_free = true;
  } else if (base == "sphere_patch") {
    const double r = parse_param(spec, base, 2.0);
    if (!(r > 1.0)) throw config_error("sphere_patch needs radius r > 1 so the cap covers the unit disc");
    const double a = std::tan(0.5 * std::asin(1.0 / r));
    s.name = canonical(base, r);
    s.patch = make_patch(s.name, 3, SpherePatch{r, a}, true);
  } else if (base == "enneper") {
    if (spec != base) throw config_error("enneper takes no parameter");
    s.name = base;
    s.patch = make_patch(base, 3, Enneper{}, true);
  } else if (base == "enneper4") {
    const double b = parse_param(spec, base, 0.5);
    s.name = canonical(base, b);
    s.patch = make_patch(s.name, 4, Enneper4{std::cos(b), std::sin(b)}, true);
    // The constant normal P of the hyperplane and Enneper's unit normal E,
    // rotated by the angle u v / 2: flat normal bundle, nonzero torsion.
    const double c = std::cos(b), sn = std::sin(b);
    s.frame_fn = [c, sn](const Dual& u, const Dual& v, Dual* N) {
      const Dual xu[3] = {1.0 - u * u + v * v, 2.0 * u * v, 2.0 * u};
      const Dual xv[3] = {2.0 * u * v, 1.0 + u * u - v * v, -2.0 * v};
      Dual e[3] = {xu[1] * xv[2] - xu[2] * xv[1], xu[2] * xv[0] - xu[0] * xv[2], xu[0] * xv[1] - xu[1] * xv[0]};
      const Dual inv = Dual(1.0) / sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
      for (auto& x : e) x = x * inv;
      const Dual E[4] = {e[0], e[1], c * e[2], sn * e[2]};
      const Dual P[4] = {0.0, 0.0, -sn, c};
      const Dual t = 0.5 * u * v, ct = cos(t), st = sin(t);
      for (int i = 0; i < 4; ++i) {
        N[i] = ct * P[i] + st * E[i];
        N[4 + i] = ct * E[i] - st * P[i];
      }
    };
  } else if (base == "clifford") {
    if (spec != base) throw config_error("clifford takes no parameter");
    s.name = base;
    s.patch = make_patch(base, 4, Clifford{}, true);
    s.frame_fn = [](const Dual& u, const Dual& v, Dual* N) {
      const double k = 1.0 / std::sqrt(2.0);
      N[0] = k * cos(u);
      N[1] = k * sin(u);
      N[2] = -k * cos(v);
      N[3] = -k * sin(v);
      N[4] = k * cos(u);
      N[5] = k * sin(u);
      N[6] = k * cos(v);
      N[7] = k * sin(v);
    };
    s.frame_torsion_free = true;
    s.seed_order = {0, 2};  // e4 would fall into span{X_v, N_1} after e3
  } else if (base == "holograph_w2" || base == "holograph_w3") {
    if (spec != base) throw config_error(base + " takes no parameter");
    s.name = base;
    s.patch = make_patch(base, 4, HoloGraph{base == "holograph_w2" ? 2 : 3}, true, true);
  } else if (base == "cmc_graph") {
    const double h0 = parse_param(spec, base, 0.5);
    if (!(h0 > 0.0) || !(h0 < std::acos(-1.0) / 4.0)) {
      throw config_error("cmc_graph needs 0 < h0 < pi/4 so the cylinder projects injectively over B");
    }
    s.name = canonical(base, h0);
    s.patch = make_patch(s.name, 3, Cylinder{1.0 / (2.0 * h0)}, true);
  } else if (base == "grim_reaper") {
    if (spec != base) throw config_error("grim_reaper takes no parameter");
    s.name = base;
    s.patch = make_patch(base, 3, GrimReaper{}, true);
  } else {
    throw config_error("unknown surface '" + spec + "'");
  }
  return s;
}

FramePtr make_frame(const Surface& s, const std::string& kind) {
  if (kind == "analytic" || (kind == "default" && s.frame_fn)) {
    if (!s.frame_fn) throw config_error("surface '" + s.name + "' has no closed-form frame");
    return std::make_shared<AnalyticFrame>(s.patch, "analytic", s.frame_fn, s.frame_torsion_free);
  }
  if (kind == "default" || kind == "gram_schmidt") {
    return std::make_shared<GramSchmidtFrame>(s.patch, s.seed_order);
  }
  if (kind == "parallel") {
    FramePtr seed = s.frame_fn ? make_frame(s, "analytic") : make_frame(s, "gram_schmidt");
    return std::make_shared<ParallelFrame>(seed);
  }
  throw config_error("unknown frame kind '" + kind + "'");
}

}  // namespace imm
