#pragma once

// Forward-mode derivatives in the two parameters (u, v).
//   Dual: value and first partials.
//   Jet:  value, first and second partials.
// Patch parametrizations are written once as templates and evaluated on Jet
// to obtain X, X_u, X_v, X_uu, X_uv, X_vv without finite differences.

#include <cmath>

namespace imm {

struct Dual {
  double v = 0.0, du = 0.0, dv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit on purpose
  constexpr Dual(double value, double d_u, double d_v) : v(value), du(d_u), dv(d_v) {}

  Dual& operator+=(const Dual& o) { v += o.v; du += o.du; dv += o.dv; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; du -= o.du; dv -= o.dv; return *this; }
  Dual& operator*=(const Dual& o) { *this = Dual(v * o.v, du * o.v + v * o.du, dv * o.v + v * o.dv); return *this; }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    *this = Dual(q, (du - q * o.du) * inv, (dv - q * o.dv) * inv);
    return *this;
  }
};

inline Dual operator-(const Dual& a) { return {-a.v, -a.du, -a.dv}; }
inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }

// f(a) given f(a.v), f'(a.v)
inline Dual chain(const Dual& a, double f, double df) { return {f, df * a.du, df * a.dv}; }

inline Dual sqrt(const Dual& a) { const double s = std::sqrt(a.v); return chain(a, s, 0.5 / s); }
inline Dual sin(const Dual& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
inline Dual cos(const Dual& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Dual exp(const Dual& a) { const double e = std::exp(a.v); return chain(a, e, e); }
inline Dual log(const Dual& a) { return chain(a, std::log(a.v), 1.0 / a.v); }
inline Dual atan(const Dual& a) { return chain(a, std::atan(a.v), 1.0 / (1.0 + a.v * a.v)); }
inline Dual sinh(const Dual& a) { return chain(a, std::sinh(a.v), std::cosh(a.v)); }
inline Dual cosh(const Dual& a) { return chain(a, std::cosh(a.v), std::sinh(a.v)); }

struct Jet {
  double v = 0.0;
  double du = 0.0, dv = 0.0;
  double duu = 0.0, duv = 0.0, dvv = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: implicit on purpose

  static constexpr Jet variable_u(double u) { Jet j(u); j.du = 1.0; return j; }
  static constexpr Jet variable_v(double v) { Jet j(v); j.dv = 1.0; return j; }

  Jet& operator+=(const Jet& o) {
    v += o.v; du += o.du; dv += o.dv; duu += o.duu; duv += o.duv; dvv += o.dvv;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v; du -= o.du; dv -= o.dv; duu -= o.duu; duv -= o.duv; dvv -= o.dvv;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    Jet r;
    r.v = v * o.v;
    r.du = du * o.v + v * o.du;
    r.dv = dv * o.v + v * o.dv;
    r.duu = duu * o.v + 2.0 * du * o.du + v * o.duu;
    r.duv = duv * o.v + du * o.dv + dv * o.du + v * o.duv;
    r.dvv = dvv * o.v + 2.0 * dv * o.dv + v * o.dvv;
    return *this = r;
  }
};

// f(a) given f, f', f'' at a.v
inline Jet chain(const Jet& a, double f, double df, double d2f) {
  Jet r;
  r.v = f;
  r.du = df * a.du;
  r.dv = df * a.dv;
  r.duu = d2f * a.du * a.du + df * a.duu;
  r.duv = d2f * a.du * a.dv + df * a.duv;
  r.dvv = d2f * a.dv * a.dv + df * a.dvv;
  return r;
}

inline Jet operator-(const Jet& a) { return chain(a, -a.v, -1.0, 0.0); }
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet reciprocal(const Jet& a) {
  const double inv = 1.0 / a.v;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c);
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet atan(const Jet& a) {
  const double d = 1.0 / (1.0 + a.v * a.v);
  return chain(a, std::atan(a.v), d, -2.0 * a.v * d * d);
}
inline Jet sinh(const Jet& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, s, c, s);
}
inline Jet cosh(const Jet& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, c, s, c);
}

template <typename T>
T ipow(T base, int exponent) {
  if (exponent < 0) return T(1.0) / ipow(base, -exponent);
  T result(1.0);
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace imm
