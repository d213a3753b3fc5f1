#include "imm/patch.hpp"

#include "imm/errors.hpp"

namespace imm {

void ImmersionPatch::set_derivative_mode(DerivativeMode mode, double fd_step) {
  if (!(fd_step > 0.0)) throw config_error("finite-difference step must be positive");
  mode_ = mode;
  fd_step_ = fd_step;
}

PatchDerivatives ImmersionPatch::derivatives(double u, double v) const {
  if (mode_ == DerivativeMode::analytic) {
    PatchDerivatives d = analytic(u, v);
    if (d.X.size() == dim()) return d;
  }
  return finite_difference(u, v);
}

Mat ImmersionPatch::eval_dX(double u, double v) const {
  const PatchDerivatives d = derivatives(u, v);
  Mat J(dim(), 2);
  J.col(0) = d.Xu;
  J.col(1) = d.Xv;
  return J;
}

PatchDerivatives ImmersionPatch::analytic(double u, double v) const {
  const int n = dim();
  std::vector<Jet> jets(static_cast<std::size_t>(n));
  PatchDerivatives d;
  if (!eval_jets(u, v, jets.data())) return d;
  d.X.resize(n);
  d.Xu.resize(n);
  d.Xv.resize(n);
  d.Xuu.resize(n);
  d.Xuv.resize(n);
  d.Xvv.resize(n);
  for (int c = 0; c < n; ++c) {
    const Jet& j = jets[static_cast<std::size_t>(c)];
    d.X[c] = j.v;
    d.Xu[c] = j.du;
    d.Xv[c] = j.dv;
    d.Xuu[c] = j.duu;
    d.Xuv[c] = j.duv;
    d.Xvv[c] = j.dvv;
  }
  return d;
}

PatchDerivatives ImmersionPatch::finite_difference(double u, double v) const {
  const double s = fd_step_;
  static constexpr double c1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  static constexpr double c2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
  PatchDerivatives d;
  d.X = eval_X(u, v);
  const int n = dim();
  d.Xu = Vec::Zero(n);
  d.Xv = Vec::Zero(n);
  d.Xuu = Vec::Zero(n);
  d.Xvv = Vec::Zero(n);
  d.Xuv = Vec::Zero(n);
  Vec row[5], col[5];
  for (int a = 0; a < 5; ++a) {
    const double o = (a - 2) * s;
    row[a] = a == 2 ? d.X : eval_X(u + o, v);
    col[a] = a == 2 ? d.X : eval_X(u, v + o);
  }
  for (int a = 0; a < 5; ++a) {
    d.Xu += c1[a] * row[a];
    d.Xv += c1[a] * col[a];
    d.Xuu += c2[a] * row[a];
    d.Xvv += c2[a] * col[a];
  }
  d.Xu /= 12.0 * s;
  d.Xv /= 12.0 * s;
  d.Xuu /= 12.0 * s * s;
  d.Xvv /= 12.0 * s * s;
  for (int a = 0; a < 5; ++a) {
    if (a == 2) continue;
    for (int b = 0; b < 5; ++b) {
      if (b == 2) continue;
      d.Xuv += (c1[a] * c1[b]) * eval_X(u + (a - 2) * s, v + (b - 2) * s);
    }
  }
  d.Xuv /= 144.0 * s * s;
  return d;
}

ExpressionPatch::ExpressionPatch(std::string name, std::vector<Expression> components)
    : name_(std::move(name)), components_(std::move(components)) {
  if (components_.size() < 3) throw config_error("custom surface needs ambient dimension >= 3");
}

Vec ExpressionPatch::eval_X(double u, double v) const {
  Vec x(dim());
  for (int c = 0; c < dim(); ++c) x[c] = components_[static_cast<std::size_t>(c)].eval(u, v);
  return x;
}

bool ExpressionPatch::eval_jets(double u, double v, Jet* out) const {
  const Jet ju = Jet::variable_u(u), jv = Jet::variable_v(v);
  for (int c = 0; c < dim(); ++c) out[c] = components_[static_cast<std::size_t>(c)].eval(ju, jv);
  return true;
}

}  // namespace imm
