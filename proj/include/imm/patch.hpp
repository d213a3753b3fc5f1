#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "imm/autodiff.hpp"
#include "imm/expression.hpp"

namespace imm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class DerivativeMode { analytic, finite_difference };

/// X and its parametric derivatives up to second order at one point.
struct PatchDerivatives {
  Vec X, Xu, Xv, Xuu, Xuv, Xvv;
};

/// A map X: B -> R^n. Subclasses provide the values and, when they can,
/// second-order jets; derivatives() switches between the analytic jets and
/// fourth-order central differences with a configurable step.
class ImmersionPatch {
 public:
  virtual ~ImmersionPatch() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual Vec eval_X(double u, double v) const = 0;
  /// Fills dim() jets; returns false when no analytic derivatives exist.
  virtual bool eval_jets(double u, double v, Jet* out) const = 0;

  bool claims_conformal() const { return conformal_; }
  void set_claims_conformal(bool c) { conformal_ = c; }
  /// x^1 = u, x^2 = v
  bool is_graph() const { return graph_; }
  void set_is_graph(bool g) { graph_ = g; }

  DerivativeMode derivative_mode() const { return mode_; }
  double fd_step() const { return fd_step_; }
  void set_derivative_mode(DerivativeMode mode, double fd_step = 1e-3);

  PatchDerivatives derivatives(double u, double v) const;
  /// n x 2 Jacobian [X_u X_v].
  Mat eval_dX(double u, double v) const;

 private:
  PatchDerivatives analytic(double u, double v) const;
  PatchDerivatives finite_difference(double u, double v) const;

  bool conformal_ = false;
  bool graph_ = false;
  DerivativeMode mode_ = DerivativeMode::analytic;
  double fd_step_ = 1e-3;
};

using PatchPtr = std::shared_ptr<ImmersionPatch>;

/// Patch from a generic parametrization: Param must provide
///   template <class T> void operator()(const T& u, const T& v, T* x) const;
template <typename Param>
class ParametricPatch final : public ImmersionPatch {
 public:
  ParametricPatch(std::string name, int dim, Param param) : name_(std::move(name)), dim_(dim), param_(std::move(param)) {}

  std::string name() const override { return name_; }
  int dim() const override { return dim_; }
  Vec eval_X(double u, double v) const override {
    Vec x(dim_);
    param_(u, v, x.data());
    return x;
  }
  bool eval_jets(double u, double v, Jet* out) const override {
    param_(Jet::variable_u(u), Jet::variable_v(v), out);
    return true;
  }
  const Param& param() const { return param_; }

 private:
  std::string name_;
  int dim_;
  Param param_;
};

template <typename Param>
PatchPtr make_patch(std::string name, int dim, Param param, bool conformal, bool graph = false) {
  auto p = std::make_shared<ParametricPatch<Param>>(std::move(name), dim, std::move(param));
  p->set_claims_conformal(conformal);
  p->set_is_graph(graph);
  return p;
}

/// Patch from component expressions in u, v.
class ExpressionPatch final : public ImmersionPatch {
 public:
  ExpressionPatch(std::string name, std::vector<Expression> components);
  std::string name() const override { return name_; }
  int dim() const override { return static_cast<int>(components_.size()); }
  Vec eval_X(double u, double v) const override;
  bool eval_jets(double u, double v, Jet* out) const override;
  const std::vector<Expression>& components() const { return components_; }

 private:
  std::string name_;
  std::vector<Expression> components_;
};

}  // namespace imm
