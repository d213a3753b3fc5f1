#pragma once

// Orthonormal sections of the normal bundle, sampled pointwise together with
// their first parametric derivatives. Columns of each matrix are N_1..N_{n-2}.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "imm/patch.hpp"

namespace imm {

inline constexpr double frame_tol = 1e-10;
inline constexpr double torsion_tol = 1e-8;

struct FrameSample {
  Mat N, Nu, Nv;  // n x (n-2)
};

class FrameField {
 public:
  virtual ~FrameField() = default;
  virtual std::string name() const = 0;
  virtual FrameSample sample(double u, double v) const = 0;
  virtual const ImmersionPatch& patch() const = 0;
  /// Set when the frame was constructed to have vanishing torsion.
  virtual bool torsion_free() const { return false; }
  int codim() const { return patch().dim() - 2; }
};

using FramePtr = std::shared_ptr<const FrameField>;

/// (T_i)_{sigma,omega} = N_{sigma,u^i} . N_omega with the diagonal set to zero.
void torsion_matrices(const FrameSample& f, Mat& Tu, Mat& Tv);

/// Orthonormalizes the ambient basis vectors (seed order, 0-based indices;
/// default e_3..e_n) against span{X_u, X_v} and each other. Derivatives come
/// from forward-mode differentiation through the construction, or, when the
/// patch is in finite-difference mode, from central differences of the frame.
class GramSchmidtFrame final : public FrameField {
 public:
  explicit GramSchmidtFrame(PatchPtr patch, std::vector<int> seed_order = {});
  std::string name() const override { return "gram_schmidt"; }
  FrameSample sample(double u, double v) const override;
  const ImmersionPatch& patch() const override { return *patch_; }
  const std::vector<int>& seed_order() const { return seeds_; }

 private:
  Mat values(double u, double v) const;
  PatchPtr patch_;
  std::vector<int> seeds_;
};

/// Closed-form frame: fn(u, v, N) writes the n x (n-2) matrix column-major.
class AnalyticFrame final : public FrameField {
 public:
  using Fn = std::function<void(const Dual& u, const Dual& v, Dual* N)>;
  AnalyticFrame(PatchPtr patch, std::string name, Fn fn, bool torsion_free = false);
  std::string name() const override { return name_; }
  FrameSample sample(double u, double v) const override;
  const ImmersionPatch& patch() const override { return *patch_; }
  bool torsion_free() const override { return torsion_free_; }

 private:
  PatchPtr patch_;
  std::string name_;
  Fn fn_;
  bool torsion_free_;
};

/// Rotates normals a and b of a base frame by theta(u,v) in their plane.
class RotatedFrame final : public FrameField {
 public:
  using Angle = std::function<Dual(const Dual& u, const Dual& v)>;
  RotatedFrame(FramePtr base, Angle theta, int a = 0, int b = 1);
  std::string name() const override { return "rotated(" + base_->name() + ")"; }
  FrameSample sample(double u, double v) const override;
  const ImmersionPatch& patch() const override { return base_->patch(); }

 private:
  FramePtr base_;
  Angle theta_;
  int a_, b_;
};

struct HolonomyReport {
  std::vector<double> radii;
  std::vector<double> defects;  // Frobenius distance after one loop
  double max_defect = 0.0;
};

/// Torsion-free frame N' = N A where A in SO(n-2) solves A_t = (u T_1 + v T_2) A
/// along the ray t -> t(u,v) from the centre (fourth-order Magnus stepping).
/// The constructor checks path independence on concentric circles and throws
/// non_flat_bundle when the holonomy defect exceeds holonomy_tol.
class ParallelFrame final : public FrameField {
 public:
  explicit ParallelFrame(FramePtr seed, double holonomy_tol = 1e-6, int steps_per_ray = 32);
  std::string name() const override { return "parallel"; }
  FrameSample sample(double u, double v) const override;
  const ImmersionPatch& patch() const override { return seed_->patch(); }
  bool torsion_free() const override { return true; }
  const HolonomyReport& holonomy() const { return holonomy_; }

  /// Holonomy of the seed's connection without constructing a frame.
  static HolonomyReport measure_holonomy(const FrameField& seed, int steps_per_circle = 256);

 private:
  Mat transport(double u, double v) const;
  FramePtr seed_;
  int steps_;
  HolonomyReport holonomy_;
};

}  // namespace imm
