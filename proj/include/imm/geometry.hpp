#pragma once

// Pointwise differential geometry of a patch with a normal frame:
// fundamental forms, curvatures, torsion. SurfaceFields samples all of it on
// a ParameterGrid and provides the lattice-derived quantities (Christoffel
// symbols) that need finite differences.

#include <array>
#include <string>
#include <vector>

#include "imm/frame.hpp"
#include "imm/grid.hpp"

namespace imm {

/// Immersions with W below this (relative to the patch scale) are rejected.
inline constexpr double w_tol = 1e-10;

struct SurfaceSample {
  double u = 0.0, v = 0.0;
  Vec X, Xu, Xv, Xuu, Xuv, Xvv;
  Mat N, Nu, Nv;                    // n x k, k = n - 2
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  double det = 0.0, W = 0.0;        // W = sqrt(det g)
  double conformality_defect = 0.0; // max(|g11 - g22|, |g12|) / W
  Mat L;                            // k x 3, columns (11, 12, 22): X_{u^i u^j} . N_sigma
  Mat L_alt;                        // k x 4, columns (11, 12, 21, 22): -X_{u^i} . N_{sigma,u^j}
  Vec Hs, Ks;                       // per-normal mean and Gauss curvature
  double H = 0.0, K = 0.0;          // |(H_sigma)| and sum K_sigma
  Vec mean_curvature_vector;        // sum H_sigma N_sigma
  Mat Tu, Tv;                       // (T_i)_{sigma,omega} = N_{sigma,u^i} . N_omega, zero diagonal

  int codim() const { return static_cast<int>(N.cols()); }
  /// g^{ij}
  std::array<double, 3> inverse_metric() const { return {g22 / det, -g12 / det, g11 / det}; }
};

/// Throws degenerate_immersion when W < w_tol.
SurfaceSample sample_surface(const FrameField& frame, double u, double v);

/// Per-normal curvatures from a k x 3 shape matrix and the metric, using the
/// general (non-conformal) formulas H = (L11 g22 - 2 L12 g12 + L22 g11) / (2 det g),
/// K = (L11 L22 - L12^2) / det g.
void curvatures_from_shape(const Mat& L, double g11, double g12, double g22, Vec& Hs, Vec& Ks);

struct Christoffel {
  // gamma[k][idx] with idx 0 = (1,1), 1 = (1,2), 2 = (2,2)
  std::array<std::array<Field, 3>, 2> gamma;
};

class SurfaceFields {
 public:
  SurfaceFields(FramePtr frame, const ParameterGrid& grid);

  const ParameterGrid& grid() const { return grid_; }
  const FrameField& frame() const { return *frame_; }
  const ImmersionPatch& patch() const { return frame_->patch(); }
  int dim() const { return patch().dim(); }
  int codim() const { return dim() - 2; }
  const std::vector<SurfaceSample>& samples() const { return samples_; }
  const SurfaceSample& at(std::size_t k) const { return samples_[k]; }

  /// Scalar field f(sample) on disc nodes, zero elsewhere.
  template <typename F>
  Field scalar(F&& f) const {
    Field out(grid_.size(), 0.0);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (grid_.in_disc(k)) out[k] = f(samples_[k]);
    }
    return out;
  }

  Field area_element() const { return scalar([](const SurfaceSample& s) { return s.W; }); }
  Christoffel christoffel() const;

  /// Max conformality defect over disc nodes.
  double max_conformality_defect() const;
  /// Throws precondition_error unless the patch is conformal within tol.
  void require_conformal(const std::string& what, double tol = 1e-6) const;

 private:
  FramePtr frame_;
  ParameterGrid grid_;
  std::vector<SurfaceSample> samples_;
};

/// Max |H| over disc nodes.
double max_mean_curvature(const SurfaceFields& f);

/// Double integral over B of sum_{sigma,omega} (T^sigma_{omega,1})^2 + (T^sigma_{omega,2})^2 du dv.
double total_torsion(const FrameField& frame);

/// Max |T| over a polar sample of the disc.
double max_torsion(const FrameField& frame);

}  // namespace imm
