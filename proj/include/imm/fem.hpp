#pragma once

// P1 finite elements on the unit disc for the weighted eigenproblem
//   -Laplace f = lambda w f  in B,  f = 0 on the boundary.

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

namespace imm {

struct DiscMesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary;
  double h = 0.0;  // longest edge
};

/// Ring mesh: a centre node and 6k nodes on the circle of radius k/rings.
DiscMesh ring_mesh(int rings);

/// Midpoint subdivision; new boundary nodes are projected onto the unit circle.
DiscMesh refine(const DiscMesh& mesh);

struct EigenLevel {
  double mesh_size = 0.0;
  int nodes = 0;
  double lambda = 0.0;
  int iterations = 0;
};

struct EigenResult {
  bool vacuous = false;  // integral of w below 1e-12 pi: no constraint
  double weight_integral = 0.0;
  std::vector<EigenLevel> levels;  // coarse to fine
  double lambda = 0.0;             // finest level
  double extrapolated = 0.0;       // Richardson (4 lambda_fine - lambda_mid) / 3
  double certified = 0.0;          // min(lambda, extrapolated)
  Eigen::VectorXd eigenfunction;   // finest level, M-normalised
};

/// Lowest eigenvalue on three nested meshes whose coarsest level has edges
/// of about mesh_size. w must be non-negative.
EigenResult weighted_first_eigenvalue(const std::function<double(double, double)>& w, double mesh_size = 0.1,
                                      int levels = 3);

}  // namespace imm
