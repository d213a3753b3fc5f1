#pragma once

// Cell-centred lattice over [-1,1]^2 masked to the closed unit disc, with
// fourth-order finite-difference operators and residual aggregation.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace imm {

using Field = std::vector<double>;

class ParameterGrid {
 public:
  /// Node i along an axis sits at -1 + (i + 1/2) h with h = 2/resolution,
  /// so doubling the resolution halves h exactly. Requires resolution >= 8.
  explicit ParameterGrid(int resolution);

  int resolution() const { return m_; }
  double h() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i); }
  double coord(int i) const { return -1.0 + (i + 0.5) * h_; }
  double u(std::size_t k) const { return coord(static_cast<int>(k % static_cast<std::size_t>(m_))); }
  double v(std::size_t k) const { return coord(static_cast<int>(k / static_cast<std::size_t>(m_))); }

  bool in_disc(std::size_t k) const { return disc_[k] != 0; }
  bool interior(std::size_t k) const { return interior_[k] != 0; }
  const std::vector<std::uint8_t>& disc_mask() const { return disc_; }
  const std::vector<std::uint8_t>& interior_mask() const { return interior_; }

  std::size_t node_count() const { return node_count_; }
  std::size_t interior_count() const { return interior_count_; }
  /// (u,v) of every node inside the disc, row-major.
  std::vector<std::pair<double, double>> nodes() const;

  /// Evaluates f(u,v) on disc nodes; zero elsewhere.
  template <typename F>
  Field sample(F&& f) const {
    Field out(size(), 0.0);
    for (std::size_t k = 0; k < size(); ++k) {
      if (disc_[k]) out[k] = f(u(k), v(k));
    }
    return out;
  }

  // Fourth-order central differences, valid on interior nodes (zero elsewhere).
  Field d_u(const Field& f) const;
  Field d_v(const Field& f) const;
  Field d_uu(const Field& f) const;
  Field d_vv(const Field& f) const;
  Field laplacian(const Field& f) const;

 private:
  Field stencil(const Field& f, bool along_u, bool second) const;

  int m_;
  double h_;
  std::vector<std::uint8_t> disc_;
  std::vector<std::uint8_t> interior_;
  std::vector<std::pair<int, int>> rows_;  // interior [begin, end) per row
  std::size_t node_count_ = 0;
  std::size_t interior_count_ = 0;
};

struct ResidualReport {
  std::string name;
  double max_abs = 0.0;
  double l2 = 0.0;
  int resolution = 0;
  std::optional<double> convergence_order;
  bool at_roundoff = false;  // max_abs below roundoff_floor: order is not meaningful
};

inline constexpr double roundoff_floor = 1e-10;

/// max over interior nodes of |defect| and sqrt(sum defect^2 * weight * h^2).
ResidualReport make_report(const std::string& name, const ParameterGrid& grid, const Field& defect,
                           const Field& area_weight);

/// Fills convergence_order of reports[i] (i >= 1) from reports[i-1]; the list
/// must be ordered by increasing resolution.
void fill_convergence(std::vector<ResidualReport>& reports);

/// Every successive order >= min_order, or the finest residual is at roundoff.
bool converges(const std::vector<ResidualReport>& reports, double min_order);

}  // namespace imm
