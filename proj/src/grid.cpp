#include "imm/grid.hpp"

#include <cmath>

#include "imm/errors.hpp"
#include "imm/kernels.hpp"

namespace imm {

ParameterGrid::ParameterGrid(int resolution) : m_(resolution), h_(0.0) {
  if (resolution < 8) {
    throw config_error("grid resolution must be >= 8, got " + std::to_string(resolution));
  }
  h_ = 2.0 / m_;
  disc_.assign(size(), 0);
  interior_.assign(size(), 0);
  auto inside = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= m_ || j >= m_) return false;
    const double x = coord(i), y = coord(j);
    return x * x + y * y <= 1.0;
  };
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < m_; ++i) {
      if (!inside(i, j)) continue;
      disc_[index(i, j)] = 1;
      ++node_count_;
    }
  }
  rows_.assign(static_cast<std::size_t>(m_), {0, 0});
  for (int j = 0; j < m_; ++j) {
    int begin = -1, end = -1;
    for (int i = 0; i < m_; ++i) {
      bool ok = inside(i, j);
      for (int s = 1; s <= 2 && ok; ++s) {
        ok = inside(i - s, j) && inside(i + s, j) && inside(i, j - s) && inside(i, j + s);
      }
      if (!ok) continue;
      interior_[index(i, j)] = 1;
      ++interior_count_;
      if (begin < 0) begin = i;
      end = i + 1;
    }
    if (begin >= 0) rows_[static_cast<std::size_t>(j)] = {begin, end};
  }
}

std::vector<std::pair<double, double>> ParameterGrid::nodes() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(node_count_);
  for (std::size_t k = 0; k < size(); ++k) {
    if (disc_[k]) out.emplace_back(u(k), v(k));
  }
  return out;
}

Field ParameterGrid::stencil(const Field& f, bool along_u, bool second) const {
  if (f.size() != size()) throw Error(ErrorKind::internal, "field size does not match grid");
  const auto& table = kernels::active();
  Field out(size(), 0.0);
  const std::ptrdiff_t stride = along_u ? 1 : m_;
  const double scale = second ? 1.0 / (12.0 * h_ * h_) : 1.0 / (12.0 * h_);
  for (int j = 0; j < m_; ++j) {
    const auto [b, e] = rows_[static_cast<std::size_t>(j)];
    if (b >= e) continue;
    const std::size_t begin = index(b, j), end = index(e - 1, j) + 1;
    if (second) table.stencil_d2(f.data(), out.data(), begin, end, stride, scale);
    else table.stencil_d1(f.data(), out.data(), begin, end, stride, scale);
  }
  return out;
}

Field ParameterGrid::d_u(const Field& f) const { return stencil(f, true, false); }
Field ParameterGrid::d_v(const Field& f) const { return stencil(f, false, false); }
Field ParameterGrid::d_uu(const Field& f) const { return stencil(f, true, true); }
Field ParameterGrid::d_vv(const Field& f) const { return stencil(f, false, true); }

Field ParameterGrid::laplacian(const Field& f) const {
  Field a = d_uu(f);
  const Field b = d_vv(f);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

ResidualReport make_report(const std::string& name, const ParameterGrid& grid, const Field& defect,
                           const Field& area_weight) {
  const auto& table = kernels::active();
  const auto& mask = grid.interior_mask();
  ResidualReport r;
  r.name = name;
  r.resolution = grid.resolution();
  r.max_abs = table.masked_max_abs(defect.data(), mask.data(), defect.size());
  const double h2 = grid.h() * grid.h();
  r.l2 = std::sqrt(h2 * table.masked_weighted_sum_sq(defect.data(), area_weight.data(), mask.data(), defect.size()));
  r.at_roundoff = r.max_abs < roundoff_floor;
  return r;
}

void fill_convergence(std::vector<ResidualReport>& reports) {
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& c = reports[i - 1];
    auto& f = reports[i];
    if (c.max_abs > 0.0 && f.max_abs > 0.0) {
      const double ratio_h = static_cast<double>(f.resolution) / static_cast<double>(c.resolution);
      f.convergence_order = std::log(c.max_abs / f.max_abs) / std::log(ratio_h);
    }
  }
}

bool converges(const std::vector<ResidualReport>& reports, double min_order) {
  if (reports.empty()) return false;
  if (reports.back().at_roundoff) return true;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i - 1].at_roundoff) return false;  // residual grew out of roundoff
    if (!reports[i].convergence_order || *reports[i].convergence_order < min_order) return false;
  }
  return reports.size() >= 2;
}

}  // namespace imm
