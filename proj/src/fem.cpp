#include "imm/fem.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <map>

#include "imm/errors.hpp"

namespace imm {

namespace {

constexpr double pi = 3.14159265358979323846;

double longest_edge(const DiscMesh& m) {
  double h = 0.0;
  for (const auto& t : m.triangles) {
    for (int e = 0; e < 3; ++e) h = std::max(h, (m.nodes[static_cast<std::size_t>(t[e])] - m.nodes[static_cast<std::size_t>(t[(e + 1) % 3])]).norm());
  }
  return h;
}

// Degree-5 seven-point rule on the reference triangle (barycentric, weights sum to 1).
struct TriPoint {
  double l1, l2, l3, w;
};
const std::array<TriPoint, 7>& seven_point_rule() {
  static const std::array<TriPoint, 7> rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    return std::array<TriPoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
                                    {a1, b1, b1, w1}, {b1, a1, b1, w1}, {b1, b1, a1, w1},
                                    {a2, b2, b2, w2}, {b2, a2, b2, w2}, {b2, b2, a2, w2}}};
  }();
  return rule;
}

struct Level {
  Eigen::SparseMatrix<double> K, M;
  std::vector<int> dof;  // node -> free dof or -1
  double weight_integral = 0.0;
};

Level assemble(const DiscMesh& mesh, const std::function<double(double, double)>& w) {
  Level L;
  L.dof.assign(mesh.nodes.size(), -1);
  int nfree = 0;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    if (!mesh.boundary[i]) L.dof[i] = nfree++;
  }
  std::vector<Eigen::Triplet<double>> kt, mt;
  for (const auto& t : mesh.triangles) {
    const Eigen::Vector2d& p0 = mesh.nodes[static_cast<std::size_t>(t[0])];
    const Eigen::Vector2d& p1 = mesh.nodes[static_cast<std::size_t>(t[1])];
    const Eigen::Vector2d& p2 = mesh.nodes[static_cast<std::size_t>(t[2])];
    const Eigen::Vector2d e1 = p1 - p0, e2 = p2 - p0;
    const double area = 0.5 * std::fabs(e1.x() * e2.y() - e1.y() * e2.x());
    // gradients of the barycentric coordinates
    Eigen::Matrix<double, 3, 2> g;
    const Eigen::Vector2d q[3] = {p0, p1, p2};
    for (int a = 0; a < 3; ++a) {
      const Eigen::Vector2d& pb = q[(a + 1) % 3];
      const Eigen::Vector2d& pc = q[(a + 2) % 3];
      g(a, 0) = (pb.y() - pc.y()) / (2 * area);
      g(a, 1) = (pc.x() - pb.x()) / (2 * area);
    }
    // signs cancel in g g^T but keep orientation consistent
    Eigen::Matrix3d ke = area * g * g.transpose();
    Eigen::Matrix3d me = Eigen::Matrix3d::Zero();
    for (const auto& qp : seven_point_rule()) {
      const Eigen::Vector2d x = qp.l1 * p0 + qp.l2 * p1 + qp.l3 * p2;
      const double wv = w(x.x(), x.y());
      if (!(wv >= 0.0)) throw Error(ErrorKind::precondition, "eigenvalue weight is negative or not finite");
      const double l[3] = {qp.l1, qp.l2, qp.l3};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) me(a, b) += qp.w * area * wv * l[a] * l[b];
      }
      L.weight_integral += qp.w * area * wv;
    }
    for (int a = 0; a < 3; ++a) {
      const int da = L.dof[static_cast<std::size_t>(t[a])];
      if (da < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int db = L.dof[static_cast<std::size_t>(t[b])];
        if (db < 0) continue;
        kt.emplace_back(da, db, ke(a, b));
        mt.emplace_back(da, db, me(a, b));
      }
    }
  }
  L.K.resize(nfree, nfree);
  L.M.resize(nfree, nfree);
  L.K.setFromTriplets(kt.begin(), kt.end());
  L.M.setFromTriplets(mt.begin(), mt.end());
  return L;
}

// Smallest lambda of K x = lambda M x by inverse iteration.
double inverse_iteration(const Level& L, Eigen::VectorXd& x, int& iterations) {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(L.K);
  if (chol.info() != Eigen::Success) throw Error(ErrorKind::internal, "stiffness factorisation failed");
  x = Eigen::VectorXd::Ones(L.K.rows());
  double lambda = 0.0;
  for (iterations = 1; iterations <= 500; ++iterations) {
    const Eigen::VectorXd y = chol.solve(L.M * x);
    const double yMy = y.dot(L.M * y);
    if (!(yMy > 0.0)) throw Error(ErrorKind::internal, "inverse iteration lost the weighted norm");
    const double next = y.dot(L.K * y) / yMy;
    x = y / std::sqrt(yMy);
    if (iterations > 1 && std::fabs(next - lambda) <= 1e-10 * std::max(1.0, next)) return next;
    lambda = next;
  }
  throw Error(ErrorKind::internal, "inverse iteration did not converge");
}

}  // namespace

DiscMesh ring_mesh(int rings) {
  if (rings < 1) throw config_error("ring mesh needs at least one ring");
  DiscMesh m;
  m.nodes.emplace_back(0.0, 0.0);
  m.boundary.push_back(rings == 0);
  std::vector<int> first{0};
  for (int k = 1; k <= rings; ++k) {
    first.push_back(static_cast<int>(m.nodes.size()));
    const double r = static_cast<double>(k) / rings;
    for (int j = 0; j < 6 * k; ++j) {
      const double t = 2 * pi * j / (6 * k);
      m.nodes.emplace_back(r * std::cos(t), r * std::sin(t));
      m.boundary.push_back(k == rings);
    }
  }
  // ring 0 -> 1
  for (int j = 0; j < 6; ++j) m.triangles.push_back({0, 1 + j, 1 + (j + 1) % 6});
  // ring k-1 (6(k-1) nodes) -> ring k (6k nodes): each of the 6 sectors
  // has k outer and k-1 inner nodes plus the shared corner.
  for (int k = 2; k <= rings; ++k) {
    const int ni = 6 * (k - 1), no = 6 * k;
    auto in = [&](int j) { return first[static_cast<std::size_t>(k - 1)] + ((j % ni) + ni) % ni; };
    auto out = [&](int j) { return first[static_cast<std::size_t>(k)] + ((j % no) + no) % no; };
    for (int s = 0; s < 6; ++s) {
      for (int j = 0; j < k; ++j) {
        const int o = s * k + j, i = s * (k - 1) + j;
        // outer-edge triangle
        m.triangles.push_back({in(i), out(o), out(o + 1)});
        if (j < k - 1) m.triangles.push_back({in(i), out(o + 1), in(i + 1)});
      }
    }
  }
  m.h = longest_edge(m);
  return m;
}

DiscMesh refine(const DiscMesh& mesh) {
  DiscMesh r;
  r.nodes = mesh.nodes;
  r.boundary = mesh.boundary;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    Eigen::Vector2d p = 0.5 * (mesh.nodes[static_cast<std::size_t>(a)] + mesh.nodes[static_cast<std::size_t>(b)]);
    const bool bd = mesh.boundary[static_cast<std::size_t>(a)] && mesh.boundary[static_cast<std::size_t>(b)];
    if (bd) p.normalize();
    const int id = static_cast<int>(r.nodes.size());
    r.nodes.push_back(p);
    r.boundary.push_back(bd);
    mid.emplace(key, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    const int a = midpoint(t[1], t[2]), b = midpoint(t[2], t[0]), c = midpoint(t[0], t[1]);
    r.triangles.push_back({t[0], c, b});
    r.triangles.push_back({c, t[1], a});
    r.triangles.push_back({b, a, t[2]});
    r.triangles.push_back({a, b, c});
  }
  r.h = longest_edge(r);
  return r;
}

EigenResult weighted_first_eigenvalue(const std::function<double(double, double)>& w, double mesh_size, int levels) {
  if (!(mesh_size > 0.0 && mesh_size <= 1.0)) throw config_error("mesh_size must lie in (0, 1]");
  if (levels < 1) throw config_error("at least one mesh level is required");
  EigenResult res;
  DiscMesh mesh = ring_mesh(std::max(2, static_cast<int>(std::ceil(1.0 / mesh_size))));
  for (int l = 0; l < levels; ++l) {
    if (l > 0) mesh = refine(mesh);
    const Level L = assemble(mesh, w);
    res.weight_integral = L.weight_integral;
    if (L.weight_integral < 1e-12 * pi) {
      res.vacuous = true;
      res.lambda = res.extrapolated = res.certified = std::numeric_limits<double>::infinity();
      return res;
    }
    EigenLevel lev;
    lev.mesh_size = mesh.h;
    lev.nodes = static_cast<int>(mesh.nodes.size());
    lev.lambda = inverse_iteration(L, res.eigenfunction, lev.iterations);
    res.levels.push_back(lev);
  }
  res.lambda = res.levels.back().lambda;
  res.extrapolated = res.levels.size() >= 2 ? (4.0 * res.lambda - res.levels[res.levels.size() - 2].lambda) / 3.0 : res.lambda;
  res.certified = std::min(res.lambda, res.extrapolated);
  return res;
}

}  // namespace imm
