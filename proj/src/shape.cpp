#include "balanced/shape.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace balanced {

double SquaredDistances::between(int i, int j) const {
  if (i > j) std::swap(i, j);
  const Vector6d v = vector();
  for (std::size_t k = 0; k < kPairOrder.size(); ++k) {
    auto [p, q] = kPairOrder[k];
    if (p > q) std::swap(p, q);
    if (p == i && q == j) return v[static_cast<int>(k)];
  }
  throw std::invalid_argument("between: body indices must be distinct and in [0,4)");
}

void SquaredDistances::require_positive() const {
  const Vector6d v = vector();
  for (int k = 0; k < 6; ++k)
    if (!(v[k] > 0.0) || !std::isfinite(v[k]))
      throw std::invalid_argument("squared distances must be finite and strictly positive");
}

Eigen::Matrix4d SquaredDistances::table() const {
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  const Vector6d v = vector();
  for (std::size_t k = 0; k < kPairOrder.size(); ++k) {
    const auto [i, j] = kPairOrder[k];
    t(i, j) = t(j, i) = v[static_cast<int>(k)];
  }
  return t;
}

Eigen::Matrix3d Sym3::matrix() const {
  Eigen::Matrix3d m;
  m << u, z, y,
       z, v, x,
       y, x, w;
  return m;
}

Sym3 Sym3::from_matrix(const Eigen::Matrix3d& m) {
  return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(1, 2) + m(2, 1)), 0.5 * (m(0, 2) + m(2, 0)),
          0.5 * (m(0, 1) + m(1, 0))};
}

double Sym3::frobenius() const {
  return std::sqrt(u * u + v * v + w * w + 2.0 * (x * x + y * y + z * z));
}

SquaredDistances distances_from_points(std::span<const Eigen::VectorXd> points) {
  if (points.size() != 4) throw std::invalid_argument("distances_from_points requires 4 points");
  const auto dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("points must share one dimension");
  Vector6d v;
  for (std::size_t k = 0; k < kPairOrder.size(); ++k) {
    const auto [i, j] = kPairOrder[k];
    v[static_cast<int>(k)] = (points[i] - points[j]).squaredNorm();
    if (v[static_cast<int>(k)] == 0.0) throw std::invalid_argument("coincident points");
  }
  return SquaredDistances::from_vector(v);
}

SquaredDistances distances_from_points(const PointConfiguration& cfg) {
  return distances_from_points(std::span<const Eigen::VectorXd>(cfg.points));
}

double cayley_menger(const SquaredDistances& s) {
  Eigen::Matrix<double, 5, 5> cm;
  cm.setOnes();
  cm(0, 0) = 0.0;
  cm.bottomRightCorner<4, 4>() = s.table();
  return cm.determinant();
}

Sym3 inertia_matrix(const MassSystem& ms, const SquaredDistances& s) {
  const OrthonormalBasis ob = build_basis(ms);
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  const double M = ms.total();
  const double Y = ob.Y, Z = ob.Z, T = ob.T, U = ob.U, V = ob.V;
  const auto [a, b1, b2, d1, d2, f] = s;

  Sym3 b;
  b.u = (m2 * (m1 * b2 + m3 * d2) + m4 * (m1 * b1 + m3 * d1)) / M -
        (m1 * m3 * (Y / Z) * a + m2 * m4 * (Z / Y) * f) / M;
  b.v = m1 * m3 / (m1 + m3) * a;
  b.w = m2 * m4 / (m2 + m4) * f;
  b.x = 0.5 * V * (d2 - d1 + b1 - b2);
  b.y = U / (2.0 * M * Z) * (m1 * (b1 - b2) + m3 * (d1 - d2)) + U * (m4 - m2) / (2.0 * M * Y) * f;
  b.z = T / (2.0 * M * Y) * (m2 * (b2 - d2) + m4 * (b1 - d1)) + T * (m1 - m3) / (2.0 * M * Z) * a;
  return b;
}

double inertia_trace(const MassSystem& ms, const SquaredDistances& s) {
  if (ms.size() != 4) throw std::invalid_argument("inertia_trace requires 4 masses");
  double sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) sum += ms[i] * ms[j] * s.between(i, j);
  return sum / ms.total();
}

}  // namespace balanced
