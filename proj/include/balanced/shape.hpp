#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "balanced/massspace.hpp"

namespace balanced {

using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Body index pairs (0-based) in slot order (a, b1, b2, d1, d2, f):
/// a=r13^2, b1=r14^2, b2=r12^2, d1=r34^2, d2=r32^2, f=r24^2.
inline constexpr std::array<std::pair<int, int>, 6> kPairOrder{
    {{0, 2}, {0, 3}, {0, 1}, {2, 3}, {2, 1}, {1, 3}}};

/// The six squared mutual distances of a 4-body configuration.
/// Embeddability is not checked here; see cayley_menger.
struct SquaredDistances {
  double a = 1, b1 = 1, b2 = 1, d1 = 1, d2 = 1, f = 1;

  static SquaredDistances tetrahedron(double side2 = 1.0) {
    return {side2, side2, side2, side2, side2, side2};
  }
  static SquaredDistances from_vector(const Vector6d& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
  Vector6d vector() const { return (Vector6d() << a, b1, b2, d1, d2, f).finished(); }

  /// Squared distance between bodies i and j (0-based, i != j).
  double between(int i, int j) const;
  /// Throws std::invalid_argument if any entry is not strictly positive.
  void require_positive() const;
  double min() const { return vector().minCoeff(); }
  double max() const { return vector().maxCoeff(); }
  /// Full symmetric 4x4 table with zero diagonal.
  Eigen::Matrix4d table() const;
};

/// A 3x3 symmetric matrix stored by its six independent entries:
/// diagonal (u,v,w), x = entry(2,3), y = entry(1,3), z = entry(1,2).
struct Sym3 {
  double u = 0, v = 0, w = 0, x = 0, y = 0, z = 0;

  Eigen::Matrix3d matrix() const;
  static Sym3 from_matrix(const Eigen::Matrix3d& m);
  /// Entries in the order (u, v, w, x, y, z).
  Vector6d entries() const { return (Vector6d() << u, v, w, x, y, z).finished(); }
  static Sym3 from_entries(const Vector6d& e) { return {e[0], e[1], e[2], e[3], e[4], e[5]}; }
  double frobenius() const;
};

struct PointConfiguration {
  std::vector<Eigen::VectorXd> points;
  MassSystem masses;
};

/// Requires four points of equal dimension; rejects coincident points.
SquaredDistances distances_from_points(std::span<const Eigen::VectorXd> points);
SquaredDistances distances_from_points(const PointConfiguration& cfg);

/// Determinant of the bordered 5x5 Cayley-Menger matrix (288 V^2 for a
/// tetrahedron of volume V). Zero for coplanar points, negative when the data
/// cannot be realised in R^3.
double cayley_menger(const SquaredDistances& s);

/// Intrinsic inertia matrix B in the {u1,u2,u3} basis.
Sym3 inertia_matrix(const MassSystem& ms, const SquaredDistances& s);

/// Leibniz formula (1/M) sum_{i<j} m_i m_j s_ij.
double inertia_trace(const MassSystem& ms, const SquaredDistances& s);

}  // namespace balanced
