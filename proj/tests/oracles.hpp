#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "balanced/forces.hpp"
#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace oracle {

using balanced::MassSystem;
using balanced::SquaredDistances;
using balanced::Vector6d;

inline Eigen::Matrix4d table(const SquaredDistances& s) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  const Vector6d v = s.vector();
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = balanced::kPairOrder[k];
    t(i, j) = t(j, i) = v[k];
  }
  return t;
}

// B_jk = -1/2 sum_{i,l} u_j[i] u_k[l] s_il.
inline Eigen::Matrix3d inertia(const MassSystem& ms, const SquaredDistances& s) {
  const auto b = balanced::build_basis(ms);
  return -0.5 * b.u * table(s) * b.u.transpose();
}

// A_lk = sum_{i<j} m_i m_j phi(s_ij) (xi_k,i - xi_k,j)(xi_l,i - xi_l,j), xi = u / m.
inline Eigen::Matrix3d wintner_conley(const MassSystem& ms, const SquaredDistances& s) {
  const auto b = balanced::build_basis(ms);
  Eigen::Matrix<double, 3, 4> xi = b.u;
  for (int i = 0; i < 4; ++i) xi.col(i) /= ms[i];
  const Eigen::Matrix4d t = table(s);
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Eigen::Vector3d d = xi.col(i) - xi.col(j);
      a += ms[i] * ms[j] * (-0.5 * std::pow(t(i, j), -1.5)) * d * d.transpose();
    }
  return a;
}

inline double min_eigen_gap(const Eigen::Matrix3d& m) {
  const Eigen::Vector3d e = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m).eigenvalues();
  return std::min(e[1] - e[0], e[2] - e[1]);
}

// Central differences of f: R^n -> R^m.
inline Eigen::MatrixXd jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x, double h = 1e-5) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd j(f0.size(), x.size());
  for (int k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    j.col(k) = (f(xp) - f(xm)) / (2 * h);
  }
  return j;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = n(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

inline MassSystem random_masses(std::mt19937_64& rng, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return MassSystem({std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))});
}

// Squared distances of four random points in R^3 (always embeddable).
inline SquaredDistances random_tetrahedron(std::mt19937_64& rng, std::array<Eigen::Vector3d, 4>* pts = nullptr) {
  std::normal_distribution<double> n;
  std::array<Eigen::Vector3d, 4> p;
  for (auto& q : p) q = Eigen::Vector3d(n(rng), n(rng), n(rng));
  if (pts) *pts = p;
  SquaredDistances s;
  Vector6d v;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = balanced::kPairOrder[k];
    v[k] = (p[i] - p[j]).squaredNorm();
  }
  return SquaredDistances::from_vector(v);
}

// Random positive distance data near the unit tetrahedron, not necessarily embeddable.
inline SquaredDistances random_distances(std::mt19937_64& rng, double spread = 0.5) {
  std::uniform_real_distribution<double> u(1.0 - spread, 1.0 + spread);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

// Tangent at tau = 0 of a curve through s0 from its first two points, fitting
// s - s0 = c1 tau + c2 tau^2 with tau measured along `dir`.
inline Vector6d seed_tangent(const Vector6d& s0, const Vector6d& p1, const Vector6d& p2, const Vector6d& dir) {
  const double t1 = dir.dot(p1 - s0), t2 = dir.dot(p2 - s0);
  const Vector6d d1 = p1 - s0, d2 = p2 - s0;
  const Vector6d c1 = (d1 * t2 * t2 - d2 * t1 * t1) / (t1 * t2 * (t2 - t1));
  return c1.normalized();
}

inline double angle(const Vector6d& a, const Vector6d& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0));
}

}  // namespace oracle
