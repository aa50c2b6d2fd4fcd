#include "balanced/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace balanced {

CommutantMatrix commutant_matrix(const Sym3& m) {
  const auto [u, v, w, x, y, z] = m;
  CommutantMatrix c;
  c << 0, 2 * y, -2 * z,
      -2 * x, 0, 2 * z,
      2 * x, -2 * y, 0,
      v - w, -z, y,
      z, w - u, -x,
      -y, x, u - v;
  return c;
}

Eigen::Matrix3d antisymmetric(double xi, double eta, double zeta) {
  Eigen::Matrix3d r;
  r << 0, zeta, -eta,
      -zeta, 0, xi,
      eta, -xi, 0;
  return r;
}

DegeneracyCertificate degeneracy_gap(const Sym3& m) {
  const Eigen::JacobiSVD<CommutantMatrix> svd(commutant_matrix(m), Eigen::ComputeFullV);
  const Eigen::Vector3d r = svd.matrixV().col(2);
  DegeneracyCertificate c;
  c.xi = r[0];
  c.eta = r[1];
  c.zeta = r[2];
  c.gap = svd.singularValues()[2];
  c.second = svd.singularValues()[1];
  c.scale = m.frobenius();
  const Eigen::Matrix3d mm = m.matrix();
  const Eigen::Matrix3d rr = antisymmetric(r[0], r[1], r[2]);
  c.residual = (mm * rr - rr * mm).norm();
  return c;
}

C1Result check_c1(const Sym3& m, double tol) {
  const double scale = m.frobenius();
  if (std::abs(m.x) > tol * scale || std::abs(m.y) > tol * scale)
    throw std::invalid_argument("check_c1 requires x = y = 0; use check_c2");
  const auto [u, v, w, x, y, z] = m;
  C1Result r;
  if (std::abs(z) <= tol * scale) {
    r.residual = (u - v) * (v - w) * (w - u);
    if (std::abs(r.residual) <= tol * scale * scale * scale) r.branch = C1Branch::DiagonalRepeat;
  } else {
    r.residual = z * z + (v - w) * (w - u);
    if (std::abs(r.residual) <= tol * scale * scale) r.branch = C1Branch::OffDiagonal;
  }
  return r;
}

Eigen::Vector3d c2_polynomials(const Sym3& m) {
  const auto [u, v, w, x, y, z] = m;
  return {x * (y * y - z * z) + (v - w) * y * z,
          y * (z * z - x * x) + (w - u) * z * x,
          z * (x * x - y * y) + (u - v) * x * y};
}

C2Result check_c2(const Sym3& m, double tol) {
  const double scale = m.frobenius();
  int small = 0;
  for (double e : {m.x, m.y, m.z})
    if (std::abs(e) <= tol * scale) ++small;
  if (small >= 2) throw std::invalid_argument("check_c2 requires at most one vanishing off-diagonal entry; use check_c1");
  const Eigen::Vector3d c = c2_polynomials(m);
  const double bound = tol * scale * scale * scale;
  return {c[0], c[1], c[2], c.cwiseAbs().maxCoeff() <= bound};
}

bool some_three_equal(const MassSystem& ms, double tol) {
  if (ms.size() != 4) throw std::invalid_argument("some_three_equal requires 4 masses");
  const auto close = [&](std::size_t i, std::size_t j) {
    return std::abs(ms[i] - ms[j]) <= tol * std::max(ms[i], ms[j]);
  };
  for (std::size_t skip = 0; skip < 4; ++skip) {
    std::size_t idx[3];
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != skip) idx[n++] = i;
    if (close(idx[0], idx[1]) && close(idx[1], idx[2]) && close(idx[0], idx[2])) return true;
  }
  return false;
}

bool tetra_inertia_degenerate(const MassSystem& ms, double tol) {
  if (ms.size() != 4) throw std::invalid_argument("tetra_inertia_degenerate requires 4 masses");
  return degeneracy_gap(inertia_matrix(ms, SquaredDistances::tetrahedron())).degenerate(tol);
}

}  // namespace balanced
