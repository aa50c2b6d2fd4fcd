#include "balanced/forces.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "balanced/error.hpp"

namespace balanced {

double PotentialLaw::phi(double s) const { return -0.5 * G * std::pow(s, -1.5); }

double PotentialLaw::phi_prime(double s) const { return 0.75 * G * std::pow(s, -2.5); }

double PotentialLaw::phi_inverse(double w) const {
  if (!(w < 0.0)) throw std::invalid_argument("phi_inverse is defined only for negative values");
  return std::pow(-2.0 * w / G, -2.0 / 3.0);
}

namespace {

// A entries as a linear function of the six phi-values.
Vector6d entries_from_phi(const OrthonormalBasis& ob, const MassSystem& ms, const Vector6d& p) {
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  const double pa = p[0], pb1 = p[1], pb2 = p[2], pd1 = p[3], pd2 = p[4], pf = p[5];
  Vector6d e;
  e[0] = ob.X * (m2 * (m1 * pb2 + m3 * pd2) + m4 * (m1 * pb1 + m3 * pd1));
  e[1] = (m1 + m3) * pa + ob.Y * (m2 * (m3 * pb2 + m1 * pd2) + m4 * (m3 * pb1 + m1 * pd1));
  e[2] = (m2 + m4) * pf + ob.Z * (m1 * (m2 * pb1 + m4 * pb2) + m3 * (m2 * pd1 + m4 * pd2));
  e[3] = ob.V * (pd2 - pd1 + pb1 - pb2);
  e[4] = ob.U * (m1 * (pb1 - pb2) + m3 * (pd1 - pd2));
  e[5] = ob.T * (m2 * (pb2 - pd2) + m4 * (pb1 - pd1));
  return e;
}

Vector6d phi_values(const SquaredDistances& s, const PotentialLaw& law) {
  const Vector6d v = s.vector();
  Vector6d p;
  for (int k = 0; k < 6; ++k) p[k] = law.phi(v[k]);
  return p;
}

}  // namespace

Matrix6d force_linear_map(const MassSystem& ms) {
  const OrthonormalBasis ob = build_basis(ms);
  Matrix6d w;
  for (int k = 0; k < 6; ++k) w.col(k) = entries_from_phi(ob, ms, Vector6d::Unit(k));
  return w;
}

WcMatrix wc_matrix(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law) {
  s.require_positive();
  return Sym3::from_entries(entries_from_phi(build_basis(ms), ms, phi_values(s, law)));
}

SquaredDistances wc_to_distances(const WcMatrix& A, const MassSystem& ms, const PotentialLaw& law) {
  const Eigen::FullPivLU<Matrix6d> lu(force_linear_map(ms));
  if (!lu.isInvertible()) throw NumericalError("force linear map is singular");
  const Vector6d p = lu.solve(A.entries());
  Vector6d s;
  for (int k = 0; k < 6; ++k) {
    if (!(p[k] < 0.0)) throw std::invalid_argument("not in image of force map");
    s[k] = law.phi_inverse(p[k]);
  }
  return SquaredDistances::from_vector(s);
}

SymmetricCoords symmetric_coords(const WcMatrix& A, double tol) {
  const double scale = std::max(A.frobenius(), 1e-300);
  if (std::abs(A.x) > tol * scale || std::abs(A.y) > tol * scale)
    throw std::invalid_argument("symmetric_coords requires delta = eps = 0 (block form)");
  return {A.u, A.w - 0.5 * (A.u + A.v), 0.5 * (A.u - A.v), A.z};
}

WcMatrix from_symmetric_coords(const SymmetricCoords& c) {
  WcMatrix a;
  a.u = c.alpha;
  a.v = c.alpha - 2.0 * c.psi;
  a.w = c.alpha + c.theta - c.psi;
  a.z = c.phi;
  return a;
}

double symmetric_cone_residual(const SymmetricCoords& c) {
  return c.phi * c.phi + c.psi * c.psi - c.theta * c.theta;
}

}  // namespace balanced
