#pragma once

#include <Eigen/Core>

#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace balanced {

using CommutantMatrix = Eigen::Matrix<double, 6, 3>;

/// Linear map (xi, eta, zeta) -> [m, R] written in the (u,v,w,x,y,z) order, with
/// R = [[0, zeta, -eta], [-zeta, 0, xi], [eta, -xi, 0]].
CommutantMatrix commutant_matrix(const Sym3& m);

/// Antisymmetric matrix R built from (xi, eta, zeta).
Eigen::Matrix3d antisymmetric(double xi, double eta, double zeta);

struct DegeneracyCertificate {
  double xi = 0, eta = 0, zeta = 0;
  /// |[m, R]|_F
  double residual = 0;
  /// smallest singular value of the commutant matrix
  double gap = 0;
  /// middle singular value; also small near a triple eigenvalue
  double second = 0;
  /// |m|_F
  double scale = 0;

  bool degenerate(double tol) const { return gap < tol * scale; }
};

DegeneracyCertificate degeneracy_gap(const Sym3& m);

enum class C1Branch { NonDegenerate, DiagonalRepeat, OffDiagonal };

struct C1Result {
  C1Branch branch = C1Branch::NonDegenerate;
  /// (u-v)(v-w)(w-u) when z vanishes, z^2 + (v-w)(w-u) otherwise
  double residual = 0;
  bool degenerate() const { return branch != C1Branch::NonDegenerate; }
};

/// Requires |x|, |y| <= tol |m|_F; otherwise throws std::invalid_argument
/// (use check_c2).
C1Result check_c1(const Sym3& m, double tol = 1e-12);

struct C2Result {
  double c2a = 0, c2b = 0, c2c = 0;
  bool degenerate = false;
};

/// The three polynomials without the precondition check.
Eigen::Vector3d c2_polynomials(const Sym3& m);

/// Requires at most one off-diagonal entry below tol |m|_F; otherwise throws
/// std::invalid_argument (use check_c1). Degenerate when all three values are
/// below tol |m|_F^3.
C2Result check_c2(const Sym3& m, double tol = 1e-10);

/// Whether some three of the four masses agree within tol (relative).
bool some_three_equal(const MassSystem& ms, double tol = 1e-12);

/// Degeneracy of the inertia matrix of the unit regular tetrahedron.
bool tetra_inertia_degenerate(const MassSystem& ms, double tol = 1e-9);

}  // namespace balanced
