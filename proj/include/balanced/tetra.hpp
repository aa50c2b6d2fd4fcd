#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "balanced/forces.hpp"
#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace balanced {

using KMatrix = Eigen::Matrix<double, 4, 6>;

/// Linearized balance equations at the unit tetrahedron, up to the factor
/// phi'(1). Rows P123, P124, P134, P234; columns (da, db1, db2, dd1, dd2, df).
KMatrix k_matrix(const MassSystem& ms);
/// Numerical rank with threshold 1e-10 * M.
int k_rank(const MassSystem& ms);

struct KernelVectors {
  Vector6d e1, e2, e3;
};

/// E1, E2, E3 by formula, for any masses.
KernelVectors e_vectors(const MassSystem& ms);
/// Same as e_vectors, but rejects masses with three equal: then the vectors
/// are dependent and the three-equal family must be used instead.
KernelVectors kernel_vectors(const MassSystem& ms);

/// dA-entries (alpha..phi) = phi'(1) L (da..df) at the unit tetrahedron.
Matrix6d l_matrix(const MassSystem& ms);

struct MassCubic {
  double c3 = 0, c2 = 0, c1 = 0, c0 = 0;
  /// Ascending.
  std::array<double, 3> roots{};

  double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
  double derivative(double x) const { return (3 * c3 * x + 2 * c2) * x + c1; }
};

/// E(x) = M x^3 + 2 e2 x^2 + 3 e3 x + 4 e4 with e_k the elementary symmetric
/// functions of the masses.
MassCubic mass_cubic(const MassSystem& ms);

/// F'(y) where F(y) = prod (1 + m_i y).
double f_prime(const MassSystem& ms, double y);

/// Factors c_i with c2_polynomials(L(E2) + x L(E3))_i = c_i E(x).
std::array<double, 3> trip_prefactors(const MassSystem& ms);

struct Proportionality {
  std::array<double, 3> q{};
  std::array<double, 3> predicted{};
  /// cube of |L(E2)| + |x| |L(E3)|, the natural size of q
  double scale = 0;

  double max_error() const;
};

Proportionality verify_proportionality(const MassSystem& ms, double x);

struct TangentDirection {
  double root = 0;
  int multiplicity = 1;
  /// E2 + root E3
  Vector6d raw;
  /// raw projected to component sum zero and normalized
  Vector6d direction;
  /// Indices (ascending eigenvalue order of the tetrahedron's B) of the
  /// eigenvalue pair of A that coalesces along this direction.
  std::array<int, 2> pair{};
  /// max |K direction|
  double kernel_residual = 0;
  double proportionality_residual = 0;
};

/// One entry per distinct root of E; repeated roots carry multiplicity > 1.
std::vector<TangentDirection> tangent_directions(const MassSystem& ms);

}  // namespace balanced
