#pragma once

#include <Eigen/Core>

#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace balanced {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Newtonian law in squared-distance form: phi(s) = Phi'(s) with
/// Phi(s) = G s^{-1/2}.
struct PotentialLaw {
  double G = 1.0;

  double phi(double s) const;
  double phi_prime(double s) const;
  /// Inverse of phi on (-inf, 0); throws std::invalid_argument for w >= 0.
  double phi_inverse(double w) const;
};

/// Wintner-Conley matrix A in the {u1,u2,u3} basis. Stored as a Sym3 whose
/// (u,v,w,x,y,z) slots hold (alpha, beta, gamma, delta, eps, phi):
/// delta = entry(2,3), eps = entry(1,3), phi = entry(1,2).
using WcMatrix = Sym3;

/// The constant linear map taking (phi(a), phi(b1), phi(b2), phi(d1), phi(d2), phi(f))
/// to the A entries (alpha, beta, gamma, delta, eps, phi).
Matrix6d force_linear_map(const MassSystem& ms);

/// Requires four masses and positive distances.
WcMatrix wc_matrix(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law = {});

/// Inverse of wc_matrix. Throws std::invalid_argument when A is not in the
/// image of the force map (some recovered phi-value is >= 0) and
/// NumericalError if the linear map is singular.
SquaredDistances wc_to_distances(const WcMatrix& A, const MassSystem& ms, const PotentialLaw& law = {});

/// Coordinates adapted to the block form of A when m2 = m4, b1 = b2, d1 = d2.
struct SymmetricCoords {
  double alpha = 0, theta = 0, psi = 0, phi = 0;
};

/// Requires delta = eps = 0 up to tol * |A|_F; throws std::invalid_argument otherwise.
SymmetricCoords symmetric_coords(const WcMatrix& A, double tol = 1e-12);
WcMatrix from_symmetric_coords(const SymmetricCoords& c);
/// phi^2 + psi^2 - theta^2; vanishes when gamma equals an eigenvalue of the upper block.
double symmetric_cone_residual(const SymmetricCoords& c);

}  // namespace balanced
