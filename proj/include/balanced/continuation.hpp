#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "balanced/forces.hpp"
#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace balanced {

struct ContinuationOptions {
  int steps = 50;
  double h = 1e-3;
  double h_min = 1e-6;
  double h_max = 1e-2;
  /// Halve h on corrector failure, double after four consecutive successes.
  bool adaptive = true;
  int max_newton = 25;
  double fd_step = 1e-6;
  /// +1 or -1: which half of the curve to follow.
  int orientation = 1;
  /// Clamp the last step so the branch ends exactly at this arclength.
  std::optional<double> stop_at_arclength;
};

struct BranchPoint {
  /// Normalized to component sum 6.
  SquaredDistances s;
  /// Sum of the pseudo-arclength steps t.(s_k - s_{k-1}).
  double arclength = 0;
  /// Eigenvalues of A, ascending.
  Eigen::Vector3d lambdas;
  /// Smallest singular value of the commutant matrix of A, divided by |A|_F.
  double gap = 0;
  /// is_balanced(...).max_normalized
  double balance_residual = 0;
  double cayley_menger = 0;
  /// Cayley-Menger determinant is not positive: no longer a spatial configuration.
  bool non_embeddable = false;
};

struct Branch {
  int root_index = 0;
  double root = 0;
  /// 0-based indices of the coalescing eigenvalue pair, in the eigenbasis of B
  /// followed continuously from the tetrahedron (ascending order there).
  std::array<int, 2> pair{};
  /// Unit tangent at the tetrahedron (component sum zero).
  Vector6d seed_direction;
  std::vector<BranchPoint> points;
  bool truncated = false;
  std::string diagnostic;
};

/// Requires no three equal masses and root_index in {0,1,2}.
Branch continue_branch(const MassSystem& ms, int root_index, const ContinuationOptions& opt = {});

enum class Z2Family { AEqBEqD, Cone };

/// Closed-form symmetric families for masses (m1, m2, m3, m2).
/// AEqBEqD: s = (t, t, t, t, t, f).
/// Cone: alpha = -M/2, theta = t and (psi, phi) = t (cos chi, sin chi), with chi
/// solving the symmetric balance equation by Newton; sheet 0 or 1 picks one of
/// the two solutions (chi differs by pi).
SquaredDistances z2_branch_oracle(double m1, double m2, double m3, Z2Family family, double t,
                                  double f = 1.0, int sheet = 0);

/// Angle chi0 of the line tangent to the cone family at t = 0 (sheet 0).
double z2_cone_tangent_angle(double m1, double m2, double m3);

/// s = (t, t, t, f, f, f) for masses (m1, m, m, m).
SquaredDistances z3_branch_oracle(double m1, double m, double t, double f = 1.0);

/// Rows v1, v2, v3: an orthonormal basis adapted to masses (m1, m, m, m).
Eigen::Matrix<double, 3, 4> z3_basis(double m1, double m);

/// The matrix A expressed in another mu^{-1}-orthonormal basis (rows of v).
Eigen::Matrix3d wc_matrix_in_basis(const MassSystem& ms, const SquaredDistances& s,
                                   const Eigen::Matrix<double, 3, 4>& v, const PotentialLaw& law = {});

}  // namespace balanced
