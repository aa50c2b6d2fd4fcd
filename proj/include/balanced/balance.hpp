#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "balanced/forces.hpp"
#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace balanced {

/// One residual per triple i<j<k (0-based), in lexicographic order.
/// For four bodies the entries are P123, P124, P134, P234.
struct BalanceResidual {
  std::vector<std::array<int, 3>> triples;
  std::vector<double> values;

  double max_abs() const;
  /// Residual of the triple (i,j,k), 0-based, any order of indices.
  double at(int i, int j, int k) const;
  /// P123 - P124 + P134 - P234 (four bodies only).
  double alternating_sum() const;
};

/// Determinant form P_ijk = -1/2 nabla_ijk + 1/2 sum_l Y^l_ijk for n >= 3.
/// `s` is the n x n table of squared distances; off-diagonal entries that are
/// NaN (missing) or non-positive are rejected.
BalanceResidual balance_residuals_general(std::span<const double> masses, const Eigen::MatrixXd& s,
                                          const PotentialLaw& law = {});

/// Expanded four-body forms. These equal -2 times the determinant form.
BalanceResidual balance_residuals_4body(const MassSystem& ms, const SquaredDistances& s,
                                        const PotentialLaw& law = {});

/// Single remaining equation when m4 = m2, b1 = b2 = b, d1 = d2 = d. It is
/// P134 under that substitution, hence -P123.
double symmetric_balance_residual(double m1, double m2, double m3, double a, double b, double d,
                                  double f, const PotentialLaw& law = {});

/// M^2 * max|phi'(s)| * (max s)^2: residuals divided by this are invariant
/// under s -> lambda s.
double balance_scale(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law = {});

struct BalanceCheck {
  bool balanced = false;
  double max_raw = 0;
  double max_normalized = 0;
};

BalanceCheck is_balanced(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law,
                         double tol);

}  // namespace balanced
