#pragma once

#include <vector>

#include "balanced/forces.hpp"

namespace balanced {

/// 2 m1 (phi(a0) - phi(b0)) - (m1 + m2) a0 phi'(b0)
double planar_K(double m1, double m2, double a0, double b0, const PotentialLaw& law = {});

/// Jacobian (2x4) in (a, b, d, f) of the pair (symmetric balance residual,
/// Cayley-Menger determinant) at the planar rhombus (a0, b0, b0, 4 b0 - a0),
/// masses (m1, m2, m1, m2); central differences.
Eigen::Matrix<double, 2, 4> planar_linearization(double m1, double m2, double a0, double b0,
                                                 const PotentialLaw& law = {}, double h = 1e-6);

struct PlanarWc {
  double lambda_a = 0, lambda_f = 0;
  /// exact determinant of the map's derivative
  double jacobian_det = 0;
};

/// (a, f) -> (2 m1 phi(a) + 2 m2 phi(c), 2 m2 phi(f) + 2 m1 phi(c)), c = (a + f)/4.
PlanarWc planar_wc_restricted(double m1, double m2, double a, double f, const PotentialLaw& law = {});

/// m - m^{-3/2} + 8 (1 - m)(1 + m)^{-3/2}
double planar_degeneracy_function(double m);
double planar_degeneracy_derivative(double m);

/// Root of planar_degeneracy_function in (0.1, 0.9); Newtonian law only.
double planar_degenerate_ratio();

struct RoundCheck {
  bool round = false;
  /// eigenvalue gap of the nonzero 2x2 block of B
  double gap = 0;
};

/// |m1 a - m2 f| < tol * max(m1 a, m2 f)
RoundCheck planar_inertia_round(double m1, double m2, double a, double f, double tol = 1e-10);

/// Long diagonal a of the central planar rhombus with f = 1: solves
/// lambda_a(a, 1) = lambda_f(a, 1).
double central_planar_rhombus(double m1, double m2, const PotentialLaw& law = {});

struct RatioScanPoint {
  double ratio = 0, a = 0, value = 0;  // value = m1 a - m2 f with m2 = 1, f = 1
};

std::vector<RatioScanPoint> planar_ratio_scan(double lo, double hi, int n, const PotentialLaw& law = {});

/// Ratios where m1 a - m2 f changes sign along a scan (linear interpolation).
std::vector<double> sign_changes(const std::vector<RatioScanPoint>& scan);

}  // namespace balanced
