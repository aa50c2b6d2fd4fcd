#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace balanced {

/// Positive point masses in input order, plus their total.
class MassSystem {
 public:
  /// Throws std::invalid_argument if empty or any mass is not strictly positive.
  explicit MassSystem(std::vector<double> masses);

  std::size_t size() const { return m_.size(); }
  double operator[](std::size_t i) const { return m_[i]; }
  std::span<const double> masses() const { return m_; }
  /// Left-to-right sum of the masses.
  double total() const { return total_; }

 private:
  std::vector<double> m_;
  double total_;
};

/// The mu^{-1}-orthonormal basis {u1,u2,u3} of the codisposition space for
/// four bodies, with the mass constants used by the inertia and
/// Wintner-Conley formulas.
struct OrthonormalBasis {
  /// Row j holds u_{j+1}; every row sums to zero.
  Eigen::Matrix<double, 3, 4> u;
  Eigen::Vector3d kappa;
  double X = 0, Y = 0, Z = 0, T = 0, U = 0, V = 0;
};

/// Requires exactly four positive masses.
OrthonormalBasis build_basis(const MassSystem& ms);

/// max |<u_i,u_j>_{mu^{-1}} - delta_ij|.
double verify_orthonormal(const MassSystem& ms, const OrthonormalBasis& basis);

}  // namespace balanced
