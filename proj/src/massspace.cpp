#include "balanced/massspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace balanced {

MassSystem::MassSystem(std::vector<double> masses) : m_(std::move(masses)), total_(0.0) {
  if (m_.empty()) throw std::invalid_argument("mass system must contain at least one mass");
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (!(m_[i] > 0.0) || !std::isfinite(m_[i]))
      throw std::invalid_argument("mass m" + std::to_string(i + 1) + " must be finite and > 0");
    total_ += m_[i];
  }
}

OrthonormalBasis build_basis(const MassSystem& ms) {
  if (ms.size() != 4) throw std::invalid_argument("build_basis requires exactly 4 masses");
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  const double M = ms.total();
  const double s13 = m1 + m3, s24 = m2 + m4;

  OrthonormalBasis b;
  b.kappa << std::sqrt(1.0 / (M * s13 * s24)), std::sqrt(m1 * m3 / s13), std::sqrt(m2 * m4 / s24);
  b.u.row(0) << m1 * s24, -m2 * s13, m3 * s24, -m4 * s13;
  b.u.row(1) << 1.0, 0.0, -1.0, 0.0;
  b.u.row(2) << 0.0, 1.0, 0.0, -1.0;
  for (int j = 0; j < 3; ++j) b.u.row(j) *= b.kappa[j];

  b.X = M / (s13 * s24);
  b.Y = 1.0 / s13;
  b.Z = 1.0 / s24;
  b.T = std::sqrt(M * m1 * m3 / s24) / s13;
  b.U = std::sqrt(M * m2 * m4 / s13) / s24;
  b.V = std::sqrt(m1 * m2 * m3 * m4 / (s13 * s24));
  return b;
}

double verify_orthonormal(const MassSystem& ms, const OrthonormalBasis& basis) {
  if (ms.size() != 4) throw std::invalid_argument("verify_orthonormal requires exactly 4 masses");
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 4; ++k) dot += basis.u(i, k) * basis.u(j, k) / ms[k];
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace balanced
