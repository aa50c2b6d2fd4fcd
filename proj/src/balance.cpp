#include "balanced/balance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace balanced {

double BalanceResidual::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double BalanceResidual::at(int i, int j, int k) const {
  std::array<int, 3> t{i, j, k};
  std::sort(t.begin(), t.end());
  for (std::size_t n = 0; n < triples.size(); ++n)
    if (triples[n] == t) return values[n];
  throw std::invalid_argument("triple not present in residual list");
}

double BalanceResidual::alternating_sum() const {
  if (values.size() != 4) throw std::invalid_argument("alternating_sum is defined for four bodies");
  return values[0] - values[1] + values[2] - values[3];
}

BalanceResidual balance_residuals_general(std::span<const double> masses, const Eigen::MatrixXd& s,
                                          const PotentialLaw& law) {
  const int n = static_cast<int>(masses.size());
  if (n < 3) throw std::invalid_argument("balance residuals need at least 3 bodies");
  if (s.rows() != n || s.cols() != n) throw std::invalid_argument("distance table must be n x n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::isnan(s(i, j))) throw std::invalid_argument("missing distance entry");
      if (!(s(i, j) > 0.0)) throw std::invalid_argument("squared distances must be positive");
    }

  const auto r = [&](int p, int q) { return s(p, q); };
  const auto ph = [&](int p, int q) { return law.phi(s(p, q)); };

  BalanceResidual out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Eigen::Matrix3d nabla;
        nabla << 1, 1, 1,
            masses[i] * (r(j, k) - r(k, i) - r(i, j)), masses[j] * (r(k, i) - r(i, j) - r(j, k)),
            masses[k] * (r(i, j) - r(j, k) - r(k, i)),
            ph(j, k), ph(k, i), ph(i, j);
        double ysum = 0.0;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          Eigen::Matrix3d y;
          y << 1, 1, 1,
              r(j, k) + r(i, l), r(k, i) + r(j, l), r(i, j) + r(k, l),
              ph(i, l), ph(j, l), ph(k, l);
          ysum += masses[l] * y.determinant();
        }
        out.triples.push_back({i, j, k});
        out.values.push_back(-0.5 * nabla.determinant() + 0.5 * ysum);
      }
  return out;
}

BalanceResidual balance_residuals_4body(const MassSystem& ms, const SquaredDistances& s,
                                        const PotentialLaw& law) {
  if (ms.size() != 4) throw std::invalid_argument("balance_residuals_4body requires 4 masses");
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  const auto [a, b1, b2, d1, d2, f] = s;
  const double pa = law.phi(a), pb1 = law.phi(b1), pb2 = law.phi(b2), pd1 = law.phi(d1),
               pd2 = law.phi(d2), pf = law.phi(f);

  const double p123 = m1 * (d2 - a - b2) * (pa - pb2) - m4 * (d2 + b1) * (pf - pd1) +
                      m2 * (a - b2 - d2) * (pb2 - pd2) - m4 * (a + f) * (pd1 - pb1) +
                      m3 * (b2 - d2 - a) * (pd2 - pa) - m4 * (b2 + d1) * (pb1 - pf);
  const double p124 = m1 * (f - b1 - b2) * (pb1 - pb2) - m3 * (f + a) * (pd2 - pd1) +
                      m2 * (b1 - b2 - f) * (pb2 - pf) - m3 * (b1 + d2) * (pd1 - pa) +
                      m4 * (b2 - f - b1) * (pf - pb1) - m3 * (b2 + d1) * (pa - pd2);
  const double p134 = m1 * (d1 - b1 - a) * (pb1 - pa) - m2 * (d1 + b2) * (pd2 - pf) +
                      m3 * (b1 - a - d1) * (pa - pd1) - m2 * (b1 + d2) * (pf - pb2) +
                      m4 * (a - d1 - b1) * (pd1 - pb1) - m2 * (a + f) * (pb2 - pd2);
  const double p234 = m2 * (d1 - f - d2) * (pf - pd2) - m1 * (d1 + b2) * (pa - pb1) +
                      m3 * (f - d2 - d1) * (pd2 - pd1) - m1 * (f + a) * (pb1 - pb2) +
                      m4 * (d2 - d1 - f) * (pd1 - pf) - m1 * (d2 + b1) * (pb2 - pa);

  return {{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, {p123, p124, p134, p234}};
}

double symmetric_balance_residual(double m1, double m2, double m3, double a, double b, double d,
                                  double f, const PotentialLaw& law) {
  const double pa = law.phi(a), pb = law.phi(b), pd = law.phi(d), pf = law.phi(f);
  return m1 * (d - b - a) * (pb - pa) - m2 * (d + b) * (pd - pf) +
         m3 * (b - a - d) * (pa - pd) - m2 * (b + d) * (pf - pb) +
         m2 * (a - d - b) * (pd - pb) - m2 * (a + f) * (pb - pd);
}

double balance_scale(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law) {
  const double M = ms.total();
  // phi' is decreasing, so its largest magnitude sits at the smallest distance.
  return M * M * std::abs(law.phi_prime(s.min())) * s.max() * s.max();
}

BalanceCheck is_balanced(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law,
                         double tol) {
  s.require_positive();
  const BalanceResidual r = balance_residuals_4body(ms, s, law);
  BalanceCheck c;
  c.max_raw = r.max_abs();
  c.max_normalized = c.max_raw / balance_scale(ms, s, law);
  c.balanced = c.max_normalized <= tol;
  return c;
}

}  // namespace balanced
