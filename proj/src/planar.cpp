#include "balanced/planar.hpp"

#include <cmath>
#include <stdexcept>

#include "balanced/balance.hpp"
#include "balanced/error.hpp"
#include "balanced/shape.hpp"

namespace balanced {

namespace {

void require_positive(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!(x > 0)) throw std::invalid_argument("inputs must be positive");
}

// Bisection to a tight bracket, then Newton polish; f must change sign on [lo, hi].
template <class F, class D>
double bracketed_root(F f, D df, double lo, double hi) {
  double flo = f(lo);
  if (flo * f(hi) > 0) throw NumericalError("root not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-10 * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const double step = f(x) / df(x);
    x -= step;
    if (std::abs(step) < 1e-16 * std::abs(x)) break;
  }
  return x;
}

}  // namespace

double planar_K(double m1, double m2, double a0, double b0, const PotentialLaw& law) {
  require_positive({m1, m2, a0, b0});
  return 2 * m1 * (law.phi(a0) - law.phi(b0)) - (m1 + m2) * a0 * law.phi_prime(b0);
}

Eigen::Matrix<double, 2, 4> planar_linearization(double m1, double m2, double a0, double b0, const PotentialLaw& law,
                                                 double h) {
  require_positive({m1, m2, a0, b0});
  const double f0 = 4 * b0 - a0;
  if (!(f0 > 0)) throw std::invalid_argument("not a planar rhombus");
  const Eigen::Vector4d x0(a0, b0, b0, f0);
  auto eval = [&](const Eigen::Vector4d& x) {
    const double r = symmetric_balance_residual(m1, m2, m1, x[0], x[1], x[2], x[3], law);
    const double cm = cayley_menger({x[0], x[1], x[1], x[2], x[2], x[3]});
    return Eigen::Vector2d(r, cm);
  };
  Eigen::Matrix<double, 2, 4> jac;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d xp = x0, xm = x0;
    const double step = h * std::max(1.0, std::abs(x0[k]));
    xp[k] += step;
    xm[k] -= step;
    jac.col(k) = (eval(xp) - eval(xm)) / (2 * step);
  }
  return jac;
}

PlanarWc planar_wc_restricted(double m1, double m2, double a, double f, const PotentialLaw& law) {
  require_positive({m1, m2, a, f});
  const double c = (a + f) / 4;
  PlanarWc out;
  out.lambda_a = 2 * m1 * law.phi(a) + 2 * m2 * law.phi(c);
  out.lambda_f = 2 * m2 * law.phi(f) + 2 * m1 * law.phi(c);
  const double pa = law.phi_prime(a), pf = law.phi_prime(f), pc = law.phi_prime(c);
  out.jacobian_det = (m1 * m1 * pa + m2 * m2 * pf) * pc + 4 * m1 * m2 * pa * pf;
  return out;
}

double planar_degeneracy_function(double m) {
  if (!(m > 0)) throw std::invalid_argument("mass ratio must be positive");
  return m - std::pow(m, -1.5) + 8 * (1 - m) * std::pow(1 + m, -1.5);
}

double planar_degeneracy_derivative(double m) {
  if (!(m > 0)) throw std::invalid_argument("mass ratio must be positive");
  return 1 + 1.5 * std::pow(m, -2.5) - 8 * std::pow(1 + m, -1.5) - 12 * (1 - m) * std::pow(1 + m, -2.5);
}

double planar_degenerate_ratio() {
  const double g = bracketed_root(planar_degeneracy_function, planar_degeneracy_derivative, 0.1, 0.9);
  if (std::abs(planar_degeneracy_function(g)) >= 1e-12) throw NumericalError("degenerate ratio did not converge");
  return g;
}

RoundCheck planar_inertia_round(double m1, double m2, double a, double f, double tol) {
  require_positive({m1, m2, a, f});
  // Nonzero block of B for the planar rhombus: diag(m1 a / 2, m2 f / 2).
  const MassSystem ms({m1, m2, m1, m2});
  const double b = (a + f) / 4;
  const Eigen::Matrix3d bm = inertia_matrix(ms, {a, b, b, b, b, f}).matrix();
  const Eigen::Matrix2d block = bm.bottomRightCorner<2, 2>();
  RoundCheck out;
  out.gap = std::abs(block(0, 0) - block(1, 1)) + 2 * std::abs(block(0, 1));
  out.round = std::abs(m1 * a - m2 * f) < tol * std::max(m1 * a, m2 * f);
  return out;
}

double central_planar_rhombus(double m1, double m2, const PotentialLaw& law) {
  require_positive({m1, m2});
  auto g = [&](double la) {
    const auto w = planar_wc_restricted(m1, m2, std::exp(la), 1.0, law);
    return w.lambda_a - w.lambda_f;
  };
  auto dg = [&](double la) {
    const double h = 1e-6;
    return (g(la + h) - g(la - h)) / (2 * h);
  };
  // scan log a for the sign change nearest the square
  const double span = std::log(100.0);
  const int n = 400;
  double prev = -span, gprev = g(prev);
  for (int k = 1; k <= n; ++k) {
    const double x = -span + 2 * span * k / n;
    const double gx = g(x);
    if (gx == 0) return std::exp(x);
    if ((gx < 0) != (gprev < 0)) return std::exp(bracketed_root(g, dg, prev, x));
    prev = x;
    gprev = gx;
  }
  throw NumericalError("central planar rhombus not found");
}

std::vector<RatioScanPoint> planar_ratio_scan(double lo, double hi, int n, const PotentialLaw& law) {
  require_positive({lo, hi});
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("scan needs lo < hi and n >= 2");
  std::vector<RatioScanPoint> out;
  for (int k = 0; k < n; ++k) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    const double a = central_planar_rhombus(r, 1.0, law);
    out.push_back({r, a, r * a - 1.0});
  }
  return out;
}

std::vector<double> sign_changes(const std::vector<RatioScanPoint>& scan) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
    const double v0 = scan[k].value, v1 = scan[k + 1].value;
    if (v0 == 0) {
      if (k == 0 || scan[k - 1].value * v1 < 0) out.push_back(scan[k].ratio);
    } else if (v0 * v1 < 0) {
      out.push_back(scan[k].ratio + (scan[k + 1].ratio - scan[k].ratio) * v0 / (v0 - v1));
    }
  }
  return out;
}

}  // namespace balanced
