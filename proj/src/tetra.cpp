#include "balanced/tetra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "balanced/degeneracy.hpp"

namespace balanced {

namespace {

void require_four(const MassSystem& ms) {
  if (ms.size() != 4) throw std::invalid_argument("four masses required");
}

struct Symmetric {
  double e1, e2, e3, e4;
};

Symmetric elementary(const MassSystem& ms) {
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  return {m1 + m2 + m3 + m4,
          m1 * m2 + m1 * m3 + m1 * m4 + m2 * m3 + m2 * m4 + m3 * m4,
          m1 * m2 * m3 + m1 * m2 * m4 + m1 * m3 * m4 + m2 * m3 * m4,
          m1 * m2 * m3 * m4};
}

double polish(const MassCubic& e, double x) {
  for (int it = 0; it < 3; ++it) {
    const double d = e.derivative(x);
    if (d == 0.0) break;
    const double nx = x - e(x) / d;
    if (std::abs(e(nx)) >= std::abs(e(x))) break;
    x = nx;
  }
  return x;
}

}  // namespace

KMatrix k_matrix(const MassSystem& ms) {
  require_four(ms);
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  KMatrix k;
  k << m3 - m1, 0, m1 - m2, 0, m2 - m3, 0,
      0, m4 - m1, m1 - m2, 0, 0, m2 - m4,
      m1 - m3, m4 - m1, 0, m3 - m4, 0, 0,
      0, 0, 0, m3 - m4, m2 - m3, m4 - m2;
  return k;
}

int k_rank(const MassSystem& ms) {
  const Eigen::JacobiSVD<KMatrix> svd(k_matrix(ms));
  const double thr = 1e-10 * ms.total();
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > thr) ++r;
  return r;
}

KernelVectors e_vectors(const MassSystem& ms) {
  require_four(ms);
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  KernelVectors k;
  k.e1 = Vector6d::Ones();
  k.e2 << m2 * m4, m2 * m3, m3 * m4, m1 * m2, m1 * m4, m1 * m3;
  k.e3 << m2 + m4, m2 + m3, m3 + m4, m1 + m2, m1 + m4, m1 + m3;
  return k;
}

KernelVectors kernel_vectors(const MassSystem& ms) {
  require_four(ms);
  if (some_three_equal(ms))
    throw std::invalid_argument(
        "three equal masses: kernel of K has dimension > 3; use the three-equal-mass family");
  return e_vectors(ms);
}

Matrix6d l_matrix(const MassSystem& ms) {
  require_four(ms);
  const OrthonormalBasis b = build_basis(ms);
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  const double X = b.X, Y = b.Y, Z = b.Z, T = b.T, U = b.U, V = b.V;
  Matrix6d l;
  l << 0, X * m1 * m4, X * m1 * m2, X * m3 * m4, X * m2 * m3, 0,
      m1 + m3, Y * m3 * m4, Y * m2 * m3, Y * m1 * m4, Y * m1 * m2, 0,
      0, Z * m1 * m2, Z * m1 * m4, Z * m2 * m3, Z * m3 * m4, m2 + m4,
      0, V, -V, -V, V, 0,
      0, U * m1, -U * m1, U * m3, -U * m3, 0,
      0, T * m4, T * m2, -T * m4, -T * m2, 0;
  return l;
}

MassCubic mass_cubic(const MassSystem& ms) {
  require_four(ms);
  const Symmetric s = elementary(ms);
  MassCubic e;
  e.c3 = s.e1;
  e.c2 = 2 * s.e2;
  e.c1 = 3 * s.e3;
  e.c0 = 4 * s.e4;

  // Depressed cubic t^3 + p t + q with x = t - c2 / (3 c3).
  const double a = e.c2 / e.c3, bb = e.c1 / e.c3, c = e.c0 / e.c3;
  const double shift = a / 3.0;
  const double p = bb - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * bb / 3.0 + c;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  const double tiny = 1e-12 * std::pow(std::max({std::abs(p), std::cbrt(std::abs(q)), 1e-300}), 3);

  std::array<double, 3> r{};
  if (p < 0.0 && disc >= -tiny) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double th = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) r[k] = m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0) - shift;
  } else if (std::abs(p) <= tiny && std::abs(q) <= tiny) {
    r = {-shift, -shift, -shift};
  } else {
    Eigen::Matrix3d comp;
    comp << -a, -bb, -c,
        1, 0, 0,
        0, 1, 0;
    const Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
    for (int k = 0; k < 3; ++k) r[k] = es.eigenvalues()[k].real();
  }
  for (double& x : r) x = polish(e, x);
  std::sort(r.begin(), r.end());
  e.roots = r;
  return e;
}

double f_prime(const MassSystem& ms, double y) {
  require_four(ms);
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double prod = ms[i];
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) prod *= 1.0 + ms[j] * y;
    total += prod;
  }
  return total;
}

std::array<double, 3> trip_prefactors(const MassSystem& ms) {
  require_four(ms);
  const double m1 = ms[0], m2 = ms[1], m3 = ms[2], m4 = ms[3];
  const double M = ms.total();
  const double s13 = m1 + m3, s24 = m2 + m4;
  const double V = std::sqrt(m1 * m2 * m3 * m4 / (s13 * s24));
  const double c1 = (m1 - m3) * (m2 - m4) / (s13 * s24) * V * 2.0 * M *
                    (-m3 * m2 * m4 - m1 * m2 * m4 + m1 * m2 * m3 + m1 * m3 * m4);
  // With every kappa positive, u1 flips relative to the opposite orientation
  // and the last two factors change sign.
  const double c2 = (m1 - m3) * (m1 - m3) * (m2 - m4) / s13 * m1 * m3 * std::sqrt(M * m2 * m4 / s13);
  const double c3 = (m1 - m3) * (m2 - m4) * (m2 - m4) / s24 * m2 * m4 * std::sqrt(M * m1 * m3 / s24);
  return {c1, c2, c3};
}

double Proportionality::max_error() const {
  double e = 0.0;
  for (int i = 0; i < 3; ++i) e = std::max(e, std::abs(q[i] - predicted[i]));
  return e;
}

Proportionality verify_proportionality(const MassSystem& ms, double x) {
  const KernelVectors k = kernel_vectors(ms);
  const Matrix6d l = l_matrix(ms);
  const Vector6d le2 = l * k.e2, le3 = l * k.e3;
  const Eigen::Vector3d q = c2_polynomials(Sym3::from_entries(le2 + x * le3));
  const double ex = mass_cubic(ms)(x);
  const auto c = trip_prefactors(ms);
  Proportionality p;
  for (int i = 0; i < 3; ++i) {
    p.q[i] = q[i];
    p.predicted[i] = c[i] * ex;
  }
  p.scale = std::pow(le2.norm() + std::abs(x) * le3.norm(), 3);
  return p;
}

std::vector<TangentDirection> tangent_directions(const MassSystem& ms) {
  const KernelVectors k = kernel_vectors(ms);
  const MassCubic e = mass_cubic(ms);
  const KMatrix km = k_matrix(ms);
  const Matrix6d l = l_matrix(ms);

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> b0(
      inertia_matrix(ms, SquaredDistances::tetrahedron()).matrix());
  const Eigen::Matrix3d q0 = b0.eigenvectors();

  std::vector<TangentDirection> out;
  const double rtol = 1e-7 * std::max(1.0, std::abs(e.roots[0]));
  for (double x : e.roots) {
    if (!out.empty() && std::abs(out.back().root - x) <= rtol) {
      ++out.back().multiplicity;
      continue;
    }
    TangentDirection t;
    t.root = x;
    t.raw = k.e2 + x * k.e3;
    Vector6d d = t.raw - Vector6d::Constant(t.raw.mean());
    t.direction = d / d.norm();
    t.kernel_residual = (km * t.direction).cwiseAbs().maxCoeff();
    t.proportionality_residual = verify_proportionality(ms, x).max_error();

    // A moves to first order along L d; near the tetrahedron its eigenvectors
    // follow those of B, so compare the diagonal of L d in the B eigenbasis.
    const Eigen::Matrix3d da = Sym3::from_entries(l * t.direction).matrix();
    const Eigen::Vector3d diag = (q0.transpose() * da * q0).diagonal();
    double best = INFINITY;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(diag[i] - diag[j]) < best) {
          best = std::abs(diag[i] - diag[j]);
          t.pair = {i, j};
        }
    out.push_back(t);
  }
  return out;
}

}  // namespace balanced
