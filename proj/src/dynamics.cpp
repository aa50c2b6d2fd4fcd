#include "balanced/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "balanced/balance.hpp"
#include "balanced/error.hpp"

namespace balanced {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Eigenbasis of B, rotated within (near-)degenerate clusters so that it also
// diagonalizes A.
Eigen::Matrix3d joint_eigenbasis(const Eigen::Matrix3d& b, const Eigen::Matrix3d& a) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(b);
  Eigen::Matrix3d q = es.eigenvectors();
  const Eigen::Vector3d ev = es.eigenvalues();
  const double tol = 1e-9 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  int start = 0;
  while (start < 3) {
    int end = start + 1;
    while (end < 3 && ev[end] - ev[end - 1] < tol) ++end;
    const int len = end - start;
    if (len > 1) {
      const MatrixXd qs = q.middleCols(start, len);
      const MatrixXd block = qs.transpose() * a * qs;
      const Eigen::SelfAdjointEigenSolver<MatrixXd> inner(block);
      q.middleCols(start, len) = qs * inner.eigenvectors();
    }
    start = end;
  }
  return q;
}

struct Bodies {
  std::vector<double> m;
  int dim;
};

// State layout: positions (n*dim) then velocities (n*dim).
VectorXd accelerations(const Bodies& sys, const VectorXd& pos, const PotentialLaw& law) {
  const int n = static_cast<int>(sys.m.size());
  const int d = sys.dim;
  VectorXd acc = VectorXd::Zero(n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const VectorXd diff = pos.segment(j * d, d) - pos.segment(i * d, d);
      // grad of sum m_i m_j Phi(s_ij): force on i is 2 m_i m_j phi(s) (r_i - r_j).
      const double w = -2.0 * law.phi(diff.squaredNorm());
      acc.segment(i * d, d) += sys.m[j] * w * diff;
      acc.segment(j * d, d) -= sys.m[i] * w * diff;
    }
  }
  return acc;
}

Vector6d pair_distances(const VectorXd& pos, int d) {
  Vector6d s;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairOrder[k];
    s[k] = (pos.segment(i * d, d) - pos.segment(j * d, d)).squaredNorm();
  }
  return s;
}

double energy(const Bodies& sys, const VectorXd& pos, const VectorXd& vel, const PotentialLaw& law) {
  const int n = static_cast<int>(sys.m.size());
  const int d = sys.dim;
  double e = 0;
  for (int i = 0; i < n; ++i) e += 0.5 * sys.m[i] * vel.segment(i * d, d).squaredNorm();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = (pos.segment(j * d, d) - pos.segment(i * d, d)).squaredNorm();
      e -= sys.m[i] * sys.m[j] * law.G / std::sqrt(s);
    }
  return e;
}

MatrixXd body_momentum(const Bodies& sys, const VectorXd& pos, const VectorXd& vel) {
  const int d = sys.dim;
  MatrixXd c = MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < sys.m.size(); ++i) {
    const VectorXd r = pos.segment(i * d, d);
    const VectorXd v = vel.segment(i * d, d);
    c += sys.m[i] * (v * r.transpose() - r * v.transpose());
  }
  return c;
}

VectorXd stack(const std::vector<VectorXd>& pts) {
  const int d = static_cast<int>(pts.front().size());
  VectorXd out(static_cast<int>(pts.size()) * d);
  for (std::size_t i = 0; i < pts.size(); ++i) out.segment(static_cast<int>(i) * d, d) = pts[i];
  return out;
}

}  // namespace

ConfigMatrix config_matrix(const MassSystem& ms, std::span<const Eigen::VectorXd> points, int dim) {
  if (ms.size() != 4 || points.size() != 4) throw std::invalid_argument("four bodies required");
  const int d = static_cast<int>(points[0].size());
  for (const auto& p : points)
    if (p.size() != d) throw std::invalid_argument("points of unequal dimension");
  if (dim == 0) dim = d;
  if (dim < d) throw std::invalid_argument("dimension too small");
  VectorXd centre = VectorXd::Zero(d);
  for (int i = 0; i < 4; ++i) centre += ms[i] * points[i];
  centre /= ms.total();
  const OrthonormalBasis basis = build_basis(ms);
  ConfigMatrix x = MatrixXd::Zero(dim, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) x.col(j).head(d) += basis.u(j, i) * (points[i] - centre);
  return x;
}

std::vector<Eigen::VectorXd> body_positions(const MassSystem& ms, const ConfigMatrix& x) {
  if (ms.size() != 4 || x.cols() != 3) throw std::invalid_argument("four bodies required");
  const OrthonormalBasis basis = build_basis(ms);
  std::vector<VectorXd> out(4, VectorXd::Zero(x.rows()));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) out[i] += basis.u(j, i) * x.col(j);
    out[i] /= ms[i];
  }
  return out;
}

Pairing degenerate_pairing(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law) {
  const Eigen::Matrix3d b = inertia_matrix(ms, s).matrix();
  const Eigen::Matrix3d a = wc_matrix(ms, s, law).matrix();
  const Eigen::Matrix3d q = joint_eigenbasis(b, a);
  const Eigen::Vector3d ad = (q.transpose() * a * q).diagonal();
  std::pair<int, int> best{0, 1};
  double gap = std::abs(ad[0] - ad[1]);
  for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}})
    if (std::abs(ad[i] - ad[j]) < gap) {
      gap = std::abs(ad[i] - ad[j]);
      best = {i, j};
    }
  return Pairing{{best}};
}

RelativeEquilibrium build_relative_equilibrium(const MassSystem& ms, const SquaredDistances& s,
                                               const Pairing& pairing, int dim, const PotentialLaw& law) {
  s.require_positive();
  if (!is_balanced(ms, s, law, 1e-8).balanced) throw std::invalid_argument("configuration is not balanced");
  if (dim <= 0 || dim % 2 != 0) throw std::invalid_argument("dimension must be even and positive");

  const Eigen::Matrix3d b = inertia_matrix(ms, s).matrix();
  const Eigen::Matrix3d a = wc_matrix(ms, s, law).matrix();
  RelativeEquilibrium re;
  re.q = joint_eigenbasis(b, a);
  re.sigma = (re.q.transpose() * b * re.q).diagonal();
  re.a = (re.q.transpose() * a * re.q).diagonal();
  re.dim = dim;
  re.pairing = pairing;
  for (int k = 0; k < 3; ++k) {
    if (re.a[k] >= 0) throw NumericalError("Wintner-Conley eigenvalue is not negative");
    re.freqs[k] = std::sqrt(-2.0 * re.a[k]);
  }

  std::array<int, 3> role{-1, -1, -1};
  for (auto [i, j] : pairing.internal) {
    if (i < 0 || i > 2 || j < 0 || j > 2 || i == j || role[i] != -1 || role[j] != -1)
      throw std::invalid_argument("malformed pairing");
    const double scale = std::max(std::abs(re.a[i]), std::abs(re.a[j]));
    if (std::abs(re.a[i] - re.a[j]) > 1e-7 * scale) throw std::invalid_argument("eigenvalue pairing unavailable");
    role[i] = j;
    role[j] = i;
  }
  const int external = static_cast<int>(std::count(role.begin(), role.end(), -1));
  if (dim < 3 + external) throw std::invalid_argument("dimension too small");

  re.x0 = MatrixXd::Zero(dim, 3);
  for (int k = 0; k < 3; ++k) re.x0.row(k) = std::sqrt(std::max(re.sigma[k], 0.0)) * re.q.col(k).transpose();

  re.omega = MatrixXd::Zero(dim, dim);
  auto rotate = [&](int p, int r, double w) {
    re.omega(r, p) = w;
    re.omega(p, r) = -w;
  };
  int next = 3;
  for (int k = 0; k < 3; ++k) {
    if (role[k] == -1) {
      rotate(k, next++, re.freqs[k]);
    } else if (role[k] > k) {
      const double w = std::sqrt(-(re.a[k] + re.a[role[k]]));
      re.freqs[k] = re.freqs[role[k]] = w;
      rotate(k, role[k], w);
    }
  }

  const MatrixXd xa = re.x0 * a;
  const double scale = std::max(xa.norm(), 1e-300);
  re.residual = (re.omega * re.omega * re.x0 - 2.0 * xa).cwiseAbs().maxCoeff() / scale;
  if (re.residual > 1e-9) throw NumericalError("Omega^2 X = 2 X A fails");
  return re;
}

IntegrationReport integrate_newton(const MassSystem& ms, const ConfigMatrix& x0, const ConfigMatrix& v0,
                                   double t_end, double dt, const PotentialLaw& law, int sample_every) {
  if (!(dt > 0) || !(t_end >= 0)) throw std::invalid_argument("time step must be positive");
  if (x0.rows() != v0.rows() || x0.cols() != v0.cols()) throw std::invalid_argument("shape mismatch");
  Bodies sys{{ms.masses().begin(), ms.masses().end()}, static_cast<int>(x0.rows())};
  const int nd = 4 * sys.dim;
  VectorXd pos = stack(body_positions(ms, x0));
  VectorXd vel = stack(body_positions(ms, v0));

  const Vector6d s0 = pair_distances(pos, sys.dim);
  if (s0.minCoeff() <= 0) throw std::invalid_argument("collision in initial data");
  const double e0 = energy(sys, pos, vel, law);
  const MatrixXd c0 = body_momentum(sys, pos, vel);
  const double escale = std::max(std::abs(e0), 1e-300);
  const double cscale = std::max(c0.norm(), 1e-300);

  IntegrationReport rep;
  auto record = [&]() {
    const Vector6d s = pair_distances(pos, sys.dim);
    rep.distance_drift = std::max(rep.distance_drift, ((s - s0).array() / s0.array()).abs().maxCoeff());
    rep.energy_drift = std::max(rep.energy_drift, std::abs(energy(sys, pos, vel, law) - e0) / escale);
    rep.angular_momentum_drift =
        std::max(rep.angular_momentum_drift, (body_momentum(sys, pos, vel) - c0).norm() / cscale);
    return s;
  };
  rep.samples.push_back({0.0, s0});

  const int steps = static_cast<int>(std::llround(t_end / dt));
  VectorXd k1p(nd), k1v(nd), k2p(nd), k2v(nd), k3p(nd), k3v(nd), k4p(nd), k4v(nd);
  for (int n = 1; n <= steps; ++n) {
    k1p = vel;
    k1v = accelerations(sys, pos, law);
    k2p = vel + 0.5 * dt * k1v;
    k2v = accelerations(sys, pos + 0.5 * dt * k1p, law);
    k3p = vel + 0.5 * dt * k2v;
    k3v = accelerations(sys, pos + 0.5 * dt * k2p, law);
    k4p = vel + dt * k3v;
    k4v = accelerations(sys, pos + dt * k3p, law);
    pos += dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    vel += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    rep.steps = n;
    const double t = n * dt;
    const Vector6d s = record();
    if (s.minCoeff() < 1e-6 * s0.minCoeff() || !s.allFinite()) {
      rep.collision = true;
      rep.samples.push_back({t, s});
      break;
    }
    if ((sample_every > 0 && n % sample_every == 0) || n == steps) rep.samples.push_back({t, s});
  }
  return rep;
}

std::vector<double> antisymmetric_frequencies(const Eigen::MatrixXd& c) {
  const MatrixXd c2 = -(c * c);
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (c2 + c2.transpose()));
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  std::vector<double> nu;
  for (std::size_t k = 0; k + 1 < ev.size(); k += 2) nu.push_back(std::sqrt(std::max(0.5 * (ev[k] + ev[k + 1]), 0.0)));
  return nu;
}

AngularMomentum angular_momentum(const ConfigMatrix& x, const ConfigMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw std::invalid_argument("shape mismatch");
  AngularMomentum out;
  out.c = -x * y.transpose() + y * x.transpose();
  out.nu = antisymmetric_frequencies(out.c);
  return out;
}

AngularMomentum re_angular_momentum(const RelativeEquilibrium& re) {
  const MatrixXd s = re.x0 * re.x0.transpose();
  AngularMomentum out;
  out.c = s * re.omega + re.omega * s;
  out.nu = antisymmetric_frequencies(out.c);
  return out;
}

Eigen::Matrix3d rho_bivector(const ConfigMatrix& x, const Eigen::MatrixXd& omega) {
  if (omega.rows() != x.rows() || omega.cols() != x.rows()) throw std::invalid_argument("shape mismatch");
  return -x.transpose() * omega * x;
}

double theta_quadratic(double s1, double s2, double omega, double theta, double mu) {
  const double c = std::cos(theta), s = std::sin(theta), w2 = omega * omega;
  return mu * mu - (s1 * s1 + s2 * s2 + 2 * s1 * s2 * c * c) * w2 * mu + s1 * s1 * s2 * s2 * w2 * w2 * std::pow(s, 4);
}

ThetaFamily theta_family(double m1, double m2, double f, double theta) {
  if (!(m1 > 0) || !(m2 > 0) || !(f > 0)) throw std::invalid_argument("masses and distance must be positive");
  if (std::abs(m1 + m2 - 1.0) > 1e-12) throw std::invalid_argument("normalization m1 + m2 = 1 required");
  ThetaFamily tf;
  const MassSystem ms({m1, m2, m1, m2});
  const SquaredDistances s{1, 1, 1, 1, 1, f};
  tf.sigma = inertia_matrix(ms, s).matrix().diagonal();
  tf.omega = 1.0;
  tf.omega3 = std::sqrt((m1 + m2 * std::pow(f, -1.5)) / (m1 + m2));

  const double w = tf.omega, c = std::cos(theta), sn = std::sin(theta);
  MatrixXd om = MatrixXd::Zero(6, 6);
  om(0, 2) = -c * w;
  om(0, 3) = -sn * w;
  om(1, 2) = sn * w;
  om(1, 3) = -c * w;
  om(4, 5) = -tf.omega3;
  om -= om.transpose().eval();
  const Eigen::VectorXd sd = (Eigen::VectorXd(6) << tf.sigma[0], 0, tf.sigma[1], 0, tf.sigma[2], 0).finished();
  tf.c = sd.asDiagonal() * om + om * sd.asDiagonal();
  tf.nu = antisymmetric_frequencies(tf.c);

  const MatrixXd mixed = tf.c.topLeftCorner(4, 4);
  const auto nm = antisymmetric_frequencies(mixed);
  tf.nu_a = nm[0];
  tf.nu_b = nm[1];
  tf.quadratic_a = theta_quadratic(tf.sigma[0], tf.sigma[1], w, theta, tf.nu_a * tf.nu_a);
  tf.quadratic_b = theta_quadratic(tf.sigma[0], tf.sigma[1], w, theta, tf.nu_b * tf.nu_b);
  return tf;
}

}  // namespace balanced
