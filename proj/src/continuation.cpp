#include "balanced/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "balanced/balance.hpp"
#include "balanced/degeneracy.hpp"
#include "balanced/error.hpp"
#include "balanced/tetra.hpp"

namespace balanced {

namespace {

using Matrix3 = Eigen::Matrix3d;

// Eigenvectors of B reordered and signed to follow `prev` column by column.
Matrix3 matched_eigenvectors(const Matrix3& b, const Matrix3& prev) {
  const Eigen::SelfAdjointEigenSolver<Matrix3> es(b);
  const Matrix3 q = es.eigenvectors();
  Matrix3 out;
  std::array<bool, 3> used{};
  for (int k = 0; k < 3; ++k) {
    int best = -1;
    double overlap = -1;
    for (int j = 0; j < 3; ++j) {
      if (used[j]) continue;
      const double o = std::abs(prev.col(k).dot(q.col(j)));
      if (o > overlap) {
        overlap = o;
        best = j;
      }
    }
    used[best] = true;
    out.col(k) = q.col(best);
    if (prev.col(k).dot(out.col(k)) < 0) out.col(k) *= -1;
  }
  return out;
}

class Corrector {
 public:
  Corrector(const MassSystem& ms, std::array<int, 2> pair) : ms_(ms), pair_(pair) {}

  // Residual of the 6x6 system at s for the step from `base` along `t`.
  Vector6d residual(const Vector6d& s, const Matrix3& q_prev, const Vector6d& base, const Vector6d& t,
                    double h) const {
    const SquaredDistances sd = SquaredDistances::from_vector(s);
    const BalanceResidual p = balance_residuals_4body(ms_, sd, law_);
    const double scale = balance_scale(ms_, sd, law_);
    const Matrix3 q = matched_eigenvectors(inertia_matrix(ms_, sd).matrix(), q_prev);
    const Eigen::Vector3d d = (q.transpose() * wc_matrix(ms_, sd, law_).matrix() * q).diagonal();
    Vector6d f;
    f << p.values[0] / scale, p.values[1] / scale, p.values[2] / scale,
        (d[pair_[0]] - d[pair_[1]]) / ms_.total(), s.sum() - 6.0, t.dot(s - base) - h;
    return f;
  }

  // Newton with a central-difference Jacobian; nullopt on failure.
  std::optional<Vector6d> solve(Vector6d s, const Matrix3& q_prev, const Vector6d& base, const Vector6d& t,
                                double h, int max_iter, double fd) const {
    for (int it = 0; it < max_iter; ++it) {
      if ((s.array() <= 0).any()) return std::nullopt;
      const Vector6d f = residual(s, q_prev, base, t, h);
      Matrix6d j;
      for (int k = 0; k < 6; ++k) {
        Vector6d sp = s, sm = s;
        sp[k] += fd;
        sm[k] -= fd;
        j.col(k) = (residual(sp, q_prev, base, t, h) - residual(sm, q_prev, base, t, h)) / (2 * fd);
      }
      const Eigen::FullPivLU<Matrix6d> lu(j);
      if (!lu.isInvertible()) return std::nullopt;
      const Vector6d ds = lu.solve(-f);
      if (!ds.allFinite()) return std::nullopt;
      s += ds;
      if (ds.cwiseAbs().maxCoeff() < 1e-13) {
        if (residual(s, q_prev, base, t, h).cwiseAbs().maxCoeff() < 1e-10) return s;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

 private:
  const MassSystem& ms_;
  std::array<int, 2> pair_;
  PotentialLaw law_;
};

BranchPoint make_point(const MassSystem& ms, const Vector6d& s, double arclength) {
  const PotentialLaw law;
  BranchPoint p;
  p.s = SquaredDistances::from_vector(s);
  p.arclength = arclength;
  const WcMatrix a = wc_matrix(ms, p.s, law);
  p.lambdas = Eigen::SelfAdjointEigenSolver<Matrix3>(a.matrix()).eigenvalues();
  p.gap = degeneracy_gap(a).gap / a.frobenius();
  p.balance_residual = is_balanced(ms, p.s, law, 0).max_normalized;
  p.cayley_menger = cayley_menger(p.s);
  p.non_embeddable = !(p.cayley_menger > 0);
  return p;
}

}  // namespace

Branch continue_branch(const MassSystem& ms, int root_index, const ContinuationOptions& opt) {
  if (root_index < 0 || root_index > 2) throw std::invalid_argument("root_index must be 0, 1 or 2");
  if (opt.steps < 1 || !(opt.h > 0)) throw std::invalid_argument("steps and h must be positive");
  if (opt.orientation != 1 && opt.orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
  const std::vector<TangentDirection> dirs = tangent_directions(ms);
  if (dirs.size() != 3) throw std::invalid_argument("mass cubic has a repeated root; branches are not separated");
  const TangentDirection& td = dirs[root_index];

  Branch br;
  br.root_index = root_index;
  br.root = td.root;
  br.pair = td.pair;
  br.seed_direction = opt.orientation * td.direction;

  const Corrector corr(ms, td.pair);
  Matrix3 q_prev = Eigen::SelfAdjointEigenSolver<Matrix3>(
                       inertia_matrix(ms, SquaredDistances::tetrahedron()).matrix())
                       .eigenvectors();
  Vector6d base = Vector6d::Ones();
  Vector6d t = br.seed_direction;
  double h = opt.h, arclength = 0;
  int successes = 0;

  while (static_cast<int>(br.points.size()) < opt.steps) {
    double step = h;
    if (opt.stop_at_arclength) {
      const double rest = *opt.stop_at_arclength - arclength;
      if (rest <= 1e-15) break;
      step = std::min(step, rest);
    }
    const auto s = corr.solve(base + step * t, q_prev, base, t, step, opt.max_newton, opt.fd_step);
    if (!s) {
      successes = 0;
      h *= 0.5;
      if (!opt.adaptive || h < opt.h_min) {
        br.truncated = true;
        br.diagnostic = "corrector did not converge at arclength " + std::to_string(arclength) +
                        " with step " + std::to_string(step);
        break;
      }
      continue;
    }
    const Vector6d next = *s;
    arclength += step;
    br.points.push_back(make_point(ms, next, arclength));
    q_prev = matched_eigenvectors(inertia_matrix(ms, br.points.back().s).matrix(), q_prev);
    t = (next - base).normalized();
    base = next;
    if (opt.adaptive && ++successes >= 4) {
      h = std::min(2 * h, opt.h_max);
      successes = 0;
    }
  }
  return br;
}

double z2_cone_tangent_angle(double m1, double m2, double m3) {
  const MassSystem ms({m1, m2, m3, m2});
  const double s13 = m1 + m3;
  const double T = build_basis(ms).T;
  const double cpsi = -2 * (m1 - m3) / s13;
  const double cphi = (3 * m2 * (m1 * m1 + m3 * m3) - 2 * m1 * m3 * (m1 + m2 + m3)) / (2 * m2 * s13 * s13 * T);
  // (cos chi, sin chi) is orthogonal to (cpsi, cphi).
  return std::atan2(-cpsi, cphi);
}

SquaredDistances z2_branch_oracle(double m1, double m2, double m3, Z2Family family, double t, double f,
                                  int sheet) {
  if (!(m1 > 0 && m2 > 0 && m3 > 0)) throw std::invalid_argument("masses must be positive");
  if (family == Z2Family::AEqBEqD) {
    if (!(t > 0 && f > 0)) throw std::invalid_argument("squared distances must be positive");
    return {t, t, t, t, t, f};
  }
  if (sheet != 0 && sheet != 1) throw std::invalid_argument("sheet must be 0 or 1");
  const MassSystem ms({m1, m2, m3, m2});
  const PotentialLaw law;
  const double alpha = -0.5 * ms.total();
  const auto point = [&](double chi) {
    return wc_to_distances(from_symmetric_coords({alpha, t, t * std::cos(chi), t * std::sin(chi)}), ms, law);
  };
  const auto g = [&](double chi) {
    const SquaredDistances s = point(chi);
    return symmetric_balance_residual(m1, m2, m3, s.a, s.b1, s.d1, s.f, law) / balance_scale(ms, s, law);
  };
  if (t == 0.0) return SquaredDistances::tetrahedron();
  double chi = z2_cone_tangent_angle(m1, m2, m3) + sheet * std::numbers::pi;
  for (int it = 0; it < 50; ++it) {
    const double r = g(chi);
    const double dc = 1e-7;
    const double d = (g(chi + dc) - g(chi - dc)) / (2 * dc);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double step = r / d;
    chi -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const SquaredDistances s = point(chi);
  if (!(std::abs(g(chi)) < 1e-12)) throw NumericalError("cone family: Newton did not converge");
  return s;
}

SquaredDistances z3_branch_oracle(double m1, double m, double t, double f) {
  if (!(m1 > 0 && m > 0)) throw std::invalid_argument("masses must be positive");
  if (!(t > 0 && f > 0)) throw std::invalid_argument("squared distances must be positive");
  return {t, t, t, f, f, f};
}

Eigen::Matrix<double, 3, 4> z3_basis(double m1, double m) {
  if (!(m1 > 0 && m > 0)) throw std::invalid_argument("masses must be positive");
  Eigen::Matrix<double, 3, 4> v;
  v.row(0) = std::sqrt(m1 * m / (3 * (m1 + 3 * m))) * Eigen::RowVector4d(-3, 1, 1, 1);
  v.row(1) = std::sqrt(m / 6) * Eigen::RowVector4d(0, -1, 2, -1);
  v.row(2) = std::sqrt(m / 2) * Eigen::RowVector4d(0, 1, 0, -1);
  return v;
}

Eigen::Matrix3d wc_matrix_in_basis(const MassSystem& ms, const SquaredDistances& s,
                                   const Eigen::Matrix<double, 3, 4>& v, const PotentialLaw& law) {
  const OrthonormalBasis ob = build_basis(ms);
  const Eigen::Vector4d inv_m(1 / ms[0], 1 / ms[1], 1 / ms[2], 1 / ms[3]);
  const Matrix3 p = ob.u * inv_m.asDiagonal() * v.transpose();
  return p.transpose() * wc_matrix(ms, s, law).matrix() * p;
}

}  // namespace balanced
