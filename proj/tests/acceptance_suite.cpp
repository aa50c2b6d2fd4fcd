#include "acceptance_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "balanced/balance.hpp"
#include "balanced/continuation.hpp"
#include "balanced/degeneracy.hpp"
#include "balanced/dynamics.hpp"
#include "balanced/planar.hpp"
#include "balanced/polytope.hpp"
#include "balanced/tetra.hpp"
#include "oracles.hpp"

namespace acceptance {

namespace {

using namespace balanced;
using Eigen::MatrixXd;

const PotentialLaw law;

ContinuationOptions steps(int n) {
  ContinuationOptions opt;
  opt.steps = n;
  opt.h = 1e-3;
  return opt;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail: " << what << "] ";
    }
  }
};

std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

double rel(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

// ---------------------------------------------------------------------------

void tetra_identities(Outcome& o) {
  std::mt19937_64 rng(101);
  double worst = 0, worst_oracle = 0;
  for (int n = 0; n < 100; ++n) {
    const MassSystem ms = oracle::random_masses(rng);
    const SquaredDistances s = SquaredDistances::tetrahedron();
    const Eigen::Matrix3d a = wc_matrix(ms, s).matrix();
    const Eigen::Matrix3d expect = -ms.total() / 2 * Eigen::Matrix3d::Identity();
    worst = std::max(worst, rel(a, expect));
    worst_oracle = std::max(worst_oracle, rel(oracle::wintner_conley(ms, s), expect));
  }
  const MassSystem eq({1, 1, 1, 1});
  const double b_err = rel(inertia_matrix(eq, SquaredDistances::tetrahedron()).matrix(), 0.5 * Eigen::Matrix3d::Identity());
  o.require(worst < 1e-12, "A = -M/2 Id");
  o.require(worst_oracle < 1e-12, "pair-sum oracle");
  o.require(b_err < 1e-12, "B = Id/2");
  o.detail << "max rel err A " << sci(worst) << ", pair-sum oracle " << sci(worst_oracle) << ", B " << sci(b_err);
}

int svd_rank(const MatrixXd& k) {
  const Eigen::JacobiSVD<MatrixXd> svd(k);
  const double thr = 1e-9 * k.norm();
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()[i] > thr;
  return r;
}

void rank_law(Outcome& o) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  struct Pattern {
    const char* name;
    std::function<std::vector<double>()> draw;
    int rank;
  };
  const std::vector<Pattern> patterns{
      {"all equal", [&] { const double m = u(rng); return std::vector{m, m, m, m}; }, 0},
      {"three equal", [&] { const double m = u(rng); std::vector v{m, m, m, m};
                            double x; do x = u(rng); while (std::abs(x - m) < 0.05);
                            v[std::uniform_int_distribution<int>(0, 3)(rng)] = x; return v; }, 2},
      {"two pairs", [&] { const double m = u(rng); double x; do x = u(rng); while (std::abs(x - m) < 0.05);
                          return std::vector{m, x, m, x}; }, 3},
      {"two equal", [&] { const double m = u(rng); return std::vector{m, u(rng), m, u(rng)}; }, 3},
      {"all distinct", [&] { return std::vector{u(rng), u(rng), u(rng), u(rng)}; }, 3},
  };
  for (const auto& p : patterns) {
    int bad = 0;
    for (int n = 0; n < 20; ++n) {
      const MassSystem ms(p.draw());
      const int r = svd_rank(k_matrix(ms));
      bad += r != p.rank || k_rank(ms) != p.rank;
    }
    o.require(bad == 0, p.name);
    o.detail << p.name << ":" << p.rank << (bad ? "x " : " ");
  }
}

void kernel_and_jacobians(Outcome& o) {
  std::mt19937_64 rng(303);
  double ker = 0, kfd = 0, lfd = 0;
  for (int n = 0; n < 50; ++n) {
    const MassSystem ms = oracle::random_masses(rng, 0.3, 3);
    const KMatrix k = k_matrix(ms);
    const KernelVectors e = kernel_vectors(ms);
    for (const Vector6d& v : {e.e1, e.e2, e.e3}) ker = std::max(ker, (k * v).norm() / (k.norm() * v.norm()));
    const MatrixXd fk = oracle::jacobian(
                            [&](const Eigen::VectorXd& x) {
                              const auto r = balance_residuals_4body(ms, SquaredDistances::from_vector(x));
                              return Eigen::Vector4d(r.values[0], r.values[1], r.values[2], r.values[3]).eval();
                            },
                            Vector6d::Ones()) /
                        law.phi_prime(1);
    const MatrixXd fl = oracle::jacobian(
                            [&](const Eigen::VectorXd& x) {
                              return Eigen::VectorXd(wc_matrix(ms, SquaredDistances::from_vector(x)).entries());
                            },
                            Vector6d::Ones()) /
                        law.phi_prime(1);
    const MatrixXd l = l_matrix(ms);
    kfd = std::max(kfd, (fk - MatrixXd(k)).cwiseAbs().maxCoeff() / std::max(1.0, k.cwiseAbs().maxCoeff()));
    lfd = std::max(lfd, (fl - l).cwiseAbs().maxCoeff() / std::max(1.0, l.cwiseAbs().maxCoeff()));
  }
  o.require(ker < 1e-12, "K E = 0");
  o.require(kfd < 1e-6, "K vs finite differences");
  o.require(lfd < 1e-6, "L vs finite differences");
  o.detail << "|K E| " << sci(ker) << ", K-FD " << sci(kfd) << ", L-FD " << sci(lfd);
}

void trip(Outcome& o) {
  std::mt19937_64 rng(404);
  const Eigen::Vector4d xs(-2, -1, 0, 1);
  Eigen::Matrix4d vander;
  for (int i = 0; i < 4; ++i)
    for (int p = 0; p < 4; ++p) vander(i, p) = std::pow(xs[i], p);
  const Eigen::PartialPivLU<Eigen::Matrix4d> lu(vander);
  double worst = 0;
  int tested = 0;
  while (tested < 500) {
    const MassSystem ms = oracle::random_masses(rng);
    if (some_three_equal(ms, 1e-6)) continue;
    ++tested;
    const KernelVectors e = e_vectors(ms);
    const Matrix6d l = l_matrix(ms);
    const Vector6d le2 = l * e.e2, le3 = l * e.e3;
    const MassCubic cubic = mass_cubic(ms);
    const auto pre = trip_prefactors(ms);
    const double scale = std::pow(le2.norm() + le3.norm(), 3);
    Eigen::Matrix<double, 4, 3> diff;
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector3d q = c2_polynomials(Sym3::from_entries(le2 + xs[i] * le3));
      for (int c = 0; c < 3; ++c) diff(i, c) = q[c] - pre[c] * cubic(xs[i]);
    }
    const Eigen::Matrix<double, 4, 3> coeff = lu.solve(diff);
    worst = std::max(worst, coeff.cwiseAbs().maxCoeff() / scale);
  }
  o.require(worst < 1e-9, "coefficientwise identity");
  o.detail << tested << " mass tuples, max coefficient error / scale " << sci(worst);
}

void cubic(Outcome& o) {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> ux(-5, -0.05);
  int nonneg = 0;
  double fp = 0;
  for (int n = 0; n < 10000; ++n) {
    const MassSystem ms = oracle::random_masses(rng);
    const MassCubic e = mass_cubic(ms);
    for (double r : e.roots) nonneg += !(r < 0) || !std::isfinite(r);
    if (n < 500) {
      const double cs = std::max({e.c3, e.c2, e.c1, e.c0});
      for (int k = 0; k < 20; ++k) {
        const double x = ux(rng);
        const double lhs = e(x), rhs = x * x * x * f_prime(ms, 1 / x);
        fp = std::max(fp, std::abs(lhs - rhs) / std::max(std::abs(lhs), cs * std::pow(std::abs(x), 3)));
      }
    }
  }
  double rh = 0;
  for (auto [m1, m2] : {std::pair{1.0, 2.0}, std::pair{1.7, 0.45}, std::pair{0.3, 3.1}}) {
    std::array<double, 3> want{-m1, -m2, -2 * m1 * m2 / (m1 + m2)};
    std::sort(want.begin(), want.end());
    const auto r = mass_cubic(MassSystem({m1, m2, m1, m2})).roots;
    for (int i = 0; i < 3; ++i) rh = std::max(rh, std::abs(r[i] - want[i]) / std::abs(want[i]));
  }
  o.require(nonneg == 0, "all roots real negative");
  o.require(fp < 1e-10, "E(x) = x^3 F'(1/x)");
  o.require(rh < 1e-10, "rhombus roots");
  o.detail << "non-negative roots " << nonneg << ", F' identity " << sci(fp) << ", rhombus roots " << sci(rh);
}

void degin_scan(Outcome& o) {
  int mismatches = 0, hits = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double m3 = 0.52 + i * 0.04, m4 = 0.52 + j * 0.04;
      const MassSystem ms({1, 1, m3, m4});
      const bool deg = tetra_inertia_degenerate(ms, 1e-9);
      mismatches += deg != some_three_equal(ms, 0.02);
      hits += deg;
    }
  const Sym3 b = inertia_matrix(MassSystem({1, 1, 1, 1}), SquaredDistances::tetrahedron());
  const double comm = commutant_matrix(b).norm();
  o.require(mismatches == 0, "degeneracy exactly at three equal masses");
  o.require(comm < 1e-14, "rank-0 commutant at (1,1)");
  o.detail << "degenerate grid points " << hits << ", mismatches " << mismatches << ", |commutant| at (1,1) "
           << sci(comm);
}

void rhombus_branches(Outcome& o) {
  const double m1 = 1, m2 = 2;
  const MassSystem ms({m1, m2, m1, m2});
  const double phi_scale = std::abs(law.phi(1.0)) * (m1 + m2);
  std::array<double, 3> viol{1, 1, 1};  // a=b, f=b, third curve
  std::array<int, 3> seen{};
  for (int k = 0; k < 3; ++k) {
    const Branch br = continue_branch(ms, k, steps(50));
    o.require(!br.truncated && br.points.size() == 50, "50 steps");
    double ab = 0, fb = 0, third = 0;
    for (const auto& p : br.points) {
      // coordinates normalized to sum 6
      ab = std::max(ab, std::abs(p.s.a - p.s.b1));
      fb = std::max(fb, std::abs(p.s.f - p.s.b1));
      third = std::max(third, std::abs((m1 - m2) * law.phi(p.s.b1) - m1 * law.phi(p.s.a) + m2 * law.phi(p.s.f)) /
                                  phi_scale);
    }
    const int which = ab <= std::min(fb, third) ? 0 : fb <= third ? 1 : 2;
    ++seen[which];
    viol[which] = std::min({ab, fb, third});
  }
  o.require(seen == std::array<int, 3>{1, 1, 1}, "one branch per curve");
  for (double v : viol) o.require(v < 1e-6, "closed-form curve");
  o.detail << "max violation a=b " << sci(viol[0]) << ", f=b " << sci(viol[1]) << ", third " << sci(viol[2]);
}

void generic_branches(Outcome& o) {
  const MassSystem ms({1, 2, 3, 4.5});
  const auto td = tangent_directions(ms);
  double res = 0, gap = 0, ang = 0;
  for (int k = 0; k < 3; ++k) {
    const Branch br = continue_branch(ms, k, steps(50));
    o.require(!br.truncated && br.points.size() == 50, "50 steps");
    for (const auto& p : br.points) {
      res = std::max(res, p.balance_residual);
      // independent gap: eigenvalue coincidence of the pair-sum A
      const Eigen::Matrix3d a = oracle::wintner_conley(ms, p.s);
      gap = std::max({gap, p.gap, oracle::min_eigen_gap(a) / a.norm()});
    }
    const Vector6d tan = oracle::seed_tangent(Vector6d::Ones(), br.points[0].s.vector(), br.points[1].s.vector(),
                                              td[k].direction);
    ang = std::max(ang, std::min(oracle::angle(tan, td[k].direction), oracle::angle(-tan, td[k].direction)));
  }
  o.require(res < 1e-8, "balance residual");
  o.require(gap < 1e-8, "degeneracy gap");
  o.require(ang < 1e-3, "seed tangent");
  o.detail << "max residual " << sci(res) << ", max gap " << sci(gap) << ", tangent angle " << sci(ang) << " rad";
}

void rigidity(Outcome& o) {
  const MassSystem ms({1, 2, 3, 4.5});
  double drift = 0, mom = 0, min_ratio = std::numeric_limits<double>::infinity();
  double coarse_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Branch br = continue_branch(ms, k, {.steps = 100000, .h = 1e-3, .stop_at_arclength = 0.05});
    const auto& pt = br.points.back();
    o.require(std::abs(pt.arclength - 0.05) < 1e-12, "reach arclength 0.05");
    const RelativeEquilibrium re = build_relative_equilibrium(ms, pt.s, degenerate_pairing(ms, pt.s), 4);
    const double period = 2 * std::numbers::pi / re.freqs.minCoeff();
    const double t = 3 * period;
    const ConfigMatrix v0 = re.omega * re.x0;
    const auto full = integrate_newton(ms, re.x0, v0, t, period / 20000 * 3, law);
    const auto half = integrate_newton(ms, re.x0, v0, t, period / 40000 * 3, law);
    drift = std::max(drift, full.distance_drift);
    mom = std::max(mom, full.angular_momentum_drift);
    min_ratio = std::min(min_ratio, full.distance_drift / half.distance_drift);
    // where truncation error dominates the roundoff floor
    const auto c1 = integrate_newton(ms, re.x0, v0, t, t / 1000, law);
    const auto c2 = integrate_newton(ms, re.x0, v0, t, t / 2000, law);
    coarse_ratio = std::min(coarse_ratio, c1.distance_drift / c2.distance_drift);
    o.detail << "branch " << k + 1 << ": drift " << sci(full.distance_drift) << "->" << sci(half.distance_drift)
             << "; ";
  }
  o.require(drift < 1e-6, "distance drift");
  o.require(mom < 1e-8, "angular momentum drift");
  o.require(min_ratio >= 12, "halving dt reduces drift 12x");
  o.detail << "max drift " << sci(drift) << ", angular momentum " << sci(mom) << ", min ratio " << min_ratio
           << " (T/1000 -> T/2000: " << coarse_ratio << ")";
}

void rhombus_frequencies(Outcome& o) {
  // R^6, all external: literal closed forms
  {
    const double m1 = 0.7, m2 = 1.9, a = 1.2, b = 1.0, f = 0.9;
    const MassSystem ms({m1, m2, m1, m2});
    const auto re = build_relative_equilibrium(ms, {a, b, b, b, b, f}, Pairing{}, 6);
    const std::array<double, 3> closed{-2 * (m1 + m2) * law.phi(b), -2 * (m1 * law.phi(a) + m2 * law.phi(b)),
                                       -2 * (m1 * law.phi(b) + m2 * law.phi(f))};
    double err = 0, ratio = 0;
    for (int k = 0; k < 3; ++k) {
      int axis;
      re.q.col(k).cwiseAbs().maxCoeff(&axis);
      const double w2 = re.freqs[k] * re.freqs[k];
      err = std::max(err, std::abs(w2 - closed[axis]) / closed[axis]);
      ratio = w2 / closed[axis];
    }
    o.require(err < 1e-12, "omega^2 closed forms");
    o.detail << "omega^2 vs closed forms: max rel err " << sci(err) << " (ratio " << ratio << "); ";
  }
  // R^4 spectra; sigma_k = B_kk, omega1 the frequency shared by the pair
  const double m1 = 0.4, m2 = 0.6;
  const MassSystem ms({m1, m2, m1, m2});
  const double a3 = 1.1;
  const double f3 = law.phi_inverse((m1 * law.phi(a3) - (m1 - m2) * law.phi(1.0)) / m2);
  struct Case {
    SquaredDistances s;
    int single;
  };
  double worst = 0;
  for (const Case cs : {Case{{1, 1, 1, 1, 1, 1.3}, 2}, Case{{a3, 1, 1, 1, 1, f3}, 0}, Case{{1.3, 1, 1, 1, 1, 1}, 1}}) {
    const auto re = build_relative_equilibrium(ms, cs.s, degenerate_pairing(ms, cs.s), 4);
    const Eigen::Matrix3d bm = oracle::inertia(ms, cs.s);
    const Eigen::Matrix3d am = oracle::wintner_conley(ms, cs.s);
    const int j = cs.single, i = (j + 1) % 3, l = (j + 2) % 3;
    const double shared = std::sqrt(-2 * am(i, i)), single = std::sqrt(-2 * am(j, j));
    std::vector<double> expect{(bm(i, i) + bm(l, l)) * shared, bm(j, j) * single};
    std::sort(expect.rbegin(), expect.rend());
    const auto nu = re_angular_momentum(re).nu;
    for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(nu[k] - expect[k]) / expect[0]);
  }
  o.require(worst < 1e-10, "R^4 spectra");
  o.detail << "R^4 spectra max rel err " << sci(worst);
}

void theta(Outcome& o) {
  const double m1 = 0.35, m2 = 0.65;
  double quad = 0, vieta = 0;
  for (double f : {1.0, 1.3}) {
    for (int n = 0; n < 50; ++n) {
      const double th = std::numbers::pi / 2 * n / 49.0;
      const auto tf = theta_family(m1, m2, f, th);
      const double sc = std::pow(tf.sigma[0] + tf.sigma[1], 4);
      quad = std::max({quad, std::abs(tf.quadratic_a) / sc, std::abs(tf.quadratic_b) / sc});
      vieta = std::max(vieta, std::abs(tf.nu_a * tf.nu_b - tf.sigma[0] * tf.sigma[1] * std::pow(std::sin(th), 2)));
    }
  }
  const auto top = theta_family(m1, m2, 1.0, std::numbers::pi / 2);
  const auto bottom = theta_family(m1, m2, 1.0, 0.0);
  std::vector<double> et{top.sigma[0], top.sigma[1], top.sigma[2]};
  std::vector<double> eb{bottom.sigma[0] + bottom.sigma[1], 0.0, bottom.sigma[2]};
  std::sort(et.rbegin(), et.rend());
  std::sort(eb.rbegin(), eb.rend());
  double ends = 0;
  for (int k = 0; k < 3; ++k) ends = std::max({ends, std::abs(top.nu[k] - et[k]), std::abs(bottom.nu[k] - eb[k])});
  o.require(quad < 1e-10, "quadratic");
  o.require(ends < 1e-9, "endpoints");
  o.detail << "quadratic residual " << sci(quad) << ", product of roots " << sci(vieta) << ", endpoints " << sci(ends);
}

MatrixXd diag6(double s1, double s2, double s3) {
  return (Eigen::VectorXd(6) << s1, s2, s3, 0, 0, 0).finished().asDiagonal();
}

void polytope(Outcome& o) {
  const MassSystem ms({1, 2, 3, 4.5});
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(oracle::inertia(ms, SquaredDistances::tetrahedron()));
  std::mt19937_64 rng(606);
  const MatrixXd q = haar_orthogonal(6, rng);
  const MatrixXd s0 = q * diag6(es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]) * q.transpose();
  const auto pts = sample_polytope(s0, 100000, 12);
  const HornSpec spec = HornSpec::canonical(s0);
  int outside = 0;
  double tr = 0;
  for (const auto& nu : pts) {
    outside += !horn_membership(spec, nu, 1e-9).member;
    tr = std::max(tr, std::abs(nu[0] + nu[1] + nu[2] - s0.trace()));
  }
  const auto bv = bifurcation_vertices(s0);
  const double s1 = bv.sigma[0], s2 = bv.sigma[1], s3 = bv.sigma[2];
  auto sorted = [](std::vector<double> v) {
    std::sort(v.rbegin(), v.rend());
    return v;
  };
  const std::vector<std::vector<double>> expect{
      {s1, s2, s3}, sorted({s1 + s2, s3, 0}), sorted({s2 + s3, s1, 0}), sorted({s1 + s3, s2, 0})};
  double vert = 0;
  for (int v = 0; v < 4; ++v) {
    const auto nu = frequency_map(s0, ComplexStructure(bv.vertices[v].j));
    for (int k = 0; k < 3; ++k) vert = std::max(vert, std::abs(nu[k] - expect[v][k]));
  }
  std::uniform_real_distribution<double> u(0.01, 1.0);
  int wrong = 0;
  for (int n = 0; n < 100; ++n) {
    std::vector<double> sig = sorted({u(rng), u(rng), u(rng)});
    const int want = sig[0] > sig[1] + sig[2] ? 1 : 2;
    wrong += bifurcation_vertices(diag6(sig[1], sig[0], sig[2])).case_number != want;
  }
  o.require(outside == 0, "Horn membership");
  o.require(tr < 1e-9, "trace");
  o.require(vert < 1e-10, "vertices");
  o.require(wrong == 0, "case classification");
  o.detail << "Horn violations " << outside << "/100000, trace " << sci(tr) << ", vertices " << sci(vert)
           << ", misclassified " << wrong;
}

void planar(Outcome& o) {
  const double g = planar_degenerate_ratio();
  const double res = std::abs(planar_degeneracy_function(g));
  o.require(g > 0.574 && g < 0.576, "gamma in (0.574, 0.576)");
  o.require(res < 1e-12, "gamma residual");
  int nonpos = 0;
  for (auto [m1, m2] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.0}, std::pair{5.0, 0.7}})
    for (int i = 0; i < 100; ++i)
      for (int k = 0; k < 100; ++k) {
        const double a = 0.1 * std::pow(100.0, i / 99.0), f = 0.1 * std::pow(100.0, k / 99.0);
        nonpos += !(planar_wc_restricted(m1, m2, a, f).jacobian_det > 0);
      }
  o.require(nonpos == 0, "property (H)");
  const int n = 400;
  const auto scan = planar_ratio_scan(0.2, 5, n);
  const auto ch = sign_changes(scan);
  const double step = std::pow(5 / 0.2, 1.0 / (n - 1));
  bool match = ch.size() == 3;
  if (match) {
    const std::array<double, 3> want{g, 1, 1 / g};
    for (int k = 0; k < 3; ++k) match = match && std::abs(std::log(ch[k] / want[k])) <= std::log(step);
  }
  o.require(match, "sign changes at gamma, 1, 1/gamma");
  o.detail << "gamma " << std::setprecision(10) << g << " residual " << sci(res) << ", det<=0 points " << nonpos
           << ", sign changes";
  for (double c : ch) o.detail << " " << std::setprecision(6) << c;
}

void transcription(Outcome& o) {
  std::mt19937_64 rng(707);
  double bal = 0;
  for (int n = 0; n < 1000; ++n) {
    const MassSystem ms = oracle::random_masses(rng);
    const SquaredDistances s = oracle::random_distances(rng, 0.6);
    const auto e = balance_residuals_4body(ms, s);
    const auto g = balance_residuals_general(ms.masses(), s.table());
    double sc = 0;
    for (double v : e.values) sc = std::max(sc, std::abs(v));
    for (int k = 0; k < 4; ++k) bal = std::max(bal, std::abs(-2 * g.values[k] - e.values[k]) / sc);
  }
  double cm = 0;
  {
    const MassSystem ms({0.7, 1.9, 0.7, 1.9});
    for (const auto& s : {SquaredDistances{1.2, 1, 1, 1, 1, 0.9}, SquaredDistances::tetrahedron()}) {
      const auto re = build_relative_equilibrium(ms, s, Pairing{}, 6);
      const auto c1 = angular_momentum(re.x0, re.omega * re.x0);
      const auto c2 = re_angular_momentum(re);
      cm = std::max(cm, (c1.c - c2.c).cwiseAbs().maxCoeff() / c2.c.cwiseAbs().maxCoeff());
    }
  }
  double rt = 0;
  for (int n = 0; n < 200; ++n) {
    const MassSystem ms = oracle::random_masses(rng);
    const SquaredDistances s = oracle::random_distances(rng, 0.6);
    const SquaredDistances back = wc_to_distances(wc_matrix(ms, s), ms);
    rt = std::max(rt, ((back.vector() - s.vector()).array() / s.vector().array()).abs().maxCoeff());
  }
  o.require(bal < 1e-10, "determinant vs expanded");
  o.require(cm < 1e-10, "angular momentum formulas");
  o.require(rt < 1e-10, "wc round trip");
  o.detail << "balance forms " << sci(bal) << ", C formulas " << sci(cm) << ", round trip " << sci(rt);
}

}  // namespace

std::vector<Result> run() {
  struct Entry {
    int id;
    const char* name;
    double budget;
    void (*fn)(Outcome&);
  };
  const Entry entries[] = {
      {1, "tetrahedron identities", 1, tetra_identities},
      {2, "rank law of K", 1, rank_law},
      {3, "kernel and Jacobians", 5, kernel_and_jacobians},
      {4, "TRIP proportionality", 10, trip},
      {5, "mass cubic", 10, cubic},
      {6, "tetrahedron inertia degeneracy scan", 30, degin_scan},
      {7, "rhombus branches vs closed forms", 60, rhombus_branches},
      {8, "generic-mass branches", 60, generic_branches},
      {9, "rigidity of relative equilibria", 120, rigidity},
      {10, "rhombus frequency formulas", 5, rhombus_frequencies},
      {11, "theta family", 5, theta},
      {12, "frequency polytope", 60, polytope},
      {13, "planar case", 10, planar},
      {14, "transcription cross-checks", 10, transcription},
  };
  std::vector<Result> out;
  for (const auto& e : entries) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(o);
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail << "[exception: " << ex.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > e.budget) {
      o.pass = false;
      o.detail << " [fail: runtime over budget]";
    }
    out.push_back({e.id, e.name, o.pass, secs, e.budget, o.detail.str()});
  }
  return out;
}

int report(std::ostream& out) {
  int failures = 0;
  for (const auto& r : run()) {
    failures += !r.pass;
    out << (r.pass ? "PASS" : "FAIL") << " " << std::setw(2) << r.id << " " << r.name << " (" << std::fixed
        << std::setprecision(2) << r.seconds << "s / " << std::setprecision(0) << r.budget << "s) "
        << std::defaultfloat << r.detail << "\n";
    out.flush();
  }
  return failures;
}

}  // namespace acceptance
