#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "balanced/forces.hpp"
#include "balanced/massspace.hpp"
#include "balanced/shape.hpp"

namespace balanced {

/// 2p x 3 matrix; column j is the configuration paired with u_j, rows are
/// ambient coordinates.
using ConfigMatrix = Eigen::MatrixXd;

/// Column j = sum_i u_j[i] (p_i - centre of mass), zero-padded to `dim` rows
/// (dim = point dimension when 0).
ConfigMatrix config_matrix(const MassSystem& ms, std::span<const Eigen::VectorXd> points, int dim = 0);

/// Inverse of config_matrix: body positions about the centre of mass.
std::vector<Eigen::VectorXd> body_positions(const MassSystem& ms, const ConfigMatrix& x);

/// Indices refer to the eigenvectors rho_k of B in ascending eigenvalue order.
/// Listed pairs rotate in a common plane (equal eigenvalues of A required);
/// every other rho_k rotates with its own partner outside the configuration.
struct Pairing {
  std::vector<std::pair<int, int>> internal;
};

/// Pairs the two eigenvalues of A closest to each other (in B's eigenbasis).
Pairing degenerate_pairing(const MassSystem& ms, const SquaredDistances& s, const PotentialLaw& law = {});

struct RelativeEquilibrium {
  ConfigMatrix x0;
  Eigen::MatrixXd omega;
  /// omega_k = sqrt(-2 a_k) per rho_k
  Eigen::Vector3d freqs;
  /// eigenvalues of A and B along rho_k
  Eigen::Vector3d a, sigma;
  /// columns rho_k in the u-basis
  Eigen::Matrix3d q;
  int dim = 0;
  Pairing pairing;
  /// max |Omega^2 X - 2 X A| / |X A|
  double residual = 0;
};

/// Throws std::invalid_argument for unbalanced input, "eigenvalue pairing
/// unavailable" or "dimension too small"; NumericalError if Omega^2 X = 2 X A
/// fails at 1e-9.
RelativeEquilibrium build_relative_equilibrium(const MassSystem& ms, const SquaredDistances& s,
                                               const Pairing& pairing, int dim, const PotentialLaw& law = {});

struct IntegrationSample {
  double t = 0;
  Vector6d s;
};

struct IntegrationReport {
  std::vector<IntegrationSample> samples;
  double distance_drift = 0;
  double energy_drift = 0;
  double angular_momentum_drift = 0;
  bool collision = false;
  int steps = 0;
};

/// Fixed-step RK4 of the Newtonian n-body flow in body coordinates, started
/// from configuration X0 and velocity V0 (same shape). Samples are recorded
/// every `sample_every` steps. Aborts on approach to collision.
IntegrationReport integrate_newton(const MassSystem& ms, const ConfigMatrix& x0, const ConfigMatrix& v0, double t_end,
                                   double dt, const PotentialLaw& law = {}, int sample_every = 0);

struct AngularMomentum {
  Eigen::MatrixXd c;
  /// descending, one value per 2-plane
  std::vector<double> nu;
};

/// Frequencies of an antisymmetric matrix from the spectrum of C^2.
std::vector<double> antisymmetric_frequencies(const Eigen::MatrixXd& c);

/// C = -X Y^T + Y X^T
AngularMomentum angular_momentum(const ConfigMatrix& x, const ConfigMatrix& y);
/// C = S Omega + Omega S with S = X X^T
AngularMomentum re_angular_momentum(const RelativeEquilibrium& re);

/// -X^T Omega X
Eigen::Matrix3d rho_bivector(const ConfigMatrix& x, const Eigen::MatrixXd& omega);

struct ThetaFamily {
  Eigen::Vector3d sigma;
  double omega = 1, omega3 = 1;
  Eigen::MatrixXd c;
  /// descending
  std::vector<double> nu;
  /// The two frequencies mixed by theta, and the quadratic in mu = nu^2
  /// evaluated at their squares.
  double nu_a = 0, nu_b = 0;
  double quadratic_a = 0, quadratic_b = 0;
};

/// Rhombus masses (m1, m2, m1, m2) with m1 + m2 = 1, a = b = 1 and far
/// diagonal f; omega = 1 is the common frequency of the coalescing pair.
ThetaFamily theta_family(double m1, double m2, double f, double theta);

/// mu^2 - (s1^2 + s2^2 + 2 s1 s2 cos^2 theta) w^2 mu + s1^2 s2^2 w^4 sin^4 theta
double theta_quadratic(double s1, double s2, double omega, double theta, double mu);

}  // namespace balanced
