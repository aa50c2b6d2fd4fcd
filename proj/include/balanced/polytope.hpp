#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace balanced {

/// Orthogonal J with J^2 = -Id on R^{2p}.
class ComplexStructure {
 public:
  /// Throws std::invalid_argument unless J^T J = Id and J^2 = -Id at 1e-10.
  explicit ComplexStructure(Eigen::MatrixXd j);

  /// Pairs e_{2k} with e_{2k+1}.
  static ComplexStructure standard(int p);
  /// Complex lines spanned by (columns of `basis` at) the given index pairs;
  /// the pairs must cover every column exactly once.
  static ComplexStructure from_planes(const Eigen::MatrixXd& basis, const std::vector<std::pair<int, int>>& planes);

  const Eigen::MatrixXd& matrix() const { return j_; }
  int p() const { return static_cast<int>(j_.rows() / 2); }

 private:
  Eigen::MatrixXd j_;
};

/// Descending, one entry per complex dimension.
using FrequencyPoint = std::vector<double>;

/// Sorted halves of the spectrum of J^{-1} S0 J + S0. Requires p in {2,3}.
FrequencyPoint frequency_map(const Eigen::MatrixXd& s0, const ComplexStructure& j);

/// Frequencies of S0 J + J S0 through the spectrum of its square.
FrequencyPoint antisymmetric_frequency_map(const Eigen::MatrixXd& s0, const ComplexStructure& j);

/// N points at J = Q J_std Q^T with Haar-random Q. Deterministic in `seed`
/// for any thread count (0 = hardware concurrency).
std::vector<FrequencyPoint> sample_polytope(const Eigen::MatrixXd& s0, int n, std::uint64_t seed, int threads = 0);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
template <class Rng>
Eigen::MatrixXd haar_orthogonal(int n, Rng& rng);

struct HornSpec {
  std::vector<double> a, b;

  /// (s1, s3, ...) and (s2, s4, ...) of the sorted spectrum of S0.
  static HornSpec canonical(const Eigen::MatrixXd& s0);
  /// Pi_i = {s_i, 0, 0} u {s_j, s_k, 0} for positive spectrum (s1, s2, s3);
  /// i is 0-based.
  static HornSpec pi(const Eigen::Vector3d& sigma, int i);
};

struct HornResult {
  bool member = false;
  std::vector<std::string> violated;
  /// smallest slack over all inequalities (negative when violated)
  double min_slack = 0;
};

/// Trace equality and the Horn inequalities for p = 2 (3) and p = 3 (12).
/// Throws std::invalid_argument for p > 3.
HornResult horn_membership(const HornSpec& spec, const FrequencyPoint& c, double tol = 1e-9);

struct PolytopeVertex {
  char label = 'A';
  FrequencyPoint nu;
  Eigen::MatrixXd j;
};

struct PolytopeEdge {
  std::string name;
  bool bifurcation = false;
};

struct BifurcationVertices {
  Eigen::Vector3d sigma;
  /// case (1): sigma1 > sigma2 + sigma3; case (2): sigma2 + sigma3 > sigma1
  int case_number = 0;
  bool planar = false;
  std::vector<PolytopeVertex> vertices;
  std::vector<PolytopeEdge> edges;
};

/// Requires a 6x6 S0 of rank 3 (rank 2 gives the reduced planar output with
/// vertices A and B only).
BifurcationVertices bifurcation_vertices(const Eigen::MatrixXd& s0);

}  // namespace balanced

#include <Eigen/QR>
#include <random>

namespace balanced {

template <class Rng>
Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) z(i, k) = g(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0) q.col(k) = -q.col(k);
  return q;
}

}  // namespace balanced
