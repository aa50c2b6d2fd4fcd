#include "balanced/polytope.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "balanced/dynamics.hpp"

namespace balanced {

namespace {

using Eigen::MatrixXd;

constexpr std::size_t kChunk = 256;

void require_pdim(const MatrixXd& s0, const ComplexStructure& j) {
  if (s0.rows() != s0.cols() || s0.rows() != j.matrix().rows()) throw std::invalid_argument("shape mismatch");
  if (j.p() != 2 && j.p() != 3) throw std::invalid_argument("only p = 2 or 3 is supported");
}

// Eigenvectors of S0 by descending eigenvalue.
std::pair<Eigen::VectorXd, MatrixXd> descending_eigen(const MatrixXd& s0) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (s0 + s0.transpose()));
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

}  // namespace

ComplexStructure::ComplexStructure(Eigen::MatrixXd j) : j_(std::move(j)) {
  const auto n = j_.rows();
  if (n != j_.cols() || n == 0 || n % 2 != 0) throw std::invalid_argument("complex structure must be square of even size");
  const MatrixXd id = MatrixXd::Identity(n, n);
  if ((j_.transpose() * j_ - id).cwiseAbs().maxCoeff() > 1e-10 || (j_ * j_ + id).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("not a complex structure");
}

ComplexStructure ComplexStructure::standard(int p) {
  std::vector<std::pair<int, int>> planes;
  for (int k = 0; k < p; ++k) planes.emplace_back(2 * k, 2 * k + 1);
  return from_planes(MatrixXd::Identity(2 * p, 2 * p), planes);
}

ComplexStructure ComplexStructure::from_planes(const Eigen::MatrixXd& basis,
                                               const std::vector<std::pair<int, int>>& planes) {
  const auto n = basis.rows();
  std::vector<int> used(static_cast<std::size_t>(n), 0);
  MatrixXd j = MatrixXd::Zero(n, n);
  for (auto [a, b] : planes) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::invalid_argument("bad plane index");
    ++used[a];
    ++used[b];
    j(b, a) = 1;
    j(a, b) = -1;
  }
  if (std::any_of(used.begin(), used.end(), [](int u) { return u != 1; }))
    throw std::invalid_argument("planes must cover every direction once");
  return ComplexStructure(basis * j * basis.transpose());
}

FrequencyPoint frequency_map(const Eigen::MatrixXd& s0, const ComplexStructure& j) {
  require_pdim(s0, j);
  const MatrixXd& jm = j.matrix();
  const MatrixXd h = jm.transpose() * s0 * jm + s0;
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (h + h.transpose()));
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  FrequencyPoint nu;
  for (std::size_t k = 0; k + 1 < ev.size(); k += 2) nu.push_back(std::max(0.5 * (ev[k] + ev[k + 1]), 0.0));
  return nu;
}

FrequencyPoint antisymmetric_frequency_map(const Eigen::MatrixXd& s0, const ComplexStructure& j) {
  require_pdim(s0, j);
  return antisymmetric_frequencies(s0 * j.matrix() + j.matrix() * s0);
}

std::vector<FrequencyPoint> sample_polytope(const Eigen::MatrixXd& s0, int n, std::uint64_t seed, int threads) {
  if (n < 1) throw std::invalid_argument("sample count must be positive");
  if (s0.rows() != s0.cols() || s0.rows() % 2 != 0) throw std::invalid_argument("S0 must be square of even size");
  const int dim = static_cast<int>(s0.rows());
  const MatrixXd jstd = ComplexStructure::standard(dim / 2).matrix();
  std::vector<FrequencyPoint> out(static_cast<std::size_t>(n));
  const std::size_t chunks = (out.size() + kChunk - 1) / kChunk;

  auto work = [&](std::size_t first_chunk, std::size_t stride) {
    for (std::size_t c = first_chunk; c < chunks; c += stride) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(c)};
      std::mt19937_64 rng(seq);
      for (std::size_t i = c * kChunk; i < std::min(out.size(), (c + 1) * kChunk); ++i) {
        const MatrixXd q = haar_orthogonal(dim, rng);
        out[i] = frequency_map(s0, ComplexStructure(q * jstd * q.transpose()));
      }
    }
  };
  std::size_t nt = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min(nt, chunks);
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(work, t, nt);
  work(0, nt);
  return out;
}

HornSpec HornSpec::canonical(const Eigen::MatrixXd& s0) {
  const auto [ev, vecs] = descending_eigen(s0);
  HornSpec spec;
  for (Eigen::Index k = 0; k < ev.size(); ++k) (k % 2 == 0 ? spec.a : spec.b).push_back(std::max(ev[k], 0.0));
  return spec;
}

HornSpec HornSpec::pi(const Eigen::Vector3d& sigma, int i) {
  if (i < 0 || i > 2) throw std::invalid_argument("partition index out of range");
  HornSpec spec{{sigma[i], 0, 0}, {}};
  for (int k = 0; k < 3; ++k)
    if (k != i) spec.b.push_back(sigma[k]);
  spec.b.push_back(0);
  std::sort(spec.b.begin(), spec.b.end(), std::greater<>());
  return spec;
}

HornResult horn_membership(const HornSpec& spec, const FrequencyPoint& c_in, double tol) {
  const std::size_t p = c_in.size();
  if (p > 3) throw std::invalid_argument("Horn inequalities are only implemented for p <= 3");
  if (spec.a.size() != p || spec.b.size() != p) throw std::invalid_argument("spectrum sizes disagree");
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  };
  const auto a = sorted(spec.a), b = sorted(spec.b), c = sorted(c_in);
  HornResult res;
  res.min_slack = std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, std::accumulate(a.begin(), a.end(), 0.0) + std::accumulate(b.begin(), b.end(), 0.0));

  auto check = [&](const std::string& name, double slack) {
    res.min_slack = std::min(res.min_slack, slack);
    if (slack < -tol * scale) res.violated.push_back(name);
  };
  const double tr = std::accumulate(c.begin(), c.end(), 0.0) - std::accumulate(a.begin(), a.end(), 0.0) -
                    std::accumulate(b.begin(), b.end(), 0.0);
  check("trace", -std::abs(tr));

  // (I, J, K) triples, 1-based: sum c_K <= sum a_I + sum b_J.
  struct Ineq {
    std::vector<int> i, j, k;
  };
  std::vector<Ineq> list;
  if (p == 1) {
  } else if (p == 2) {
    list = {{{1}, {1}, {1}}, {{1}, {2}, {2}}, {{2}, {1}, {2}}};
  } else {
    list = {{{1}, {1}, {1}},          {{1}, {2}, {2}},          {{2}, {1}, {2}},          {{1}, {3}, {3}},
            {{3}, {1}, {3}},          {{2}, {2}, {3}},          {{1, 2}, {1, 2}, {1, 2}}, {{1, 2}, {1, 3}, {1, 3}},
            {{1, 3}, {1, 2}, {1, 3}}, {{1, 2}, {2, 3}, {2, 3}}, {{2, 3}, {1, 2}, {2, 3}}, {{1, 3}, {1, 3}, {2, 3}}};
  }
  for (const auto& q : list) {
    double lhs = 0, rhs = 0;
    std::string name = "c{";
    for (int k : q.k) {
      lhs += c[k - 1];
      name += std::to_string(k);
    }
    name += "}<=a{";
    for (int i : q.i) {
      rhs += a[i - 1];
      name += std::to_string(i);
    }
    name += "}+b{";
    for (int j : q.j) {
      rhs += b[j - 1];
      name += std::to_string(j);
    }
    name += "}";
    check(name, rhs - lhs);
  }
  res.member = res.violated.empty();
  return res;
}

BifurcationVertices bifurcation_vertices(const Eigen::MatrixXd& s0) {
  if (s0.rows() != 6 || s0.cols() != 6) throw std::invalid_argument("S0 must be 6x6");
  const auto [ev, e] = descending_eigen(s0);
  const double scale = std::max(ev[0], 1e-300);
  if (ev[0] <= 0 || ev[1] <= 1e-12 * scale) throw std::invalid_argument("S0 must have rank at least 2");
  if (ev[3] > 1e-10 * scale) throw std::invalid_argument("S0 must have rank at most 3");
  BifurcationVertices out;
  out.sigma = ev.head(3);
  out.planar = ev[2] <= 1e-12 * scale;
  if (out.planar) out.sigma[2] = 0;
  const double s1 = out.sigma[0], s2 = out.sigma[1], s3 = out.sigma[2];
  out.case_number = s1 > s2 + s3 ? 1 : 2;

  // columns of e: rho1, rho2, rho3, v1, v2, v3
  auto vertex = [&](char label, const std::vector<std::pair<int, int>>& planes) {
    const ComplexStructure j = ComplexStructure::from_planes(e, planes);
    out.vertices.push_back({label, frequency_map(s0, j), j.matrix()});
  };
  vertex('A', {{0, 3}, {1, 4}, {2, 5}});
  vertex('B', {{0, 1}, {2, 3}, {4, 5}});
  if (!out.planar) {
    vertex('C', {{1, 2}, {0, 3}, {4, 5}});
    vertex('D', {{0, 2}, {1, 3}, {4, 5}});
    out.edges = {{"AB", true}, {"AC", true}, {"AD", true}, {"BC", false}};
  } else {
    out.edges = {{"AB", true}};
  }
  return out;
}

}  // namespace balanced
