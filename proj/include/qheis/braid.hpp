#pragma once

#include "qheis/fock.hpp"
#include "qheis/liealg.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace qheis {

struct Eigenprojector {
  cplx eigenvalue;
  Mat projector;
};

struct CrossCandidate {
  std::string name;
  Mat matrix;
};

struct RelationMatrices {
  Family family = Family::slN;
  int N = 0;
  double q = 1.0;
  Statistics stats = Statistics::Bose;
  Mat rhat;
  std::vector<Eigenprojector> projectors;
  Mat metric;      // C_ij (so(N) only)
  Mat metric_inv;  // C^ij
  std::vector<CrossCandidate> cross_candidates;
  Mat annihilating_projector;
};

inline Mat permutation_matrix(int N) {
  Mat p = Mat::Zero(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) p(j * N + i, i * N + j) = 1.0;
  return p;
}

// Hecke braid matrix for sl(N) in the defining representation:
// e_i(x)e_i -> q e_i(x)e_i, e_i(x)e_j -> e_j(x)e_i + (q - 1/q)[i<j] e_i(x)e_j
inline Mat rhat_sl(int N, double q) {
  Mat r = Mat::Zero(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) {
        r(i * N + i, i * N + i) = q;
        continue;
      }
      r(j * N + i, i * N + j) = 1.0;
      if (i < j) r(i * N + j, i * N + j) = q - 1.0 / q;
    }
  return r;
}

namespace detail {

// weights rho_i for the light-cone basis, i' = N-1-i
inline std::vector<double> so_weights(int N) {
  std::vector<double> w(N, 0.0);
  for (int i = 0; i < N; ++i) {
    int ip = N - 1 - i;
    if (i < ip)
      w[i] = N / 2.0 - 1.0 - i;
    else if (i > ip)
      w[i] = -(N / 2.0 - 1.0 - ip);
  }
  return w;
}

// FRT braid matrix of so(N) in the light-cone basis where the classical metric
// is anti-diagonal
inline Mat rhat_so_lightcone(int N, double q) {
  auto w = so_weights(N);
  auto E = [N](int i, int j) { return unit(N, i, j); };
  auto pr = [N](int i) { return N - 1 - i; };
  Mat R = Mat::Zero(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double c = 1.0;
      if (i == j && i != pr(i))
        c = q;
      else if (i != j && j == pr(i))
        c = 1.0 / q;
      R += c * kron(E(i, i), E(j, j));
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) {
      R += (q - 1.0 / q) * kron(E(i, j), E(j, i));
      R -= (q - 1.0 / q) * std::pow(q, w[i] - w[j]) * kron(E(i, j), E(pr(i), pr(j)));
    }
  return permutation_matrix(N) * R;
}

inline Mat so_metric_lightcone(int N, double q) {
  auto w = so_weights(N);
  Mat C = Mat::Zero(N, N);
  for (int i = 0; i < N; ++i) C(i, N - 1 - i) = std::pow(q, -w[i]);
  return C;
}

// unitary W with W^T J W = 1 for the anti-diagonal J; columns are the Cartesian
// axes written in light-cone components
inline Mat cartesian_frame(int N) {
  Mat W = Mat::Zero(N, N);
  const double r = 1.0 / std::sqrt(2.0);
  const cplx I(0.0, 1.0);
  for (int i = 0; i < N; ++i) {
    int j = N - 1 - i;
    if (i < j) {
      W(i, i) = r;
      W(j, i) = r;
      W(i, j) = I * r;
      W(j, j) = -I * r;
    } else if (i == j) {
      W(i, i) = 1.0;
    }
  }
  return W;
}

}  // namespace detail

// so(N) braid matrix and metric, moved to Cartesian coordinates so that both
// reduce to P and delta at q = 1
inline Mat rhat_so(int N, double q) {
  Mat W = detail::cartesian_frame(N);
  Mat WW = kron(W, W);
  return WW.adjoint() * detail::rhat_so_lightcone(N, q) * WW;
}

inline std::pair<Mat, Mat> metric(Family f, int N, double q) {
  if (f != Family::soN) throw std::invalid_argument("metric: only so(N) carries a metric");
  Mat W = detail::cartesian_frame(N);
  Mat C = W.transpose() * detail::so_metric_lightcone(N, q) * W;
  return {C, C.inverse()};
}

inline Mat rhat(Family f, int N, double q) { return f == Family::slN ? rhat_sl(N, q) : rhat_so(N, q); }

inline double ybe_residual(const Mat& r, int N) {
  Mat one = Mat::Identity(N, N);
  Mat r12 = kron(r, one), r23 = kron(one, r);
  return spectral_norm(r12 * r23 * r12 - r23 * r12 * r23);
}

inline std::vector<cplx> rhat_eigenvalues(Family f, int N, double q) {
  if (f == Family::slN) return {q, -1.0 / q};
  return {q, -1.0 / q, std::pow(q, 1 - N)};
}

inline double characteristic_residual(const Mat& r, const std::vector<cplx>& ev) {
  Mat acc = Mat::Identity(r.rows(), r.cols());
  for (cplx e : ev) acc = acc * (r - e * Mat::Identity(r.rows(), r.cols()));
  return spectral_norm(acc);
}

inline RelationMatrices build_relations(Family f, int N, double q, Statistics stats) {
  if (!(q > 0.0)) throw std::invalid_argument("build_relations: q must be positive");
  if (f == Family::soN && stats == Statistics::Fermi)
    throw std::invalid_argument("build_relations: so(N) Clifford algebras are not supported");
  RelationMatrices rel;
  rel.family = f;
  rel.N = N;
  rel.q = q;
  rel.stats = stats;
  rel.rhat = rhat(f, N, q);
  const Mat one = Mat::Identity(N * N, N * N);
  const Mat& R = rel.rhat;
  if (f == Family::slN) {
    Mat sym = (R + one / q) / (q + 1.0 / q);
    Mat anti = (q * one - R) / (q + 1.0 / q);
    rel.projectors = {{q, sym}, {-1.0 / q, anti}};
    rel.annihilating_projector = stats == Statistics::Bose ? anti : sym;
  } else {
    auto [C, Cinv] = metric(f, N, q);
    rel.metric = C;
    rel.metric_inv = Cinv;
    // rank one trace part |C^-1><C|, normalised to a projector
    Vec up(N * N), down(N * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        up(i * N + j) = Cinv(i, j);
        down(i * N + j) = C(i, j);
      }
    Mat trace = up * down.transpose() / (down.transpose() * up)(0, 0);
    const cplx lq = q, lm = -1.0 / q, l1 = std::pow(q, 1 - N);
    Mat anti = (R - lq * one) * (R - l1 * one) / ((lm - lq) * (lm - l1));
    Mat sym = one - anti - trace;
    rel.projectors = {{lq, sym}, {lm, anti}, {l1, trace}};
    rel.annihilating_projector = anti;
  }
  Mat rinv = R.inverse();
  rel.cross_candidates = {{"q*Rhat", q * R},
                          {"q*Rhat^-1", q * rinv},
                          {"q^-1*Rhat", R / q},
                          {"q^-1*Rhat^-1", rinv / q}};
  return rel;
}

inline double projector_completeness_residual(const RelationMatrices& rel) {
  const Eigen::Index n = rel.rhat.rows();
  Mat sum = Mat::Zero(n, n);
  double worst = 0.0;
  for (std::size_t a = 0; a < rel.projectors.size(); ++a) {
    const Mat& pa = rel.projectors[a].projector;
    sum += pa;
    for (std::size_t b = 0; b < rel.projectors.size(); ++b) {
      const Mat& pb = rel.projectors[b].projector;
      Mat expect = a == b ? pa : Mat::Zero(n, n);
      worst = std::max(worst, spectral_norm(pa * pb - expect));
    }
    worst = std::max(worst, spectral_norm(rel.rhat * pa - rel.projectors[a].eigenvalue * pa));
  }
  return std::max(worst, spectral_norm(sum - Mat::Identity(n, n)));
}

inline int matrix_rank(const Mat& m, double tol = 1e-9) {
  Eigen::JacobiSVD<Mat> svd(m);
  int r = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > tol) ++r;
  return r;
}

}  // namespace qheis
