#pragma once

#include "qheis/braid.hpp"
#include "qheis/deform.hpp"
#include "qheis/fock.hpp"
#include "qheis/liealg.hpp"
#include "qheis/qspecial.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qheis {

struct DcrResiduals {
  double annihilators = 0.0;  // projector contracted with A (x) A
  double creators = 0.0;      // projector contracted with A^+ (x) A^+
  std::vector<std::pair<std::string, double>> cross;  // one entry per candidate

  double cross_of(const std::string& name) const {
    for (const auto& [n, r] : cross)
      if (n == name) return r;
    throw std::out_of_range("no cross candidate named " + name);
  }
};

// Quadratic DCR residuals on the degree-2 safe subspace:
//   sum_hk Q^{ji}_{hk} A^k A^h,   sum_hk A^+_h A^+_k Q^{hk}_{ij},
//   A^i A^+_j - delta^i_j -+ Pt^{ih}_{jk} A^+_h A^k  for every candidate Pt.
inline DcrResiduals dcr_residuals(const FockSpace& s, const DeformedGenerators& g, const RelationMatrices& rel) {
  if (g.N != rel.N || s.modes() != g.N || g.stats != rel.stats)
    throw std::invalid_argument("dcr_residuals: generators and relation matrices disagree");
  const int N = g.N;
  const double sg = stat_sign(g.stats);
  const Mat& Q = rel.annihilating_projector;
  const Mat P2 = safe_projector(s, std::min(2, s.cutoff()));  // identity for fermions
  auto nrm = [&](const Mat& x) { return spectral_norm(P2 * x * P2); };
  const Eigen::Index d = s.dim();
  DcrResiduals out;
  // products cached once; AA[h][k] = A^h A^k etc.
  std::vector<std::vector<Mat>> AA(N, std::vector<Mat>(N)), PP(N, std::vector<Mat>(N)), PA(N, std::vector<Mat>(N));
  for (int h = 0; h < N; ++h)
    for (int k = 0; k < N; ++k) {
      AA[h][k] = g.A[h] * g.A[k];
      PP[h][k] = g.Aplus[h] * g.Aplus[k];
      PA[h][k] = g.Aplus[h] * g.A[k];
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Mat ra = Mat::Zero(d, d), rc = Mat::Zero(d, d);
      for (int h = 0; h < N; ++h)
        for (int k = 0; k < N; ++k) {
          ra += Q(j * N + i, h * N + k) * AA[k][h];
          rc += Q(h * N + k, i * N + j) * PP[h][k];
        }
      out.annihilators = std::max(out.annihilators, nrm(ra));
      out.creators = std::max(out.creators, nrm(rc));
    }
  for (const auto& cand : rel.cross_candidates) {
    double worst = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Mat r = g.A[i] * g.Aplus[j];
        if (i == j) r -= Mat::Identity(d, d);
        for (int h = 0; h < N; ++h)
          for (int k = 0; k < N; ++k) r -= sg * cand.matrix(i * N + h, j * N + k) * PA[h][k];
        worst = std::max(worst, nrm(r));
      }
    out.cross.emplace_back(cand.name, worst);
  }
  return out;
}

struct NcrResiduals {
  int sign = 1;               // the +-2 exponent that was used
  double creator_rel = 0.0;   // N A^+ - A^+ - q^{+-2} A^+ N
  double annihilator_rel = 0.0;  // N A - q^{-+2}(-A + A N)
  double spectrum = 0.0;      // max |N_h - (n)_{q^{+-2}}| on the diagonal
  double offdiag = 0.0;
};

inline NcrResiduals ncr_residuals(const FockSpace& s, const DeformedGenerators& g, int sign) {
  const double q = g.q;
  const double qq = std::pow(q, 2.0 * sign);
  Mat Nh = q_number_operator(g);
  NcrResiduals out;
  out.sign = sign;
  for (int i = 0; i < g.N; ++i) {
    out.creator_rel =
        std::max(out.creator_rel, safe_norm(s, Nh * g.Aplus[i] - g.Aplus[i] - qq * g.Aplus[i] * Nh, 1));
    out.annihilator_rel =
        std::max(out.annihilator_rel, safe_norm(s, Nh * g.A[i] - (-g.A[i] + g.A[i] * Nh) / qq, 1));
  }
  for (int k = 0; k < s.dim(); ++k) {
    double expect = qnum(static_cast<double>(s.total(k)), qq).real();
    out.spectrum = std::max(out.spectrum, std::abs(Nh(k, k) - expect));
  }
  Mat off = Nh;
  off.diagonal().setZero();
  out.offdiag = off.cwiseAbs().maxCoeff();
  return out;
}

// pappa relations for an so(N)-shaped generator set with metric C (lower
// indices) and its inverse Cinv (upper indices)
struct PappaResiduals {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  double max() const { return std::max({r1, r2, r3, r4}); }
};

inline PappaResiduals pappa_residuals(const FockSpace& s, const std::vector<Mat>& A, const std::vector<Mat>& Ap,
                                      const Mat& C, const Mat& Cinv, double q) {
  const int N = static_cast<int>(A.size());
  if (C.rows() != N || Cinv.rows() != N || static_cast<int>(Ap.size()) != N)
    throw std::invalid_argument("pappa_residuals: shape mismatch");
  const Eigen::Index d = s.dim();
  Mat aca = Mat::Zero(d, d), apcap = Mat::Zero(d, d);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      aca += C(j, i) * A[i] * A[j];
      apcap += Cinv(i, j) * Ap[i] * Ap[j];
    }
  const double k = 1.0 + std::pow(q, 2 - N);
  const double q2 = q * q;
  PappaResiduals out;
  for (int i = 0; i < N; ++i) {
    Mat rhs3 = Mat::Zero(d, d), rhs4 = Mat::Zero(d, d);
    for (int j = 0; j < N; ++j) {
      rhs3 += C(i, j) * A[j];
      rhs4 += Cinv(i, j) * Ap[j];
    }
    out.r1 = std::max(out.r1, safe_norm(s, commutator(aca, A[i]), 2));
    out.r2 = std::max(out.r2, safe_norm(s, commutator(apcap, Ap[i]), 2));
    out.r3 = std::max(out.r3, safe_norm(s, aca * Ap[i] - q2 * Ap[i] * aca - k * rhs3, 2));
    out.r4 = std::max(out.r4, safe_norm(s, A[i] * apcap - q2 * apcap * A[i] - k * rhs4, 2));
  }
  return out;
}

// max_X ||[sigma(X), I]|| over the Lie basis
inline double commutant_residual(const FockSpace& s, const LieData& data, const Mat& inv) {
  double worst = 0.0;
  for (Gen x : lie_basis(data)) worst = std::max(worst, safe_norm(s, commutator(sigma(s, data, x), inv), 1));
  return worst;
}

}  // namespace qheis
