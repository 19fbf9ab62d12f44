#pragma once

#include "qheis/fock.hpp"
#include "qheis/qspecial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qheis {

struct GridPoint {
  int n;
  int two_l;  // 2l, so half-integer l stays exact
  double l() const { return two_l / 2.0; }
  bool operator<(const GridPoint& o) const { return n != o.n ? n < o.n : two_l < o.two_l; }
  bool operator==(const GridPoint&) const = default;
};

struct OrbitalData {
  int N = 0;
  Mat aa;    // a.a = a^i a^i
  Mat adad;  // a+.a+
  Mat n;
  Mat l2;
  Mat l;
  std::map<GridPoint, int> grid;  // joint (n, l) spectrum with multiplicities
  double most_negative = 0.0;     // smallest l^2 eigenvalue seen before clamping
};

inline OrbitalData build_orbital(const FockSpace& s) {
  if (s.statistics() != Statistics::Bose) throw std::invalid_argument("build_orbital: bosonic space required");
  if (s.modes() < 3) throw std::invalid_argument("build_orbital: so(N) needs N >= 3");
  if (s.cutoff() < 4) throw std::invalid_argument("build_orbital: cutoff must be >= 4");
  const int N = s.modes();
  const Eigen::Index d = s.dim();
  OrbitalData o;
  o.N = N;
  o.aa = Mat::Zero(d, d);
  o.adad = Mat::Zero(d, d);
  for (int i = 0; i < N; ++i) {
    Mat a = annihilator(s, i);
    o.aa += a * a;
    o.adad += a.adjoint() * a.adjoint();
  }
  o.n = total_number(s);
  const double shift = N / 2.0 - 1.0;
  Mat m = o.n + shift * Mat::Identity(d, d);
  o.l2 = m * m - o.adad * o.aa;
  o.l = Mat::Zero(d, d);
  for (int k = 0; k <= s.cutoff(); ++k) {
    std::vector<int> idx = s.sector(k);
    const Eigen::Index b = static_cast<Eigen::Index>(idx.size());
    Mat block(b, b);
    for (Eigen::Index r = 0; r < b; ++r)
      for (Eigen::Index c = 0; c < b; ++c) block(r, c) = o.l2(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Mat> es(block);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index t = 0; t < ev.size(); ++t) {
      o.most_negative = std::min(o.most_negative, ev(t));
      if (ev(t) < -1e-10) throw std::runtime_error("build_orbital: l^2 has a negative eigenvalue");
      if (ev(t) < 0.0) ev(t) = 0.0;
      double lv = std::sqrt(ev(t));
      int two_l = static_cast<int>(std::lround(2.0 * lv));
      if (std::abs(2.0 * lv - two_l) > 1e-7) throw std::runtime_error("build_orbital: l is not half-integral");
      o.grid[GridPoint{k, two_l}] += 1;
      ev(t) = lv;
    }
    Mat root = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    for (Eigen::Index r = 0; r < b; ++r)
      for (Eigen::Index c = 0; c < b; ++c) o.l(idx[r], idx[c]) = root(r, c);
  }
  return o;
}

struct ShiftOperators {
  // index [i]; both printed orderings kept so they can be compared
  std::vector<Mat> down_a, down_b;  // alpha^i_{sign}
  std::vector<Mat> up_a, up_b;      // alpha^+_{i,sign}
};

// alpha^i_+-   = a^i(n+N/2-1+-l) - a+_i(a.a) = a^i(n+N/2+1+-l) - (a.a)a+_i
// alpha^+_i,+- = a+_i(n+N/2-1+-l) - (a+.a+)a^i = a+_i(n+N/2+1+-l) - a^i(a+.a+)
inline ShiftOperators shift_operators(const FockSpace& s, const OrbitalData& o, int sign) {
  const Eigen::Index d = s.dim();
  const Mat one = Mat::Identity(d, d);
  const double h = o.N / 2.0;
  Mat lo = o.n + (h - 1.0) * one + static_cast<double>(sign) * o.l;
  Mat hi = o.n + (h + 1.0) * one + static_cast<double>(sign) * o.l;
  ShiftOperators out;
  for (int i = 0; i < o.N; ++i) {
    Mat a = annihilator(s, i), ad = creator(s, i);
    out.down_a.push_back(a * lo - ad * o.aa);
    out.down_b.push_back(a * hi - o.aa * ad);
    out.up_a.push_back(ad * lo - o.adad * a);
    out.up_b.push_back(ad * hi - a * o.adad);
  }
  return out;
}

// l alpha^+_{+-} = alpha^+_{+-}(l +- 1),  l alpha_{+-} = alpha_{+-}(l -+ 1)
inline double eige_residual(const FockSpace& s, const OrbitalData& o, const ShiftOperators& sh, int sign) {
  const Mat one = Mat::Identity(s.dim(), s.dim());
  double worst = 0.0;
  for (int i = 0; i < o.N; ++i) {
    worst = std::max(worst, safe_norm(s, o.l * sh.up_a[i] - sh.up_a[i] * (o.l + sign * one), 2));
    worst = std::max(worst, safe_norm(s, o.l * sh.down_a[i] - sh.down_a[i] * (o.l - sign * one), 2));
  }
  return worst;
}

inline double ordering_residual(const FockSpace& s, const ShiftOperators& sh) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sh.up_a.size(); ++i) {
    worst = std::max(worst, safe_norm(s, sh.up_a[i] - sh.up_b[i], 2));
    worst = std::max(worst, safe_norm(s, sh.down_a[i] - sh.down_b[i], 2));
  }
  return worst;
}

// [l^2, a^i]   = -a^i(2n+1+N) + 2(a.a)a+_i   = -a^i(2n-3+N) + 2a+_i(a.a)
// [l^2, a+_i]  =  a+_i(2n+3+N) - 2a^i(a+.a+) =  a+_i(2n-1+N) - 2(a+.a+)a^i
inline double l2_commutator_residual(const FockSpace& s, const OrbitalData& o) {
  const Mat one = Mat::Identity(s.dim(), s.dim());
  const double N = o.N;
  double worst = 0.0;
  for (int i = 0; i < o.N; ++i) {
    Mat a = annihilator(s, i), ad = creator(s, i);
    Mat ca = commutator(o.l2, a), cad = commutator(o.l2, ad);
    worst = std::max(worst, safe_norm(s, ca - (-a * (2.0 * o.n + (1.0 + N) * one) + 2.0 * o.aa * ad), 2));
    worst = std::max(worst, safe_norm(s, ca - (-a * (2.0 * o.n + (N - 3.0) * one) + 2.0 * ad * o.aa), 2));
    worst = std::max(worst, safe_norm(s, cad - (ad * (2.0 * o.n + (3.0 + N) * one) - 2.0 * a * o.adad), 2));
    worst = std::max(worst, safe_norm(s, cad - (ad * (2.0 * o.n + (N - 1.0) * one) - 2.0 * o.adad * a), 2));
  }
  return worst;
}

struct FunctionalEquationResult {
  std::array<double, 4> residual{0.0, 0.0, 0.0, 0.0};
  std::array<int, 4> points{0, 0, 0, 0};  // grid points where the equation could be evaluated
  double max() const { return std::max({residual[0], residual[1], residual[2], residual[3]}); }
};

// The four conditions on y_so(N), with y(n',l')/y(n,l) from the telescoped
// ratio.  Writing m = n + N/2:
//  (1) (m+1-l) y(n+1,l+1)/y(n+2,l) - q^2 (m-1-l) y(n-1,l+1)/y(n,l)
//  (2) (m+1+l) y(n+1,l-1)/y(n+2,l) - q^2 (m-1+l) y(n-1,l-1)/y(n,l)
//  (3) (m+1-l) y(n,l)/y(n+1,l-1)   - q^2 (m-1-l) y(n-2,l)/y(n-1,l-1)
//  (4) (m+1+l) y(n,l)/y(n+1,l+1)   - q^2 (m-1+l) y(n-2,l)/y(n-1,l+1)
// each equal to 1 + q^{N-2}.  Only points whose shifted partners are also in
// the realised spectrum are used.
inline FunctionalEquationResult verify_y_soN(const OrbitalData& o, double q) {
  if (o.grid.size() < 4) throw std::invalid_argument("verify_y_soN: spectral grid too small");
  const int N = o.N;
  const double target = 1.0 + std::pow(q, N - 2);
  auto has = [&](int n, int two_l) { return o.grid.count(GridPoint{n, two_l}) != 0; };
  // y(to)/y(from)
  auto ratio = [&](int n_to, int tl_to, int n_from, int tl_from) {
    return y_soN_ratio(n_from, tl_from / 2.0, n_to, tl_to / 2.0, N, q);
  };
  FunctionalEquationResult out;
  for (const auto& [pt, mult] : o.grid) {
    (void)mult;
    const int n = pt.n, L = pt.two_l;
    const double l = pt.l();
    const double m = n + N / 2.0;
    struct Term {
      int n1, L1, n2, L2;  // y(n1,L1)/y(n2,L2)
    };
    const double coef[4][2] = {{m + 1 - l, m - 1 - l}, {m + 1 + l, m - 1 + l}, {m + 1 - l, m - 1 - l}, {m + 1 + l, m - 1 + l}};
    const Term first[4] = {{n + 1, L + 2, n + 2, L}, {n + 1, L - 2, n + 2, L}, {n, L, n + 1, L - 2}, {n, L, n + 1, L + 2}};
    const Term second[4] = {{n - 1, L + 2, n, L}, {n - 1, L - 2, n, L}, {n - 2, L, n - 1, L - 2}, {n - 2, L, n - 1, L + 2}};
    for (int e = 0; e < 4; ++e) {
      const Term& f = first[e];
      const Term& g = second[e];
      if (!has(f.n1, f.L1) || !has(f.n2, f.L2) || !has(g.n1, g.L1) || !has(g.n2, g.L2)) continue;
      double lhs = coef[e][0] * ratio(f.n1, f.L1, f.n2, f.L2) - q * q * coef[e][1] * ratio(g.n1, g.L1, g.n2, g.L2);
      out.residual[e] = std::max(out.residual[e], std::abs(lhs - target));
      out.points[e] += 1;
    }
  }
  return out;
}

}  // namespace qheis
