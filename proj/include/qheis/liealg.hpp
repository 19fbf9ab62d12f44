#pragma once

#include "qheis/fock.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace qheis {

enum class Family { slN, soN };

inline const char* to_string(Family f) { return f == Family::slN ? "sl" : "so"; }

struct LieData {
  Family family;
  int N;

  LieData(Family f, int n) : family(f), N(n) {
    if (n < 2) throw std::invalid_argument("LieData: N must be >= 2");
  }
};

// E_ij for sl(N) (diagonal ones are the traceless combinations e_ii - 1/N),
// L_ij = -L_ji for so(N).
struct Gen {
  int i;
  int j;
};

using Combination = std::vector<std::pair<cplx, Gen>>;

inline void check_gen(const LieData& d, Gen g) {
  if (g.i < 0 || g.j < 0 || g.i >= d.N || g.j >= d.N) throw std::out_of_range("Lie label outside basis");
  if (d.family == Family::soN && g.i == g.j) throw std::out_of_range("L_ii is not an so(N) generator");
}

// the spanning set used in every "for all X" loop; sl(N) keeps all N^2
// labels even though only N^2-1 are independent
inline std::vector<Gen> lie_basis(const LieData& d) {
  std::vector<Gen> out;
  for (int i = 0; i < d.N; ++i)
    for (int j = 0; j < d.N; ++j) {
      if (d.family == Family::soN && i >= j) continue;
      out.push_back({i, j});
    }
  return out;
}

inline Mat unit(int N, int i, int j) {
  Mat e = Mat::Zero(N, N);
  e(i, j) = 1.0;
  return e;
}

inline Mat rho(const LieData& d, Gen g) {
  check_gen(d, g);
  if (d.family == Family::slN) {
    Mat r = unit(d.N, g.i, g.j);
    if (g.i == g.j) r -= Mat::Identity(d.N, d.N) / static_cast<double>(d.N);
    return r;
  }
  return unit(d.N, g.i, g.j) - unit(d.N, g.j, g.i);
}

inline Mat rho(const LieData& d, const Combination& x) {
  Mat r = Mat::Zero(d.N, d.N);
  for (const auto& [c, g] : x) r += c * rho(d, g);
  return r;
}

// [X, Y] from the structure constants
inline Combination bracket(const LieData& d, Gen x, Gen y) {
  check_gen(d, x);
  check_gen(d, y);
  Combination out;
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  auto push = [&](double c, int a, int b) {
    if (c == 0.0) return;
    if (d.family == Family::soN) {
      if (a == b) return;
      if (a > b) {
        std::swap(a, b);
        c = -c;
      }
    }
    out.push_back({cplx(c), Gen{a, b}});
  };
  const int i = x.i, j = x.j, h = y.i, k = y.j;
  if (d.family == Family::slN) {
    push(delta(j, h), i, k);
    push(-delta(i, k), h, j);
  } else {
    push(delta(j, h), i, k);
    push(delta(i, h), k, j);
    push(-delta(i, k), h, j);
    push(-delta(j, k), i, h);
  }
  return out;
}

// Jordan-Schwinger image  rho(X)^i_j a^+_i a^j
inline Mat sigma(const FockSpace& s, const LieData& d, Gen g) {
  if (s.modes() != d.N) throw std::invalid_argument("sigma: mode count differs from N");
  Mat r = rho(d, g);
  Mat out = Mat::Zero(s.dim(), s.dim());
  for (int i = 0; i < d.N; ++i)
    for (int j = 0; j < d.N; ++j)
      if (r(i, j) != cplx(0.0)) out += r(i, j) * creator(s, i) * annihilator(s, j);
  return out;
}

inline Mat sigma(const FockSpace& s, const LieData& d, const Combination& x) {
  Mat out = Mat::Zero(s.dim(), s.dim());
  for (const auto& [c, g] : x) out += c * sigma(s, d, g);
  return out;
}

// sl(N): sigma(E_ij E_ji);  so(N): sigma(1/2 L_ij L^ji) with c = delta
inline Mat casimir_sigma(const FockSpace& s, const LieData& d) {
  if (s.modes() != d.N) throw std::invalid_argument("casimir_sigma: mode count differs from N");
  Mat c = Mat::Zero(s.dim(), s.dim());
  if (d.family == Family::slN) {
    for (int i = 0; i < d.N; ++i)
      for (int j = 0; j < d.N; ++j) c += sigma(s, d, Gen{i, j}) * sigma(s, d, Gen{j, i});
  } else {
    for (int i = 0; i < d.N; ++i)
      for (int j = i + 1; j < d.N; ++j) {
        Mat l = sigma(s, d, Gen{i, j});
        c -= l * l;
      }
  }
  return c;
}

// n(N +- n -+ 1) - n^2/N, upper sign Bose
inline Mat casimir_closed_form(const FockSpace& s, const LieData& d) {
  if (d.family != Family::slN) throw std::invalid_argument("closed-form Casimir is only known for sl(N)");
  const double sg = stat_sign(s.statistics());
  const double N = d.N;
  return diag_fn(s, [&](const Occupation& o) {
    double n = 0;
    for (int v : o) n += v;
    return cplx(n * (N + sg * n - sg) - n * n / N);
  });
}

// (rho x rho)(t): 2 E_ij (x) E_ji for sl(N), L_ij (x) L^ji for so(N)
inline Mat t_matrix(const LieData& d) {
  const int N = d.N;
  Mat t = Mat::Zero(N * N, N * N);
  if (d.family == Family::slN) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t += 2.0 * kron(rho(d, Gen{i, j}), rho(d, Gen{j, i}));
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        Mat l = rho(d, Gen{i, j});
        t -= 2.0 * kron(l, l);
      }
  }
  return t;
}

// (rho x rho) Delta(X) = rho(X) x 1 + 1 x rho(X)
inline Mat rho_coproduct(const LieData& d, Gen g) {
  Mat r = rho(d, g);
  Mat one = Mat::Identity(d.N, d.N);
  return kron(r, one) + kron(one, r);
}

// X |> b for X in the Lie algebra: the commutator with sigma(X)
inline Mat classical_action(const FockSpace& s, const LieData& d, Gen x, const Mat& b) {
  return commutator(sigma(s, d, x), b);
}

inline double homomorphism_residual(const FockSpace& s, const LieData& d) {
  double worst = 0.0;
  for (Gen x : lie_basis(d))
    for (Gen y : lie_basis(d)) {
      Mat lhs = sigma(s, d, bracket(d, x, y));
      Mat rhs = commutator(sigma(s, d, x), sigma(s, d, y));
      worst = std::max(worst, safe_norm(s, lhs - rhs, 0));
    }
  return worst;
}

// ||X |> a^+_i - rho(X)^j_i a^+_j|| and the matching annihilator law
inline double covariance_residual(const FockSpace& s, const LieData& d) {
  double worst = 0.0;
  auto a = annihilators(s);
  auto ad = creators(s);
  for (Gen x : lie_basis(d)) {
    Mat r = rho(d, x);
    for (int i = 0; i < d.N; ++i) {
      Mat up = classical_action(s, d, x, ad[i]);
      Mat down = classical_action(s, d, x, a[i]);
      for (int j = 0; j < d.N; ++j) {
        up -= r(j, i) * ad[j];
        down += r(i, j) * a[j];
      }
      worst = std::max({worst, safe_norm(s, up, 1), safe_norm(s, down, 1)});
    }
  }
  return worst;
}

}  // namespace qheis
