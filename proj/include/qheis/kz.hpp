#pragma once

#include "qheis/braid.hpp"
#include "qheis/deform.hpp"
#include "qheis/fock.hpp"
#include "qheis/liealg.hpp"
#include "qheis/ode.hpp"
#include "qheis/qspecial.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qheis {

// ---------------------------------------------------------------------------
// scalar reduction

struct KZScalarParams {
  double n = 2.0;
  cplx eta = 0.1;  // 2*hbar
  int sign = 1;    // upper (+) / lower (-) sign of the system
};

using Vec3 = Eigen::Matrix<cplx, 3, 1>;

inline void validate(const KZScalarParams& p) {
  if (!(p.n >= 1.0)) throw std::invalid_argument("KZ: n must be >= 1");
  if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("KZ: sign must be +1 or -1");
  if (std::abs(p.eta) > 0.2) throw std::invalid_argument("KZ: |2 hbar| must stay <= 0.2");
}

//  f1' = eta[ s(1/(1-x) + (n-1)/x) f1 - f2/x ]
//  f2' = eta[ f1/(1-x) - s((n-1)/(1-x) + 1/x) f2 ]
//  f3' = eta[ -s f1/(1-x) + f2/x - s(1/(1-x) - 1/x)(n-1) f3 ]
// y = 1 - x is passed separately so that points close to x = 1 keep full
// relative precision
inline Vec3 kz_rhs(const KZScalarParams& p, double x, double y, const Vec3& f) {
  const double s = p.sign, n = p.n;
  const double u = 1.0 / y, v = 1.0 / x;
  Vec3 d;
  d(0) = p.eta * (s * (u + (n - 1.0) * v) * f(0) - f(1) * v);
  d(1) = p.eta * (f(0) * u - s * ((n - 1.0) * u + v) * f(1));
  d(2) = p.eta * (-s * f(0) * u + f(1) * v - s * (u - v) * (n - 1.0) * f(2));
  return d;
}

inline Vec3 kz_rhs(const KZScalarParams& p, double x, const Vec3& f) { return kz_rhs(p, x, 1.0 - x, f); }

// logit coordinate tau = ln(x/(1-x)); both x and 1-x come out without cancellation
inline double logit(double x) { return std::log(x) - std::log1p(-x); }
inline double logit_x(double tau) { return 1.0 / (1.0 + std::exp(-tau)); }
inline double logit_y(double tau) { return 1.0 / (1.0 + std::exp(tau)); }

// the decoupled combination f1 + s f2 + (n+1) f3 = s [x(1-x)]^{s eta (n-1)}
inline cplx kz_combination_exact(const KZScalarParams& p, double x) {
  return static_cast<double>(p.sign) * std::pow(cplx(x * (1.0 - x)), static_cast<double>(p.sign) * p.eta * (p.n - 1.0));
}

// f2 = x^{-s eta}(1-x)^{s eta(n-1)} F(s eta, -s eta, 1 + s eta n; 1-x)
// f1 = -(1/eta) F'(..;1-x) x^{-s eta}(1-x)^{1 + s eta(n-1)}
// f3 from the combination identity
inline Vec3 closed_form_f(const KZScalarParams& p, double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("closed_form_f: x outside (0,1)");
  Vec3 f;
  if (p.eta == cplx(0.0)) {
    f << 0.0, 1.0, 0.0;
    return f;
  }
  const double s = p.sign, n = p.n;
  const cplx a = s * p.eta, b = -s * p.eta, c = 1.0 + s * p.eta * n;
  const cplx px = std::pow(cplx(x), -s * p.eta);
  const cplx F = hyp2f1(a, b, c, 1.0 - x);
  const cplx dF = hyp2f1_deriv(a, b, c, 1.0 - x);
  f(1) = px * std::pow(cplx(1.0 - x), s * p.eta * (n - 1.0)) * F;
  f(0) = -(1.0 / p.eta) * dF * px * std::pow(cplx(1.0 - x), 1.0 + s * p.eta * (n - 1.0));
  f(2) = (kz_combination_exact(p, x) - f(0) - s * f(1)) / (n + 1.0);
  return f;
}

inline double closed_form_ode_residual(const KZScalarParams& p, double x) {
  // derivative of the closed forms from the hypergeometric derivative rule
  const double s = p.sign, n = p.n;
  if (p.eta == cplx(0.0)) return kz_rhs(p, x, closed_form_f(p, x)).cwiseAbs().maxCoeff();
  const cplx a = s * p.eta, b = -s * p.eta, c = 1.0 + s * p.eta * n;
  const cplx z = 1.0 - x;
  const cplx F = hyp2f1(a, b, c, z);
  const cplx F1 = hyp2f1_deriv(a, b, c, z);
  const cplx F2 = (a + 1.0) * (b + 1.0) / (c + 1.0) * a * b / c * hyp2f1(a + 2.0, b + 2.0, c + 2.0, z);
  const cplx e = p.eta;
  const cplx px = std::pow(cplx(x), -s * e);
  const cplx dpx = -s * e / x * px;
  const cplx m2 = std::pow(z, s * e * (n - 1.0));
  const cplx dm2 = -s * e * (n - 1.0) / z * m2;
  const cplx m1 = std::pow(z, 1.0 + s * e * (n - 1.0));
  const cplx dm1 = -(1.0 + s * e * (n - 1.0)) / z * m1;
  // d/dx F(1-x) = -F'
  Vec3 df;
  df(1) = dpx * m2 * F + px * dm2 * F - px * m2 * F1;
  df(0) = -(1.0 / e) * (-F2 * px * m1 + F1 * dpx * m1 + F1 * px * dm1);
  const cplx comb = kz_combination_exact(p, x);
  const cplx dcomb = s * e * (n - 1.0) * (1.0 / x - 1.0 / (1.0 - x)) * comb;
  df(2) = (dcomb - df(0) - s * df(1)) / (n + 1.0);
  Vec3 rhs = kz_rhs(p, x, closed_form_f(p, x));
  return (df - rhs).cwiseAbs().maxCoeff();
}

// The trajectory is integrated in tau = ln(x/(1-x)), where df/dtau = x(1-x) df/dx.
struct KZTrajectory {
  OdeResult<Vec3> ode;
  double x_seed;
  double x_end;
  Vec3 operator()(double x) const { return ode(logit(x)); }
};

// Frobenius data at x = 1, y = 1 - x: f = y^mu (v0 + v1 y + O(y^2)) with
// mu = s eta (n-1) and v0 = (0,1,0).  v1 follows from the ODE alone,
// (-(mu+1) - eta R) v1 = eta Q0 v0, R and Q0 being the residue at x = 1 and
// the constant part of the 1/x terms.
inline Vec3 asymptotic_seed(const KZScalarParams& p, double y) {
  const double s = p.sign, n = p.n;
  const cplx mu = s * p.eta * (n - 1.0);
  Eigen::Matrix3cd R;
  R << s, 0.0, 0.0, 1.0, -s * (n - 1.0), 0.0, -s, 0.0, -s * (n - 1.0);
  Vec3 q0v0(-1.0, -s, 1.0);
  Eigen::Matrix3cd L = -(mu + 1.0) * Eigen::Matrix3cd::Identity() - p.eta * R;
  Vec3 v1 = L.fullPivLu().solve(p.eta * q0v0);
  Vec3 v0(0.0, 1.0, 0.0);
  return std::pow(cplx(y), mu) * (v0 + y * v1);
}

// seeded at x = 1 - seed_eps from the asymptotics above and integrated down
// to x_end
inline KZTrajectory integrate_scalar(const KZScalarParams& p, double seed_eps, double x_end,
                                     std::vector<double> stops = {}, bool dense = true) {
  validate(p);
  if (!(seed_eps > 0.0 && seed_eps < 0.5) || !(x_end > 0.0 && x_end < 1.0 - seed_eps))
    throw std::invalid_argument("integrate_scalar: bad endpoints");
  const double tau0 = std::log1p(-seed_eps) - std::log(seed_eps);
  Vec3 f0 = asymptotic_seed(p, seed_eps);
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  opt.dense = dense;
  for (double x : stops) opt.stops.push_back(logit(x));
  auto rhs = [&p](double tau, const Vec3& f) -> Vec3 {
    const double x = logit_x(tau), y = logit_y(tau);
    return x * y * kz_rhs(p, x, y, f);
  };
  return {dopri5(rhs, tau0, logit(x_end), f0, opt), 1.0 - seed_eps, x_end};
}

struct KZLimits {
  cplx l1, l2, l3;
};

inline cplx qbracket_eta(double n, cplx eta) {
  // [n]_q with q = e^h, h = i pi eta
  const double pi = std::numbers::pi;
  return std::sin(n * pi * eta) / std::sin(pi * eta);
}

// l1 = -s n/[n]_q, l3 = s, l2 = (n l3 - l1)/(n+1)
inline KZLimits expected_limits(const KZScalarParams& p) {
  const double s = p.sign, n = p.n;
  cplx qn = p.eta == cplx(0.0) ? cplx(n) : qbracket_eta(n, p.eta);
  KZLimits l;
  l.l1 = -s * n / qn;
  l.l3 = s;
  l.l2 = (n * l.l3 - l.l1) / (n + 1.0);
  return l;
}

// The l1 expression exactly as it is usually quoted, -s/[n]_q.  Kept only to
// report how far it is from the computed limit.
inline cplx quoted_l1(const KZScalarParams& p) {
  cplx qn = p.eta == cplx(0.0) ? cplx(p.n) : qbracket_eta(p.n, p.eta);
  return -static_cast<double>(p.sign) / qn;
}

inline cplx quoted_l2(const KZScalarParams& p) {
  cplx qn = p.eta == cplx(0.0) ? cplx(p.n) : qbracket_eta(p.n, p.eta);
  return static_cast<double>(p.sign) * p.n / (p.n + 1.0) * (1.0 + 1.0 / qn);
}

// Closed-form route.  Near x = 0 the connection formula splits F(a,b,c;1-x)
// into G1 F(..;x) + G2 x^{c-a-b} F(..;x); the x^{-s eta n} pieces cancel in
// n f1 - s f2 and what survives is n (1 + s eta n) G2 / eta.
inline KZLimits limits_closed_form(const KZScalarParams& p) {
  validate(p);
  const double s = p.sign, n = p.n;
  if (p.eta == cplx(0.0)) return expected_limits(p);
  const cplx a = s * p.eta, b = -s * p.eta, c = 1.0 + s * p.eta * n;
  if (near_integer(c - a - b)) throw std::domain_error("limits_closed_form: degenerate connection formula");
  const cplx g2 = gamma(c) * gamma(a + b - c) / (gamma(a) * gamma(b));
  KZLimits l;
  l.l1 = n * (1.0 + s * p.eta * n) * g2 / p.eta;
  l.l3 = s;
  l.l2 = (n * l.l3 - l.l1) / (n + 1.0);
  return l;
}

// the three combinations multiplied by x^{-s eta (n-1)}
inline std::array<cplx, 3> limit_combinations(const KZScalarParams& p, double x, const Vec3& f) {
  const double s = p.sign, n = p.n;
  const cplx pre = std::pow(cplx(x), -s * p.eta * (n - 1.0));
  return {pre * (n * f(0) - s * f(1)), pre * (n * f(2) + s * f(1)), pre * (f(0) + s * f(1) + (n + 1.0) * f(2))};
}

// Trajectory route: g(x) = L + c1 x^{1 - s eta n} + c2 x + O(x^2); three
// abscissae determine L exactly up to the neglected order.
inline KZLimits limits_trajectory(const KZScalarParams& p, const std::array<double, 3>& eps, double seed_eps = 1e-8) {
  validate(p);
  const double lo = std::min({eps[0], eps[1], eps[2]});
  KZTrajectory tr = integrate_scalar(p, seed_eps, lo, {eps[0], eps[1], eps[2]}, false);
  const cplx expo = 1.0 - static_cast<double>(p.sign) * p.eta * p.n;
  Eigen::Matrix3cd V;
  Eigen::Matrix3cd G;  // rows: abscissae, columns: combination
  for (int r = 0; r < 3; ++r) {
    const double x = eps[r];
    V(r, 0) = 1.0;
    V(r, 1) = std::pow(cplx(x), expo);
    V(r, 2) = x;
    auto g = limit_combinations(p, x, tr.ode.at_stops[r]);
    for (int k = 0; k < 3; ++k) G(r, k) = g[k];
  }
  Eigen::Matrix3cd coef = V.fullPivLu().solve(G);
  return {coef(0, 0), coef(0, 1), coef(0, 2)};
}

// u' = eta[ s n u (1/x + 1/(1-x)) - 1/x - u^2/(1-x) ]   for u = f1/f2,
// with u' taken from the system itself
inline double riccati_residual(const KZScalarParams& p, double x, const Vec3& f) {
  Vec3 d = kz_rhs(p, x, f);
  const cplx u = f(0) / f(1);
  const cplx du = (d(0) * f(1) - f(0) * d(1)) / (f(1) * f(1));
  const double s = p.sign, n = p.n;
  const cplx rhs = p.eta * (s * n * u * (1.0 / x + 1.0 / (1.0 - x)) - 1.0 / x - u * u / (1.0 - x));
  return std::abs(du - rhs) / std::max(1.0, std::abs(du));
}

// u from the closed form, -(1-x)/eta d/dz ln F(z) at z = 1-x
inline cplx riccati_u_closed(const KZScalarParams& p, double x) {
  const double s = p.sign, n = p.n;
  if (p.eta == cplx(0.0)) return 0.0;
  const cplx a = s * p.eta, b = -s * p.eta, c = 1.0 + s * p.eta * n;
  return -(1.0 - x) / p.eta * hyp2f1_deriv(a, b, c, 1.0 - x) / hyp2f1(a, b, c, 1.0 - x);
}

// ---------------------------------------------------------------------------
// operator-valued system on C^N (x) C^N (x) Fock

struct KZOperatorSystem {
  int N = 0;
  int cutoff = 0;
  FockSpace space;
  Mat P, A, B;  // full matrices, index (i*N + j)*dim + k
  std::vector<std::vector<int>> sectors;  // full indices of each total-number sector

  KZOperatorSystem(int modes, int cut) : N(modes), cutoff(cut), space(modes, Statistics::Bose, cut) {
    if (modes < 2 || modes > 3) throw std::invalid_argument("KZOperatorSystem: N must be 2 or 3");
    if (cut < 1 || cut > 6) throw std::invalid_argument("KZOperatorSystem: cutoff must lie in [1, 6]");
    const int d = space.dim();
    const Mat oneN = Mat::Identity(N, N), oneF = Mat::Identity(d, d);
    P = kron(permutation_matrix(N), oneF);
    A = Mat::Zero(N * N * d, N * N * d);
    B = A;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Mat hop = creator(space, j) * annihilator(space, i);
        A += kron(kron(oneN, unit(N, i, j)), hop);
        B += kron(kron(unit(N, i, j), oneN), hop);
      }
    sectors.resize(cutoff + 1);
    for (int ij = 0; ij < N * N; ++ij)
      for (int k = 0; k < d; ++k) sectors[space.total(k)].push_back(ij * d + k);
  }

  int full_dim() const { return N * N * space.dim(); }

  Mat restrict(const Mat& m, int sec) const {
    const auto& idx = sectors[sec];
    Mat out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
    return out;
  }

  // aa = sum_ij e_i (x) e_j (x) a^i a^j, as a map Fock -> C^N (x) C^N (x) Fock
  Mat aa_column() const {
    const int d = space.dim();
    Mat out = Mat::Zero(N * N * d, d);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        out.block((i * N + j) * d, 0, d, d) = annihilator(space, i) * annihilator(space, j);
    return out;
  }

  Mat block(const Mat& m, int row_pair, int col_pair) const {
    const int d = space.dim();
    return m.block(row_pair * d, col_pair * d, d, d);
  }
};

inline Mat hermitian_power(const Mat& H, double x, cplx c) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Vec w = (c * std::log(x) * es.eigenvalues().cast<cplx>()).array().exp().matrix();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

// x^{cP} for an involution P
inline Mat involution_power(const Mat& P, double x, cplx c) {
  const Mat one = Mat::Identity(P.rows(), P.cols());
  const cplx xp = std::pow(cplx(x), c), xm = std::pow(cplx(x), -c);
  return xp * (one + P) / 2.0 + xm * (one - P) / 2.0;
}

struct Coassociator {
  Mat M;
  double eps_error = 0.0;  // ||M(eps) - M(eps/2)||
  long steps = 0;
};

// M = x0^{-2hP} K(x0), with dK/dx = 2h (P/x + A/(x-1)) K and K(1-y0) = y0^{2hA},
// x0 = y0 = eps, solved independently in every total-number sector
inline Mat coassociator_at(const KZOperatorSystem& sys, cplx hbar, double eps, long* steps = nullptr) {
  const cplx eta = 2.0 * hbar;
  Mat M = Mat::Zero(sys.full_dim(), sys.full_dim());
  for (int sec = 0; sec <= sys.cutoff; ++sec) {
    Mat Ps = sys.restrict(sys.P, sec), As = sys.restrict(sys.A, sec);
    Mat K0 = hermitian_power(As, eps, eta);
    Mat Ks = K0;
    if (eta != cplx(0.0)) {
      // in tau = ln(x/(1-x)) the right side x(1-x)(P/x + A/(x-1)) becomes (1-x)P - xA
      auto rhs = [&](double tau, const Mat& K) -> Mat {
        return eta * ((logit_y(tau) * Ps - logit_x(tau) * As) * K);
      };
      OdeOptions opt;
      opt.rtol = 1e-12;
      opt.atol = 1e-14;
      const double tau0 = std::log1p(-eps) - std::log(eps);
      auto r = dopri5(rhs, tau0, -tau0, K0, opt);
      Ks = r.final_state;
      if (steps) *steps += r.accepted;
    }
    Mat Ms = involution_power(Ps, eps, -eta) * Ks;
    const auto& idx = sys.sectors[sec];
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) M(idx[r], idx[c]) = Ms(r, c);
  }
  return M;
}

inline cplx hbar_of(double h) { return h / (2.0 * std::numbers::pi * cplx(0.0, 1.0)); }

inline Coassociator coassociator_matrix(const KZOperatorSystem& sys, double h, double eps) {
  Coassociator c;
  c.M = coassociator_at(sys, hbar_of(h), eps, &c.steps);
  Mat half = coassociator_at(sys, hbar_of(h), eps / 2.0, &c.steps);
  c.eps_error = spectral_norm(c.M - half);
  return c;
}

struct FigataResiduals {
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
  double max() const { return std::max({f1, f2, f3}); }
};

// V = q P q^P: the multiple of P q^{(rho x rho)(t/2)} whose spectrum {q^2, -1}
// matches the cross matrix q Rhat of the bosonic relations
inline Mat figata_V(const KZOperatorSystem& sys, double q) {
  const Mat one = Mat::Identity(sys.full_dim(), sys.full_dim());
  Mat qP = q * (one + sys.P) / 2.0 + (one - sys.P) / (2.0 * q);
  return q * sys.P * qP;
}

// The three relations with sf = +1 (Weyl) or -1, dressed generators a^i and
// a^+_i Ihat(n), Ihat(n) = (n+1)_{q^{+-2}}/(n+1):
//   a^i a^j      -+ (M^-1 P M)^{ji}_{lm} a^m a^l
//   a+_i a+_j    -+ a+_l a+_m (M^-1 P M)^{lm}_{ij}
//   a^i a+_j Ih  - delta -+ a+_l (M^-1 V M)^{il}_{jm} Ih a^m
inline FigataResiduals figata_check(const KZOperatorSystem& sys, const Mat& M, double q, int sf) {
  const int N = sys.N;
  const FockSpace& s = sys.space;
  const int d = s.dim();
  double cond = condition_number(M);
  if (!(cond < 1e8)) throw std::domain_error("figata_check: M is ill conditioned");
  Mat Minv = M.inverse();
  Mat X = Minv * sys.P * M;
  Mat Y = Minv * figata_V(sys, q) * M;
  const double qq = std::pow(q, 2.0 * sf);
  Mat Ih = diag_fn(s, [&](const Occupation& o) {
    int n = 0;
    for (int v : o) n += v;
    return qnum(n + 1.0, qq) / (n + 1.0);
  });
  auto a = annihilators(s);
  auto ad = creators(s);
  const Mat P2 = safe_projector(s, 2);
  auto nrm = [&](const Mat& x) { return spectral_norm(P2 * x * P2); };
  FigataResiduals out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Mat r1 = a[i] * a[j], r2 = ad[i] * ad[j], r3 = a[i] * ad[j] * Ih;
      if (i == j) r3 -= Mat::Identity(d, d);
      for (int l = 0; l < N; ++l)
        for (int m = 0; m < N; ++m) {
          r1 -= sf * sys.block(X, j * N + i, l * N + m) * a[m] * a[l];
          r2 -= sf * ad[l] * ad[m] * sys.block(X, l * N + m, i * N + j);
          r3 -= sf * ad[l] * sys.block(Y, i * N + l, j * N + m) * Ih * a[m];
        }
      out.f1 = std::max(out.f1, nrm(r1));
      out.f2 = std::max(out.f2, nrm(r2));
      out.f3 = std::max(out.f3, nrm(r3));
    }
  return out;
}

// ||M aa - aa||
inline double m_trivial_on_aa(const KZOperatorSystem& sys, const Mat& M) {
  Mat aa = sys.aa_column();
  return spectral_norm(M * aa - aa);
}

// max_X ||[M, rho(X) (x) 1 (x) 1 + 1 (x) rho(X) (x) 1 + 1 (x) 1 (x) sigma(X)]||
inline double m_invariance(const KZOperatorSystem& sys, const Mat& M) {
  LieData data(Family::slN, sys.N);
  const Mat oneN = Mat::Identity(sys.N, sys.N), oneF = Mat::Identity(sys.space.dim(), sys.space.dim());
  double worst = 0.0;
  for (Gen x : lie_basis(data)) {
    Mat r = rho(data, x);
    Mat D = kron(kron(r, oneN), oneF) + kron(kron(oneN, r), oneF) + kron(kron(oneN, oneN), sigma(sys.space, data, x));
    worst = std::max(worst, spectral_norm(commutator(M, D)));
  }
  return worst;
}

}  // namespace qheis
