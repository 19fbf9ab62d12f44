#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qheis {

using cplx = std::complex<double>;

namespace detail {

inline cplx expm1(cplx z) {
  if (std::abs(z) < 1e-5) return z * (1.0 + z * (0.5 + z / 6.0));
  return std::exp(z) - 1.0;
}

inline bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

}  // namespace detail

// (x)_q = (q^x - 1)/(q - 1), continuous through q = 1
inline cplx qnum(cplx x, cplx q) {
  cplx h = std::log(q);
  if (h == cplx(0.0)) return x;
  return detail::expm1(x * h) / detail::expm1(h);
}

// [x]_q = (q^x - q^-x)/(q - q^-1)
inline cplx qbracket(cplx x, cplx q) {
  cplx h = std::log(q);
  if (h == cplx(0.0)) return x;
  return std::sinh(x * h) / std::sinh(h);
}

// (x)_q / x with the removable point x = 0 sent to `at_zero`
inline double qnum_over_n(int n, double q, double at_zero = 1.0) {
  if (n == 0) return at_zero;
  return qnum(static_cast<double>(n), q).real() / n;
}

// Gamma_q at positive integers: Gamma_q(1) = 1, Gamma_q(a+1) = (a)_q Gamma_q(a)
inline double qgamma_int(int a, double q) {
  if (a < 1) throw std::domain_error("qgamma_int: argument must be a positive integer");
  double g = 1.0;
  for (int k = 1; k < a; ++k) g *= qnum(static_cast<double>(k), q).real();
  return g;
}

// Gamma_q(a).  Positive integers go through the recurrence for any q > 0;
// other arguments need the product (1-q)^{1-a} prod (1-q^{k+1})/(1-q^{k+a}),
// which only converges for |q| < 1.
inline cplx qgamma(cplx a, double q) {
  if (!(q > 0.0)) throw std::domain_error("qgamma: q must be positive");
  if (a.imag() == 0.0 && a.real() >= 1.0 && a.real() == std::round(a.real()) && a.real() < 1e6)
    return qgamma_int(static_cast<int>(a.real()), q);
  if (!(q < 1.0)) throw std::domain_error("qgamma: non-integer argument needs q < 1");
  if (detail::is_nonpositive_integer(a)) throw std::domain_error("qgamma: pole");
  cplx lp = (1.0 - a) * std::log1p(-q);
  double qk = 1.0;  // q^k
  for (int k = 0; k < 100000; ++k) {
    double num = std::log1p(-qk * q);
    cplx den = std::log(1.0 - qk * std::pow(q, a));
    lp += num - den;
    qk *= q;
    if (qk < 1e-18) break;
  }
  return std::exp(lp);
}

// Gamma~_q(a) = Gamma_{q^2}(a) q^{-a(a-3)/2}
inline cplx qgamma_tilde(cplx a, double q) {
  return qgamma(a, q * q) * std::pow(cplx(q), -a * (a - 3.0) / 2.0);
}

// Lanczos approximation (g = 7, 9 terms) with reflection for Re a < 1/2
inline cplx gamma(cplx a) {
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (detail::is_nonpositive_integer(a)) throw std::domain_error("gamma: pole");
  const double pi = std::numbers::pi;
  if (a.real() < 0.5) return pi / (std::sin(pi * a) * gamma(1.0 - a));
  cplx z = a - 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

inline cplx beta(cplx a, cplx b) { return gamma(a) * gamma(b) / gamma(a + b); }

// |Gamma(a)Gamma(-a) + pi/(a sin(pi a))| relative to the right side
inline double reflection_residual(cplx a) {
  const double pi = std::numbers::pi;
  cplx rhs = -pi / (a * std::sin(pi * a));
  return std::abs(gamma(a) * gamma(-a) - rhs) / std::abs(rhs);
}

struct Hyp2f1Terms {
  cplx f;
  cplx df;
  cplx d2f;
};

// Direct Gauss series with term-wise first and second derivatives.  Stops once
// three consecutive terms fall below 1e-17 of the partial sum.
inline Hyp2f1Terms hyp2f1_series(cplx a, cplx b, cplx c, cplx z) {
  if (detail::is_nonpositive_integer(c)) throw std::domain_error("2F1: c is a non-positive integer");
  cplx coef = 1.0;  // (a)_k (b)_k / ((c)_k k!)
  cplx zk = 1.0;    // z^k
  cplx zkm1 = 0.0, zkm2 = 0.0;
  Hyp2f1Terms s{0.0, 0.0, 0.0};
  int small = 0;
  for (int k = 0; k < 200000; ++k) {
    cplx term = coef * zk;
    s.f += term;
    if (k >= 1) s.df += coef * static_cast<double>(k) * zkm1;
    if (k >= 2) s.d2f += coef * static_cast<double>(k) * (k - 1.0) * zkm2;
    if (coef == cplx(0.0)) return s;
    double mag = std::abs(term) + std::abs(coef * static_cast<double>(k) * zkm1);
    double ref = std::abs(s.f) + std::abs(s.df);
    small = (mag <= 1e-17 * ref) ? small + 1 : 0;
    if (small >= 3) return s;
    coef *= (a + static_cast<double>(k)) * (b + static_cast<double>(k)) /
            ((c + static_cast<double>(k)) * (k + 1.0));
    zkm2 = zkm1;
    zkm1 = zk;
    zk *= z;
  }
  throw std::runtime_error("2F1: series did not converge");
}

inline bool near_integer(cplx z) {
  return std::abs(z.imag()) < 1e-14 && std::abs(z.real() - std::round(z.real())) < 1e-14;
}

// F(a,b,c;z) = B(c,c-a-b)/B(c-a,c-b) F(a,b,a+b+1-c;1-z)
//            + B(c,a+b-c)/B(a,b) (1-z)^{c-a-b} F(c-a,c-b,c+1-a-b;1-z)
inline cplx hyp2f1_connection(cplx a, cplx b, cplx c, cplx z) {
  if (near_integer(c - a - b)) throw std::domain_error("2F1: c-a-b is an integer, connection formula degenerate");
  cplx w = 1.0 - z;
  cplx g1 = gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
  cplx g2 = gamma(c) * gamma(a + b - c) / (gamma(a) * gamma(b));
  cplx first = hyp2f1_series(a, b, a + b + 1.0 - c, w).f;
  cplx second = std::pow(w, c - a - b) * hyp2f1_series(c - a, c - b, c + 1.0 - a - b, w).f;
  return g1 * first + g2 * second;
}

inline cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
  if (detail::is_nonpositive_integer(c)) throw std::domain_error("2F1: c is a non-positive integer");
  if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b)) return hyp2f1_series(a, b, c, z).f;
  if (std::abs(z) <= 0.7) return hyp2f1_series(a, b, c, z).f;
  if (std::abs(1.0 - z) <= 0.7) return hyp2f1_connection(a, b, c, z);
  if (std::abs(z) < 1.0) return hyp2f1_series(a, b, c, z).f;
  throw std::domain_error("2F1: argument outside the implemented region");
}

// dF/dz = ab/c F(a+1, b+1, c+1; z)
inline cplx hyp2f1_deriv(cplx a, cplx b, cplx c, cplx z) {
  if (a == cplx(0.0) || b == cplx(0.0)) return 0.0;
  return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

// z(1-z)F'' + [c - (a+b+1)z]F' - ab F, with term-wise derivatives
inline double hyp2f1_ode_residual(cplx a, cplx b, cplx c, cplx z) {
  Hyp2f1Terms t = hyp2f1_series(a, b, c, z);
  cplx r = z * (1.0 - z) * t.d2f + (c - (a + b + 1.0) * z) * t.df - a * b * t.f;
  double scale = std::abs(z * (1.0 - z) * t.d2f) + std::abs((c - (a + b + 1.0) * z) * t.df) + std::abs(a * b * t.f);
  return std::abs(r) / std::max(scale, 1.0);
}

// y_sl(N)(n) = Gamma(n+1)/Gamma_{q^2}(n+1)
inline double y_slN(int n, double q) {
  if (n < 0) throw std::domain_error("y_slN: negative argument");
  double y = 1.0;
  for (int k = 1; k <= n; ++k) y *= k / qnum(static_cast<double>(k), q * q).real();
  return y;
}

namespace detail {

// G(s) = Gamma(s)/Gamma_{q^2}(s), ratio G(s + m)/G(s) for integer m
inline double g_ratio(double s, int m, double q) {
  double r = 1.0;
  auto factor = [q](double x) {
    if (x == 0.0) return 2.0 * std::log(q) / (q * q - 1.0);
    return qnum(x, q * q).real() / x;
  };
  if (m > 0)
    for (int k = 0; k < m; ++k) r /= factor(s + k);
  else
    for (int k = 1; k <= -m; ++k) r *= factor(s - k);
  return r;
}

inline int integer_shift(double d) {
  double r = std::round(d);
  if (std::abs(d - r) > 1e-9) throw std::domain_error("y_soN_ratio: shift does not telescope to integer steps");
  return static_cast<int>(r);
}

}  // namespace detail

// y_so(N)(n2,l2) / y_so(N)(n,l), built only from recurrence factors
inline double y_soN_ratio(double n, double l, double n2, double l2, int N, double q) {
  double half = N / 2.0;
  double sm = 0.5 * (n + half + 1.0 - l);
  double sp = 0.5 * (n + half + 1.0 + l);
  int dm = detail::integer_shift(0.5 * ((n2 - n) - (l2 - l)));
  int dp = detail::integer_shift(0.5 * ((n2 - n) + (l2 - l)));
  int dn = detail::integer_shift(n2 - n);
  double kappa = (1.0 + std::pow(q, N - 2)) / 2.0;
  return std::pow(kappa, -dn) * detail::g_ratio(sm, dm, q) * detail::g_ratio(sp, dp, q);
}

}  // namespace qheis
