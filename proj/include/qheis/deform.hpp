#pragma once

#include "qheis/fock.hpp"
#include "qheis/qspecial.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

struct DeformedGenerators {
  Statistics stats = Statistics::Bose;
  int N = 0;
  double q = 1.0;
  std::vector<Mat> A;      // annihilator type, grade -1
  std::vector<Mat> Aplus;  // creator type, grade +1
  std::string dressing;
};

enum class Ordering { above, below };

inline const char* to_string(Ordering o) { return o == Ordering::above ? "above" : "below"; }

// A^+_i = sqrt((n_i)_{q^2}/n_i) q^{sum_{j in S(i)} n_j} a^+_i with S(i) the modes
// above (j > i) or below (j < i) i.  The diagonal factor acts on the image of
// a^+_i, so its value at n_i = 0 never enters; `at_zero` exists to test that.
inline DeformedGenerators slN_candidate_map(const FockSpace& s, double q, Ordering ord, double at_zero = 1.0) {
  if (s.statistics() != Statistics::Bose) throw std::invalid_argument("slN_candidate_map: bosonic space required");
  if (!(q > 0.0)) throw std::invalid_argument("slN_candidate_map: q must be positive");
  const int N = s.modes();
  DeformedGenerators g;
  g.stats = Statistics::Bose;
  g.N = N;
  g.q = q;
  g.dressing = std::string("sqrt((n_i)_{q^2}/n_i) q^{n_S(i)}, S=") + to_string(ord);
  for (int i = 0; i < N; ++i) {
    Mat d = diag_fn(s, [&](const Occupation& o) {
      double f = qnum_over_n(o[i], q * q, at_zero);
      if (f < 0.0) throw std::domain_error("slN_candidate_map: negative dressing");
      int ns = 0;
      for (int j = 0; j < N; ++j)
        if ((ord == Ordering::above && j > i) || (ord == Ordering::below && j < i)) ns += o[j];
      return cplx(std::sqrt(f) * std::pow(q, ns));
    });
    Mat ap = d * creator(s, i);
    g.Aplus.push_back(ap);
    g.A.push_back(ap.adjoint());
  }
  return g;
}

inline DeformedGenerators sl2_bose_map(const FockSpace& s, double q) {
  if (s.modes() != 2 || s.statistics() != Statistics::Bose)
    throw std::invalid_argument("sl2_bose_map: needs two bosonic modes");
  auto g = slN_candidate_map(s, q, Ordering::above);
  g.dressing = "sqrt(y_sl2) dressing";
  return g;
}

// A^+_up = q^{-n_down} a^+_up,  A^+_down = a^+_down
inline DeformedGenerators sl2_fermi_map(const FockSpace& s, double q) {
  if (s.modes() != 2 || s.statistics() != Statistics::Fermi)
    throw std::invalid_argument("sl2_fermi_map: needs two fermionic modes");
  DeformedGenerators g;
  g.stats = Statistics::Fermi;
  g.N = 2;
  g.q = q;
  g.dressing = "q^{-n_down} on the up mode";
  Mat d = diag_fn(s, [q](const Occupation& o) { return cplx(std::pow(q, -o[1])); });
  g.Aplus = {d * creator(s, 0), creator(s, 1)};
  g.A = {g.Aplus[0].adjoint(), g.Aplus[1].adjoint()};
  return g;
}

inline double condition_number(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) == 0.0) return INFINITY;
  return sv(0) / sv(sv.size() - 1);
}

struct Conjugated {
  DeformedGenerators gens;
  double cond;
  double distance_from_identity;
};

// A -> alpha A alpha^-1
inline Conjugated inner_automorphism(const DeformedGenerators& g, const Mat& alpha) {
  double cond = condition_number(alpha);
  if (!(cond < 1e12)) throw std::domain_error("inner_automorphism: alpha is numerically singular");
  Mat inv = alpha.inverse();
  Conjugated out{g, cond, spectral_norm(alpha - Mat::Identity(alpha.rows(), alpha.cols()))};
  for (auto& x : out.gens.A) x = alpha * x * inv;
  for (auto& x : out.gens.Aplus) x = alpha * x * inv;
  out.gens.dressing = g.dressing + ", conjugated";
  return out;
}

// alpha = sqrt(y(n_up) y(n_down)),  y(n) = n!/Gamma_{q^2}(n+1)
inline Mat oleg_alpha_sl2(const FockSpace& s, double q) {
  if (s.modes() != 2 || s.statistics() != Statistics::Bose)
    throw std::invalid_argument("oleg_alpha_sl2: needs two bosonic modes");
  return diag_fn(s, [q](const Occupation& o) { return cplx(std::sqrt(y_slN(o[0], q) * y_slN(o[1], q))); });
}

// the earlier realisation: A^up = a^up ((n_up)_{q^2}/n_up) q^{n_down},
// A^+_up = q^{n_down} a^+_up, A^down = a^down (n_down)_{q^2}/n_down, A^+_down = a^+_down
inline DeformedGenerators prior_work_generators(const FockSpace& s, double q) {
  if (s.modes() != 2 || s.statistics() != Statistics::Bose)
    throw std::invalid_argument("prior_work_generators: needs two bosonic modes");
  DeformedGenerators g;
  g.stats = Statistics::Bose;
  g.N = 2;
  g.q = q;
  g.dressing = "u = 1";
  Mat qdown = diag_fn(s, [q](const Occupation& o) { return cplx(std::pow(q, o[1])); });
  Mat fup = diag_fn(s, [q](const Occupation& o) { return cplx(qnum_over_n(o[0], q * q)); });
  Mat fdown = diag_fn(s, [q](const Occupation& o) { return cplx(qnum_over_n(o[1], q * q)); });
  g.A = {annihilator(s, 0) * fup * qdown, annihilator(s, 1) * fdown};
  g.Aplus = {qdown * creator(s, 0), creator(s, 1)};
  return g;
}

// N_h = A^+_i A^i
inline Mat q_number_operator(const DeformedGenerators& g) {
  Mat n = Mat::Zero(g.A[0].rows(), g.A[0].cols());
  for (int i = 0; i < g.N; ++i) n += g.Aplus[i] * g.A[i];
  return n;
}

inline double hermiticity_residual(const FockSpace& s, const DeformedGenerators& g) {
  double worst = 0.0;
  for (int i = 0; i < g.N; ++i) worst = std::max(worst, safe_norm(s, g.A[i].adjoint() - g.Aplus[i], 1));
  return worst;
}

inline double generator_distance(const DeformedGenerators& x, const DeformedGenerators& y) {
  double worst = 0.0;
  for (int i = 0; i < x.N; ++i)
    worst = std::max({worst, spectral_norm(x.A[i] - y.A[i]), spectral_norm(x.Aplus[i] - y.Aplus[i])});
  return worst;
}

inline double max_entry_difference(const DeformedGenerators& x, const DeformedGenerators& y) {
  double worst = 0.0;
  for (int i = 0; i < x.N; ++i)
    worst = std::max({worst, (x.A[i] - y.A[i]).cwiseAbs().maxCoeff(), (x.Aplus[i] - y.Aplus[i]).cwiseAbs().maxCoeff()});
  return worst;
}

}  // namespace qheis
