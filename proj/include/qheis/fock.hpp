#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Occupation = std::vector<int>;

enum class Statistics { Bose, Fermi };

inline const char* to_string(Statistics s) { return s == Statistics::Bose ? "bose" : "fermi"; }

// +1 for Weyl (Bose), -1 for Clifford (Fermi).  Most relations carry this as
// the upper/lower sign.
inline int stat_sign(Statistics s) { return s == Statistics::Bose ? 1 : -1; }

class FockSpace {
 public:
  FockSpace(int modes, Statistics stats, int cutoff = 0) : modes_(modes), stats_(stats), cutoff_(cutoff) {
    if (modes < 1) throw std::invalid_argument("FockSpace: need at least one mode");
    if (stats == Statistics::Fermi) {
      cutoff_ = modes;
    } else if (cutoff < 1) {
      throw std::invalid_argument("FockSpace: bosonic cutoff must be >= 1");
    }
    Occupation cur(modes, 0);
    enumerate(0, 0, cur);
    for (std::size_t k = 0; k < basis_.size(); ++k) index_.emplace(basis_[k], k);
  }

  int modes() const { return modes_; }
  Statistics statistics() const { return stats_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Occupation>& basis() const { return basis_; }
  const Occupation& state(std::size_t k) const { return basis_.at(k); }

  int total(std::size_t k) const {
    int s = 0;
    for (int v : basis_[k]) s += v;
    return s;
  }

  bool contains(const Occupation& occ) const { return index_.count(occ) != 0; }

  std::size_t index(const Occupation& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end()) throw std::out_of_range("FockSpace: occupation tuple not in basis");
    return it->second;
  }

  // basis indices with total occupation exactly n
  std::vector<int> sector(int n) const {
    std::vector<int> out;
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (total(k) == n) out.push_back(static_cast<int>(k));
    return out;
  }

 private:
  void enumerate(int pos, int used, Occupation& cur) {
    if (pos == modes_) {
      basis_.push_back(cur);
      return;
    }
    int top = stats_ == Statistics::Fermi ? 1 : cutoff_ - used;
    for (int v = 0; v <= top; ++v) {
      cur[pos] = v;
      enumerate(pos + 1, used + v, cur);
    }
    cur[pos] = 0;
  }

  int modes_;
  Statistics stats_;
  int cutoff_;
  std::vector<Occupation> basis_;
  std::map<Occupation, std::size_t> index_;
};

inline void check_mode(const FockSpace& s, int i) {
  if (i < 0 || i >= s.modes()) throw std::out_of_range("mode index " + std::to_string(i) + " out of range");
}

// a^i, with the Jordan-Wigner string (-1)^{sum_{j<i} n_j} for fermions
inline Mat annihilator(const FockSpace& s, int i) {
  check_mode(s, i);
  Mat a = Mat::Zero(s.dim(), s.dim());
  for (int k = 0; k < s.dim(); ++k) {
    const Occupation& occ = s.state(k);
    if (occ[i] == 0) continue;
    Occupation lowered = occ;
    lowered[i] -= 1;
    double amp = std::sqrt(static_cast<double>(occ[i]));
    if (s.statistics() == Statistics::Fermi) {
      int parity = 0;
      for (int j = 0; j < i; ++j) parity += occ[j];
      if (parity % 2) amp = -amp;
    }
    a(static_cast<Eigen::Index>(s.index(lowered)), k) = amp;
  }
  return a;
}

inline Mat creator(const FockSpace& s, int i) { return annihilator(s, i).adjoint(); }

inline Mat diag_fn(const FockSpace& s, const std::function<cplx(const Occupation&)>& f) {
  Mat d = Mat::Zero(s.dim(), s.dim());
  for (int k = 0; k < s.dim(); ++k) {
    cplx v = f(s.state(k));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("diag_fn: non-finite value on basis state " + std::to_string(k));
    d(k, k) = v;
  }
  return d;
}

inline Mat number_op(const FockSpace& s, int i) {
  check_mode(s, i);
  return diag_fn(s, [i](const Occupation& o) { return cplx(o[i]); });
}

inline Mat total_number(const FockSpace& s) {
  return diag_fn(s, [](const Occupation& o) {
    int t = 0;
    for (int v : o) t += v;
    return cplx(t);
  });
}

// Projector onto states with total occupation <= cutoff - d.  Every identity
// containing d creators is only asserted between two of these.  The fermionic
// space is the whole exterior algebra, nothing is cut off, so it is the identity.
inline Mat safe_projector(const FockSpace& s, int d) {
  if (d < 0 || d > s.cutoff()) throw std::invalid_argument("safe_projector: degree outside [0, cutoff]");
  if (s.statistics() == Statistics::Fermi) return Mat::Identity(s.dim(), s.dim());
  int top = s.cutoff() - d;
  return diag_fn(s, [top](const Occupation& o) {
    int t = 0;
    for (int v : o) t += v;
    return cplx(t <= top ? 1.0 : 0.0);
  });
}

inline std::vector<Mat> annihilators(const FockSpace& s) {
  std::vector<Mat> out;
  for (int i = 0; i < s.modes(); ++i) out.push_back(annihilator(s, i));
  return out;
}

inline std::vector<Mat> creators(const FockSpace& s) {
  std::vector<Mat> out;
  for (int i = 0; i < s.modes(); ++i) out.push_back(creator(s, i));
  return out;
}

inline Mat commutator(const Mat& x, const Mat& y) { return x * y - y * x; }
inline Mat anticommutator(const Mat& x, const Mat& y) { return x * y + y * x; }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double spectral_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues()(0);
}

// residual of X between safe projectors of degree d
inline double safe_norm(const FockSpace& s, const Mat& x, int d) {
  Mat p = safe_projector(s, d);
  return spectral_norm(p * x * p);
}

// ||[n, X] - g X||, the grade bookkeeping defect
inline double grade_defect(const FockSpace& s, const Mat& x, int g) {
  Mat n = total_number(s);
  return spectral_norm(commutator(n, x) - static_cast<double>(g) * x);
}

}  // namespace qheis
