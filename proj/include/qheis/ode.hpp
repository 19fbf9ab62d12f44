#pragma once

// Dormand-Prince 5(4) with the standard fourth-order continuous extension.
// State is any Eigen dense type with complex or real entries; the same code
// drives the scalar KZ system (3-vectors) and the operator-valued one (matrices).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qheis {

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double h0 = 0.0;  // 0: pick automatically
  long max_steps = 5'000'000;
  bool dense = false;
  std::vector<double> stops;  // points the integrator must land on exactly
};

template <class State>
struct DenseStep {
  double t0;
  double h;
  State r1, r2, r3, r4, r5;

  State eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
};

template <class State>
struct OdeResult {
  State final_state;
  std::vector<State> at_stops;  // same order as OdeOptions::stops
  std::vector<DenseStep<State>> steps;
  long accepted = 0;
  long rejected = 0;

  // dense evaluation anywhere inside the integrated range
  State operator()(double t) const {
    if (steps.empty()) throw std::logic_error("OdeResult: dense output was not recorded");
    for (const auto& s : steps) {
      double lo = std::min(s.t0, s.t0 + s.h), hi = std::max(s.t0, s.t0 + s.h);
      if (t >= lo && t <= hi) return s.eval(t);
    }
    throw std::out_of_range("OdeResult: time outside the integrated range");
  }
};

namespace detail {

template <class State>
double err_norm(const State& err, const State& y0, const State& y1, double atol, double rtol) {
  auto sc = (atol + rtol * y0.array().abs().max(y1.array().abs())).eval();
  return std::sqrt((err.array().abs() / sc).square().mean());
}

}  // namespace detail

template <class State, class Rhs>
OdeResult<State> dopri5(Rhs&& f, double t0, double t1, const State& y0, const OdeOptions& opt = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  OdeResult<State> res;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<double> stops = opt.stops;
  for (double s : stops)
    if ((s - t0) * dir < 0.0 || (t1 - s) * dir < 0.0) throw std::invalid_argument("dopri5: stop outside range");
  std::vector<std::size_t> order(stops.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return (stops[a] - stops[b]) * dir < 0; });
  res.at_stops.resize(stops.size());
  std::size_t next_stop = 0;

  double t = t0;
  State y = y0;
  State k1 = f(t, y);
  // take care of stops sitting on the starting point
  while (next_stop < order.size() && stops[order[next_stop]] == t0) res.at_stops[order[next_stop++]] = y;

  double h = opt.h0;
  if (h == 0.0) {
    // Hairer's starting-step heuristic
    auto sc = (opt.atol + opt.rtol * y.array().abs()).eval();
    double dn0 = std::sqrt((y.array().abs() / sc).square().mean());
    double dn1 = std::sqrt((k1.array().abs() / sc).square().mean());
    double hh = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    hh = std::min(hh, std::abs(t1 - t0));
    State y1 = y + (dir * hh) * k1;
    State k2 = f(t + dir * hh, y1);
    double dn2 = std::sqrt(((k2 - k1).array().abs() / sc).square().mean()) / hh;
    double hh2 = std::max(dn1, dn2) <= 1e-15 ? std::max(1e-6, hh * 1e-3) : std::pow(0.01 / std::max(dn1, dn2), 0.2);
    h = std::min(100 * hh, hh2);
  }
  h = std::abs(h);

  while ((t1 - t) * dir > 0.0) {
    if (res.accepted + res.rejected >= opt.max_steps) throw std::runtime_error("dopri5: too many steps");
    double target = t1;
    bool hit_stop = false;
    if (next_stop < order.size()) {
      target = stops[order[next_stop]];
      hit_stop = true;
    }
    double hs = h;
    bool lands = false;
    if (hs >= std::abs(target - t)) {
      hs = std::abs(target - t);
      lands = true;
    }
    if (hs < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) && !lands)
      throw std::runtime_error("dopri5: step size collapse");
    const double hd = dir * hs;
    State k2 = f(t + c2 * hd, (y + hd * (a21 * k1)).eval());
    State k3 = f(t + c3 * hd, (y + hd * (a31 * k1 + a32 * k2)).eval());
    State k4 = f(t + c4 * hd, (y + hd * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    State k5 = f(t + c5 * hd, (y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    State k6 = f(t + hd, (y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    State ynew = (y + hd * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6)).eval();
    const double tnew = lands ? target : t + hd;
    State k7 = f(tnew, ynew);
    State err = (hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();
    double en = detail::err_norm(err, y, ynew, opt.atol, opt.rtol);
    if (!std::isfinite(en)) throw std::runtime_error("dopri5: non-finite error estimate");
    if (en <= 1.0) {
      if (opt.dense) {
        DenseStep<State> ds{t, hd, y, ynew - y, State(), State(), State()};
        ds.r3 = hd * k1 - ds.r2;
        ds.r4 = ds.r2 - hd * k7 - ds.r3;
        ds.r5 = hd * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        res.steps.push_back(std::move(ds));
      }
      t = tnew;
      y = ynew;
      k1 = k7;
      ++res.accepted;
      if (lands && hit_stop) {
        while (next_stop < order.size() && stops[order[next_stop]] == t) res.at_stops[order[next_stop++]] = y;
      }
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (!lands) h = hs * fac;
      else h = std::max(h, hs * fac);
    } else {
      ++res.rejected;
      h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }
  res.final_state = y;
  return res;
}

}  // namespace qheis
