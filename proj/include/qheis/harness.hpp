#pragma once

#include "qheis/braid.hpp"
#include "qheis/config.hpp"
#include "qheis/deform.hpp"
#include "qheis/fock.hpp"
#include "qheis/kz.hpp"
#include "qheis/liealg.hpp"
#include "qheis/qspecial.hpp"
#include "qheis/report.hpp"
#include "qheis/soshift.hpp"
#include "qheis/verify.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace qheis {

// One independent unit of work inside a suite.  Tasks never share mutable
// state; the runner collects their cases in task order.
struct Task {
  std::string label;
  std::function<std::vector<Case>()> run;
};

// Collects the cases of a task.  Case names get the task label as prefix, and
// a --tol override replaces the tolerance of ordinary checks.  Controls and
// counting checks keep their fixed tolerance.
class CaseSink {
 public:
  CaseSink(std::string prefix, std::optional<double> tol) : prefix_(std::move(prefix)), tol_(tol) {}

  void check(const std::string& name, double residual, double tolerance, json meta = json::object()) {
    out_.push_back(make_case(full(name), residual, tol_ ? *tol_ : tolerance, std::move(meta)));
  }

  // residual is the number of violations; passes only at zero
  void count(const std::string& name, double violations, json meta = json::object()) {
    out_.push_back(make_case(full(name), violations, 0.0, std::move(meta)));
  }

  // a negative control passes when `observed` is at least `threshold`; the
  // stored residual is threshold/observed against tolerance 1
  void control(const std::string& name, double observed, double threshold, json meta = json::object()) {
    meta["observed"] = observed;
    meta["threshold"] = threshold;
    double r = observed > 0.0 ? threshold / observed : std::numeric_limits<double>::infinity();
    out_.push_back(make_case(full(name), r, 1.0, std::move(meta)));
  }

  std::vector<Case> take() { return std::move(out_); }

 private:
  std::string full(const std::string& name) const { return prefix_.empty() ? name : prefix_ + "/" + name; }
  std::string prefix_;
  std::optional<double> tol_;
  std::vector<Case> out_;
};

inline std::vector<Case> run_tasks(const std::vector<Task>& tasks, int jobs) {
  std::vector<std::vector<Case>> results(tasks.size());
  auto one = [&](std::size_t k) {
    try {
      results[k] = tasks[k].run();
    } catch (const std::exception& e) {
      results[k] = {failed_case(tasks[k].label + "/error", 0.0, e.what())};
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) one(k);
      });
    for (auto& t : pool) t.join();
  }
  std::vector<Case> all;
  for (auto& r : results)
    for (auto& c : r) all.push_back(std::move(c));
  return all;
}

namespace suites {

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline std::string tag(const char* key, double v) { return std::string(key) + "=" + short_double(v); }

// ---------------------------------------------------------------------------
// sl(2): the bosonic and fermionic maps share most checks

struct CrossSelection {
  std::string name;
  double residual = 0.0;
  int passing = 0;
  json all = json::object();
};

inline CrossSelection select_cross(const DcrResiduals& d, double tol) {
  CrossSelection s;
  s.residual = std::numeric_limits<double>::infinity();
  for (const auto& [name, r] : d.cross) {
    s.all[name] = r;
    if (r <= tol) ++s.passing;
    if (r < s.residual) {
      s.residual = r;
      s.name = name;
    }
  }
  return s;
}

// both Ncr signs; the one with the smaller residual is reported
inline NcrResiduals best_ncr(const FockSpace& s, const DeformedGenerators& g, json& meta) {
  NcrResiduals plus = ncr_residuals(s, g, 1), minus = ncr_residuals(s, g, -1);
  auto worst = [](const NcrResiduals& r) { return std::max({r.creator_rel, r.annihilator_rel, r.spectrum}); };
  meta["plus_sign_residual"] = worst(plus);
  meta["minus_sign_residual"] = worst(minus);
  NcrResiduals best = worst(plus) <= worst(minus) ? plus : minus;
  meta["sign"] = best.sign > 0 ? "q^2" : "q^-2";
  return best;
}

inline double vacuum_defect(const FockSpace& s, const DeformedGenerators& g) {
  Occupation zero(s.modes(), 0);
  const auto k = static_cast<Eigen::Index>(s.index(zero));
  double worst = 0.0;
  for (int i = 0; i < g.N; ++i) worst = std::max(worst, (g.Aplus[i].col(k) - creator(s, i).col(k)).norm());
  return worst;
}

inline double grade_defect_rel(const FockSpace& s, const DeformedGenerators& g) {
  double worst = 0.0;
  for (int i = 0; i < g.N; ++i) {
    worst = std::max(worst, grade_defect(s, g.A[i], -1) / std::max(1.0, spectral_norm(g.A[i])));
    worst = std::max(worst, grade_defect(s, g.Aplus[i], 1) / std::max(1.0, spectral_norm(g.Aplus[i])));
  }
  return worst;
}

inline double dcr_max(const DcrResiduals& d) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [name, r] : d.cross) best = std::min(best, r);
  return std::max({d.annihilators, d.creators, best});
}

inline std::vector<Case> sl2_case(Statistics st, double q, int cutoff, std::optional<double> tol,
                                  std::string* selected) {
  const bool bose = st == Statistics::Bose;
  FockSpace s(2, st, cutoff);
  CaseSink sink(tag("q", q), tol);
  DeformedGenerators g = bose ? sl2_bose_map(s, q) : sl2_fermi_map(s, q);
  RelationMatrices rel = build_relations(Family::slN, 2, q, st);
  const double dtol = bose ? 1e-10 : 1e-12;
  DcrResiduals d = dcr_residuals(s, g, rel);
  sink.check("dcr.annihilators", d.annihilators, dtol);
  sink.check("dcr.creators", d.creators, dtol);
  CrossSelection cs = select_cross(d, dtol);
  *selected = cs.name;
  sink.check("dcr.cross.selected", cs.residual, dtol, {{"candidate", cs.name}, {"candidates", cs.all}});
  // among the printed pair {q Rhat, q Rhat^-1} exactly one should pass
  int printed = (d.cross_of("q*Rhat") <= dtol) + (d.cross_of("q*Rhat^-1") <= dtol);
  sink.count("dcr.cross.unique", std::abs(cs.passing - 1),
             {{"passing_candidates", cs.passing}, {"passing_in_printed_pair", printed}});

  json nmeta = json::object();
  NcrResiduals n = best_ncr(s, g, nmeta);
  sink.check("ncr.creator", n.creator_rel, 1e-10, nmeta);
  sink.check("ncr.annihilator", n.annihilator_rel, 1e-10, nmeta);
  sink.check("ncr.spectrum", n.spectrum, 1e-12, nmeta);
  sink.check("ncr.offdiagonal", n.offdiag, 1e-12);

  sink.check("hermiticity", hermiticity_residual(s, g), 1e-12);
  sink.check("vacuum", vacuum_defect(s, g), 1e-14);
  sink.check("grade", grade_defect_rel(s, g), 1e-13);
  LieData sl2(Family::slN, 2);
  sink.check("commutant.number_operator", commutant_residual(s, sl2, q_number_operator(g)), 1e-11);

  if (bose) {
    Conjugated c = inner_automorphism(g, oleg_alpha_sl2(s, q));
    DeformedGenerators prior = prior_work_generators(s, q);
    sink.check("prior_work.conjugation", max_entry_difference(c.gens, prior), 1e-12,
               {{"alpha_condition", c.cond},
                {"alpha_distance_from_identity", c.distance_from_identity},
                {"prior_work_hermiticity_defect", hermiticity_residual(s, prior)}});
    Mat qn = diag_fn(s, [q](const Occupation& o) { return cplx(std::pow(q, o[0] + o[1])); });
    Conjugated c2 = inner_automorphism(g, qn);
    DcrResiduals d2 = dcr_residuals(s, c2.gens, rel);
    sink.check("automorphism.q_power_n", std::abs(dcr_max(d2) - dcr_max(d)), 1e-12,
               {{"alpha_condition", c2.cond}, {"dcr_after", dcr_max(d2)}});
    const double alt = 2.0 * std::log(q) / (q * q - 1.0);
    DeformedGenerators g2 = slN_candidate_map(s, q, Ordering::above, q == 1.0 ? 1.0 : alt);
    sink.check("removable_singularity", max_entry_difference(g, g2), 0.0);
  } else {
    sink.check("nilpotency", spectral_norm(g.Aplus[0] * g.Aplus[0]) + spectral_norm(g.Aplus[1] * g.Aplus[1]), 1e-15);
  }
  return sink.take();
}

inline DeformedGenerators sl2_map(Statistics st, double q, int cutoff) {
  FockSpace s(2, st, cutoff);
  return st == Statistics::Bose ? sl2_bose_map(s, q) : sl2_fermi_map(s, q);
}

inline std::vector<Task> sl2_tasks(const SuiteConfig& c, Statistics st) {
  const int cutoff = st == Statistics::Bose ? *c.cutoff : 2;
  auto selections = std::make_shared<std::vector<std::string>>(c.q.size());
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < c.q.size(); ++k) {
    const double q = c.q[k];
    tasks.push_back({tag("q", q), [=] { return sl2_case(st, q, cutoff, c.tol, &(*selections)[k]); }});
  }
  // the O(eps) classical limit, as a ratio at eps and eps/2
  tasks.push_back({"classical_limit", [=] {
                     CaseSink sink("", c.tol);
                     DeformedGenerators g0 = sl2_map(st, 1.0, cutoff);
                     double d1 = generator_distance(sl2_map(st, 1.0 + 1e-3, cutoff), g0);
                     double d2 = generator_distance(sl2_map(st, 1.0 + 5e-4, cutoff), g0);
                     sink.check("classical_limit.ratio", std::abs(d1 / d2 - 2.0), 0.05,
                                {{"distance_1e-3", d1}, {"distance_5e-4", d2}});
                     FockSpace sp(2, st, cutoff);
                     DeformedGenerators cl{st, 2, 1.0, annihilators(sp), creators(sp), "none"};
                     sink.check("classical_limit.at_one", max_entry_difference(g0, cl), 1e-15);
                     return sink.take();
                   }});
  // reads the selections written by the q tasks; run_suite schedules it last
  tasks.push_back({"cross.stable", [selections] {
                     std::set<std::string> names(selections->begin(), selections->end());
                     CaseSink sink("", std::nullopt);
                     json list = json::array();
                     for (const auto& n : *selections) list.push_back(n);
                     sink.count("cross.stable", static_cast<double>(names.size()) - 1.0, {{"selected", list}});
                     return sink.take();
                   }});
  return tasks;
}

// ---------------------------------------------------------------------------
// sl(N) candidate map

inline std::vector<Case> slN_case(double q, int N, int cutoff, std::optional<double> tol) {
  FockSpace s(N, Statistics::Bose, cutoff);
  CaseSink sink(tag("q", q), tol);
  RelationMatrices rel = build_relations(Family::slN, N, q, Statistics::Bose);
  json per = json::object();
  double best = std::numeric_limits<double>::infinity(), other = 0.0;
  Ordering winner = Ordering::above;
  int passing = 0;
  for (Ordering o : {Ordering::above, Ordering::below}) {
    DeformedGenerators g = slN_candidate_map(s, q, o);
    DcrResiduals d = dcr_residuals(s, g, rel);
    double r = dcr_max(d);
    per[to_string(o)] = r;
    if (r <= 1e-10) ++passing;
    if (r < best) {
      other = best;
      best = r;
      winner = o;
    } else {
      other = r;
    }
  }
  sink.check("ordering.selected", best, 1e-10, {{"ordering", to_string(winner)}, {"residuals", per}});
  sink.count("ordering.unique", std::abs(passing - 1), {{"passing", passing}});
  sink.control("ordering.negative_control", other, 1e-2);

  DeformedGenerators g = slN_candidate_map(s, q, winner);
  json nmeta = json::object();
  NcrResiduals n = best_ncr(s, g, nmeta);
  sink.check("ncr.creator", n.creator_rel, 1e-10, nmeta);
  sink.check("ncr.annihilator", n.annihilator_rel, 1e-10, nmeta);
  sink.check("ncr.spectrum", n.spectrum, 1e-12, nmeta);
  sink.check("hermiticity", hermiticity_residual(s, g), 1e-12);
  sink.check("vacuum", vacuum_defect(s, g), 1e-14);
  sink.check("commutant.number_operator", commutant_residual(s, LieData(Family::slN, N), q_number_operator(g)), 1e-11);
  return sink.take();
}

inline std::vector<Case> slN_classical(int N, int cutoff, std::optional<double> tol) {
  CaseSink sink("classical", tol);
  LieData d(Family::slN, N);
  FockSpace bose(N, Statistics::Bose, cutoff);
  FockSpace fermi(N, Statistics::Fermi);
  sink.check("homomorphism", homomorphism_residual(bose, d), 1e-12);
  sink.check("covariance", covariance_residual(bose, d), 1e-12);
  sink.check("casimir.bose", safe_norm(bose, casimir_sigma(bose, d) - casimir_closed_form(bose, d), 2), 1e-12);
  sink.check("casimir.fermi", spectral_norm(casimir_sigma(fermi, d) - casimir_closed_form(fermi, d)), 1e-12);
  Mat t = t_matrix(d);
  double inv = 0.0;
  for (Gen x : lie_basis(d)) inv = std::max(inv, spectral_norm(commutator(t, rho_coproduct(d, x))));
  sink.check("t.invariance", inv, 1e-12);
  Mat P = permutation_matrix(N);
  sink.check("t.symmetry", spectral_norm(P * t * P - t), 1e-12);
  Mat n = total_number(bose);
  double ninv = 0.0;
  for (Gen x : lie_basis(d)) ninv = std::max(ninv, spectral_norm(commutator(sigma(bose, d, x), n)));
  sink.check("number_invariance", ninv, 1e-12);
  return sink.take();
}

inline std::vector<Task> slN_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  const int N = *c.modes, L = *c.cutoff;
  for (double q : c.q) tasks.push_back({tag("q", q), [=] { return slN_case(q, N, L, c.tol); }});
  tasks.push_back({"classical", [=] { return slN_classical(N, L, c.tol); }});
  return tasks;
}

// ---------------------------------------------------------------------------
// so(N) orbital machinery

inline std::vector<Case> soN_structure(const FockSpace& s, const OrbitalData& o, std::optional<double> tol) {
  CaseSink sink("orbital", tol);
  const int N = o.N;
  const Mat one = Mat::Identity(s.dim(), s.dim());
  const double h = N / 2.0 - 1.0;
  sink.check("l2.definition", safe_norm(s, o.l2 - ((o.n + h * one) * (o.n + h * one) - o.adad * o.aa), 2), 1e-12);
  sink.check("l2.commutes_aa", safe_norm(s, commutator(o.l2, o.aa), 2), 1e-12);
  sink.check("l2.commutes_adad", safe_norm(s, commutator(o.l2, o.adad), 2), 1e-12);
  sink.check("l2.commutator_formulas", l2_commutator_residual(s, o), 1e-11);
  sink.check("l.commutes_n", spectral_norm(commutator(o.l, o.n)), 1e-12);
  sink.check("l.square", spectral_norm(o.l * o.l - o.l2), 1e-10, {{"most_negative_l2_eigenvalue", o.most_negative}});
  for (int sign : {1, -1}) {
    ShiftOperators sh = shift_operators(s, o, sign);
    const std::string sfx = sign > 0 ? "plus" : "minus";
    sink.check("shift.eige." + sfx, eige_residual(s, o, sh, sign), 1e-10);
    sink.check("shift.orderings." + sfx, ordering_residual(s, sh), 1e-12);
  }
  LieData so(Family::soN, N);
  sink.check("so.homomorphism", homomorphism_residual(s, so), 1e-12);
  double inv = 0.0;
  for (const Mat* m : {&o.aa, &o.adad, &o.n}) inv = std::max(inv, commutant_residual(s, so, *m));
  sink.check("so.invariants", inv, 1e-12);
  json grid = json::array();
  for (const auto& [pt, mult] : o.grid) grid.push_back(json::array({pt.n, pt.l(), mult}));
  sink.check("grid.size", o.grid.empty() ? 1.0 : 0.0, 0.0, {{"points", grid}});
  return sink.take();
}

inline std::vector<Case> pappa_cases(const FockSpace& s, std::optional<double> tol) {
  CaseSink sink("pappa", tol);
  const int N = s.modes();
  const Mat delta = Mat::Identity(N, N);
  auto a = annihilators(s);
  auto ad = creators(s);
  PappaResiduals r = pappa_residuals(s, a, ad, delta, delta, 1.0);
  sink.check("classical.1", r.r1, 1e-12);
  sink.check("classical.2", r.r2, 1e-12);
  sink.check("classical.3", r.r3, 1e-12);
  sink.check("classical.4", r.r4, 1e-12);
  // deform one annihilator by (1 + delta n); the relations must notice
  const double delta_p = 1e-3;
  Mat bump = Mat::Identity(s.dim(), s.dim()) + delta_p * total_number(s);
  auto a2 = a;
  auto ad2 = ad;
  a2[0] = a[0] * bump;
  ad2[0] = a2[0].adjoint();
  PappaResiduals p = pappa_residuals(s, a2, ad2, delta, delta, 1.0);
  sink.control("negative_control", p.max(), delta_p / 10.0, {{"perturbation", delta_p}});
  return sink.take();
}

inline std::vector<Case> soN_equations(const OrbitalData& o, double q, std::optional<double> tol) {
  CaseSink sink(tag("q", q), tol);
  FunctionalEquationResult fe = verify_y_soN(o, q);
  for (int e = 0; e < 4; ++e) {
    const std::string name = "y_soN.equation" + std::to_string(e + 1);
    if (fe.points[e] == 0)
      sink.check(name, std::numeric_limits<double>::infinity(), 1e-10, {{"error", "no admissible grid point"}});
    else
      sink.check(name, fe.residual[e], 1e-10, {{"points", fe.points[e]}});
  }
  return sink.take();
}

inline std::vector<Task> soN_tasks(const SuiteConfig& c) {
  auto space = std::make_shared<FockSpace>(*c.modes, Statistics::Bose, *c.cutoff);
  auto orbital = std::make_shared<OrbitalData>(build_orbital(*space));
  std::vector<Task> tasks;
  tasks.push_back({"orbital", [=] { return soN_structure(*space, *orbital, c.tol); }});
  tasks.push_back({"pappa", [=] { return pappa_cases(*space, c.tol); }});
  for (double q : c.q) tasks.push_back({tag("q", q), [=] { return soN_equations(*orbital, q, c.tol); }});
  return tasks;
}

// ---------------------------------------------------------------------------
// q-special functions

inline double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

inline std::vector<Case> qspecial_q(double q, std::optional<double> tol) {
  CaseSink sink(tag("q", q), tol);
  double rec = 0.0, rec_t = 0.0, ys = 0.0;
  for (int a = 1; a <= 20; ++a) {
    rec = std::max(rec, rel_err(qgamma(a + 1.0, q), qnum(static_cast<double>(a), q) * qgamma(static_cast<double>(a), q)));
    rec_t = std::max(rec_t, rel_err(qgamma_tilde(a + 1.0, q), qbracket(static_cast<double>(a), q) * qgamma_tilde(static_cast<double>(a), q)));
    ys = std::max(ys, rel_err(y_slN(a, q) / y_slN(a - 1, q), static_cast<double>(a) / qnum(static_cast<double>(a), q * q)));
  }
  sink.check("gamma_q.recurrence.integer", rec, 1e-12);
  sink.check("gamma_q_tilde.recurrence.integer", rec_t, 1e-12);
  sink.check("y_slN.recurrence", ys, 1e-12);
  sink.check("gamma_q.one", std::abs(qgamma(1.0, q) - 1.0), 1e-15);
  if (q < 1.0) {
    double pr = 0.0, pt = 0.0;
    const cplx pts[] = {0.3, 1.7, 2.5, 4.25, 7.9, cplx(0.5, 0.4), cplx(2.2, -1.1), cplx(3.0, 2.0)};
    for (cplx a : pts) {
      pr = std::max(pr, rel_err(qgamma(a + 1.0, q), qnum(a, q) * qgamma(a, q)));
      pt = std::max(pt, rel_err(qgamma_tilde(a + 1.0, q), qbracket(a, q) * qgamma_tilde(a, q)));
    }
    sink.check("gamma_q.recurrence.product", pr, 1e-12);
    sink.check("gamma_q_tilde.recurrence.product", pt, 1e-12);
  }
  return sink.take();
}

inline std::vector<Case> qspecial_classical(std::optional<double> tol) {
  CaseSink sink("classical", tol);
  double refl = 0.0;
  for (int k = 0; k < 20; ++k) {
    cplx a(0.1 + 0.37 * (k % 5), -0.9 + 0.45 * (k / 5));
    refl = std::max(refl, reflection_residual(a));
  }
  sink.check("gamma.reflection", refl, 1e-12);
  double fact = 0.0, f = 1.0;
  for (int n = 1; n <= 15; ++n) {
    fact = std::max(fact, rel_err(gamma(static_cast<double>(n)), f));
    f *= n;
  }
  sink.check("gamma.factorials", fact, 1e-13);
  double bt = 0.0;
  const cplx bp[][2] = {{1.0, 1.0}, {0.5, 0.5}, {2.5, 1.5}, {cplx(0.3, 0.2), cplx(1.1, -0.4)}};
  for (const auto& p : bp) bt = std::max(bt, rel_err(beta(p[0], p[1]) * gamma(p[0] + p[1]), gamma(p[0]) * gamma(p[1])));
  sink.check("beta.definition", bt, 1e-13);
  sink.check("beta.one_one", std::abs(beta(1.0, 1.0) - 1.0), 1e-14);

  sink.check("hyp2f1.at_zero", std::abs(hyp2f1(0.3, -0.7, 1.9, 0.0) - 1.0), 0.0);
  sink.check("hyp2f1.log", rel_err(hyp2f1(1.0, 1.0, 2.0, 0.5), -std::log(0.5) / 0.5), 1e-13);

  struct P {
    cplx a, b, c;
  };
  const P params[] = {{0.1, -0.1, 1.3}, {cplx(0, 0.1), cplx(0, -0.1), cplx(1, 0.2)}, {0.25, 0.4, 1.9}, {-0.3, 0.55, 0.35}};
  double conn = 0.0, ode = 0.0, deri = 0.0;
  for (const P& p : params) {
    conn = std::max(conn, rel_err(hyp2f1_connection(p.a, p.b, p.c, 0.5), hyp2f1_series(p.a, p.b, p.c, 0.5).f));
    for (int k = 1; k <= 12; ++k) {
      cplx z = std::polar(0.05 * k, 0.4 * k);
      ode = std::max(ode, hyp2f1_ode_residual(p.a, p.b, p.c, z));
      // Richardson extrapolated central differences
      auto cd = [&](double hh) { return (hyp2f1(p.a, p.b, p.c, z + hh) - hyp2f1(p.a, p.b, p.c, z - hh)) / (2.0 * hh); };
      cplx fd = (4.0 * cd(5e-4) - cd(1e-3)) / 3.0;
      deri = std::max(deri, std::abs(fd - hyp2f1_deriv(p.a, p.b, p.c, z)) / std::max(1.0, std::abs(fd)));
    }
  }
  sink.check("hyp2f1.connection", conn, 1e-10);
  sink.check("hyp2f1.ode", ode, 1e-9);
  sink.check("hyp2f1.derivative", deri, 1e-10);
  return sink.take();
}

inline std::vector<Task> qspecial_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  for (double q : c.q) tasks.push_back({tag("q", q), [=] { return qspecial_q(q, c.tol); }});
  tasks.push_back({"classical", [=] { return qspecial_classical(c.tol); }});
  return tasks;
}

// ---------------------------------------------------------------------------
// braid matrices

inline std::vector<Case> braid_case(Family f, int N, double q, std::optional<double> tol) {
  CaseSink sink(std::string(to_string(f)) + std::to_string(N) + "/" + tag("q", q), tol);
  RelationMatrices rel = build_relations(f, N, q, Statistics::Bose);
  sink.check("yang_baxter", ybe_residual(rel.rhat, N), 1e-12);
  sink.check("characteristic", characteristic_residual(rel.rhat, rhat_eigenvalues(f, N, q)), 1e-12);
  sink.check("projectors.completeness", projector_completeness_residual(rel), 1e-12);
  std::vector<int> want = f == Family::slN ? std::vector<int>{N * (N + 1) / 2, N * (N - 1) / 2}
                                           : std::vector<int>{N * (N + 1) / 2 - 1, N * (N - 1) / 2, 1};
  int off = 0;
  json ranks = json::array();
  for (std::size_t k = 0; k < rel.projectors.size(); ++k) {
    int r = matrix_rank(rel.projectors[k].projector);
    ranks.push_back(r);
    off += std::abs(r - want[k]);
  }
  sink.count("projectors.ranks", off, {{"ranks", ranks}});
  if (f == Family::soN) {
    Vec up(N * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) up(i * N + j) = rel.metric_inv(i, j);
    sink.check("metric.trace_eigenvector", (rel.rhat * up - std::pow(q, 1 - N) * up).norm() / up.norm(), 1e-12);
    Mat cc = rel.metric * rel.metric_inv;
    sink.check("metric.inverse", spectral_norm(cc - Mat::Identity(N, N)), 1e-12);
  }
  return sink.take();
}

inline std::vector<Case> braid_limits(std::optional<double> tol) {
  CaseSink sink("classical_limit", tol);
  const std::pair<Family, int> fam[] = {{Family::slN, 2}, {Family::slN, 3}, {Family::soN, 3}, {Family::soN, 4}};
  for (auto [f, N] : fam) {
    const std::string nm = std::string(to_string(f)) + std::to_string(N);
    sink.check(nm + ".rhat_to_permutation", spectral_norm(rhat(f, N, 1.0 + 1e-8) - permutation_matrix(N)), 1e-6);
    RelationMatrices rel = build_relations(f, N, 1.0, Statistics::Bose);
    double worst = 0.0;
    for (const auto& c : rel.cross_candidates) worst = std::max(worst, spectral_norm(c.matrix - permutation_matrix(N)));
    sink.check(nm + ".candidates_at_one", worst, 1e-13);
    if (f == Family::soN)
      sink.check(nm + ".metric_at_one", spectral_norm(metric(f, N, 1.0).first - Mat::Identity(N, N)), 1e-14);
  }
  return sink.take();
}

inline std::vector<Task> braid_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  const std::pair<Family, int> fam[] = {{Family::slN, 2}, {Family::slN, 3}, {Family::soN, 3}, {Family::soN, 4}};
  for (auto [f, N] : fam)
    for (double q : c.q)
      tasks.push_back({std::string(to_string(f)) + std::to_string(N) + "/" + tag("q", q),
                       [=] { return braid_case(f, N, q, c.tol); }});
  tasks.push_back({"classical_limit", [=] { return braid_limits(c.tol); }});
  return tasks;
}

// ---------------------------------------------------------------------------
// KZ scalar system

inline std::vector<Case> kz_scalar_case(double n, cplx eta, int sign, std::vector<double> eps,
                                        std::optional<double> tol) {
  KZScalarParams p{n, eta, sign};
  CaseSink sink(tag("n", n) + "/hbar2=" + format_complex(eta) + "/sign=" + (sign > 0 ? "+" : "-"), tol);
  const double seed = 1e-8;
  const double lo = *std::min_element(eps.begin(), eps.end());
  KZTrajectory tr = integrate_scalar(p, seed, lo);
  double sup = 0.0, comb = 0.0, ric = 0.0, ucl = 0.0;
  const double t0 = logit(lo), t1 = logit(1.0 - 1e-6);
  const int M = 400;
  for (int k = 0; k <= M; ++k) {
    const double x = logit_x(t0 + (t1 - t0) * k / M);
    Vec3 f = tr(x);
    Vec3 g = closed_form_f(p, x);
    sup = std::max(sup, (f - g).cwiseAbs().maxCoeff());
    comb = std::max(comb, std::abs(f(0) + static_cast<double>(sign) * f(1) + (n + 1.0) * f(2) - kz_combination_exact(p, x)));
    if (eta != cplx(0.0)) {
      ric = std::max(ric, riccati_residual(p, x, f));
      cplx u = f(0) / f(1);
      ucl = std::max(ucl, std::abs(u - riccati_u_closed(p, x)) / std::max(1.0, std::abs(u)));
    }
  }
  json tmeta = {{"accepted_steps", tr.ode.accepted}, {"rejected_steps", tr.ode.rejected}};
  sink.check("trajectory.closed_form", sup, 1e-8, tmeta);
  sink.check("trajectory.combination", comb, 1e-8);
  sink.check("riccati.equation", ric, 1e-8);
  sink.check("riccati.closed_form", ucl, 1e-8);
  double ode = 0.0;
  for (int k = 1; k <= 20; ++k) ode = std::max(ode, closed_form_ode_residual(p, k / 21.0));
  sink.check("closed_form.ode", ode, 1e-9);

  KZLimits want = expected_limits(p);
  KZLimits lc = limits_closed_form(p);
  KZLimits lt = limits_trajectory(p, {eps[0], eps[1], eps[2]}, seed);
  auto dist = [](const KZLimits& a, const KZLimits& b) {
    return std::max({std::abs(a.l1 - b.l1), std::abs(a.l2 - b.l2), std::abs(a.l3 - b.l3)});
  };
  json lmeta = {{"l1", cplx_json(want.l1)},
                {"l2", cplx_json(want.l2)},
                {"l3", cplx_json(want.l3)},
                {"quoted_l1", cplx_json(quoted_l1(p))},
                {"quoted_l2", cplx_json(quoted_l2(p))},
                {"quoted_l1_deviation", std::abs(quoted_l1(p) - want.l1)}};
  sink.check("limits.closed_form", dist(lc, want), 1e-10, lmeta);
  sink.check("limits.trajectory", dist(lt, want), 1e-6,
             {{"l1", cplx_json(lt.l1)}, {"l2", cplx_json(lt.l2)}, {"l3", cplx_json(lt.l3)}});
  sink.check("limits.routes_agree", dist(lt, lc), 1e-6);
  return sink.take();
}

inline std::vector<Task> kz_scalar_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  std::vector<int> signs = c.sign ? std::vector<int>{*c.sign} : std::vector<int>{1, -1};
  for (double n : c.n)
    for (cplx e : c.hbar2)
      for (int s : signs)
        tasks.push_back({tag("n", n) + "/hbar2=" + format_complex(e) + "/sign=" + (s > 0 ? "+" : "-"),
                         [=] { return kz_scalar_case(n, e, s, c.eps, c.tol); }});
  return tasks;
}

// ---------------------------------------------------------------------------
// KZ operator system and the coassociator

inline std::vector<Case> kz_operator_case(int N, int cutoff, double h, double eps, int sign,
                                          std::optional<double> tol) {
  CaseSink sink(tag("h", h), tol);
  KZOperatorSystem sys(N, cutoff);
  const Mat one = Mat::Identity(sys.full_dim(), sys.full_dim());
  Coassociator c = coassociator_matrix(sys, h, eps);
  Coassociator half = coassociator_matrix(sys, h / 2.0, eps);
  const double dev = spectral_norm(c.M - one), dev_half = spectral_norm(half.M - one);
  sink.check("M.eps_convergence", c.eps_error, 1e-6, {{"eps", eps}, {"accepted_steps", c.steps}});
  sink.check("M.h_scaling", std::abs(dev / dev_half - 4.0), 0.8,
             {{"deviation", dev}, {"deviation_half_h", dev_half}, {"ratio", dev / dev_half}});
  sink.check("M.acts_trivially_on_aa", m_trivial_on_aa(sys, c.M), 1e-6);
  sink.check("M.invariance", m_invariance(sys, c.M), 1e-6);
  const double q = std::exp(h);
  FigataResiduals f = figata_check(sys, c.M, q, sign);
  json fmeta = {{"condition", condition_number(c.M)}, {"V", "q P q^P"}};
  sink.check("figata1", f.f1, 1e-6, fmeta);
  sink.check("figata2", f.f2, 1e-6, fmeta);
  sink.check("figata3", f.f3, 1e-6, fmeta);
  FigataResiduals wrong = figata_check(sys, c.M, q, -sign);
  sink.control("figata.negative_control", wrong.max(), 1e-2, {{"sign", -sign > 0 ? "+" : "-"}});
  return sink.take();
}

inline std::vector<Case> kz_operator_classical(int N, int cutoff, double eps, int sign, std::optional<double> tol) {
  CaseSink sink("classical", tol);
  KZOperatorSystem sys(N, cutoff);
  Coassociator c = coassociator_matrix(sys, 0.0, eps);
  const Mat one = Mat::Identity(sys.full_dim(), sys.full_dim());
  sink.check("M.identity", spectral_norm(c.M - one), 1e-12);
  FigataResiduals f = figata_check(sys, c.M, 1.0, sign);
  sink.check("figata.control", f.max(), 1e-12);
  return sink.take();
}

inline std::vector<Task> kz_operator_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  const int N = *c.modes, L = *c.cutoff, s = *c.sign;
  const double eps = c.eps[0];
  for (double h : c.h) tasks.push_back({tag("h", h), [=] { return kz_operator_case(N, L, h, eps, s, c.tol); }});
  tasks.push_back({"classical", [=] { return kz_operator_classical(N, L, eps, s, c.tol); }});
  return tasks;
}

}  // namespace suites

inline std::vector<Task> suite_tasks(const SuiteConfig& c) {
  const std::string& s = c.suite;
  if (s == "sl2-bose") return suites::sl2_tasks(c, Statistics::Bose);
  if (s == "sl2-fermi") return suites::sl2_tasks(c, Statistics::Fermi);
  if (s == "slN") return suites::slN_tasks(c);
  if (s == "soN-orbital") return suites::soN_tasks(c);
  if (s == "qspecial") return suites::qspecial_tasks(c);
  if (s == "braid") return suites::braid_tasks(c);
  if (s == "kz-scalar") return suites::kz_scalar_tasks(c);
  if (s == "kz-operator") return suites::kz_operator_tasks(c);
  throw ConfigError("unknown suite '" + s + "'");
}

// Validates the configuration (ConfigError on failure), runs the suite and
// returns the sorted report.
inline Report run_suite(const SuiteConfig& raw) {
  SuiteConfig c = resolve(raw);
  Report r;
  r.suite = c.suite;
  r.params = params_json(c);
  std::vector<Task> tasks = suite_tasks(c);
  // tasks whose label is "cross.stable" read what the others wrote, so they
  // run after the rest
  std::vector<Task> first, last;
  for (auto& t : tasks) (t.label == "cross.stable" ? last : first).push_back(std::move(t));
  r.cases = run_tasks(first, c.jobs);
  for (auto& k : run_tasks(last, 1)) r.cases.push_back(std::move(k));
  r.sort_cases();
  return r;
}

}  // namespace qheis
