#include <catch_amalgamated.hpp>

#include "qheis/braid.hpp"
#include "qheis/deform.hpp"
#include "qheis/verify.hpp"

using namespace qheis;

namespace {

int passing(const DcrResiduals& d, double tol) {
  int n = 0;
  for (const auto& [name, r] : d.cross)
    if (r < tol) ++n;
  return n;
}

}  // namespace

TEST_CASE("fermionic DCR on the whole space", "[verify]") {
  FockSpace s(2, Statistics::Fermi);
  for (double q : {0.7, 1.3}) {
    auto rel = build_relations(Family::slN, 2, q, Statistics::Fermi);
    auto d = dcr_residuals(s, sl2_fermi_map(s, q), rel);
    CHECK(d.annihilators < 1e-13);
    CHECK(d.creators < 1e-13);
    CHECK(d.cross_of("q^-1*Rhat") < 1e-13);
    CHECK(passing(d, 1e-10) == 1);
  }
}

TEST_CASE("bosonic DCR selects a single cross candidate", "[verify]") {
  FockSpace s(2, Statistics::Bose, 8);
  for (double q : {0.7, 1.3}) {
    auto rel = build_relations(Family::slN, 2, q, Statistics::Bose);
    auto d = dcr_residuals(s, sl2_bose_map(s, q), rel);
    CHECK(d.annihilators < 1e-10);
    CHECK(d.creators < 1e-10);
    CHECK(d.cross_of("q*Rhat") < 1e-10);
    CHECK(d.cross_of("q*Rhat^-1") > 1e-2);
    CHECK(passing(d, 1e-10) == 1);
  }
  CHECK_THROWS(dcr_residuals(s, sl2_bose_map(s, 1.3), build_relations(Family::slN, 3, 1.3, Statistics::Bose)));
}

TEST_CASE("classical generators satisfy the q = 1 relations", "[verify]") {
  FockSpace s(2, Statistics::Bose, 6);
  auto rel = build_relations(Family::slN, 2, 1.0, Statistics::Bose);
  auto d = dcr_residuals(s, sl2_bose_map(s, 1.0), rel);
  CHECK(d.annihilators < 1e-13);
  CHECK(d.creators < 1e-13);
  for (const auto& [name, r] : d.cross) CHECK(r < 1e-13);
}

TEST_CASE("q-number operator relations", "[verify]") {
  FockSpace s(2, Statistics::Bose, 8);
  auto g = sl2_bose_map(s, 1.3);
  auto up = ncr_residuals(s, g, +1);
  CHECK(up.creator_rel < 1e-10);
  CHECK(up.annihilator_rel < 1e-10);
  CHECK(up.spectrum < 1e-12);
  CHECK(up.offdiag < 1e-12);
  CHECK(ncr_residuals(s, g, -1).creator_rel > 1e-2);
  FockSpace f(2, Statistics::Fermi);
  auto fr = ncr_residuals(f, sl2_fermi_map(f, 1.3), -1);
  CHECK(fr.creator_rel < 1e-12);
  CHECK(fr.spectrum < 1e-12);
  auto classical = ncr_residuals(s, sl2_bose_map(s, 1.0), +1);
  CHECK(classical.spectrum < 1e-13);
}

TEST_CASE("sl(3) candidate orderings", "[verify]") {
  FockSpace s(3, Statistics::Bose, 5);
  const double q = 1.3;
  auto rel = build_relations(Family::slN, 3, q, Statistics::Bose);
  auto above = dcr_residuals(s, slN_candidate_map(s, q, Ordering::above), rel);
  auto below = dcr_residuals(s, slN_candidate_map(s, q, Ordering::below), rel);
  double best_above = 1e300, best_below = 1e300;
  for (const auto& [n, r] : above.cross) best_above = std::min(best_above, r);
  for (const auto& [n, r] : below.cross) best_below = std::min(best_below, r);
  CHECK(std::max({above.annihilators, above.creators, best_above}) < 1e-10);
  CHECK(std::max({below.annihilators, below.creators, best_below}) > 1e-2);
}

TEST_CASE("pappa relations for classical generators", "[verify]") {
  for (int N : {3, 4}) {
    FockSpace s(N, Statistics::Bose, 5);
    Mat delta = Mat::Identity(N, N);
    auto r = pappa_residuals(s, annihilators(s), creators(s), delta, delta, 1.0);
    CHECK(r.max() < 1e-12);
    std::vector<Mat> bent = annihilators(s);
    bent[0] *= 1.0 + 1e-3;
    CHECK(pappa_residuals(s, bent, creators(s), delta, delta, 1.0).max() > 1e-4);
  }
}

TEST_CASE("number operator commutes with the Lie action", "[verify]") {
  FockSpace s(2, Statistics::Bose, 6);
  LieData sl2(Family::slN, 2);
  CHECK(commutant_residual(s, sl2, q_number_operator(sl2_bose_map(s, 1.3))) < 1e-11);
  CHECK(commutant_residual(s, sl2, total_number(s)) < 1e-14);
  CHECK(commutant_residual(s, sl2, number_op(s, 0)) > 0.5);
}
