#include <catch_amalgamated.hpp>

#include "qheis/fock.hpp"

using namespace qheis;
using Catch::Matchers::WithinAbs;

TEST_CASE("basis sizes and ordering", "[fock]") {
  CHECK(FockSpace(2, Statistics::Fermi).dim() == 4);
  CHECK(FockSpace(2, Statistics::Bose, 3).dim() == 10);
  FockSpace one(1, Statistics::Bose, 5);
  REQUIRE(one.dim() == 6);
  for (int k = 0; k <= 5; ++k) CHECK(one.state(k) == Occupation{k});
  // lexicographic: (0,0),(0,1),(0,2),(1,0),(1,1),(2,0)
  FockSpace two(2, Statistics::Bose, 2);
  CHECK(two.state(2) == Occupation{0, 2});
  CHECK(two.state(3) == Occupation{1, 0});
  CHECK(two.index({2, 0}) == 5);
  CHECK_THROWS(two.index({2, 1}));
  CHECK_THROWS(FockSpace(0, Statistics::Bose, 3));
  CHECK_THROWS(FockSpace(2, Statistics::Bose, 0));
}

TEST_CASE("bosonic ladder operators", "[fock]") {
  FockSpace s(2, Statistics::Bose, 3);
  Mat a = annihilator(s, 0), ad = creator(s, 0);
  // a+ a is the occupation of mode 0
  Mat n0 = ad * a;
  CHECK_THROWS_AS(annihilator(s, 2), std::out_of_range);
  CHECK(spectral_norm(n0 - number_op(s, 0)) < 1e-14);
  for (int k = 0; k < s.dim(); ++k) CHECK_THAT(n0(k, k).real(), WithinAbs(s.state(k)[0], 1e-14));
  // a+ |1,0> = sqrt(2) |2,0>
  CHECK_THAT(ad(s.index({2, 0}), s.index({1, 0})).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  // [a, a+] = 1 away from the top level; the defect sits entirely on sum n = cutoff
  Mat defect = commutator(a, ad) - Mat::Identity(s.dim(), s.dim());
  CHECK(safe_norm(s, defect, 1) < 1e-14);
  CHECK(spectral_norm(defect) > 1.0);
  CHECK(spectral_norm(total_number(s) - number_op(s, 0) - number_op(s, 1)) < 1e-14);
  // number operator kills the vacuum; on (1,2) the total is 3
  CHECK(total_number(s)(s.index({0, 0}), s.index({0, 0})) == cplx(0.0));
  CHECK(total_number(s)(s.index({1, 2}), s.index({1, 2})) == cplx(3.0));
}

TEST_CASE("fermionic ladder operators carry the Jordan-Wigner sign", "[fock]") {
  FockSpace s(2, Statistics::Fermi);
  auto a = annihilators(s);
  auto ad = creators(s);
  const Mat one = Mat::Identity(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(spectral_norm(anticommutator(a[i], ad[j]) - (i == j ? one : Mat::Zero(4, 4))) < 1e-15);
      CHECK(spectral_norm(anticommutator(a[i], a[j])) < 1e-15);
    }
  CHECK(spectral_norm(ad[0] * ad[0]) == 0.0);
  // a+_1 |1,0> picks up the sign of the occupied mode before it
  CHECK(ad[1](s.index({1, 1}), s.index({1, 0})) == cplx(-1.0));
  CHECK(ad[0](s.index({1, 1}), s.index({0, 1})) == cplx(1.0));
}

TEST_CASE("safe projector", "[fock]") {
  FockSpace s(2, Statistics::Bose, 3);
  CHECK(spectral_norm(safe_projector(s, 0) - Mat::Identity(s.dim(), s.dim())) == 0.0);
  Mat top = safe_projector(s, 3);
  CHECK(top.trace() == cplx(1.0));
  CHECK(top(0, 0) == cplx(1.0));
  FockSpace one(1, Statistics::Bose, 3);
  CHECK(safe_projector(one, 1).trace() == cplx(3.0));
  CHECK(safe_projector(FockSpace(3, Statistics::Fermi), 2).trace() == cplx(8.0));
  CHECK_THROWS(safe_projector(s, 4));
}

TEST_CASE("diagonal functions", "[fock]") {
  FockSpace s(2, Statistics::Bose, 3);
  CHECK(spectral_norm(diag_fn(s, [](const Occupation&) { return cplx(1.0); }) - Mat::Identity(s.dim(), s.dim())) == 0.0);
  Mat f = diag_fn(s, [](const Occupation& o) { return cplx(std::pow(2.0, o[1])); });
  CHECK(f(s.index({0, 3}), s.index({0, 3})) == cplx(8.0));
  CHECK(spectral_norm(commutator(f, number_op(s, 0))) == 0.0);
}

TEST_CASE("grade defect", "[fock]") {
  FockSpace s(2, Statistics::Bose, 3);
  CHECK(grade_defect(s, creator(s, 1), 1) < 1e-14);
  CHECK(grade_defect(s, annihilator(s, 0), -1) < 1e-14);
  CHECK(grade_defect(s, creator(s, 1), -1) > 0.5);
}
