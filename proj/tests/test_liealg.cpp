#include <catch_amalgamated.hpp>

#include "qheis/braid.hpp"
#include "qheis/liealg.hpp"

using namespace qheis;
using Catch::Matchers::WithinAbs;

TEST_CASE("defining representations", "[liealg]") {
  LieData sl2(Family::slN, 2);
  Mat e11 = rho(sl2, Gen{0, 0});
  CHECK(e11(0, 0) == cplx(0.5));
  CHECK(e11(1, 1) == cplx(-0.5));
  CHECK(e11(0, 1) == cplx(0.0));

  LieData so3(Family::soN, 3);
  Mat l12 = rho(so3, Gen{0, 1});
  CHECK(spectral_norm(l12 - (unit(3, 0, 1) - unit(3, 1, 0))) == 0.0);
  CHECK_THROWS(rho(so3, Gen{1, 1}));
  CHECK_THROWS(LieData(Family::slN, 1));
}

TEST_CASE("structure constants match matrix commutators", "[liealg]") {
  for (auto f : {Family::slN, Family::soN}) {
    LieData d(f, f == Family::slN ? 3 : 4);
    for (Gen x : lie_basis(d))
      for (Gen y : lie_basis(d))
        CHECK(spectral_norm(rho(d, bracket(d, x, y)) - commutator(rho(d, x), rho(d, y))) < 1e-15);
  }
}

TEST_CASE("Jordan-Schwinger map", "[liealg]") {
  FockSpace s(2, Statistics::Bose, 3);
  LieData sl2(Family::slN, 2);
  // sigma(E_12) = a+_1 a^2
  CHECK(spectral_norm(sigma(s, sl2, Gen{0, 1}) - creator(s, 0) * annihilator(s, 1)) == 0.0);
  for (Gen g : lie_basis(sl2)) CHECK(sigma(s, sl2, g).col(0).norm() == 0.0);
  CHECK(homomorphism_residual(FockSpace(3, Statistics::Bose, 4), LieData(Family::slN, 3)) < 1e-12);
  CHECK(homomorphism_residual(FockSpace(3, Statistics::Fermi), LieData(Family::slN, 3)) < 1e-12);
  CHECK(homomorphism_residual(FockSpace(3, Statistics::Bose, 4), LieData(Family::soN, 3)) < 1e-12);
}

TEST_CASE("quadratic Casimir", "[liealg]") {
  LieData sl2(Family::slN, 2);
  FockSpace s(2, Statistics::Bose, 4);
  Mat c = casimir_sigma(s, sl2);
  CHECK_THAT(c(s.index({1, 0}), s.index({1, 0})).real(), WithinAbs(1.5, 1e-14));
  CHECK(std::abs(c(0, 0)) < 1e-15);
  CHECK(safe_norm(s, c - casimir_closed_form(s, sl2), 0) < 1e-12);
  FockSpace f(3, Statistics::Fermi);
  LieData sl3(Family::slN, 3);
  CHECK(spectral_norm(casimir_sigma(f, sl3) - casimir_closed_form(f, sl3)) < 1e-12);
}

TEST_CASE("split Casimir", "[liealg]") {
  LieData sl2(Family::slN, 2);
  Mat half = t_matrix(sl2) / 2.0;
  CHECK(spectral_norm(half - (permutation_matrix(2) - 0.5 * Mat::Identity(4, 4))) < 1e-15);
  for (Gen g : lie_basis(sl2)) CHECK(spectral_norm(commutator(t_matrix(sl2), rho_coproduct(sl2, g))) < 1e-14);
  // so(N): t = 2(P - K), K the unnormalised projector onto sum_i e_i (x) e_i
  LieData so3(Family::soN, 3);
  Vec delta = Vec::Zero(9);
  for (int i = 0; i < 3; ++i) delta(4 * i) = 1.0;
  CHECK(spectral_norm(t_matrix(so3) - 2.0 * (permutation_matrix(3) - delta * delta.transpose())) < 1e-15);
  for (Gen g : lie_basis(so3)) CHECK(spectral_norm(commutator(t_matrix(so3), rho_coproduct(so3, g))) < 1e-14);
}

TEST_CASE("covariance of the ladder operators", "[liealg]") {
  FockSpace s(2, Statistics::Bose, 3);
  LieData sl2(Family::slN, 2);
  // E_12 |> a+_2 = a+_1
  Mat act = classical_action(s, sl2, Gen{0, 1}, creator(s, 1));
  CHECK(safe_norm(s, act - creator(s, 0), 1) < 1e-14);
  CHECK(spectral_norm(classical_action(s, sl2, Gen{0, 1}, Mat::Identity(s.dim(), s.dim()))) == 0.0);
  CHECK(spectral_norm(classical_action(s, sl2, Gen{0, 1}, total_number(s))) < 1e-14);
  CHECK(covariance_residual(s, sl2) < 1e-12);
  CHECK(covariance_residual(FockSpace(3, Statistics::Bose, 4), LieData(Family::soN, 3)) < 1e-12);
}
