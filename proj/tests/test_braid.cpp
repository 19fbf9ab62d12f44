#include <catch_amalgamated.hpp>

#include "oracle_values.hpp"
#include "qheis/braid.hpp"

using namespace qheis;

TEST_CASE("sl(2) braid matrix entries", "[braid]") {
  const double q = 1.3;
  Mat r = rhat_sl(2, q);
  // basis e0e0, e0e1, e1e0, e1e1
  CHECK(r(0, 0) == cplx(q));
  CHECK(r(3, 3) == cplx(q));
  CHECK(r(2, 1) == cplx(1.0));
  CHECK(r(1, 2) == cplx(1.0));
  CHECK(std::abs(r(1, 1) - (q - 1.0 / q)) < 1e-15);
  CHECK(r(2, 2) == cplx(0.0));
  CHECK(characteristic_residual(r, rhat_eigenvalues(Family::slN, 2, q)) < 1e-12);
}

TEST_CASE("braid relation and spectrum", "[braid]") {
  for (auto [f, N] : {std::pair{Family::slN, 2}, {Family::slN, 3}, {Family::soN, 3}, {Family::soN, 4}})
    for (double q : {0.7, 1.3}) {
      Mat r = rhat(f, N, q);
      CHECK(ybe_residual(r, N) < 1e-12);
      CHECK(characteristic_residual(r, rhat_eigenvalues(f, N, q)) < 1e-12);
      auto rel = build_relations(f, N, q, Statistics::Bose);
      CHECK(projector_completeness_residual(rel) < 1e-12);
    }
}

TEST_CASE("projector ranks", "[braid]") {
  auto so3 = build_relations(Family::soN, 3, 1.3, Statistics::Bose);
  REQUIRE(so3.projectors.size() == 3);
  CHECK(matrix_rank(so3.projectors[0].projector) == 5);
  CHECK(matrix_rank(so3.projectors[1].projector) == 3);
  CHECK(matrix_rank(so3.projectors[2].projector) == 1);
  auto sl3 = build_relations(Family::slN, 3, 0.7, Statistics::Fermi);
  CHECK(matrix_rank(sl3.projectors[0].projector) == 6);
  CHECK(matrix_rank(sl3.projectors[1].projector) == 3);
  // Clifford generators are annihilated by the symmetric projector
  CHECK(spectral_norm(sl3.annihilating_projector - sl3.projectors[0].projector) == 0.0);
  CHECK_THROWS(build_relations(Family::soN, 3, 1.3, Statistics::Fermi));
  CHECK_THROWS(build_relations(Family::slN, 2, -1.0, Statistics::Bose));
}

TEST_CASE("so(3) in Cartesian coordinates matches the reference", "[braid]") {
  const double q = 1.2;
  Mat r = rhat_so(3, q);
  CHECK(std::abs(r(0, 0) - oracle::kSo3Rhat_0_0) < 1e-14);
  CHECK(std::abs(r(0, 4) - oracle::kSo3Rhat_0_4) < 1e-14);
  CHECK(std::abs(r(4, 8) - oracle::kSo3Rhat_4_8) < 1e-14);
  CHECK(std::abs(r(2, 6) - oracle::kSo3Rhat_2_6) < 1e-14);
  CHECK(std::abs(r(1, 3) - oracle::kSo3Rhat_1_3) < 1e-14);
  auto [C, Cinv] = metric(Family::soN, 3, q);
  CHECK(std::abs(C(0, 0) - oracle::kSo3Metric_0_0) < 1e-14);
  CHECK(std::abs(C(1, 1) - oracle::kSo3Metric_1_1) < 1e-14);
  CHECK(std::abs(C(0, 2) - oracle::kSo3Metric_0_2) < 1e-14);
  CHECK(std::abs(C(2, 2) - oracle::kSo3Metric_2_2) < 1e-14);
  CHECK(spectral_norm(C * Cinv - Mat::Identity(3, 3)) < 1e-14);
  CHECK_THROWS(metric(Family::slN, 3, q));
}

TEST_CASE("classical limit of the braid data", "[braid]") {
  for (auto [f, N] : {std::pair{Family::slN, 2}, {Family::slN, 3}, {Family::soN, 3}, {Family::soN, 4}}) {
    CHECK(spectral_norm(rhat(f, N, 1.0) - permutation_matrix(N)) < 1e-14);
    CHECK(spectral_norm(rhat(f, N, 1.0 + 1e-8) - permutation_matrix(N)) < 1e-6);
    auto rel = build_relations(f, N, 1.0, Statistics::Bose);
    for (const auto& c : rel.cross_candidates) CHECK(spectral_norm(c.matrix - permutation_matrix(N)) < 1e-13);
    if (f == Family::soN) CHECK(spectral_norm(metric(f, N, 1.0).first - Mat::Identity(N, N)) < 1e-14);
  }
}
