#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/factorization.hpp"

using namespace loopmorph;
using testutil::m2;
using testutil::max_abs;

namespace {
TwistedLoop sample(unsigned seed, double scale = 0.3) {
  std::mt19937_64 rng(seed);
  return loop_exp(testutil::random_twisted_algebra(rng, 8, scale, 0.5)).clipped(16);
}
}  // namespace

TEST_CASE("Birkhoff minus-star-plus: factors, normalization, reconstruction") {
  auto L = sample(11);
  auto b = birkhoff(L, BirkhoffOrder::MINUS_STAR_PLUS);
  CHECK(b.minus.hi <= 0);
  CHECK(b.plus.lo >= 0);
  CHECK(max_abs(b.minus.coef_or_zero(0) - Mat::Identity(2, 2)) < 1e-12);
  CHECK(coef_distance(loop_mul(b.minus, b.plus), L) < 1e-10);
  CHECK(b.reconstruction_residual < 1e-10);
  CHECK(coef_distance(loop_mul(b.minus, b.starred_inverse), TwistedLoop::identity(2)) < 1e-10);
}

TEST_CASE("Birkhoff plus-star-minus") {
  auto L = sample(12);
  auto b = birkhoff(L, BirkhoffOrder::PLUS_STAR_MINUS);
  CHECK(b.plus.lo >= 0);
  CHECK(b.minus.hi <= 0);
  CHECK(max_abs(b.plus.coef_or_zero(0) - Mat::Identity(2, 2)) < 1e-12);
  CHECK(coef_distance(loop_mul(b.plus, b.minus), L) < 1e-10);
}

TEST_CASE("a pure plus loop factors trivially") {
  auto P = TwistedLoop::identity(2) + TwistedLoop::monomial(m2(0.0, 0.3, 0.2, 0.0), 1);
  auto b = birkhoff(P, BirkhoffOrder::MINUS_STAR_PLUS);
  CHECK(coef_distance(b.minus, TwistedLoop::identity(2)) < 1e-13);
  CHECK(coef_distance(b.plus, P) < 1e-13);
}

TEST_CASE("loops off the big cell raise NotInBigCell") {
  auto L = TwistedLoop::monomial(m2(0.0, 1.0, 0.0, 0.0), 1) + TwistedLoop::monomial(m2(0.0, 0.0, -1.0, 0.0), -1);
  CHECK(big_cell_distance(L) < 1e-12);
  CHECK(big_cell_distance(TwistedLoop::identity(2)) == doctest::Approx(1.0));
  try {
    birkhoff(L, BirkhoffOrder::MINUS_STAR_PLUS);
    FAIL("expected NotInBigCell");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInBigCell);
  }
}

TEST_CASE("pair Iwasawa of (A, A) is trivial") {
  auto A = sample(5);
  auto r = pair_iwasawa(A, A);
  CHECK(coef_distance(r.C, A) < 1e-9);
  CHECK(r.rcond > 0.1);
}

TEST_CASE("pair Iwasawa reconstructs both inputs") {
  auto A = sample(21), B = sample(22);
  auto r = pair_iwasawa(A, B, 32, IwasawaNormalization::PLUS_AT_ZERO);
  // A = C B+ and B = C B-
  CHECK(coef_distance(loop_mul(r.C, r.Bplus), A) < 1e-9);
  CHECK(coef_distance(loop_mul(r.C, r.Bminus), B) < 1e-9);
  CHECK(r.Bplus.lo >= 0);
  CHECK(r.Bminus.hi <= 0);
  CHECK(max_abs(r.Bplus.coef_or_zero(0) - Mat::Identity(2, 2)) < 1e-10);
  auto s = pair_iwasawa(A, B);
  CHECK(coef_distance(loop_mul(s.C, s.Bplus), A) < 1e-9);
  CHECK(max_abs(s.Bplus.coef_or_zero(0) * s.Bminus.coef_or_zero(0) - Mat::Identity(2, 2)) < 1e-10);
}
