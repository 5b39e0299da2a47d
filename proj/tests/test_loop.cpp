#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/loop.hpp"

using namespace loopmorph;
using testutil::m2;
using testutil::max_abs;

namespace {
TwistedLoop sample_loop() {
  std::mt19937_64 rng(7);
  return loop_exp(testutil::random_twisted_algebra(rng, 6, 0.4, 0.5), 32);
}
}  // namespace

TEST_CASE("loop_eval of a monomial") {
  Mat A = m2(1.0, 2.0, 3.0, 4.0);
  auto L = TwistedLoop::monomial(A, -3);
  CHECK(max_abs(loop_eval(L, 2.0) - A / 8.0) < 1e-15);
  CHECK_THROWS_AS(loop_eval(L, 0.0), Error);
}

TEST_CASE("loop_mul matches pointwise products") {
  auto A = sample_loop(), B = loop_inverse(sample_loop()) + TwistedLoop::monomial(m2(0, 1, 1, 0), 1);
  auto AB = loop_mul(A, B, 64);
  for (cd mu : unit_circle_samples(12, 0.3))
    CHECK(max_abs(loop_eval(AB, mu) - loop_eval(A, mu) * loop_eval(B, mu)) < 1e-12);
}

TEST_CASE("loop_inverse gives the identity on the circle") {
  auto L = sample_loop();
  auto Li = loop_inverse(L);
  for (cd mu : unit_circle_samples(16))
    CHECK(max_abs(loop_eval(loop_mul(L, Li), mu) - Mat::Identity(2, 2)) < 1e-9);
}

TEST_CASE("loop_exp matches the pointwise exponential") {
  std::mt19937_64 rng(3);
  auto X = testutil::random_twisted_algebra(rng, 4, 0.5, 0.5);
  auto E = loop_exp(X);
  for (cd mu : unit_circle_samples(8, 0.2)) CHECK(max_abs(loop_eval(E, mu) - mat_exp(loop_eval(X, mu))) < 1e-12);
}

TEST_CASE("loop_lambda_derivative is lambda d/dlambda coefficientwise") {
  auto L = sample_loop();
  auto D = loop_lambda_derivative(L);
  const cd mu(0.6, 0.8), h = 1e-5;
  Mat fd = (loop_eval(L, mu + h) - loop_eval(L, mu - h)) / (2.0 * h);
  // the operator is lambda * d/dlambda
  CHECK(max_abs(loop_eval(D, mu) / mu - fd) < 1e-8);
}

TEST_CASE("loop_rescale and loop_reflect") {
  auto L = sample_loop();
  const cd mu(0.3, 0.9);
  CHECK(max_abs(loop_eval(loop_rescale(L, 1.7), mu) - loop_eval(L, 1.7 * mu)) < 1e-10);
  CHECK(max_abs(loop_eval(loop_reflect(L), mu) - loop_eval(L, 1.0 / mu)) < 1e-13);
}

TEST_CASE("twist and reality checks") {
  auto sigma = Involution::conjugate_by(diag_signs({-1.0, 1.0}));
  auto L = sample_loop();
  CHECK(check_twist(L, sigma) < 1e-12);
  CHECK(twist_coefficient_defect(L, sigma) < 1e-12);
  auto bad = TwistedLoop::monomial(m2(0.0, 1.0, 0.0, 0.0), 2);
  CHECK(twist_coefficient_defect(bad, sigma) > 0.5);
  CHECK(check_reality(L, Involution::entrywise_conj(), RealityKind::FIRST_KIND) < 1e-12);
  auto complex_loop = cd(0, 1) * L;
  CHECK(check_reality(complex_loop, Involution::entrywise_conj(), RealityKind::FIRST_KIND) > 1e-3);
}

TEST_CASE("clipping records the discarded mass") {
  auto L = TwistedLoop::monomial(m2(1.0, 0.0, 0.0, 1.0), 0) + TwistedLoop::monomial(m2(0.0, 0.5, 0.25, 0.0), 5);
  auto C = L.clipped(3);
  CHECK(C.hi <= 3);
  CHECK(C.tail_norm == doctest::Approx(std::sqrt(0.3125)));  // Frobenius norm of the dropped coefficient
}

TEST_CASE("binary loop round trip") {
  auto L = sample_loop();
  std::stringstream ss;
  write_loop(ss, L);
  auto R = read_loop(ss);
  CHECK(R.lo == L.lo);
  CHECK(R.hi == L.hi);
  CHECK(coef_distance(R, L) == 0.0);
}

TEST_CASE("unit circle samples lie on the circle") {
  for (cd z : unit_circle_samples(16, 0.1)) CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
  CHECK(unit_circle_samples(16).size() == 16);
}
