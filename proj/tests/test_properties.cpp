// Seeded property checks over random inputs.

#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/cli_io.hpp"
#include "loopmorph/factorization.hpp"

using namespace loopmorph;
using testutil::max_abs;

TEST_CASE("property: multiplication is associative and inverse is two-sided") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    auto A = loop_exp(testutil::random_twisted_algebra(rng, 5, 0.3, 0.5));
    auto B = loop_exp(testutil::random_twisted_algebra(rng, 5, 0.3, 0.5));
    auto C = loop_exp(testutil::random_twisted_algebra(rng, 5, 0.3, 0.5));
    CHECK(coef_distance(loop_mul(loop_mul(A, B, 64), C, 64), loop_mul(A, loop_mul(B, C, 64), 64)) < 1e-12);
    auto Ai = loop_inverse(A);
    CHECK(coef_distance(loop_mul(Ai, A), TwistedLoop::identity(2)) < 1e-9);
    CHECK(coef_distance(loop_mul(A, Ai), TwistedLoop::identity(2)) < 1e-9);
  }
}

TEST_CASE("property: exp(X) exp(-X) = id and determinant one") {
  std::mt19937_64 rng(102);
  for (int t = 0; t < 20; ++t) {
    auto X = testutil::random_twisted_algebra(rng, 6, 0.4, 0.5);
    auto E = loop_mul(loop_exp(X), loop_exp(cd(-1.0) * X));
    CHECK(coef_distance(E, TwistedLoop::identity(2)) < 1e-11);
    for (cd mu : unit_circle_samples(4, 0.2)) CHECK(std::abs(loop_eval(loop_exp(X), mu).determinant() - 1.0) < 1e-11);
  }
}

TEST_CASE("property: Birkhoff factors are twisted, real and refactor to themselves") {
  std::mt19937_64 rng(103);
  auto sigma = Involution::conjugate_by(diag_signs({-1.0, 1.0}));
  for (int t = 0; t < 20; ++t) {
    auto L = loop_exp(testutil::random_twisted_algebra(rng, 10, 0.3, 0.5)).clipped(16);
    auto b = birkhoff(L, BirkhoffOrder::MINUS_STAR_PLUS);
    CHECK(coef_distance(loop_mul(b.minus, b.plus), L) < 1e-9);
    CHECK(twist_coefficient_defect(b.minus, sigma) < 1e-12);
    CHECK(twist_coefficient_defect(b.plus, sigma) < 1e-12);
    CHECK(check_reality(b.plus, Involution::entrywise_conj(), RealityKind::FIRST_KIND) < 1e-10);
    auto again = birkhoff(b.minus, BirkhoffOrder::MINUS_STAR_PLUS);
    CHECK(coef_distance(again.minus, b.minus) < 1e-10);
    CHECK(coef_distance(again.plus, TwistedLoop::identity(2)) < 1e-10);
  }
}

TEST_CASE("property: serialized loops and specs survive a round trip") {
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<int> count(1, 12), band(8, 128);
  for (int t = 0; t < 20; ++t) {
    auto L = loop_exp(testutil::random_twisted_algebra(rng, 4, 0.5, 0.6));
    std::stringstream ss;
    write_loop(ss, L);
    CHECK(coef_distance(read_loop(ss), L) == 0.0);

    RunSpec s;
    s.potential = PotentialRef{"toda_conic", {{"b", 0.1 + 0.05 * (t % 10)}}};
    s.band = band(rng);
    s.pipeline = Pipeline::SURFACE;
    s.sym_variant = SymVariant::K_SURFACE;
    s.grid = GridSpec::square(GridMode::PARA, 1, 2 * count(rng) + 1, 0.1 + 0.04 * (t % 10));
    s.eval_parameter = 0.5 + t;
    s.outputs = {{"out.obj", OutputFormat::OBJ}};
    CHECK(parse_spec(serialize_spec(s)) == s);
  }
}

TEST_CASE("property: frame grids are symmetric under the real structure") {
  // frames of real potentials are real for real loop parameter
  auto P = catalog_potential(CatalogName::SMYTH, {{"m", 2}});
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 7, 0.6));
  for (size_t i = 0; i < F.loops.size(); ++i)
    CHECK(check_reality(F.loops[i], Involution::entrywise_conj(), RealityKind::FIRST_KIND) < 1e-12);
}
