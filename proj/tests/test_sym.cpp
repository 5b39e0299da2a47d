#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/sym.hpp"

using namespace loopmorph;
using testutil::m2;
using testutil::max_abs;

namespace {
const cd I(0.0, 1.0);
}

TEST_CASE("variant names, signatures and modes") {
  for (auto v : {SymVariant::R3_CMC, SymVariant::R31_TIMELIKE, SymVariant::R31_SPACELIKE, SymVariant::R31_TIMELIKE_HALF,
                 SymVariant::K_SURFACE})
    CHECK(sym_variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(sym_variant_from_string("R4"), Error);
  CHECK(variant_signature(SymVariant::R3_CMC) == Signature::EUCLIDEAN);
  CHECK(variant_signature(SymVariant::K_SURFACE) == Signature::EUCLIDEAN);
  CHECK(variant_signature(SymVariant::R31_TIMELIKE) == Signature::LORENTZ_1);
  CHECK(variant_mode(SymVariant::R31_SPACELIKE) == GridMode::MORPHED);
  CHECK(variant_mode(SymVariant::R31_TIMELIKE_HALF) == GridMode::PARA);
  CHECK(variant_metric(SymVariant::R31_TIMELIKE) == Vec3{-1.0, 1.0, 1.0});
  CHECK(variant_metric(SymVariant::R31_SPACELIKE) == Vec3{1.0, 1.0, -1.0});
}

TEST_CASE("algebra_to_vec decodes the basis") {
  // M = a s1 + b E + d s3 with E = [[0, -1], [1, 0]]
  auto build = [](cd a, cd b, cd d) { return m2(d, a - b, a + b, -d); };
  auto v = algebra_to_vec(SymVariant::R31_TIMELIKE, build(0.3, -0.2, 0.5));
  CHECK(v[0] == doctest::Approx(-0.2));
  CHECK(v[1] == doctest::Approx(0.3));
  CHECK(v[2] == doctest::Approx(-0.5));
  auto w = algebra_to_vec(SymVariant::R3_CMC, build(-0.5 * I, -0.25, 0.5 * I));
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(algebra_to_vec(SymVariant::R3_CMC, m2(1.0, 0.0, 0.0, 1.0)), Error);
  CHECK_THROWS_AS(algebra_to_vec(SymVariant::R31_TIMELIKE, build(I, 0.0, 0.0)), Error);
}

TEST_CASE("lambda derivative from the band") {
  Mat A = m2(0.0, 1.0, 2.0, 0.0);
  auto C = TwistedLoop::identity(2) + TwistedLoop::monomial(A, 1) + TwistedLoop::monomial(A, -3);
  const cd at(0.5, 0.2);
  Mat expect = A - 3.0 * A * std::pow(at, -4);
  CHECK(max_abs(lambda_derivative_at(C, at) - expect) < 1e-13);
}

TEST_CASE("cylinder Sym points") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 5, 0.5));
  auto S = sym_formula(F, SymVariant::R31_TIMELIKE);
  CHECK(S.signature == Signature::LORENTZ_1);
  CHECK(S.valid_count() == 25);
  const size_t i = F.grid.flatten({4, 0});  // x = 0.5, y = -0.5
  CHECK(S.points[i][0] == doctest::Approx(std::sinh(2.0)));
  CHECK(std::abs(S.points[i][1]) < 1e-12);
  CHECK(S.points[i][2] == doctest::Approx(-std::cosh(2.0)));
}

TEST_CASE("sym_formula refuses mismatched inputs") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 5, 0.5));
  try {
    sym_formula(F, SymVariant::R3_CMC);
    FAIL("expected WrongRealityForVariant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongRealityForVariant);
  }
  auto H = build_frame_grid(catalog_potential(CatalogName::HYPERBOLOID), GridSpec::square(GridMode::PARA, 1, 5, 0.5));
  // hyperboloid frames are not real, so the conj-real variant must refuse them
  CHECK_THROWS_AS(sym_formula(H, SymVariant::R31_TIMELIKE), Error);
  CHECK_NOTHROW(sym_formula(H, SymVariant::R31_TIMELIKE_HALF));
}
