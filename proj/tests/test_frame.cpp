#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/frame.hpp"

using namespace loopmorph;
using testutil::m2;
using testutil::max_abs;

namespace {
Mat exp_s1(cd t) { return m2(std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t)); }
}  // namespace

TEST_CASE("grid indexing") {
  auto g = GridSpec::square(GridMode::PARA, 2, 5, 0.4);
  CHECK(g.node_count() == 625);
  for (size_t i : {size_t(0), size_t(17), size_t(312), size_t(624)}) CHECK(g.flatten(g.unflatten(i)) == i);
  CHECK(g.unflatten(g.base_node()) == std::vector<int>{2, 2, 2, 2});
  GridSpec off;
  off.axes = {{0.1, 1.0, 3}, {-1.0, 1.0, 3}};
  CHECK_THROWS_AS(off.base_node(), Error);
}

TEST_CASE("finite-difference weights are exact on polynomials of their order") {
  for (int p : {2, 4, 6, 8}) {
    auto w = central_weights(p);
    auto w2 = second_derivative_weights(p);
    const int r = static_cast<int>(w.size()) / 2;
    double d1 = 0, d2 = 0;
    // exact up to degree p
    for (int k = -r; k <= r; ++k) {
      double f = std::pow(0.5 + 0.1 * k, p);
      d1 += w[k + r] * f / 0.1;
      d2 += w2[k + r] * f / 0.01;
    }
    CHECK(d1 == doctest::Approx(p * std::pow(0.5, p - 1)).epsilon(1e-10));
    CHECK(d2 == doctest::Approx(p * (p - 1) * std::pow(0.5, p - 2)).epsilon(1e-8));
  }
}

TEST_CASE("integrate_frame reproduces the cylinder exponential") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  auto s = integrate_frame(P, Side::ETA, {0.8});
  CHECK(max_abs(loop_eval(s.A, 1.3) - exp_s1(0.8 / 1.3)) < 1e-12);
  CHECK(coef_distance(loop_mul(s.A, s.Ainv), TwistedLoop::identity(2)) < 1e-12);
}

TEST_CASE("parallel and serial kernels agree exactly") {
  auto P = catalog_potential(CatalogName::SMYTH, {{"m", 1}});
  auto g = GridSpec::square(GridMode::PARA, 1, 9, 0.6);
  auto A = build_frame_grid(P, g), B = build_frame_grid_serial(P, g);
  REQUIRE(A.loops.size() == B.loops.size());
  for (size_t i = 0; i < A.loops.size(); ++i) {
    CHECK(A.valid[i] == B.valid[i]);
    CHECK(coef_distance(A.loops[i], B.loops[i]) == 0.0);
  }
}

TEST_CASE("base node frame is the identity") {
  auto P = catalog_potential(CatalogName::SPHERE_VARIANT);
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 5, 0.5));
  CHECK(coef_distance(F.loops[F.grid.base_node()], TwistedLoop::identity(2)) < 1e-13);
  CHECK(F.valid_count() == 25);
}

TEST_CASE("frame_at matches the grid builder") {
  auto P = catalog_potential(CatalogName::HYPERBOLOID);
  auto g = GridSpec::square(GridMode::PARA, 1, 5, 0.5);
  auto F = build_frame_grid(P, g);
  size_t i = g.flatten({4, 1});
  auto r = frame_at(P, node_point(g, i));
  CHECK(coef_distance(r.C, F.loops[i]) < 1e-12);
}

TEST_CASE("hyperboloid frame fails at xy = 1") {
  auto P = catalog_potential(CatalogName::HYPERBOLOID);
  try {
    frame_at(P, {{1.0}, {1.0}});
    FAIL("expected NotInBigCell");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInBigCell);
  }
}

TEST_CASE("morph_frame rejects potentials violating the morphing condition") {
  auto P = catalog_potential(CatalogName::TODA_PSEUD);
  try {
    morph_frame(P, GridSpec::square(GridMode::MORPHED, 1, 5, 0.5));
    FAIL("expected MorphingViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MorphingViolated);
  }
}

TEST_CASE("unitarize leaves an already unitary frame alone") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  auto M = morph_frame(P, GridSpec::square(GridMode::MORPHED, 1, 5, 0.5));
  auto [U, g] = unitarize(M, P.space.nu1);
  CHECK(U.gauge_applied);
  CHECK(g.base_residual < 1e-14);
  for (size_t i = 0; i < M.loops.size(); ++i) CHECK(coef_distance(U.loops[i], M.loops[i]) < 1e-12);
}

TEST_CASE("flatness and band shape on a closed-form frame") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 11, 0.5));
  CHECK(check_flatness(F) < 1e-8);
  CHECK(maurer_cartan_band(F) < 1e-8);
}
