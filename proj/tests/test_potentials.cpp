#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/potentials.hpp"

using namespace loopmorph;
using testutil::m2;
using testutil::max_abs;

TEST_CASE("catalog names round trip") {
  for (auto c : {CatalogName::CYLINDER, CatalogName::HYPERBOLOID, CatalogName::SPHERE_VARIANT, CatalogName::SMYTH,
                 CatalogName::TODA_PSEUD, CatalogName::TODA_HYPER, CatalogName::TODA_CONIC, CatalogName::GRASSMANN4,
                 CatalogName::SP2})
    CHECK(catalog_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(catalog_from_string("nope"), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(catalog_potential(CatalogName::SMYTH, {{"m", 0}}), Error);
  CHECK_THROWS_AS(catalog_potential(CatalogName::SMYTH, {{"m", 1.5}}), Error);
  CHECK_NOTHROW(catalog_potential(CatalogName::SMYTH, {{"m", 2}}));
  CHECK_THROWS_AS(catalog_potential(CatalogName::TODA_CONIC, {{"b", 1.0}}), Error);
  CHECK_THROWS_AS(catalog_potential(CatalogName::TODA_HYPER, {{"b", -0.5}}), Error);
}

TEST_CASE("cylinder potential values") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  const Mat s1 = m2(0.0, 1.0, 1.0, 0.0);
  // C = exp((x / lambda - lambda y) s1): C^{-1} dC = s1 dx / lambda - lambda s1 dy
  auto eta = eval_potential(P, Side::ETA, {0.3});
  auto tau = eval_potential(P, Side::TAU, {-0.2});
  CHECK(max_abs(loop_eval(eta[0], 2.0) - s1 / 2.0) < 1e-15);
  CHECK(max_abs(loop_eval(tau[0], 2.0) + 2.0 * s1) < 1e-15);
}

TEST_CASE("rescaling the loop parameter") {
  auto P = catalog_potential(CatalogName::SMYTH, {{"m", 1}});
  auto Q = rescale_loop_parameter(P, 1.5);
  for (cd mu : {cd(1.0), cd(0.6, 0.8)}) {
    CHECK(max_abs(loop_eval(eval_potential(Q, Side::ETA, {0.4})[0], mu) -
                  loop_eval(eval_potential(P, Side::ETA, {0.4})[0], 1.5 * mu)) < 1e-14);
  }
}

TEST_CASE("angle functions") {
  const AngleFunction pseud{AngleKind::PSEUD, 0.0};
  CHECK(std::abs(angle_function(pseud, 0.3, 0.1).real() - (4 * std::atan(std::exp(0.2)) - M_PI)) < 1e-14);
  CHECK(std::isinf(angle_analytic_radius(pseud)));
  CHECK(angle_analytic_radius({AngleKind::CONIC, 0.5}) > 1.0);
  // travelling in x - y
  const AngleFunction conic{AngleKind::CONIC, 0.5};
  CHECK(std::abs(angle_function(conic, 0.3, 0.2) - angle_function(conic, 0.1, 0.0)) < 1e-13);
}

TEST_CASE("morphing condition") {
  CHECK(check_morphing(catalog_potential(CatalogName::CYLINDER)) < 1e-12);
  CHECK(check_morphing(catalog_potential(CatalogName::TODA_CONIC, {{"b", 0.5}})) < 1e-9);
  CHECK(check_morphing(catalog_potential(CatalogName::TODA_PSEUD)) > 1e-3);
}

TEST_CASE("split_pm") {
  Mat A = m2(1.0, 2.0, 3.0, -1.0), B = m2(0.0, 1.0, -1.0, 0.0);
  auto [dx, dy] = split_pm(A, B, true);
  CHECK(max_abs(dx - A) < 1e-15);
  CHECK(max_abs(dy - B) < 1e-15);
  // P dx + Q dy = (P - iQ)/2 dz + (P + iQ)/2 dzbar
  auto [dz, dzb] = split_pm(A, B, false);
  CHECK(max_abs(dz - (A - cd(0, 1) * B) / 2.0) < 1e-15);
  CHECK(max_abs(dzb - (A + cd(0, 1) * B) / 2.0) < 1e-15);
}
