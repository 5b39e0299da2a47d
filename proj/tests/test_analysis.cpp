#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/analysis.hpp"

using namespace loopmorph;

namespace {
// A surface sample from a closed-form parametrization on [-hw, hw]^2.
SurfaceSample sample_of(const std::function<Vec3(double, double)>& f, int count, double hw, SymVariant v) {
  SurfaceSample s;
  s.grid = GridSpec::square(GridMode::PARA, 1, count, hw);
  s.variant = v;
  s.signature = variant_signature(v);
  for (size_t i = 0; i < s.grid.node_count(); ++i) {
    auto mi = s.grid.unflatten(i);
    s.points.push_back(f(s.grid.axes[0].value(mi[0]), s.grid.axes[1].value(mi[1])));
    s.valid.push_back(1);
  }
  return s;
}
}  // namespace

TEST_CASE("fundamental forms of a round sphere") {
  const double r = 2.0;
  auto S = sample_of(
      [&](double x, double y) {
        double th = 1.2 + x, ph = y;
        return Vec3{r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)};
      },
      21, 0.5, SymVariant::R3_CMC);
  auto ff = fundamental_forms(S, 8);
  for (size_t i = 0; i < ff.valid.size(); ++i) {
    if (!ff.valid[i]) continue;
    CHECK(ff.gauss[i] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(std::abs(std::abs(ff.mean[i]) - 0.5) < 1e-6);
  }
}

TEST_CASE("degenerate nodes are skipped or rejected") {
  auto S = sample_of([](double x, double) { return Vec3{x, 0.0, 0.0}; }, 7, 0.5, SymVariant::R3_CMC);
  auto ff = fundamental_forms(S, 2);
  CHECK(ff.degenerate > 0);
  CHECK_THROWS_AS(fundamental_forms(S, 2, true), Error);
}

TEST_CASE("quadric residuals") {
  auto S = sample_of([](double x, double y) { return Vec3{2 * std::cos(x) * std::cos(y), 2 * std::sin(x) * std::cos(y), 1 + 2 * std::sin(y)}; },
                     5, 0.5, SymVariant::R3_CMC);
  CHECK(quadric_residual(S, Quadric::sphere({0.0, 0.0, 1.0}, 4.0)) < 1e-14);
  CHECK(quadric_residual(S, Quadric::sphere({0.0, 0.0, 0.0}, 4.0)) > 0.1);
}

TEST_CASE("sine-Gordon for the three angle functions") {
  for (auto w : {AngleFunction{AngleKind::PSEUD, 0.0}, AngleFunction{AngleKind::HYPER, 0.5},
                 AngleFunction{AngleKind::CONIC, 0.5}}) {
    CHECK(sine_gordon_residual(w, 0.8, 11) < 1e-6);
    CHECK(sine_gordon_residual(w, 0.8, 11, true) < 1e-6);
  }
}

TEST_CASE("reference pseudospherical surface has unit asymptotic tangents") {
  const AngleFunction w{AngleKind::PSEUD, 0.0};
  const double h = 1e-4, x = 0.2, y = -0.3;
  auto px = reference_k_surface(w, x + h, y), mx = reference_k_surface(w, x - h, y);
  double n2 = 0;
  for (int k = 0; k < 3; ++k) n2 += std::pow((px[k] - mx[k]) / (2 * h), 2);
  CHECK(std::sqrt(n2) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("metric data of the Smyth frame") {
  auto P = catalog_potential(CatalogName::SMYTH, {{"m", 1}});
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 21, 0.6));
  auto md = extract_metric(F);
  CHECK(md.pattern_residual < 1e-4);
  CHECK(gauss_equation_residual(md) < 1e-4);
  CHECK(std::abs(md.u_at(0.0, 0.0)) < 1e-12);
  // Q depends on x alone and grows like x
  CHECK(std::abs(md.Q_of_x[15] - 0.3) < 1e-6);
  CHECK(std::abs(md.Q_of_x[5] + 0.3) < 1e-6);
}

TEST_CASE("extract_metric rejects frames outside the pattern") {
  auto P = catalog_potential(CatalogName::TODA_CONIC, {{"b", 0.5}});
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 11, 0.5));
  CHECK_THROWS_AS(extract_metric(F), Error);
}

TEST_CASE("asymptotic-line gauge needs Iwasawa factors") {
  auto P = catalog_potential(CatalogName::TODA_CONIC, {{"b", 0.5}});
  auto g = GridSpec::square(GridMode::PARA, 1, 9, 0.5);
  CHECK_THROWS_AS(asymptotic_line_gauge(build_frame_grid(P, g), P), Error);
  BuildOptions o;
  o.keep_factors = true;
  auto T = asymptotic_line_gauge(build_frame_grid(P, g, o), P);
  CHECK(T.gauge_applied);
  CHECK(T.valid_count() == g.node_count());
}
