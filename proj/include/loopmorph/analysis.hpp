#pragma once

#include <functional>
#include <vector>

#include "loopmorph/frame.hpp"
#include "loopmorph/potentials.hpp"
#include "loopmorph/sym.hpp"

namespace loopmorph {

// Asymptotic line parametrization of the pseudospherical, hyperbolic and conic K-surfaces.
Vec3 reference_k_surface(const AngleFunction& w, double x, double y);

// max relative |w_xy - sin w| over a count x count grid on [-hw, hw]^2.
// transformed: use w'(x, y) = w(x, -y) + pi.
double sine_gordon_residual(const AngleFunction& w, double half_width, int count, bool transformed = false);

struct MetricData {
  GridSpec grid;
  cd H = -2.0;
  std::vector<double> u;      // grid indexed
  std::vector<cd> Q, R;       // grid indexed; Q should depend on x only, R on y only
  std::vector<uint8_t> valid;
  std::vector<cd> Q_of_x;     // per x index, averaged over valid nodes
  std::vector<cd> R_of_y;     // per y index
  double pattern_residual = 0.0;  // worst relative defect of the Maurer-Cartan pattern

  // Degree-5 Lagrange interpolation of u; RegionTooSmall outside the valid block.
  double u_at(double x, double y) const;
  bool covers(double x, double y) const;
};

// Reads u, Q, R off a 2D PARA SL(2) frame. H fixes the scale of u with u(0, 0) = 0;
// pass 0 to take H from the base node (negative real part preferred).
MetricData extract_metric(const ExtendedFrame& frame, cd H = -2.0);

// max relative residual of u_xy - 2 Q R e^{-u} + H^2 e^u / 2.
double gauss_equation_residual(const MetricData& md);

struct PainleveReport {
  double residual_omega = 0.0;  // Omega-form ODE
  double residual_v = 0.0;      // (u, v) form
  double omega_spread = 0.0;    // max |Omega_x1 - Omega_x2|
  std::vector<double> anchors;  // x values used for Omega(t) = u(x, t / x)
  cd Q0 = 0.0, R0 = 0.0;
  double fit_residual = 0.0;    // relative misfit of Q = Q0 x^m, R = R0 y^m
};

PainleveReport painleve_iii_residual(const MetricData& md, int m, const std::vector<double>& ts);

struct FundamentalForms {
  std::vector<std::array<double, 3>> first;   // E, F, G
  std::vector<std::array<double, 3>> second;  // L, M, N
  std::vector<double> mean, gauss;
  std::vector<uint8_t> valid;
  size_t degenerate = 0;  // nodes skipped for a null or degenerate tangent plane
};

// Central differences of the given order (2..8) in the variant's inner product.
// strict: DegenerateMetric instead of skipping degenerate nodes.
FundamentalForms fundamental_forms(const SurfaceSample& s, int order = 6, bool strict = false);

// sum_i coef_i (p_i - center_i)^2 = rhs + param_coef * (x + y)^2
struct Quadric {
  Vec3 coef{1.0, 1.0, 1.0};
  Vec3 center{0.0, 0.0, 0.0};
  double rhs = 1.0;
  double param_coef = 0.0;

  static Quadric hyperbolic_cylinder();     // -X^2 + Y^2 + Z^2 = 4 (x + y)^2 + 1
  static Quadric two_sheeted_shifted();     // X^2 + Y^2 - (Z - 1/2)^2 = -1
  static Quadric one_sheeted_shifted();     // X^2 - Y^2 - (Z - 1/2)^2 = -1
  static Quadric sphere(Vec3 center, double radius_sq);
};

double quadric_residual(const SurfaceSample& s, const Quadric& q);

// Right gauge by diag(g, 1/g) making the lambda^1 part of C^{-1} dC/dy equal tau(0) in its 12 entry.
// Needs a 2D PARA SL(2) frame built with keep_factors.
ExtendedFrame asymptotic_line_gauge(const ExtendedFrame& frame, const PotentialPair& P);

}  // namespace loopmorph
