#include "loopmorph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loopmorph/special_functions.hpp"

namespace loopmorph {

namespace {
const cd I(0.0, 1.0);
// Denominator floor for relative residuals.
constexpr double kScaleFloor = 1e-3;

double relative(double defect, std::initializer_list<double> terms) {
  double s = kScaleFloor;
  for (double t : terms) s = std::max(s, std::abs(t));
  return defect / s;
}

double real_or_throw(cd v, const char* what) {
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v)))
    throw Error(ErrorKind::DomainError, std::string(what) + " is not real here");
  return v.real();
}

void require_plane_sl2(const ExtendedFrame& F, const char* who) {
  if (F.grid.mode != GridMode::PARA || F.grid.n() != 1 || F.space.group.kind != GroupKind::SL2C)
    throw Error(ErrorKind::InvalidParams, std::string(who) + " needs a 2D PARA SL(2) frame");
}

// Lagrange weights on nodes 0..k-1 (unit spacing) at position s.
std::vector<double> lagrange(int k, double s) {
  std::vector<double> w(k, 1.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (j != i) w[i] *= (s - j) / double(i - j);
  return w;
}
}  // namespace

Vec3 reference_k_surface(const AngleFunction& w, double x, double y) {
  const double s = x - y;
  switch (w.kind) {
    case AngleKind::PSEUD: {
      double u = x + y, v = 2.0 * std::atan(std::exp(s));
      return {std::cos(u) * std::sin(v), std::sin(u) * std::sin(v), std::cos(v) + std::log(std::tan(v / 2))};
    }
    case AngleKind::HYPER: {
      if (!(w.b > 0.0)) throw Error(ErrorKind::InvalidParams, "HYPER needs b > 0");
      const double r = std::sqrt(1.0 + w.b * w.b), b = w.b;
      double u = (x + y) / r;
      double v = real_or_throw(-I * jacobi(JacobiKind::AM, I * s / r, cd(0.0, b)), "hyperboloid profile");
      double h = integrate([&](double t) { return cd(std::sqrt(1.0 - b * b * std::sinh(t) * std::sinh(t))); }, 0.0, v)
                     .real();
      return {b * std::cos(u) * std::cosh(v), b * std::sin(u) * std::cosh(v), h};
    }
    case AngleKind::CONIC: {
      if (!(w.b > 0.0 && w.b < 1.0)) throw Error(ErrorKind::InvalidParams, "CONIC needs 0 < b < 1");
      const double kp = std::sqrt(1.0 - w.b * w.b), b = w.b;
      double u = (x + y) / kp;
      double v = real_or_throw(-I * jacobi(JacobiKind::AM, I * s, cd(0.0, b / kp)), "conic profile");
      double h = integrate([&](double t) { return cd(std::sqrt(1.0 - b * b * std::cosh(t) * std::cosh(t))); }, 0.0, v)
                     .real();
      return {b * std::cos(u) * std::sinh(v), b * std::sin(u) * std::sinh(v), h};
    }
  }
  return {0.0, 0.0, 0.0};
}

double sine_gordon_residual(const AngleFunction& w, double half_width, int count, bool transformed) {
  if (count < 2) throw Error(ErrorKind::InvalidParams, "need at least 2 samples per axis");
  auto om = [&](double x, double y) {
    return transformed ? angle_function(w, x, -y).real() + std::numbers::pi : angle_function(w, x, y).real();
  };
  const auto wt = central_weights(4);
  const double d = 1e-2;
  double worst = 0.0;
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      double x = -half_width + 2.0 * half_width * i / (count - 1);
      double y = -half_width + 2.0 * half_width * j / (count - 1);
      double mixed = 0.0;
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
          if (wt[a] != 0.0 && wt[b] != 0.0) mixed += wt[a] * wt[b] * om(x + (a - 2) * d, y + (b - 2) * d);
      mixed /= d * d;
      double sn = std::sin(om(x, y));
      worst = std::max(worst, relative(std::abs(mixed - sn), {mixed, sn}));
    }
  return worst;
}

// ---------------------------------------------------------------------------------------------
// metric extraction

bool MetricData::covers(double x, double y) const {
  const auto& ax = grid.axes[0];
  const auto& ay = grid.axes[1];
  double fx = (x - ax.min) / ax.step(), fy = (y - ay.min) / ay.step();
  int i0 = static_cast<int>(std::floor(fx)) - 2, j0 = static_cast<int>(std::floor(fy)) - 2;
  if (i0 < 0 || j0 < 0 || i0 + 5 >= ax.count || j0 + 5 >= ay.count) return false;
  for (int i = i0; i < i0 + 6; ++i)
    for (int j = j0; j < j0 + 6; ++j)
      if (!valid[grid.flatten({i, j})]) return false;
  return true;
}

double MetricData::u_at(double x, double y) const {
  if (!covers(x, y)) throw Error(ErrorKind::RegionTooSmall, "point outside the extracted metric region");
  const auto& ax = grid.axes[0];
  const auto& ay = grid.axes[1];
  double fx = (x - ax.min) / ax.step(), fy = (y - ay.min) / ay.step();
  int i0 = static_cast<int>(std::floor(fx)) - 2, j0 = static_cast<int>(std::floor(fy)) - 2;
  auto wx = lagrange(6, fx - i0), wy = lagrange(6, fy - j0);
  double acc = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) acc += wx[i] * wy[j] * u[grid.flatten({i0 + i, j0 + j})];
  return acc;
}

MetricData extract_metric(const ExtendedFrame& F, cd H) {
  require_plane_sl2(F, "extract_metric");
  const GridSpec& g = F.grid;
  const int nx = g.axes[0].count, ny = g.axes[1].count;
  const int p = std::min(8, 2 * ((std::min(nx, ny) - 1) / 2));
  if (p < 2) throw Error(ErrorKind::RegionTooSmall, "grid too small for extract_metric");
  const int r = p / 2;
  const auto w = central_weights(p);
  const double hx = g.axes[0].step(), hy = g.axes[1].step();
  const size_t N = g.node_count();

  std::vector<uint8_t> have(N, 0);
  std::vector<cd> U12(N), U21(N), V12(N), V21(N), U011(N), V011(N);
  std::vector<double> structural(N, 0.0);
  auto ok = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx && j < ny && F.valid[g.flatten({i, j})]; };

#pragma omp parallel for schedule(dynamic, 4)
  for (long long idx = 0; idx < static_cast<long long>(N); ++idx) {
    auto mi = g.unflatten(idx);
    const int i = mi[0], j = mi[1];
    bool full = true;
    for (int k = -r; k <= r && full; ++k) full = ok(i + k, j) && ok(i, j + k);
    if (!full) continue;
    TwistedLoop dx = TwistedLoop::zero(2, 0, 0), dy = TwistedLoop::zero(2, 0, 0);
    for (int k = -r; k <= r; ++k) {
      if (w[k + r] == 0.0) continue;
      dx = dx + (w[k + r] / hx) * F.loops[g.flatten({i + k, j})];
      dy = dy + (w[k + r] / hy) * F.loops[g.flatten({i, j + k})];
    }
    TwistedLoop Ci = loop_inverse(F.loops[idx], F.band);
    TwistedLoop U = loop_mul(Ci, dx, F.band), V = loop_mul(Ci, dy, F.band);
    Mat Um = U.coef_or_zero(-1), U0 = U.coef_or_zero(0), V0 = V.coef_or_zero(0), V1 = V.coef_or_zero(1);
    double wrong = 0.0;
    for (int k = U.lo; k <= U.hi; ++k)
      if (k != -1 && k != 0) wrong += U.coef_norm(k);
    for (int k = V.lo; k <= V.hi; ++k)
      if (k != 0 && k != 1) wrong += V.coef_norm(k);
    wrong += std::abs(Um(0, 0)) + std::abs(Um(1, 1)) + std::abs(V1(0, 0)) + std::abs(V1(1, 1));
    wrong += std::abs(U0(0, 1)) + std::abs(U0(1, 0)) + std::abs(V0(0, 1)) + std::abs(V0(1, 0));
    structural[idx] = wrong / std::max(kScaleFloor, U.norm_l1() + V.norm_l1());
    U12[idx] = Um(0, 1);
    U21[idx] = Um(1, 0);
    V12[idx] = V1(0, 1);
    V21[idx] = V1(1, 0);
    U011[idx] = U0(0, 0);
    V011[idx] = V0(0, 0);
    have[idx] = 1;
  }

  const size_t base = g.base_node();
  if (!have[base]) throw Error(ErrorKind::RegionTooSmall, "no Maurer-Cartan data at the base node");
  const cd P0 = U12[base] * V21[base];
  if (std::abs(P0) < 1e-12) throw Error(ErrorKind::PatternMismatch, "degenerate off-diagonal entries at the base");
  if (H == 0.0) {
    H = std::sqrt(-4.0 * P0);
    if (H.real() > 1e-14 || (std::abs(H.real()) <= 1e-14 && H.imag() > 0.0)) H = -H;
  }

  MetricData md;
  md.grid = g;
  md.H = H;
  md.u.assign(N, 0.0);
  md.Q.assign(N, 0.0);
  md.R.assign(N, 0.0);
  md.valid.assign(N, 0);
  double worst = 0.0;
  for (size_t idx = 0; idx < N; ++idx) {
    if (!have[idx]) continue;
    cd eu = -4.0 * U12[idx] * V21[idx] / (H * H);
    if (eu.real() <= 0.0 || std::abs(eu.imag()) > 1e-8 * std::abs(eu))
      throw Error(ErrorKind::PatternMismatch, "e^u from the off-diagonal product is not positive");
    md.u[idx] = std::log(eu.real());
    md.Q[idx] = -2.0 * U12[idx] * U21[idx] / H;
    md.R[idx] = -2.0 * V12[idx] * V21[idx] / H;
    md.valid[idx] = 1;
    worst = std::max(worst, structural[idx]);
  }

  // Diagonal pattern after the diagonal gauge, and single-variable dependence of Q and R.
  const auto w4 = central_weights(p);
  for (size_t idx = 0; idx < N; ++idx) {
    if (!md.valid[idx]) continue;
    auto mi = g.unflatten(idx);
    bool full = true;
    for (int k = -r; k <= r && full; ++k) {
      full = mi[0] + k >= 0 && mi[0] + k < nx && mi[1] + k >= 0 && mi[1] + k < ny &&
             md.valid[g.flatten({mi[0] + k, mi[1]})] && md.valid[g.flatten({mi[0], mi[1] + k})];
    }
    if (!full) continue;
    cd ux = 0, uy = 0, lx = 0, ly = 0, Qy = 0, Qx = 0, Rx = 0, Ry = 0;
    for (int k = -r; k <= r; ++k) {
      size_t a = g.flatten({mi[0] + k, mi[1]}), b = g.flatten({mi[0], mi[1] + k});
      const double c = w4[k + r];
      ux += c * md.u[a] / hx;
      uy += c * md.u[b] / hy;
      lx += c * U12[a] / hx;
      ly += c * U12[b] / hy;
      Qx += c * md.Q[a] / hx;
      Qy += c * md.Q[b] / hy;
      Rx += c * md.R[a] / hx;
      Ry += c * md.R[b] / hy;
    }
    lx /= U12[idx];
    ly /= U12[idx];
    const cd e1 = U011[idx] + 0.5 * lx - 0.5 * ux;
    const cd e2 = V011[idx] + 0.5 * ly;
    worst = std::max(worst, relative(std::abs(e1), {std::abs(U011[idx]), std::abs(0.5 * lx), std::abs(0.5 * ux)}));
    worst = std::max(worst, relative(std::abs(e2), {std::abs(V011[idx]), std::abs(0.5 * ly)}));
    worst = std::max(worst, relative(std::abs(Qy), {std::abs(md.Q[idx]), std::abs(Qx)}));
    worst = std::max(worst, relative(std::abs(Rx), {std::abs(md.R[idx]), std::abs(Ry)}));
  }
  md.pattern_residual = worst;
  if (worst > 1e-2) throw Error(ErrorKind::PatternMismatch, "Maurer-Cartan form does not fit the metric pattern");

  md.Q_of_x.assign(nx, 0.0);
  md.R_of_y.assign(ny, 0.0);
  std::vector<int> cx(nx, 0), cy(ny, 0);
  for (size_t idx = 0; idx < N; ++idx) {
    if (!md.valid[idx]) continue;
    auto mi = g.unflatten(idx);
    md.Q_of_x[mi[0]] += md.Q[idx];
    ++cx[mi[0]];
    md.R_of_y[mi[1]] += md.R[idx];
    ++cy[mi[1]];
  }
  for (int i = 0; i < nx; ++i)
    if (cx[i]) md.Q_of_x[i] /= double(cx[i]);
  for (int j = 0; j < ny; ++j)
    if (cy[j]) md.R_of_y[j] /= double(cy[j]);
  return md;
}

double gauss_equation_residual(const MetricData& md) {
  const GridSpec& g = md.grid;
  const int nx = g.axes[0].count, ny = g.axes[1].count;
  const double hx = g.axes[0].step(), hy = g.axes[1].step();
  const int p = std::min(8, 2 * ((std::min(nx, ny) - 1) / 2)), r = p / 2;
  if (p < 2) throw Error(ErrorKind::RegionTooSmall, "grid too small for u_xy");
  const auto w = central_weights(p);
  const cd H2 = md.H * md.H;
  double worst = 0.0;
  size_t used = 0;
  for (size_t idx = 0; idx < g.node_count(); ++idx) {
    if (!md.valid[idx]) continue;
    auto mi = g.unflatten(idx);
    bool full = true;
    for (int a = -r; a <= r && full; ++a)
      for (int b = -r; b <= r && full; ++b) {
        int i = mi[0] + a, j = mi[1] + b;
        full = i >= 0 && j >= 0 && i < nx && j < ny && md.valid[g.flatten({i, j})];
      }
    if (!full) continue;
    double uxy = 0.0;
    for (int a = -r; a <= r; ++a)
      for (int b = -r; b <= r; ++b)
        if (w[a + r] != 0.0 && w[b + r] != 0.0)
          uxy += w[a + r] * w[b + r] * md.u[g.flatten({mi[0] + a, mi[1] + b})];
    uxy /= hx * hy;
    const cd t1 = -2.0 * md.Q[idx] * md.R[idx] * std::exp(-md.u[idx]);
    const cd t2 = 0.5 * H2 * std::exp(md.u[idx]);
    worst = std::max(worst, relative(std::abs(uxy + t1 + t2), {uxy, std::abs(t1), std::abs(t2)}));
    ++used;
  }
  if (used == 0) throw Error(ErrorKind::RegionTooSmall, "no node with a full stencil for u_xy");
  return worst;
}

PainleveReport painleve_iii_residual(const MetricData& md, int m, const std::vector<double>& ts) {
  if (m < 1) throw Error(ErrorKind::InvalidParams, "m must be a positive integer");
  if (ts.empty()) throw Error(ErrorKind::InvalidParams, "no t samples");
  for (double t : ts)
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidParams, "t samples must be positive");
  PainleveReport rep;
  const GridSpec& g = md.grid;

  // Q = Q0 x^m and R = R0 y^m, fitted away from the origin.
  auto fit = [&](const std::vector<cd>& f, const AxisSpec& ax, double& misfit) {
    double lim = std::max(std::abs(ax.min), std::abs(ax.max));
    cd num = 0.0;
    double den = 0.0;
    for (int i = 0; i < ax.count; ++i) {
      double s = ax.value(i);
      if (std::abs(s) < 0.25 * lim || f[i] == 0.0) continue;
      double sm = std::pow(s, m);
      num += f[i] * sm;
      den += sm * sm;
    }
    if (den == 0.0) throw Error(ErrorKind::RegionTooSmall, "no samples for the power fit");
    cd c = num / den;
    for (int i = 0; i < ax.count; ++i) {
      double s = ax.value(i);
      if (std::abs(s) < 0.25 * lim || f[i] == 0.0) continue;
      double sm = std::pow(s, m);
      misfit = std::max(misfit, std::abs(f[i] - c * sm) / std::max(std::abs(c * sm), 1e-12));
    }
    return c;
  };
  rep.Q0 = fit(md.Q_of_x, g.axes[0], rep.fit_residual);
  rep.R0 = fit(md.R_of_y, g.axes[1], rep.fit_residual);

  const double tmin = *std::min_element(ts.begin(), ts.end());
  const double tmax = *std::max_element(ts.begin(), ts.end());
  const double dt = std::min(0.01, 0.25 * tmin);
  const double s_of = 2.0 / (2.0 + m);

  // Anchors: the largest grid x values whose hyperbolas stay inside the metric region.
  const auto& ax = g.axes[0];
  for (int i = ax.count - 1; i >= 0 && rep.anchors.size() < 2; --i) {
    double x = ax.value(i);
    if (x <= 0.0) break;
    bool inside = true;
    for (double t = tmin - 3 * dt; t <= tmax + 3 * dt + 1e-12 && inside; t += dt / 4) inside = md.covers(x, t / x);
    if (inside) rep.anchors.push_back(x);
  }
  if (rep.anchors.size() < 2) throw Error(ErrorKind::RegionTooSmall, "hyperbolas x y = t leave the metric region");

  const double x1 = rep.anchors[0];
  auto Om = [&](double t) { return md.u_at(x1, t / x1); };
  const cd H2 = md.H * md.H, QR = rep.Q0 * rep.R0;
  const auto w1 = central_weights(4), w2 = second_derivative_weights(4);
  for (double t : ts) {
    rep.omega_spread = std::max(rep.omega_spread, std::abs(Om(t) - md.u_at(rep.anchors[1], t / rep.anchors[1])));
    double o1 = 0.0, o2 = 0.0;
    for (int k = -2; k <= 2; ++k) {
      double v = Om(t + k * dt);
      o1 += w1[k + 2] * v / dt;
      o2 += w2[k + 2] * v / (dt * dt);
    }
    const double o = Om(t);
    const cd a = t * o2, b = o1, c = -2.0 * QR * std::pow(t, m) * std::exp(-o), d = 0.5 * H2 * std::exp(o);
    rep.residual_omega = std::max(rep.residual_omega, relative(std::abs(a + b + c + d), {std::abs(a), std::abs(b),
                                                                                           std::abs(c), std::abs(d)}));

    // Same equation in s = 2 t^{(2+m)/2} / (2+m), v = e^Omega t^{-m/2}; t derivatives carried over by the chain rule.
    const double s = s_of * std::pow(t, 1.0 / s_of);
    const double k = 0.5 * m, st = std::pow(t, k), stt = k * std::pow(t, k - 1.0);
    const double v = std::exp(o) * std::pow(t, -k);
    const double vt = v * (o1 - k / t);
    const double vtt = v * ((o1 - k / t) * (o1 - k / t) + o2 + k / (t * t));
    const double v1 = vt / st, v2 = (vtt - vt * stt / st) / (st * st);
    const cd r1 = v1 * v1 / v, r2 = -v1 / s, r3 = (-H2 / (2.0 + m) * v * v + 4.0 * QR / (2.0 + m)) / s;
    rep.residual_v = std::max(rep.residual_v, relative(std::abs(v2 - r1 - r2 - r3), {v2, std::abs(r1), std::abs(r2),
                                                                                    std::abs(r3)}));
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// surfaces

FundamentalForms fundamental_forms(const SurfaceSample& S, int order, bool strict) {
  const GridSpec& g = S.grid;
  if (g.axes.size() != 2) throw Error(ErrorKind::InvalidParams, "fundamental forms need a 2D grid");
  const int nx = g.axes[0].count, ny = g.axes[1].count;
  if (nx < 5 || ny < 5) throw Error(ErrorKind::RegionTooSmall, "grid must be at least 5x5");
  const int p = std::min(order, 2 * ((std::min(nx, ny) - 1) / 2));
  const int r = p / 2;
  const auto w1 = central_weights(p), w2 = second_derivative_weights(p);
  const double hx = g.axes[0].step(), hy = g.axes[1].step();
  const Vec3 eta = variant_metric(S.variant);
  auto dot = [&](const Vec3& a, const Vec3& b) { return eta[0] * a[0] * b[0] + eta[1] * a[1] * b[1] + eta[2] * a[2] * b[2]; };

  const size_t N = g.node_count();
  FundamentalForms ff;
  ff.first.assign(N, {0, 0, 0});
  ff.second.assign(N, {0, 0, 0});
  ff.mean.assign(N, 0.0);
  ff.gauss.assign(N, 0.0);
  ff.valid.assign(N, 0);
  for (size_t idx = 0; idx < N; ++idx) {
    if (!S.valid[idx]) continue;
    auto mi = g.unflatten(idx);
    bool full = true;
    for (int a = -r; a <= r && full; ++a)
      for (int b = -r; b <= r && full; ++b) {
        int i = mi[0] + a, j = mi[1] + b;
        full = i >= 0 && j >= 0 && i < nx && j < ny && S.valid[g.flatten({i, j})];
      }
    if (!full) continue;
    Vec3 fu{}, fv{}, fuu{}, fvv{}, fuv{};
    for (int a = -r; a <= r; ++a) {
      const Vec3& px = S.points[g.flatten({mi[0] + a, mi[1]})];
      const Vec3& py = S.points[g.flatten({mi[0], mi[1] + a})];
      for (int c = 0; c < 3; ++c) {
        fu[c] += w1[a + r] * px[c] / hx;
        fv[c] += w1[a + r] * py[c] / hy;
        fuu[c] += w2[a + r] * px[c] / (hx * hx);
        fvv[c] += w2[a + r] * py[c] / (hy * hy);
      }
      for (int b = -r; b <= r; ++b) {
        if (w1[a + r] == 0.0 || w1[b + r] == 0.0) continue;
        const Vec3& q = S.points[g.flatten({mi[0] + a, mi[1] + b})];
        for (int c = 0; c < 3; ++c) fuv[c] += w1[a + r] * w1[b + r] * q[c] / (hx * hy);
      }
    }
    const double E = dot(fu, fu), F = dot(fu, fv), G = dot(fv, fv);
    const double det = E * G - F * F;
    Vec3 cr{fu[1] * fv[2] - fu[2] * fv[1], fu[2] * fv[0] - fu[0] * fv[2], fu[0] * fv[1] - fu[1] * fv[0]};
    Vec3 nrm{cr[0] * eta[0], cr[1] * eta[1], cr[2] * eta[2]};
    const double nn = dot(nrm, nrm);
    const double scale = std::max(1e-300, E * E + G * G);
    if (std::abs(det) < 1e-10 * scale || std::abs(nn) < 1e-10 * scale) {
      if (strict) throw Error(ErrorKind::DegenerateMetric, "null or degenerate tangent plane");
      ++ff.degenerate;
      continue;
    }
    const double eps = nn > 0 ? 1.0 : -1.0;
    for (double& c : nrm) c /= std::sqrt(std::abs(nn));
    const double L = dot(fuu, nrm), M = dot(fuv, nrm), Nn = dot(fvv, nrm);
    ff.first[idx] = {E, F, G};
    ff.second[idx] = {L, M, Nn};
    ff.gauss[idx] = eps * (L * Nn - M * M) / det;
    ff.mean[idx] = eps * (E * Nn - 2.0 * F * M + G * L) / (2.0 * det);
    ff.valid[idx] = 1;
  }
  return ff;
}

Quadric Quadric::hyperbolic_cylinder() { return {{-1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, 1.0, 4.0}; }
Quadric Quadric::two_sheeted_shifted() { return {{1.0, 1.0, -1.0}, {0.0, 0.0, 0.5}, -1.0, 0.0}; }
Quadric Quadric::one_sheeted_shifted() { return {{1.0, -1.0, -1.0}, {0.0, 0.0, 0.5}, -1.0, 0.0}; }
Quadric Quadric::sphere(Vec3 center, double radius_sq) { return {{1.0, 1.0, 1.0}, center, radius_sq, 0.0}; }

double quadric_residual(const SurfaceSample& S, const Quadric& q) {
  double worst = 0.0;
  for (size_t idx = 0; idx < S.points.size(); ++idx) {
    if (!S.valid[idx]) continue;
    auto mi = S.grid.unflatten(idx);
    double x = S.grid.axes[0].value(mi[0]), y = S.grid.axes.size() > 1 ? S.grid.axes[1].value(mi[1]) : 0.0;
    double lhs = 0.0;
    for (int c = 0; c < 3; ++c) lhs += q.coef[c] * (S.points[idx][c] - q.center[c]) * (S.points[idx][c] - q.center[c]);
    worst = std::max(worst, std::abs(lhs - q.rhs - q.param_coef * (x + y) * (x + y)));
  }
  return worst;
}

ExtendedFrame asymptotic_line_gauge(const ExtendedFrame& F, const PotentialPair& P) {
  require_plane_sl2(F, "asymptotic_line_gauge");
  if (F.Bminus.size() != F.loops.size()) throw Error(ErrorKind::InvalidParams, "frame was built without factors");
  const int d = 2;
  auto tau1 = [&](double y) { return eval_coordinate_form(P.tau[0], d, y).coef_or_zero(1); };
  const cd ref = tau1(0.0)(0, 1);
  if (std::abs(ref) < 1e-14) throw Error(ErrorKind::PatternMismatch, "tau has no 12 entry at the origin");
  ExtendedFrame out = F;
  for (size_t idx = 0; idx < F.loops.size(); ++idx) {
    if (!F.valid[idx]) continue;
    const double y = F.grid.axes[1].value(F.grid.unflatten(idx)[1]);
    const Mat B0 = F.Bminus[idx].coef_or_zero(0);
    const Mat V = B0 * tau1(y) * mat_inverse(B0);
    const cd gam = std::sqrt(V(0, 1) / ref);
    Mat G = Mat::Zero(2, 2);
    G(0, 0) = gam;
    G(1, 1) = 1.0 / gam;
    out.loops[idx] = F.loops[idx] * G;
    out.Bplus[idx] = mat_inverse(G) * F.Bplus[idx];
    out.Bminus[idx] = mat_inverse(G) * F.Bminus[idx];
  }
  out.gauge_applied = true;
  return out;
}

}  // namespace loopmorph
