#include "loopmorph/frame.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <omp.h>

namespace loopmorph {

GridSpec GridSpec::square(GridMode mode, int n, int count, double half_width) {
  GridSpec g;
  g.mode = mode;
  g.axes.assign(2 * n, AxisSpec{-half_width, half_width, count});
  return g;
}

size_t GridSpec::node_count() const {
  size_t c = 1;
  for (const auto& a : axes) c *= static_cast<size_t>(a.count);
  return c;
}

std::vector<int> GridSpec::unflatten(size_t idx) const {
  std::vector<int> mi(axes.size());
  for (size_t a = axes.size(); a-- > 0;) {
    mi[a] = static_cast<int>(idx % axes[a].count);
    idx /= axes[a].count;
  }
  return mi;
}

size_t GridSpec::flatten(const std::vector<int>& mi) const {
  size_t idx = 0;
  for (size_t a = 0; a < axes.size(); ++a) idx = idx * axes[a].count + mi[a];
  return idx;
}

size_t GridSpec::base_node() const {
  std::vector<int> mi(axes.size());
  for (size_t a = 0; a < axes.size(); ++a) {
    const auto& ax = axes[a];
    int i = ax.count > 1 ? static_cast<int>(std::lround(-ax.min / ax.step())) : 0;
    if (i < 0 || i >= ax.count || std::abs(ax.value(i)) > 1e-12)
      throw Error(ErrorKind::DomainError, "grid does not contain the base point");
    mi[a] = i;
  }
  return flatten(mi);
}

NodePoint node_point(const GridSpec& g, size_t idx) {
  auto mi = g.unflatten(idx);
  const int n = g.n();
  NodePoint p;
  for (int a = 0; a < n; ++a) {
    if (g.mode == GridMode::PARA) {
      p.eta_point.push_back(g.axes[a].value(mi[a]));
      p.tau_point.push_back(g.axes[n + a].value(mi[n + a]));
    } else {
      cd z(g.axes[2 * a].value(mi[2 * a]), g.axes[2 * a + 1].value(mi[2 * a + 1]));
      p.eta_point.push_back(z);
      p.tau_point.push_back(std::conj(z));
    }
  }
  return p;
}

namespace {

constexpr double kStepTol = 1e-13;

void rk4(const CoordinateForm& f, int d, cd z0, cd dz, double s, double h, const FrameSolution& in,
         FrameSolution& out, int band) {
  auto X = [&](double t) { return dz * eval_coordinate_form(f, d, z0 + t * dz); };
  TwistedLoop X0 = X(s), X1 = X(s + 0.5 * h), X2 = X(s + h);
  auto fa = [&](const TwistedLoop& A, const TwistedLoop& Xs) { return loop_mul(A, Xs, band); };
  auto fg = [&](const TwistedLoop& G, const TwistedLoop& Xs) { return cd(-1.0) * loop_mul(Xs, G, band); };
  TwistedLoop k1 = fa(in.A, X0), l1 = fg(in.Ainv, X0);
  TwistedLoop k2 = fa(in.A + (0.5 * h) * k1, X1), l2 = fg(in.Ainv + (0.5 * h) * l1, X1);
  TwistedLoop k3 = fa(in.A + (0.5 * h) * k2, X1), l3 = fg(in.Ainv + (0.5 * h) * l2, X1);
  TwistedLoop k4 = fa(in.A + h * k3, X2), l4 = fg(in.Ainv + h * l3, X2);
  out.A = in.A + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.Ainv = in.Ainv + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
}

// Advances `state` along the straight segment z0 -> z1.
void integrate_segment(const CoordinateForm& f, int d, FrameSolution& state, cd z0, cd z1, int band) {
  cd dz = z1 - z0;
  if (dz == cd(0.0)) return;
  if (f.is_constant()) {
    TwistedLoop X = eval_coordinate_form(f, d, 0.0);
    state.A = loop_mul(state.A, loop_exp(dz * X, band), band);
    state.Ainv = loop_mul(loop_exp(-dz * X, band), state.Ainv, band);
    return;
  }
  double s = 0.0, hc = 1.0 / 16.0;  // hc: step proposed by the error controller
  while (1.0 - s > 1e-14) {
    if (hc < 1e-9) throw Error(ErrorKind::IntegrationFailure, "step size underflow");
    const double h = std::min(hc, 1.0 - s);
    FrameSolution big, half, two;
    rk4(f, d, z0, dz, s, h, state, big, band);
    rk4(f, d, z0, dz, s, 0.5 * h, state, half, band);
    rk4(f, d, z0, dz, s + 0.5 * h, 0.5 * h, half, two, band);
    double scale = std::max(1.0, two.A.norm_l1());
    double err = std::max(coef_distance(big.A, two.A), coef_distance(big.Ainv, two.Ainv)) / (15.0 * scale);
    // floor keeps the request above the rounding level of the coefficient arithmetic
    const double tol = kStepTol * std::max(h * std::abs(dz), 0.01);
    if (err <= tol || h < 1e-6) {
      state.A = two.A + (1.0 / 15.0) * (two.A - big.A);
      state.Ainv = two.Ainv + (1.0 / 15.0) * (two.Ainv - big.Ainv);
      s += h;
      double grow = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
      hc = h * std::clamp(grow, 0.3, 2.0);
    } else {
      hc = 0.5 * h;
    }
  }
  // Maurer-Cartan consistency checkpoint: A * A^{-1} = id
  TwistedLoop R = loop_mul(state.A, state.Ainv, band) - TwistedLoop::identity(d);
  double r = 0.0;
  for (int k = -band / 2; k <= band / 2; ++k) r = std::max(r, R.coef_norm(k));
  if (r > 1e-9 * std::max(1.0, state.A.norm_l1() * state.Ainv.norm_l1()))
    throw Error(ErrorKind::IntegrationFailure, "frame/inverse mismatch " + std::to_string(r));
}

FrameSolution identity_solution(int d) { return {TwistedLoop::identity(d), TwistedLoop::identity(d)}; }

FrameSolution compose(const FrameSolution& a, const FrameSolution& b, int band) {
  return {loop_mul(a.A, b.A, band), loop_mul(b.Ainv, a.Ainv, band)};
}

// Solutions of one coordinate form at each requested (real) value, integrating outward from 0.
std::vector<FrameSolution> axis_solutions(const CoordinateForm& f, int d, const std::vector<double>& values, int band) {
  std::vector<FrameSolution> out(values.size());
  std::vector<size_t> order(values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int sign : {1, -1}) {
    std::vector<size_t> idx;
    for (size_t i : order)
      if ((sign > 0 && values[i] >= 0.0) || (sign < 0 && values[i] < 0.0)) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return std::abs(values[a]) < std::abs(values[b]); });
    FrameSolution state = identity_solution(d);
    double at = 0.0;
    for (size_t i : idx) {
      if (f.is_constant()) {
        state = identity_solution(d);
        integrate_segment(f, d, state, 0.0, values[i], band);
      } else {
        integrate_segment(f, d, state, at, values[i], band);
        at = values[i];
      }
      out[i] = state;
    }
  }
  return out;
}

}  // namespace

FrameSolution integrate_frame(const PotentialPair& P, Side side, const std::vector<cd>& point, int band) {
  const int d = P.space.group.dim();
  const auto& forms = side == Side::ETA ? P.eta : P.tau;
  if (static_cast<int>(point.size()) != P.n) throw Error(ErrorKind::DomainError, "point dimension mismatch");
  FrameSolution acc = identity_solution(d);
  for (int a = 0; a < P.n; ++a) {
    if (std::abs(point[a]) > P.domain_half_width * std::sqrt(2.0) + 1e-12)
      throw Error(ErrorKind::DomainError, "point outside the analyticity box");
    FrameSolution s = identity_solution(d);
    integrate_segment(forms[a], d, s, 0.0, point[a], band);
    acc = compose(acc, s, band);
  }
  return acc;
}

PairIwasawaResult frame_at(const PotentialPair& P, const NodePoint& p, const BuildOptions& opt) {
  FrameSolution A = integrate_frame(P, Side::ETA, p.eta_point, opt.band);
  FrameSolution B = integrate_frame(P, Side::TAU, p.tau_point, opt.band);
  return pair_iwasawa(A.A, B.A, B.Ainv, opt.band, opt.normalization);
}

size_t ExtendedFrame::valid_count() const { return static_cast<size_t>(std::count(valid.begin(), valid.end(), 1)); }

namespace {

struct NodeInputs {
  // PARA: per coordinate, per axis index cached solutions
  std::vector<std::vector<FrameSolution>> eta_axis, tau_axis;
};

NodeInputs prepare_para(const PotentialPair& P, const GridSpec& g, int band) {
  const int n = g.n(), d = P.space.group.dim();
  NodeInputs in;
  for (int a = 0; a < n; ++a) {
    std::vector<double> xs, ys;
    for (int i = 0; i < g.axes[a].count; ++i) xs.push_back(g.axes[a].value(i));
    for (int i = 0; i < g.axes[n + a].count; ++i) ys.push_back(g.axes[n + a].value(i));
    for (double v : xs)
      if (std::abs(v) > P.domain_half_width + 1e-12) throw Error(ErrorKind::DomainError, "grid leaves the analyticity box");
    for (double v : ys)
      if (std::abs(v) > P.domain_half_width + 1e-12) throw Error(ErrorKind::DomainError, "grid leaves the analyticity box");
    in.eta_axis.push_back(axis_solutions(P.eta[a], d, xs, band));
    in.tau_axis.push_back(axis_solutions(P.tau[a], d, ys, band));
  }
  return in;
}

void factor_node(const PotentialPair& P, const GridSpec& g, const NodeInputs& in, const BuildOptions& opt, size_t i,
                 ExtendedFrame& F) {
  const int d = P.space.group.dim();
  try {
    FrameSolution A = identity_solution(d), B = identity_solution(d);
    if (g.mode == GridMode::PARA) {
      auto mi = g.unflatten(i);
      const int n = g.n();
      for (int a = 0; a < n; ++a) {
        A = compose(A, in.eta_axis[a][mi[a]], opt.band);
        B = compose(B, in.tau_axis[a][mi[n + a]], opt.band);
      }
    } else {
      NodePoint p = node_point(g, i);
      A = integrate_frame(P, Side::ETA, p.eta_point, opt.band);
      B = integrate_frame(P, Side::TAU, p.tau_point, opt.band);
    }
    PairIwasawaResult r = pair_iwasawa(A.A, B.A, B.Ainv, opt.band, opt.normalization);
    F.loops[i] = r.C;
    F.rcond[i] = r.rcond;
    if (opt.keep_factors) {
      F.Bplus[i] = r.Bplus;
      F.Bminus[i] = r.Bminus;
    }
    F.valid[i] = 1;
  } catch (const Error& e) {
    F.valid[i] = 0;
    F.failure[i] = e.what();
  }
}

ExtendedFrame build_impl(const PotentialPair& P, const GridSpec& g, const BuildOptions& opt, bool parallel) {
  if (static_cast<int>(g.axes.size()) != 2 * P.n) throw Error(ErrorKind::DomainError, "grid dimension mismatch");
  const size_t base = g.base_node();
  ExtendedFrame F;
  F.grid = g;
  F.potential_id = P.id;
  F.space = P.space;
  F.band = opt.band;
  const size_t N = g.node_count();
  F.loops.assign(N, TwistedLoop::identity(P.space.group.dim()));
  F.valid.assign(N, 0);
  F.failure.assign(N, "");
  F.rcond.assign(N, 0.0);
  if (opt.keep_factors) {
    F.Bplus.assign(N, TwistedLoop::identity(P.space.group.dim()));
    F.Bminus.assign(N, TwistedLoop::identity(P.space.group.dim()));
  }
  NodeInputs in;
  if (g.mode == GridMode::PARA) in = prepare_para(P, g, opt.band);
  const long long NN = static_cast<long long>(N);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < NN; ++i) factor_node(P, g, in, opt, static_cast<size_t>(i), F);
  } else {
    for (long long i = 0; i < NN; ++i) factor_node(P, g, in, opt, static_cast<size_t>(i), F);
  }
  if (!F.valid[base]) throw Error(ErrorKind::FatalOffBigCell, "base point failed: " + F.failure[base]);
  return F;
}

}  // namespace

ExtendedFrame build_frame_grid(const PotentialPair& P, const GridSpec& grid, const BuildOptions& opt) {
  return build_impl(P, grid, opt, opt.parallel);
}

ExtendedFrame build_frame_grid_serial(const PotentialPair& P, const GridSpec& grid, BuildOptions opt) {
  opt.parallel = false;
  return build_impl(P, grid, opt, false);
}

ExtendedFrame morph_frame(const PotentialPair& P, const GridSpec& grid, const BuildOptions& opt) {
  if (grid.mode != GridMode::MORPHED) throw Error(ErrorKind::DomainError, "morph_frame needs a MORPHED grid");
  double r = check_morphing(P);
  if (!(r < 1e-9)) throw Error(ErrorKind::MorphingViolated, "morphing residual " + std::to_string(r));
  return build_frame_grid(P, grid, opt);
}

std::pair<ExtendedFrame, GaugeField> unitarize(const ExtendedFrame& frame, const Involution& nu) {
  ExtendedFrame out = frame;
  GaugeField gf;
  const size_t N = frame.loops.size();
  const int d = frame.space.group.dim();
  gf.X.assign(N, Mat::Zero(d, d));
  gf.h.assign(N, Mat::Identity(d, d));
  const auto lams = unit_circle_samples(8, 0.3);
  for (size_t i = 0; i < N; ++i) {
    if (!frame.valid[i]) continue;
    const TwistedLoop& C = frame.loops[i];
    Mat C1 = loop_eval(C, 1.0);
    Mat P1 = mat_inverse(C1) * apply_involution(nu, C1);
    for (cd lam : lams) {
      Mat Cl = loop_eval(C, lam);
      Mat Pl = mat_inverse(Cl) * apply_involution(nu, Cl);
      gf.lambda_spread = std::max(gf.lambda_spread, (Pl - P1).norm() / std::max(1.0, P1.norm()));
    }
    Mat X = mat_log_near_id(P1);
    Mat h = mat_exp(0.5 * X);
    gf.X[i] = X;
    gf.h[i] = h;
    gf.sigma_residual = std::max(gf.sigma_residual, (apply_involution_algebra(frame.space.sigma, X) - X).norm());
    gf.anti_residual = std::max(gf.anti_residual, (apply_involution_algebra(nu, X) + X).norm());
    out.loops[i] = C * h;
  }
  if (gf.lambda_spread > 1e-6)
    throw Error(ErrorKind::GaugeInconsistent, "C^{-1} nu(C) varies with lambda by " + std::to_string(gf.lambda_spread));
  size_t base = frame.grid.base_node();
  gf.base_residual = (gf.h[base] - Mat::Identity(d, d)).norm();
  out.gauge_applied = true;
  return {out, gf};
}

std::vector<double> central_weights(int order) {
  switch (order) {
    case 2: return {-0.5, 0.0, 0.5};
    case 4: return {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    case 6: return {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    case 8: return {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  }
  throw Error(ErrorKind::InvalidParams, "unsupported stencil order");
}

std::vector<double> second_derivative_weights(int order) {
  switch (order) {
    case 2: return {1.0, -2.0, 1.0};
    case 4: return {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    case 6: return {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    case 8: return {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  }
  throw Error(ErrorKind::InvalidParams, "unsupported stencil order");
}

namespace {

int stencil_order(const GridSpec& g) {
  int mn = 1 << 30;
  for (const auto& a : g.axes) mn = std::min(mn, a.count);
  int r = std::min(4, (mn - 1) / 2);
  if (r < 1) throw Error(ErrorKind::RegionTooSmall, "grid too small for finite differences");
  return 2 * r;
}

// Interior nodes whose full box stencil of radius r is valid.
std::vector<size_t> interior_nodes(const ExtendedFrame& F, int r) {
  std::vector<size_t> out;
  const auto& g = F.grid;
  for (size_t i = 0; i < g.node_count(); ++i) {
    auto mi = g.unflatten(i);
    bool ok = true;
    for (size_t a = 0; a < mi.size() && ok; ++a) ok = mi[a] >= r && mi[a] < g.axes[a].count - r;
    if (!ok) continue;
    // every node in the (a, b) planes within radius r must be valid
    for (size_t a = 0; a < mi.size() && ok; ++a)
      for (size_t b = a; b < mi.size() && ok; ++b)
        for (int p = -r; p <= r && ok; ++p)
          for (int q = -r; q <= r && ok; ++q) {
            auto mj = mi;
            mj[a] += p;
            mj[b] += (a == b ? 0 : q);
            ok = F.valid[g.flatten(mj)];
          }
    if (ok) out.push_back(i);
  }
  return out;
}

// Weight matrix w(mu): alpha^mu_a = h(A_a) + sum_c w_ac m(A_c).
Eigen::MatrixXcd deformation_weights(const GridSpec& g, cd mu) {
  const int A = static_cast<int>(g.axes.size()), n = g.n();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(A, A);
  const cd I(0, 1);
  if (g.mode == GridMode::PARA) {
    for (int a = 0; a < A; ++a) w(a, a) = a < n ? 1.0 / mu : mu;
  } else {
    for (int c = 0; c < n; ++c) {
      int u = 2 * c, v = 2 * c + 1;
      w(u, u) = 0.5 * (1.0 / mu + mu);
      w(u, v) = 0.5 * (-I / mu + I * mu);
      w(v, u) = 0.5 * (I / mu - I * mu);
      w(v, v) = 0.5 * (1.0 / mu + mu);
    }
  }
  return w;
}

}  // namespace

double check_flatness(const ExtendedFrame& F, const std::vector<cd>& mus) {
  const auto& g = F.grid;
  const int p = stencil_order(g), r = p / 2;
  const auto w1 = central_weights(p), w2 = second_derivative_weights(p);
  const int nA = static_cast<int>(g.axes.size());
  const size_t N = g.node_count();
  std::vector<Mat> Cv(N);
  for (size_t i = 0; i < N; ++i)
    if (F.valid[i]) Cv[i] = loop_eval(F.loops[i], 1.0);
  auto nodes = interior_nodes(F, r);
  if (nodes.empty()) throw Error(ErrorKind::RegionTooSmall, "no interior nodes with a full stencil");
  const Involution& sigma = F.space.sigma;
  auto hpart = [&](const Mat& X) { return Mat(0.5 * (X + apply_involution_algebra(sigma, X))); };
  auto mpart = [&](const Mat& X) { return Mat(0.5 * (X - apply_involution_algebra(sigma, X))); };
  double worst = 0.0;
  for (size_t node : nodes) {
    auto mi = g.unflatten(node);
    auto at = [&](int a, int da, int b, int db) {
      auto mj = mi;
      mj[a] += da;
      mj[b] += db;
      return Cv[g.flatten(mj)];
    };
    const Mat& C = Cv[node];
    Mat Cinv = mat_inverse(C);
    std::vector<Mat> dC(nA);
    for (int a = 0; a < nA; ++a) {
      Mat s = Mat::Zero(C.rows(), C.cols());
      for (int k = -r; k <= r; ++k) s += w1[k + r] * at(a, k, a, 0);
      dC[a] = s / g.axes[a].step();
    }
    // ddC[a][b] = d_a d_b C
    std::vector<std::vector<Mat>> ddC(nA, std::vector<Mat>(nA));
    for (int a = 0; a < nA; ++a)
      for (int b = a; b < nA; ++b) {
        Mat s = Mat::Zero(C.rows(), C.cols());
        if (a == b) {
          for (int k = -r; k <= r; ++k) s += w2[k + r] * at(a, k, a, 0);
          s /= g.axes[a].step() * g.axes[a].step();
        } else {
          for (int k = -r; k <= r; ++k)
            for (int l = -r; l <= r; ++l)
              if (w1[k + r] != 0.0 && w1[l + r] != 0.0) s += w1[k + r] * w1[l + r] * at(a, k, b, l);
          s /= g.axes[a].step() * g.axes[b].step();
        }
        ddC[a][b] = ddC[b][a] = s;
      }
    std::vector<Mat> Aa(nA);
    for (int a = 0; a < nA; ++a) Aa[a] = Cinv * dC[a];
    // dA[b][c] = d_b A_c
    std::vector<std::vector<Mat>> dA(nA, std::vector<Mat>(nA));
    for (int b = 0; b < nA; ++b)
      for (int c = 0; c < nA; ++c) dA[b][c] = -Cinv * dC[b] * Cinv * dC[c] + Cinv * ddC[b][c];
    for (cd mu : mus) {
      auto w = deformation_weights(g, mu);
      std::vector<Mat> al(nA);
      std::vector<std::vector<Mat>> dal(nA, std::vector<Mat>(nA));  // dal[b][a] = d_b alpha_a
      for (int a = 0; a < nA; ++a) {
        al[a] = hpart(Aa[a]);
        for (int c = 0; c < nA; ++c)
          if (w(a, c) != cd(0.0)) al[a] += w(a, c) * mpart(Aa[c]);
        for (int b = 0; b < nA; ++b) {
          dal[b][a] = hpart(dA[b][a]);
          for (int c = 0; c < nA; ++c)
            if (w(a, c) != cd(0.0)) dal[b][a] += w(a, c) * mpart(dA[b][c]);
        }
      }
      for (int a = 0; a < nA; ++a)
        for (int b = a + 1; b < nA; ++b) {
          Mat R = dal[a][b] - dal[b][a] + (al[a] * al[b] - al[b] * al[a]);
          double scale = dal[a][b].norm() + dal[b][a].norm() + al[a].norm() * al[b].norm() + 1e-300;
          worst = std::max(worst, R.norm() / std::max(scale, 1e-3));
        }
    }
  }
  return worst;
}

double maurer_cartan_band(const ExtendedFrame& F, int max_nodes) {
  const auto& g = F.grid;
  const int p = stencil_order(g), r = p / 2;
  const auto w1 = central_weights(p);
  const int nA = static_cast<int>(g.axes.size()), n = g.n();
  auto nodes = interior_nodes(F, r);
  if (nodes.empty()) throw Error(ErrorKind::RegionTooSmall, "no interior nodes with a full stencil");
  std::vector<size_t> pick;
  size_t stride = std::max<size_t>(1, nodes.size() / static_cast<size_t>(max_nodes));
  for (size_t j = 0; j < nodes.size(); j += stride) pick.push_back(nodes[j]);
  const Involution& sigma = F.space.sigma;
  const cd I(0, 1);
  double worst = 0.0;
  for (size_t node : pick) {
    auto mi = g.unflatten(node);
    TwistedLoop Cinv = loop_inverse(F.loops[node], F.band);
    std::vector<TwistedLoop> beta(nA);
    for (int a = 0; a < nA; ++a) {
      TwistedLoop s = TwistedLoop::zero(F.loops[node].dim, 0, 0);
      for (int k = -r; k <= r; ++k) {
        if (w1[k + r] == 0.0) continue;
        auto mj = mi;
        mj[a] += k;
        s = s + cd(w1[k + r] / g.axes[a].step()) * F.loops[g.flatten(mj)];
      }
      beta[a] = loop_mul(Cinv, s, F.band);
    }
    // directions with expected bands: (loop, allowed m power)
    std::vector<std::pair<TwistedLoop, int>> dirs;
    for (int c = 0; c < n; ++c) {
      if (g.mode == GridMode::PARA) {
        dirs.push_back({beta[c], -1});
        dirs.push_back({beta[n + c], 1});
      } else {
        const auto& bu = beta[2 * c];
        const auto& bv = beta[2 * c + 1];
        dirs.push_back({0.5 * (bu - I * bv), -1});
        dirs.push_back({0.5 * (bu + I * bv), 1});
      }
    }
    // directions along which the frame is constant carry only rounding noise; scale by the node's total mass
    double node_mass = 0.0;
    for (const auto& dl : dirs) node_mass = std::max(node_mass, dl.first.norm_l1());
    for (const auto& [L, mpow] : dirs) {
      double total = 0.0, wrong = 0.0;
      for (int k = L.lo; k <= L.hi; ++k) {
        Mat X = L.coef(k);
        double nx = X.norm();
        total += nx;
        if (k == 0) {
          wrong += Mat(0.5 * (X - apply_involution_algebra(sigma, X))).norm();
        } else if (k == mpow) {
          wrong += Mat(0.5 * (X + apply_involution_algebra(sigma, X))).norm();
        } else {
          wrong += nx;
        }
      }
      if (node_mass > 0.0) worst = std::max(worst, wrong / std::max(total, node_mass));
    }
  }
  return worst;
}

}  // namespace loopmorph
