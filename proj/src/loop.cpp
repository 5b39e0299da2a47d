#include "loopmorph/loop.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

namespace loopmorph {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

TwistedLoop TwistedLoop::zero(int dim, int lo, int hi) {
  TwistedLoop L;
  L.dim = dim;
  L.lo = lo;
  L.hi = hi;
  L.c.assign(static_cast<size_t>(hi - lo + 1) * dim * dim, cd(0.0));
  return L;
}

TwistedLoop TwistedLoop::constant(const Mat& M) { return monomial(M, 0); }

TwistedLoop TwistedLoop::monomial(const Mat& M, int k) {
  TwistedLoop L = zero(static_cast<int>(M.rows()), k, k);
  L.coef(k) = M;
  return L;
}

Mat TwistedLoop::coef_or_zero(int k) const {
  if (!has(k)) return Mat::Zero(dim, dim);
  return coef(k);
}

void TwistedLoop::set(int k, const Mat& M) {
  if (!has(k)) *this = widened(std::min(lo, k), std::max(hi, k));
  coef(k) = M;
}

double TwistedLoop::coef_norm(int k) const {
  if (!has(k)) return 0.0;
  const cd* p = ptr(k);
  double s = 0.0;
  for (int i = 0; i < dim * dim; ++i) s += std::norm(p[i]);
  return std::sqrt(s);
}

double TwistedLoop::norm_l1() const {
  double s = 0.0;
  for (int k = lo; k <= hi; ++k) s += coef_norm(k);
  return s;
}

TwistedLoop TwistedLoop::widened(int l, int h) const {
  l = std::min(l, lo);
  h = std::max(h, hi);
  TwistedLoop W = zero(dim, l, h);
  std::copy(c.begin(), c.end(), W.ptr(lo));
  W.tail_norm = tail_norm;
  return W;
}

TwistedLoop TwistedLoop::clipped(int N) const {
  int l = std::max(lo, -N), h = std::min(hi, N);
  if (l == lo && h == hi) return *this;
  double dropped = 0.0;
  for (int k = lo; k <= hi; ++k)
    if (k < l || k > h) dropped += coef_norm(k);
  if (l > h) {
    TwistedLoop Z = zero(dim, 0, 0);
    Z.tail_norm = tail_norm + dropped;
    return Z;
  }
  TwistedLoop W = zero(dim, l, h);
  std::copy(ptr(l), ptr(h) + dim * dim, W.ptr(l));
  W.tail_norm = tail_norm + dropped;
  return W;
}

TwistedLoop TwistedLoop::trimmed(double tol) const {
  int l = lo, h = hi;
  while (l < h && l < 0 && coef_norm(l) <= tol) ++l;
  while (h > l && h > 0 && coef_norm(h) <= tol) --h;
  double dropped = 0.0;
  for (int k = lo; k < l; ++k) dropped += coef_norm(k);
  for (int k = h + 1; k <= hi; ++k) dropped += coef_norm(k);
  TwistedLoop W = zero(dim, l, h);
  std::copy(ptr(l), ptr(h) + dim * dim, W.ptr(l));
  W.tail_norm = tail_norm + dropped;
  return W;
}

TwistedLoop operator+(const TwistedLoop& a, const TwistedLoop& b) {
  TwistedLoop r = a.widened(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  for (int k = b.lo; k <= b.hi; ++k) {
    cd* p = r.ptr(k);
    const cd* q = b.ptr(k);
    for (int i = 0; i < a.dim * a.dim; ++i) p[i] += q[i];
  }
  r.tail_norm = a.tail_norm + b.tail_norm;
  return r;
}

TwistedLoop operator*(cd s, const TwistedLoop& a) {
  TwistedLoop r = a;
  for (auto& v : r.c) v *= s;
  r.tail_norm *= std::abs(s);
  return r;
}

TwistedLoop operator-(const TwistedLoop& a, const TwistedLoop& b) { return a + cd(-1.0) * b; }

TwistedLoop operator*(const Mat& M, const TwistedLoop& a) {
  TwistedLoop r = a;
  for (int k = a.lo; k <= a.hi; ++k) r.coef(k) = M * a.coef(k);
  r.tail_norm *= M.norm();
  return r;
}

TwistedLoop operator*(const TwistedLoop& a, const Mat& M) {
  TwistedLoop r = a;
  for (int k = a.lo; k <= a.hi; ++k) r.coef(k) = a.coef(k) * M;
  r.tail_norm *= M.norm();
  return r;
}

double coef_distance(const TwistedLoop& a, const TwistedLoop& b) {
  double m = 0.0;
  for (int k = std::min(a.lo, b.lo); k <= std::max(a.hi, b.hi); ++k)
    m = std::max(m, (a.coef_or_zero(k) - b.coef_or_zero(k)).norm());
  return m;
}

Mat loop_eval(const TwistedLoop& L, cd mu) {
  if (mu == cd(0.0)) {
    for (int k = L.lo; k < 0; ++k)
      if (L.coef_norm(k) > 0.0) throw Error(ErrorKind::EvalAtZero, "negative powers present");
    return L.coef_or_zero(0);
  }
  Mat S = Mat::Zero(L.dim, L.dim);
  // Horner in mu from the top, then divide by mu^{-lo}.
  for (int k = L.hi; k >= L.lo; --k) S = S * mu + Mat(L.coef(k));
  return S * std::pow(mu, L.lo);
}

namespace {

inline void mat_fma(const cd* A, const cd* B, cd* C, int d) {
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) {
      const cd b = B[l + j * d];
      if (b == cd(0.0)) continue;
      const cd* a = A + l * d;
      cd* cc = C + j * d;
      for (int i = 0; i < d; ++i) cc[i] += a[i] * b;
    }
}

}  // namespace

TwistedLoop loop_mul(const TwistedLoop& a, const TwistedLoop& b, int band) {
  if (a.dim != b.dim) throw Error(ErrorKind::InvalidParams, "loop_mul dimension mismatch");
  const int d = a.dim;
  int l = std::max(a.lo + b.lo, -band), h = std::min(a.hi + b.hi, band);
  if (l > h) l = h = 0;
  TwistedLoop r = TwistedLoop::zero(d, l, h);
  std::vector<double> na(a.count()), nb(b.count());
  for (int i = a.lo; i <= a.hi; ++i) na[i - a.lo] = a.coef_norm(i);
  for (int j = b.lo; j <= b.hi; ++j) nb[j - b.lo] = b.coef_norm(j);
  double A1 = 0.0, B1 = 0.0;
  for (double v : na) A1 += v;
  for (double v : nb) B1 += v;
  // products far below double precision are skipped and booked in the tail
  const double floor = kNegligible * A1 * B1;
  double dropped = 0.0;
  for (int i = a.lo; i <= a.hi; ++i) {
    if (na[i - a.lo] == 0.0) continue;
    for (int j = b.lo; j <= b.hi; ++j) {
      const double w = na[i - a.lo] * nb[j - b.lo];
      if (w == 0.0) continue;
      int k = i + j;
      if (k < l || k > h || w < floor) {
        dropped += w;
        continue;
      }
      mat_fma(a.ptr(i), b.ptr(j), r.ptr(k), d);
    }
  }
  r.tail_norm = dropped + a.tail_norm * B1 + b.tail_norm * A1 + a.tail_norm * b.tail_norm;
  return r.trimmed(floor);
}

namespace {

// Inverse of a loop supported in k >= 0 with invertible constant term.
TwistedLoop inverse_plus(const TwistedLoop& L, int band) {
  const int d = L.dim;
  Eigen::PartialPivLU<Mat> lu(L.coef_or_zero(0));
  if (!(lu.rcond() > 1e-14)) throw Error(ErrorKind::LoopNotInvertible, "constant term singular");
  Mat c0inv = lu.inverse();
  int h = band;
  TwistedLoop X = TwistedLoop::zero(d, 0, h);
  X.coef(0) = c0inv;
  for (int k = 1; k <= h; ++k) {
    Mat s = Mat::Zero(d, d);
    for (int j = std::max(1, L.lo); j <= std::min(k, L.hi); ++j) s += L.coef(j) * X.coef(k - j);
    X.coef(k) = -c0inv * s;
  }
  X.tail_norm = L.tail_norm * X.norm_l1() * X.norm_l1();
  return X.trimmed(kNegligible * X.norm_l1());
}

TwistedLoop inverse_by_samples(const TwistedLoop& L, int band) {
  const int d = L.dim;
  const int M = std::max(256, 8 * band);
  auto pts = unit_circle_samples(M);
  std::vector<Mat> inv(M);
  for (int j = 0; j < M; ++j) {
    Mat v = loop_eval(L, pts[j]);
    Eigen::PartialPivLU<Mat> lu(v);
    if (!(lu.rcond() > 1e-13)) throw Error(ErrorKind::LoopNotInvertible, "singular on the unit circle");
    inv[j] = lu.inverse();
  }
  TwistedLoop X = TwistedLoop::zero(d, -band, band);
  for (int k = -band; k <= band; ++k) {
    Mat s = Mat::Zero(d, d);
    for (int j = 0; j < M; ++j) s += inv[j] * std::pow(pts[j], -k);
    X.coef(k) = s / static_cast<double>(M);
  }
  return X;
}

}  // namespace

TwistedLoop loop_inverse(const TwistedLoop& L, int band) {
  const int d = L.dim;
  TwistedLoop X;
  if (L.lo >= 0) {
    X = inverse_plus(L, band);
  } else if (L.hi <= 0) {
    X = loop_reflect(inverse_plus(loop_reflect(L), band));
  } else {
    X = inverse_by_samples(L, band);
    // one Newton polish X <- X + X (I - L X)
    TwistedLoop I = TwistedLoop::identity(d);
    TwistedLoop R = I - loop_mul(L, X, band);
    TwistedLoop Xn = X + loop_mul(X, R, band);
    TwistedLoop Rn = I - loop_mul(L, Xn, band);
    if (Rn.norm_l1() < R.norm_l1()) X = Xn;
  }
  TwistedLoop R = loop_mul(L, X, 2 * band + 2) - TwistedLoop::identity(d);
  double res = 0.0;
  for (int k = -band; k <= band; ++k) res = std::max(res, R.coef_norm(k));
  if (!(res < 1e-6 * std::max(1.0, L.norm_l1() * X.norm_l1())))
    throw Error(ErrorKind::LoopNotInvertible, "inverse residual " + std::to_string(res));
  X.tail_norm += res;
  return X;
}

TwistedLoop loop_exp(const TwistedLoop& X, int band) {
  const int d = X.dim;
  // scaling and squaring keeps the Taylor terms small
  double nrm = X.norm_l1();
  int s = 0;
  while (nrm > 0.5) nrm *= 0.5, ++s;
  TwistedLoop Y = std::ldexp(1.0, -s) * X;
  TwistedLoop term = TwistedLoop::identity(d);
  TwistedLoop sum = term;
  for (int n = 1; n < 60; ++n) {
    term = (1.0 / n) * loop_mul(term, Y, band);
    sum = sum + term;
    if (term.norm_l1() < 1e-18 * sum.norm_l1()) break;
  }
  for (int i = 0; i < s; ++i) sum = loop_mul(sum, sum, band);
  return sum;
}

TwistedLoop loop_lambda_derivative(const TwistedLoop& L) {
  TwistedLoop D = L;
  for (int k = L.lo; k <= L.hi; ++k) D.coef(k) *= static_cast<double>(k);
  D.tail_norm = L.tail_norm * std::max(std::abs(L.lo), std::abs(L.hi) + 1);
  return D;
}

TwistedLoop loop_reflect(const TwistedLoop& L) {
  TwistedLoop R = TwistedLoop::zero(L.dim, -L.hi, -L.lo);
  for (int k = L.lo; k <= L.hi; ++k) R.coef(-k) = L.coef(k);
  R.tail_norm = L.tail_norm;
  return R;
}

TwistedLoop loop_rescale(const TwistedLoop& L, double b) {
  TwistedLoop R = L;
  for (int k = L.lo; k <= L.hi; ++k) R.coef(k) *= std::pow(b, k);
  return R;
}

std::vector<cd> unit_circle_samples(int n, double phase) {
  std::vector<cd> v(n);
  for (int j = 0; j < n; ++j) v[j] = std::polar(1.0, phase + 2.0 * std::numbers::pi * j / n);
  return v;
}

double check_twist(const TwistedLoop& L, const Involution& sigma, int samples) {
  double r = 0.0;
  for (cd lam : unit_circle_samples(samples, 0.1)) {
    Mat a = apply_involution_algebra(sigma, loop_eval(L, lam));
    r = std::max(r, (a - loop_eval(L, -lam)).norm());
  }
  return r;
}

double twist_coefficient_defect(const TwistedLoop& L, const Involution& sigma) {
  double r = 0.0;
  for (int k = L.lo; k <= L.hi; ++k) {
    Mat A = L.coef(k);
    Mat s = apply_involution_algebra(sigma, A);
    r += (k % 2 == 0) ? Mat(s - A).norm() : Mat(s + A).norm();
  }
  return r;
}

double check_reality(const TwistedLoop& L, const Involution& nu, RealityKind kind, int samples) {
  double r = 0.0;
  for (cd lam : unit_circle_samples(samples, 0.1)) {
    cd arg = kind == RealityKind::FIRST_KIND ? std::conj(lam) : 1.0 / std::conj(lam);
    Mat v = apply_involution(nu, loop_eval(L, arg));
    r = std::max(r, (v - loop_eval(L, lam)).norm());
  }
  return r;
}

TwistedLoop loop_involution_algebra(const TwistedLoop& X, const Involution& nu, RealityKind kind) {
  // nu is antilinear: nu(sum A_k conj(mu)^k) = sum nu(A_k) mu^k (first kind);
  // for the second kind mu -> 1/conj(mu) reindexes k -> -k.
  TwistedLoop R = kind == RealityKind::FIRST_KIND ? X : loop_reflect(X);
  for (int k = R.lo; k <= R.hi; ++k) R.coef(k) = apply_involution_algebra(nu, R.coef(k));
  return R;
}

void write_loop(std::ostream& os, const TwistedLoop& L) {
  int32_t hdr[3] = {L.dim, L.lo, L.hi};
  os.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
  os.write(reinterpret_cast<const char*>(&L.tail_norm), sizeof(double));
  os.write(reinterpret_cast<const char*>(L.c.data()), static_cast<std::streamsize>(L.c.size() * sizeof(cd)));
}

TwistedLoop read_loop(std::istream& is) {
  int32_t hdr[3];
  if (!is.read(reinterpret_cast<char*>(hdr), sizeof(hdr))) throw Error(ErrorKind::IoError, "truncated loop header");
  if (hdr[0] < 1 || hdr[0] > 8 || hdr[1] > hdr[2] || hdr[2] - hdr[1] > 4096)
    throw Error(ErrorKind::IoError, "corrupt loop header");
  TwistedLoop L = TwistedLoop::zero(hdr[0], hdr[1], hdr[2]);
  is.read(reinterpret_cast<char*>(&L.tail_norm), sizeof(double));
  if (!is.read(reinterpret_cast<char*>(L.c.data()), static_cast<std::streamsize>(L.c.size() * sizeof(cd))))
    throw Error(ErrorKind::IoError, "truncated loop body");
  return L;
}

}  // namespace loopmorph
