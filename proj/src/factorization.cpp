#include "loopmorph/factorization.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace loopmorph {

namespace {

// Block Toeplitz matrix T with block (p, q) = L_{p-q}, p, q = 0..N-1.
// Unknown row blocks m_{-1-p} satisfy sum_p m_{-1-p} T(p, q) = -L_{-1-q}.
Mat toeplitz_matrix(const TwistedLoop& L, int N) {
  const int d = L.dim;
  Mat T = Mat::Zero(N * d, N * d);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      int k = p - q;
      if (L.has(k)) T.block(p * d, q * d, d, d) = L.coef(k);
    }
  return T;
}

// Solves for the row blocks of Lminus*^{-1} with N unknown blocks.
TwistedLoop solve_minus(const TwistedLoop& L, int N, double& rcond) {
  const int d = L.dim;
  Mat T = toeplitz_matrix(L, N);
  Mat rhs = Mat::Zero(d, N * d);
  for (int q = 0; q < N; ++q) rhs.block(0, q * d, d, d) = -L.coef_or_zero(-1 - q);
  // m T = rhs  <=>  T^T m^T = rhs^T
  Mat Tt = T.transpose();
  Eigen::PartialPivLU<Mat> lu(Tt);
  const auto diagU = lu.matrixLU().diagonal().cwiseAbs();
  double pivot_ratio = diagU.minCoeff() / std::max(diagU.maxCoeff(), 1e-300);
  rcond = std::min(lu.rcond(), pivot_ratio);
  if (!std::isfinite(rcond) || !(rcond > 1e-12))
    throw Error(ErrorKind::NotInBigCell, "Toeplitz system condition estimate " + std::to_string(1.0 / rcond));
  Mat mt = lu.solve(rhs.transpose());
  // one step of iterative refinement
  Mat r = rhs.transpose() - Tt * mt;
  mt += lu.solve(r);
  if (!mt.allFinite()) throw Error(ErrorKind::NotInBigCell, "non-finite Toeplitz solution");
  TwistedLoop M = TwistedLoop::zero(d, -N, 0);
  M.coef(0) = Mat::Identity(d, d);
  for (int p = 0; p < N; ++p) M.coef(-1 - p) = mt.block(p * d, 0, d, d).transpose();
  return M;
}

BirkhoffResult minus_star_plus(const TwistedLoop& L, int band) {
  const int d = L.dim;
  BirkhoffResult res;
  res.rcond = 1.0;
  TwistedLoop M = TwistedLoop::identity(d);
  if (L.lo < 0) {
    // start from the visible negative extent and grow until the solved factor has decayed
    int N = std::min(band, std::max(8, -L.lo + 4));
    for (;;) {
      M = solve_minus(L, N, res.rcond);
      double total = M.norm_l1();
      double edge = M.coef_norm(-N) + M.coef_norm(-N + 1);
      if (N >= band || edge <= 1e-15 * total) break;
      N = std::min(band, 2 * N);
    }
  }
  TwistedLoop ML = loop_mul(M, L, 2 * band + 2);
  TwistedLoop plus = TwistedLoop::zero(d, 0, std::max(0, std::min(ML.hi, band)));
  for (int k = 0; k <= plus.hi; ++k) plus.coef(k) = ML.coef_or_zero(k);
  double dropped = 0.0;
  for (int k = ML.lo; k <= ML.hi; ++k)
    if (k > band) dropped += ML.coef_norm(k);
  plus.tail_norm = L.tail_norm + dropped;
  res.plus = plus.trimmed(0.0);
  res.starred_inverse = M.trimmed(0.0);
  res.minus = loop_inverse(res.starred_inverse, band);
  res.normalization_residual = (res.minus.coef_or_zero(0) - Mat::Identity(d, d)).norm();
  TwistedLoop back = loop_mul(res.minus, res.plus, band);
  res.reconstruction_residual = coef_distance(back, L.clipped(band));
  return res;
}

}  // namespace

BirkhoffResult birkhoff(const TwistedLoop& L, BirkhoffOrder order, int band) {
  if (order == BirkhoffOrder::MINUS_STAR_PLUS) return minus_star_plus(L, band);
  // L(1/lambda) = P Q with P normalized at infinity; reflect back.
  BirkhoffResult r = minus_star_plus(loop_reflect(L), band);
  BirkhoffResult out;
  out.plus = loop_reflect(r.minus);
  out.minus = loop_reflect(r.plus);
  out.starred_inverse = loop_reflect(r.starred_inverse);
  out.normalization_residual = r.normalization_residual;
  out.reconstruction_residual = r.reconstruction_residual;
  out.rcond = r.rcond;
  return out;
}

double big_cell_distance(const TwistedLoop& L, int band) {
  const int N = std::max(1, band);
  Mat T = toeplitz_matrix(L, N);
  Eigen::JacobiSVD<Mat> svd(T);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

PairIwasawaResult pair_iwasawa(const TwistedLoop& A, const TwistedLoop& B, int band, IwasawaNormalization norm) {
  return pair_iwasawa(A, B, loop_inverse(B, band), band, norm);
}

PairIwasawaResult pair_iwasawa(const TwistedLoop& A, const TwistedLoop& B, const TwistedLoop& Binv, int band,
                               IwasawaNormalization norm) {
  // B^{-1} A = (Bminus)^{-1} Bplus; factor as Lminus* Lplus and move the constant term of Lplus across.
  TwistedLoop L = loop_mul(Binv, A, band);
  BirkhoffResult f = minus_star_plus(L, band);
  Mat c = f.plus.coef_or_zero(0);
  // right H-factor: identity for PLUS_AT_ZERO, c^{-1/2} for BALANCED
  Mat h = Mat::Identity(c.rows(), c.cols());
  if (norm == IwasawaNormalization::BALANCED) h = mat_inverse(Mat(c.sqrt()));
  Mat hinv = mat_inverse(h);
  Mat cinv = mat_inverse(c);
  PairIwasawaResult out;
  out.rcond = f.rcond;
  out.Bplus = (hinv * cinv) * f.plus;
  out.Bminus = (hinv * cinv) * f.starred_inverse;
  out.C = loop_mul(B, f.minus * Mat(c * h), band);
  TwistedLoop C2 = loop_mul(A, loop_inverse(f.plus, band) * Mat(c * h), band);
  double cr = 0.0;
  for (cd lam : unit_circle_samples(16, 0.05)) cr = std::max(cr, (loop_eval(out.C, lam) - loop_eval(C2, lam)).norm());
  out.cross_residual = cr;
  return out;
}

}  // namespace loopmorph
