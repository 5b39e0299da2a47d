#pragma once

#include <iosfwd>
#include <vector>

#include "loopmorph/algebra.hpp"

namespace loopmorph {

constexpr int kDefaultBand = 32;
// Relative size below which loop coefficients are treated as zero.
constexpr double kNegligible = 1e-24;

// Banded Laurent series sum_{k=lo..hi} A_k lambda^k with d x d coefficients.
struct TwistedLoop {
  int dim = 2;
  int lo = 0;
  int hi = 0;
  std::vector<cd> c;  // coefficient k at offset (k-lo)*dim*dim, column major
  double tail_norm = 0.0;

  static TwistedLoop zero(int dim, int lo, int hi);
  static TwistedLoop constant(const Mat& M);
  static TwistedLoop identity(int dim) { return constant(Mat::Identity(dim, dim)); }
  static TwistedLoop monomial(const Mat& M, int k);

  int count() const { return hi - lo + 1; }
  bool has(int k) const { return k >= lo && k <= hi; }
  cd* ptr(int k) { return c.data() + static_cast<size_t>(k - lo) * dim * dim; }
  const cd* ptr(int k) const { return c.data() + static_cast<size_t>(k - lo) * dim * dim; }
  Eigen::Map<Mat> coef(int k) { return Eigen::Map<Mat>(ptr(k), dim, dim); }
  Eigen::Map<const Mat> coef(int k) const { return Eigen::Map<const Mat>(ptr(k), dim, dim); }
  Mat coef_or_zero(int k) const;
  void set(int k, const Mat& M);

  double norm_l1() const;
  double coef_norm(int k) const;
  // Widen the band so it covers [l, h]; new coefficients are zero.
  TwistedLoop widened(int l, int h) const;
  // Drop coefficients outside [-N, N], accounting their mass in tail_norm.
  TwistedLoop clipped(int N) const;
  // Shrink the band to the support above tol (never grows tail beyond tol mass).
  TwistedLoop trimmed(double tol = 0.0) const;
};

TwistedLoop operator+(const TwistedLoop& a, const TwistedLoop& b);
TwistedLoop operator-(const TwistedLoop& a, const TwistedLoop& b);
TwistedLoop operator*(cd s, const TwistedLoop& a);
// Left / right multiplication by a constant matrix.
TwistedLoop operator*(const Mat& M, const TwistedLoop& a);
TwistedLoop operator*(const TwistedLoop& a, const Mat& M);

// max_k |A_k - B_k| (Frobenius) over the union of bands.
double coef_distance(const TwistedLoop& a, const TwistedLoop& b);

Mat loop_eval(const TwistedLoop& L, cd mu);
TwistedLoop loop_mul(const TwistedLoop& a, const TwistedLoop& b, int band = kDefaultBand);
TwistedLoop loop_inverse(const TwistedLoop& L, int band = kDefaultBand);
TwistedLoop loop_exp(const TwistedLoop& X, int band = kDefaultBand);
// lambda d/dlambda: coefficientwise k * A_k.
TwistedLoop loop_lambda_derivative(const TwistedLoop& L);
// lambda -> 1/lambda
TwistedLoop loop_reflect(const TwistedLoop& L);
// lambda -> b*lambda (coefficient k scaled by b^k)
TwistedLoop loop_rescale(const TwistedLoop& L, double b);

std::vector<cd> unit_circle_samples(int n, double phase = 0.0);

double check_twist(const TwistedLoop& L, const Involution& sigma, int samples = 16);
// Parity defect sigma(A_k) - (-1)^k A_k, summed over coefficients.
double twist_coefficient_defect(const TwistedLoop& L, const Involution& sigma);

enum class RealityKind { FIRST_KIND, SECOND_KIND };
double check_reality(const TwistedLoop& L, const Involution& nu, RealityKind kind, int samples = 16);

// Involution acting on a loop: nu_S(A)_lambda = nu(A_{conj lambda}) (first kind),
// nu_C(A)_lambda = nu(A_{1/conj lambda}) (second kind). Algebra level version below.
TwistedLoop loop_involution_algebra(const TwistedLoop& X, const Involution& nu, RealityKind kind);

void write_loop(std::ostream& os, const TwistedLoop& L);
TwistedLoop read_loop(std::istream& is);

}  // namespace loopmorph
