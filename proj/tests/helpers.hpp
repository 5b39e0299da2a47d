#pragma once

#include <random>

#include "loopmorph/loop.hpp"

namespace testutil {

using loopmorph::cd;
using loopmorph::Mat;
using loopmorph::TwistedLoop;

inline Mat m2(cd a, cd b, cd c, cd d) {
  Mat M(2, 2);
  M << a, b, c, d;
  return M;
}

inline double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

// Real, twisted sl(2) algebra loop: even powers diagonal, odd powers off-diagonal.
inline TwistedLoop random_twisted_algebra(std::mt19937_64& rng, int band, double scale, double decay) {
  std::normal_distribution<double> g(0.0, 1.0);
  TwistedLoop X = TwistedLoop::zero(2, -band, band);
  for (int k = -band; k <= band; ++k) {
    const double a = scale * std::pow(decay, std::abs(k));
    Mat A = Mat::Zero(2, 2);
    if (k % 2 == 0) {
      A(0, 0) = a * g(rng);
      A(1, 1) = -A(0, 0);
    } else {
      A(0, 1) = a * g(rng);
      A(1, 0) = a * g(rng);
    }
    X.set(k, A);
  }
  return X;
}

}  // namespace testutil
