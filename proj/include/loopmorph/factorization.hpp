#pragma once

#include "loopmorph/loop.hpp"

namespace loopmorph {

enum class BirkhoffOrder {
  MINUS_STAR_PLUS,  // L = Lminus * Lplus, Lminus(inf) = id
  PLUS_STAR_MINUS,  // L = Lplus * Lminus, Lplus(0) = id
};

struct BirkhoffResult {
  TwistedLoop minus;
  TwistedLoop plus;
  TwistedLoop starred_inverse;  // inverse of the normalized factor
  double normalization_residual = 0.0;
  double reconstruction_residual = 0.0;
  double rcond = 1.0;
};

// Raises NotInBigCell when the Toeplitz system is numerically singular.
BirkhoffResult birkhoff(const TwistedLoop& L, BirkhoffOrder order, int band = kDefaultBand);

// Scale-normalized reciprocal condition of the Toeplitz operator; 1 for the identity, 0 off the big cell.
double big_cell_distance(const TwistedLoop& L, int band = kDefaultBand);

enum class IwasawaNormalization {
  PLUS_AT_ZERO,  // Bplus(0) = id
  BALANCED,      // Bplus(0) * Bminus(inf) = id
};

struct PairIwasawaResult {
  TwistedLoop C;
  TwistedLoop Bplus;
  TwistedLoop Bminus;
  double cross_residual = 0.0;
  double rcond = 1.0;
};

// (A, B) = (C, C) (Bplus, Bminus). Binv is B^{-1}; when omitted it is computed.
PairIwasawaResult pair_iwasawa(const TwistedLoop& A, const TwistedLoop& B, int band = kDefaultBand,
                               IwasawaNormalization norm = IwasawaNormalization::BALANCED);
PairIwasawaResult pair_iwasawa(const TwistedLoop& A, const TwistedLoop& B, const TwistedLoop& Binv,
                               int band = kDefaultBand,
                               IwasawaNormalization norm = IwasawaNormalization::BALANCED);

}  // namespace loopmorph
