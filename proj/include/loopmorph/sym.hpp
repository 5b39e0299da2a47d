#pragma once

#include <array>
#include <string>
#include <vector>

#include "loopmorph/frame.hpp"

namespace loopmorph {

enum class SymVariant { R3_CMC, R31_TIMELIKE, R31_SPACELIKE, R31_TIMELIKE_HALF, K_SURFACE };
enum class Signature { EUCLIDEAN, LORENTZ_1 };

using Vec3 = std::array<double, 3>;

const char* to_string(SymVariant v);
SymVariant sym_variant_from_string(const std::string& s);  // InvalidParams on unknown names
const char* to_string(Signature s);

Signature variant_signature(SymVariant v);
// Diagonal of the ambient inner product used for the variant.
Vec3 variant_metric(SymVariant v);
// Grid mode whose frames the variant consumes.
GridMode variant_mode(SymVariant v);
// Real form the frame must lie in (checked on S^1 for MORPHED, on R+ for PARA).
Involution variant_reality(SymVariant v);

struct SurfaceSample {
  GridSpec grid;
  std::string potential_id;
  SymVariant variant = SymVariant::R3_CMC;
  Signature signature = Signature::EUCLIDEAN;
  cd eval_parameter = 1.0;
  std::vector<Vec3> points;  // grid indexed; meaningful where valid
  std::vector<uint8_t> valid;

  size_t valid_count() const;
};

// dC/dlambda at `at`, from the band (no finite differences).
Mat lambda_derivative_at(const TwistedLoop& C, cd at);

// Algebra-valued Sym matrix for one loop.
Mat sym_matrix(const TwistedLoop& C, SymVariant v, cd at = 1.0);

// Coefficients (a, b, d) of M = a s1 + b E + d s3, mapped to R^3 per variant.
// NotInExpectedForm when the result is not real or M is not traceless.
Vec3 algebra_to_vec(SymVariant v, const Mat& M);

// WrongRealityForVariant when the frame is not in the variant's real form.
SurfaceSample sym_formula(const ExtendedFrame& frame, SymVariant v, cd at = 1.0);

}  // namespace loopmorph
