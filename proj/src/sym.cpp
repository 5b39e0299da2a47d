#include "loopmorph/sym.hpp"

#include <algorithm>
#include <cmath>

namespace loopmorph {

namespace {
const cd I(0.0, 1.0);

Mat d2(cd a, cd b) {
  Mat M = Mat::Zero(2, 2);
  M(0, 0) = a;
  M(1, 1) = b;
  return M;
}

constexpr SymVariant kAllVariants[] = {SymVariant::R3_CMC, SymVariant::R31_TIMELIKE, SymVariant::R31_SPACELIKE,
                                       SymVariant::R31_TIMELIKE_HALF, SymVariant::K_SURFACE};
}  // namespace

const char* to_string(SymVariant v) {
  switch (v) {
    case SymVariant::R3_CMC: return "R3_CMC";
    case SymVariant::R31_TIMELIKE: return "R31_TIMELIKE";
    case SymVariant::R31_SPACELIKE: return "R31_SPACELIKE";
    case SymVariant::R31_TIMELIKE_HALF: return "R31_TIMELIKE_HALF";
    case SymVariant::K_SURFACE: return "K_SURFACE";
  }
  return "?";
}

SymVariant sym_variant_from_string(const std::string& s) {
  for (SymVariant v : kAllVariants)
    if (s == to_string(v)) return v;
  throw Error(ErrorKind::InvalidParams, "unknown sym variant '" + s + "'");
}

const char* to_string(Signature s) { return s == Signature::EUCLIDEAN ? "EUCLIDEAN" : "LORENTZ_1"; }

Signature variant_signature(SymVariant v) {
  return v == SymVariant::R3_CMC || v == SymVariant::K_SURFACE ? Signature::EUCLIDEAN : Signature::LORENTZ_1;
}

Vec3 variant_metric(SymVariant v) {
  switch (v) {
    case SymVariant::R31_TIMELIKE:
    case SymVariant::R31_TIMELIKE_HALF: return {-1.0, 1.0, 1.0};
    case SymVariant::R31_SPACELIKE: return {1.0, 1.0, -1.0};
    default: return {1.0, 1.0, 1.0};
  }
}

GridMode variant_mode(SymVariant v) {
  return v == SymVariant::R3_CMC || v == SymVariant::R31_SPACELIKE ? GridMode::MORPHED : GridMode::PARA;
}

Involution variant_reality(SymVariant v) {
  const Involution flip = Involution::conjugate_by(diag_signs({1.0, -1.0}));
  switch (v) {
    case SymVariant::R3_CMC:
    case SymVariant::K_SURFACE: return Involution::inverse_conj_transpose();
    case SymVariant::R31_TIMELIKE: return Involution::entrywise_conj();
    case SymVariant::R31_SPACELIKE: return Involution::compose(flip, Involution::inverse_conj_transpose());
    case SymVariant::R31_TIMELIKE_HALF: return Involution::compose(flip, Involution::entrywise_conj());
  }
  return Involution::entrywise_conj();
}

size_t SurfaceSample::valid_count() const {
  return static_cast<size_t>(std::count(valid.begin(), valid.end(), uint8_t{1}));
}

Mat lambda_derivative_at(const TwistedLoop& C, cd at) {
  if (std::abs(at) == 0.0) throw Error(ErrorKind::EvalAtZero, "lambda derivative at 0");
  return loop_eval(loop_lambda_derivative(C), at) / at;
}

Mat sym_matrix(const TwistedLoop& C, SymVariant v, cd at) {
  if (C.dim != 2) throw Error(ErrorKind::InvalidParams, "Sym formulas need 2x2 frames");
  const Mat Cv = loop_eval(C, at);
  const Mat Ci = mat_inverse(Cv);
  const Mat D = at * lambda_derivative_at(C, at) * Ci;
  switch (v) {
    case SymVariant::R3_CMC:
    case SymVariant::R31_SPACELIKE: return -(I * D + 0.5 * Cv * d2(I, -I) * Ci);
    case SymVariant::R31_TIMELIKE: return -2.0 * (-D + 0.5 * Cv * d2(-1.0, 1.0) * Ci);
    case SymVariant::R31_TIMELIKE_HALF: return -0.5 * (D + 0.5 * Cv * d2(1.0, -1.0) * Ci);
    case SymVariant::K_SURFACE: return D;
  }
  return D;
}

Vec3 algebra_to_vec(SymVariant v, const Mat& M) {
  if (M.rows() != 2 || M.cols() != 2) throw Error(ErrorKind::NotInExpectedForm, "expected a 2x2 matrix");
  const double scale = std::max(1.0, fro(M));
  if (std::abs(M(0, 0) + M(1, 1)) > 1e-7 * scale) throw Error(ErrorKind::NotInExpectedForm, "matrix not traceless");
  const cd a = 0.5 * (M(0, 1) + M(1, 0));
  const cd b = 0.5 * (M(1, 0) - M(0, 1));
  const cd d = 0.5 * (M(0, 0) - M(1, 1));
  std::array<cd, 3> w;
  switch (v) {
    case SymVariant::R3_CMC:
    case SymVariant::K_SURFACE: w = {2.0 * I * a, -2.0 * b, -2.0 * I * d}; break;
    case SymVariant::R31_TIMELIKE: w = {b, a, -d}; break;
    case SymVariant::R31_SPACELIKE: w = {a, I * b, -I * d}; break;
    case SymVariant::R31_TIMELIKE_HALF: w = {2.0 * I * a, -2.0 * I * b, 2.0 * d}; break;
  }
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(w[i].imag()) > 1e-7 * scale)
      throw Error(ErrorKind::NotInExpectedForm, std::string("non-real component for ") + to_string(v));
    out[i] = w[i].real();
  }
  return out;
}

SurfaceSample sym_formula(const ExtendedFrame& frame, SymVariant v, cd at) {
  if (frame.grid.mode != variant_mode(v))
    throw Error(ErrorKind::WrongRealityForVariant,
                std::string(to_string(v)) + " needs a " + (variant_mode(v) == GridMode::PARA ? "PARA" : "MORPHED") +
                    " frame");
  // Real form test on a handful of valid nodes.
  const Involution nu = variant_reality(v);
  const bool on_circle = variant_mode(v) == GridMode::MORPHED;
  const std::vector<cd> probes =
      on_circle ? std::vector<cd>{1.0, std::polar(1.0, 0.9), std::polar(1.0, 2.3)} : std::vector<cd>{1.0, 0.7, 1.6};
  const size_t n = frame.loops.size();
  size_t checked = 0;
  for (size_t s = 0; s < n && checked < 6; s += std::max<size_t>(1, n / 7)) {
    if (!frame.valid[s]) continue;
    ++checked;
    for (cd lam : probes) {
      Mat C = loop_eval(frame.loops[s], lam);
      double defect = fro(apply_involution(nu, C) - C) / std::max(1.0, fro(C));
      if (defect > 1e-6)
        throw Error(ErrorKind::WrongRealityForVariant,
                    std::string(to_string(v)) + " expects frames fixed by " + nu.describe());
    }
  }

  SurfaceSample S;
  S.grid = frame.grid;
  S.potential_id = frame.potential_id;
  S.variant = v;
  S.signature = variant_signature(v);
  S.eval_parameter = at;
  S.points.assign(n, Vec3{0.0, 0.0, 0.0});
  S.valid.assign(n, 0);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    if (!frame.valid[i]) continue;
    try {
      S.points[i] = algebra_to_vec(v, sym_matrix(frame.loops[i], v, at));
      S.valid[i] = 1;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorKind::NotInExpectedForm, e);
  return S;
}

}  // namespace loopmorph
