#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace loopmorph {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

enum class ErrorKind {
  SingularMatrix,
  NotInAlgebra,
  LogDomain,
  EvalAtZero,
  LoopNotInvertible,
  NotInBigCell,
  InvalidParams,
  DomainError,
  IntegrationFailure,
  FatalOffBigCell,
  MorphingViolated,
  GaugeInconsistent,
  WrongRealityForVariant,
  NotInExpectedForm,
  PoleProximity,
  PatternMismatch,
  RegionTooSmall,
  DegenerateMetric,
  SpecError,
  NothingToExport,
  IoError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

enum class GroupKind { SL2C, SL4C, SP2C };

struct GroupSpec {
  GroupKind kind = GroupKind::SL2C;
  int dim() const { return kind == GroupKind::SL2C ? 2 : 4; }
  bool operator==(const GroupSpec&) const = default;
};

const char* to_string(GroupKind g);

// Symplectic form used for SP2C: [[0, I2], [-I2, 0]].
Mat symplectic_form();

enum class InvolutionKind { CONJUGATE_BY, INVERSE_CONJ_TRANSPOSE, ENTRYWISE_CONJ, COMPOSE };

struct Involution {
  InvolutionKind kind = InvolutionKind::ENTRYWISE_CONJ;
  Mat K;                          // CONJUGATE_BY only
  std::vector<Involution> parts;  // COMPOSE: applied right to left

  static Involution conjugate_by(const Mat& K);
  static Involution inverse_conj_transpose();
  static Involution entrywise_conj();
  // compose(a, b)(X) = a(b(X))
  static Involution compose(const Involution& a, const Involution& b);

  bool antiholomorphic() const;
  std::string describe() const;
};

struct SymmetricSpaceSpec {
  GroupSpec group;
  Involution sigma;  // holomorphic, CONJUGATE_BY
  Involution nu1;    // real form for the harmonic side
  Involution nu2;    // real form for the Lorentz-harmonic side
};

Mat diag_signs(std::initializer_list<double> s);

// Group-level action.
Mat apply_involution(const Involution& inv, const Mat& A);
// Differential on the Lie algebra.
Mat apply_involution_algebra(const Involution& inv, const Mat& X);

double fro(const Mat& M);

double algebra_residual(const Mat& X, const GroupSpec& g);
std::pair<Mat, Mat> split_h_m(const Mat& X, const Involution& sigma, const GroupSpec& g);

// max(|det-1| or symplectic defect, real-form defect when nu is given)
double check_group_membership(const Mat& A, const GroupSpec& g, const Involution* nu = nullptr);

Mat mat_inverse(const Mat& A);
Mat mat_exp(const Mat& X);
// Principal logarithm; LogDomain when the spectrum touches the closed negative axis.
Mat mat_log_near_id(const Mat& M);

}  // namespace loopmorph
