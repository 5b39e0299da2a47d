#include "loopmorph/algebra.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace loopmorph {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::LogDomain: return "LogDomain";
    case ErrorKind::EvalAtZero: return "EvalAtZero";
    case ErrorKind::LoopNotInvertible: return "LoopNotInvertible";
    case ErrorKind::NotInBigCell: return "NotInBigCell";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::FatalOffBigCell: return "FatalOffBigCell";
    case ErrorKind::MorphingViolated: return "MorphingViolated";
    case ErrorKind::GaugeInconsistent: return "GaugeInconsistent";
    case ErrorKind::WrongRealityForVariant: return "WrongRealityForVariant";
    case ErrorKind::NotInExpectedForm: return "NotInExpectedForm";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::PatternMismatch: return "PatternMismatch";
    case ErrorKind::RegionTooSmall: return "RegionTooSmall";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::SpecError: return "SpecError";
    case ErrorKind::NothingToExport: return "NothingToExport";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

const char* to_string(GroupKind g) {
  switch (g) {
    case GroupKind::SL2C: return "SL2C";
    case GroupKind::SL4C: return "SL4C";
    case GroupKind::SP2C: return "SP2C";
  }
  return "?";
}

Mat symplectic_form() {
  Mat J = Mat::Zero(4, 4);
  J(0, 2) = 1.0;
  J(1, 3) = 1.0;
  J(2, 0) = -1.0;
  J(3, 1) = -1.0;
  return J;
}

Involution Involution::conjugate_by(const Mat& K) {
  Involution v;
  v.kind = InvolutionKind::CONJUGATE_BY;
  v.K = K;
  return v;
}

Involution Involution::inverse_conj_transpose() {
  Involution v;
  v.kind = InvolutionKind::INVERSE_CONJ_TRANSPOSE;
  return v;
}

Involution Involution::entrywise_conj() {
  Involution v;
  v.kind = InvolutionKind::ENTRYWISE_CONJ;
  return v;
}

Involution Involution::compose(const Involution& a, const Involution& b) {
  Involution v;
  v.kind = InvolutionKind::COMPOSE;
  v.parts = {a, b};
  return v;
}

bool Involution::antiholomorphic() const {
  switch (kind) {
    case InvolutionKind::CONJUGATE_BY: return false;
    case InvolutionKind::INVERSE_CONJ_TRANSPOSE:
    case InvolutionKind::ENTRYWISE_CONJ: return true;
    case InvolutionKind::COMPOSE: {
      bool anti = false;
      for (const auto& p : parts) anti = anti != p.antiholomorphic();
      return anti;
    }
  }
  return false;
}

std::string Involution::describe() const {
  switch (kind) {
    case InvolutionKind::CONJUGATE_BY: {
      std::ostringstream os;
      os << "conj_by(diag";
      for (int i = 0; i < K.rows(); ++i) os << (i ? "," : "(") << K(i, i).real();
      os << "))";
      return os.str();
    }
    case InvolutionKind::INVERSE_CONJ_TRANSPOSE: return "inv_conj_t";
    case InvolutionKind::ENTRYWISE_CONJ: return "conj";
    case InvolutionKind::COMPOSE: return parts[0].describe() + "*" + parts[1].describe();
  }
  return "?";
}

Mat diag_signs(std::initializer_list<double> s) {
  Mat K = Mat::Zero(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.size()));
  int i = 0;
  for (double v : s) K(i, i) = v, ++i;
  return K;
}

double fro(const Mat& M) { return M.norm(); }

Mat mat_inverse(const Mat& A) {
  Eigen::PartialPivLU<Mat> lu(A);
  double rc = lu.rcond();
  if (!(rc > 1e-14)) throw Error(ErrorKind::SingularMatrix, "matrix inverse (rcond " + std::to_string(rc) + ")");
  return lu.inverse();
}

Mat apply_involution(const Involution& inv, const Mat& A) {
  switch (inv.kind) {
    case InvolutionKind::CONJUGATE_BY: return inv.K * A * mat_inverse(inv.K);
    case InvolutionKind::INVERSE_CONJ_TRANSPOSE: return mat_inverse(A.adjoint());
    case InvolutionKind::ENTRYWISE_CONJ: return A.conjugate();
    case InvolutionKind::COMPOSE:
      return apply_involution(inv.parts[0], apply_involution(inv.parts[1], A));
  }
  return A;
}

Mat apply_involution_algebra(const Involution& inv, const Mat& X) {
  switch (inv.kind) {
    case InvolutionKind::CONJUGATE_BY: return inv.K * X * mat_inverse(inv.K);
    case InvolutionKind::INVERSE_CONJ_TRANSPOSE: return -X.adjoint();
    case InvolutionKind::ENTRYWISE_CONJ: return X.conjugate();
    case InvolutionKind::COMPOSE:
      return apply_involution_algebra(inv.parts[0], apply_involution_algebra(inv.parts[1], X));
  }
  return X;
}

double algebra_residual(const Mat& X, const GroupSpec& g) {
  if (g.kind == GroupKind::SP2C) {
    Mat J = symplectic_form();
    return fro(X.transpose() * J + J * X);
  }
  return std::abs(X.trace());
}

std::pair<Mat, Mat> split_h_m(const Mat& X, const Involution& sigma, const GroupSpec& g) {
  if (X.rows() != g.dim() || X.cols() != g.dim())
    throw Error(ErrorKind::NotInAlgebra, "dimension mismatch");
  double scale = std::max(1.0, fro(X));
  if (algebra_residual(X, g) > 1e-10 * scale) throw Error(ErrorKind::NotInAlgebra, "element not in the Lie algebra");
  Mat s = apply_involution_algebra(sigma, X);
  return {0.5 * (X + s), 0.5 * (X - s)};
}

double check_group_membership(const Mat& A, const GroupSpec& g, const Involution* nu) {
  double r = 0.0;
  if (g.kind == GroupKind::SP2C) {
    Mat J = symplectic_form();
    r = fro(A.transpose() * J * A - J);
  } else {
    r = std::abs(A.determinant() - 1.0);
  }
  if (nu) r = std::max(r, fro(apply_involution(*nu, A) - A));
  return r;
}

Mat mat_exp(const Mat& X) { return X.exp(); }

Mat mat_log_near_id(const Mat& M) {
  Eigen::ComplexEigenSolver<Mat> es(M, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    cd ev = es.eigenvalues()(i);
    if (std::abs(ev) < 1e-12 || (ev.real() <= 0.0 && std::abs(ev.imag()) < 1e-12 * std::max(1.0, std::abs(ev))))
      throw Error(ErrorKind::LogDomain, "eigenvalue on the closed negative real axis");
  }
  return M.log();
}

}  // namespace loopmorph
