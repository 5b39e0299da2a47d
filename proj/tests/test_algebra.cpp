#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "helpers.hpp"
#include "loopmorph/algebra.hpp"

using namespace loopmorph;
using testutil::m2;
using testutil::max_abs;

TEST_CASE("mat_exp agrees with Eigen's matrix exponential") {
  Mat X = m2(cd(0.3, 0.1), cd(-0.7, 0.2), cd(0.4, 0.0), cd(-0.3, -0.1));
  Mat ref = X.exp();
  CHECK(max_abs(mat_exp(X) - ref) < 1e-13);
  Mat Y = Mat::Random(4, 4) * 0.5;
  CHECK(max_abs(mat_exp(Y) - Y.exp()) < 1e-12);
}

TEST_CASE("mat_log_near_id inverts mat_exp") {
  Mat X = m2(0.1, cd(0.2, -0.1), -0.05, -0.1);
  CHECK(max_abs(mat_log_near_id(mat_exp(X)) - X) < 1e-13);
}

TEST_CASE("mat_inverse") {
  Mat A = m2(2.0, 1.0, cd(0, 1), 3.0);
  CHECK(max_abs(mat_inverse(A) * A - Mat::Identity(2, 2)) < 1e-14);
  CHECK_THROWS_AS(mat_inverse(m2(1.0, 2.0, 2.0, 4.0)), Error);
}

TEST_CASE("group membership for SU(2) and SU(1,1)") {
  const double t = 0.7;
  Mat U = m2(std::cos(t), cd(0, std::sin(t)), cd(0, std::sin(t)), std::cos(t));
  auto ict = Involution::inverse_conj_transpose();
  CHECK(check_group_membership(U, GroupSpec{}, &ict) < 1e-14);
  Mat H = m2(std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t));
  CHECK(check_group_membership(H, GroupSpec{}, &ict) > 0.1);
  // SU(1,1) = fixed points of conj by diag(1,-1) composed with inverse conjugate transpose
  auto su11 = Involution::compose(Involution::conjugate_by(diag_signs({1.0, -1.0})), ict);
  Mat V = m2(std::cosh(t), cd(0, std::sinh(t)), cd(0, -std::sinh(t)), std::cosh(t));
  CHECK(check_group_membership(V, GroupSpec{}, &su11) < 1e-14);
  CHECK(check_group_membership(2.0 * Mat::Identity(2, 2), GroupSpec{}) > 0.5);
}

TEST_CASE("involutions square to the identity") {
  Mat A = m2(cd(1, 0.2), cd(0.3, -1), cd(0.5, 0.5), cd(2, 0.1));
  A /= std::sqrt(A.determinant());
  for (const auto& nu : {Involution::inverse_conj_transpose(), Involution::entrywise_conj(),
                         Involution::conjugate_by(diag_signs({-1.0, 1.0}))}) {
    CHECK(max_abs(apply_involution(nu, apply_involution(nu, A)) - A) < 1e-13);
  }
  CHECK(Involution::entrywise_conj().antiholomorphic());
  CHECK_FALSE(Involution::conjugate_by(diag_signs({-1.0, 1.0})).antiholomorphic());
}

TEST_CASE("split_h_m gives the +1 and -1 eigenparts of sigma") {
  auto sigma = Involution::conjugate_by(diag_signs({-1.0, 1.0}));
  Mat X = m2(0.4, cd(1, 2), -3.0, -0.4);
  auto [h, m] = split_h_m(X, sigma, GroupSpec{});
  CHECK(max_abs(h + m - X) < 1e-15);
  CHECK(max_abs(apply_involution_algebra(sigma, h) - h) < 1e-15);
  CHECK(max_abs(apply_involution_algebra(sigma, m) + m) < 1e-15);
  CHECK(max_abs(h - m2(0.4, 0.0, 0.0, -0.4)) < 1e-15);
}

TEST_CASE("algebra residuals") {
  CHECK(algebra_residual(m2(1.0, 2.0, 3.0, -1.0), GroupSpec{}) < 1e-15);
  CHECK(algebra_residual(m2(1.0, 0.0, 0.0, 1.0), GroupSpec{}) > 0.5);
  const Mat J = symplectic_form();
  Mat S = Mat::Zero(4, 4);
  S(0, 1) = S(1, 0) = 1.0;
  S(2, 3) = S(3, 2) = -1.0;
  CHECK(max_abs(S.transpose() * J + J * S) < 1e-15);
  CHECK(algebra_residual(S, GroupSpec{GroupKind::SP2C}) < 1e-15);
}
