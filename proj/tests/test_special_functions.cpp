#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <random>

#include "doctest.h"
#include "loopmorph/special_functions.hpp"

using namespace loopmorph;

TEST_CASE("real Jacobi functions agree with Boost") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-3.0, 3.0), M(0.0, 0.99);
  for (int i = 0; i < 50; ++i) {
    double u = U(rng), m = M(rng), k = std::sqrt(m);
    double cn, dn;
    double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
    auto r = jacobi_real(u, m);
    CHECK(std::abs(r.sn - sn) < 1e-12);
    CHECK(std::abs(r.cn - cn) < 1e-12);
    CHECK(std::abs(r.dn - dn) < 1e-12);
    auto c = jacobi_sncndn(u, k);
    CHECK(std::abs(c.sn - sn) < 1e-12);
    CHECK(std::abs(c.dn - dn) < 1e-12);
  }
}

TEST_CASE("complex Jacobi functions satisfy the quadratic identities") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    cd u(U(rng), U(rng));
    cd k = i % 2 ? cd(0.9 * std::abs(U(rng)), 0.0) : cd(0.0, 2.0 * U(rng));
    auto t = jacobi_sncndn(u, k);
    CHECK(std::abs(t.sn * t.sn + t.cn * t.cn - 1.0) < 1e-11);
    CHECK(std::abs(k * k * t.sn * t.sn + t.dn * t.dn - 1.0) < 1e-11);
  }
}

TEST_CASE("Jacobi derivative sn' = cn dn at complex arguments") {
  const cd u(0.3, 0.4), k(0.0, 0.7), h = 1e-5;
  cd fd = (jacobi(JacobiKind::SN, u + h, k) - jacobi(JacobiKind::SN, u - h, k)) / (2.0 * h);
  CHECK(std::abs(fd - jacobi(JacobiKind::CN, u, k) * jacobi(JacobiKind::DN, u, k)) < 1e-9);
  CHECK(std::abs(jacobi(JacobiKind::SD, u, k) - jacobi(JacobiKind::SN, u, k) / jacobi(JacobiKind::DN, u, k)) < 1e-13);
}

TEST_CASE("Jacobi at modulus 0 and 1") {
  auto z = jacobi_sncndn(0.4, 0.0);
  CHECK(std::abs(z.sn - std::sin(0.4)) < 1e-14);
  CHECK(std::abs(z.dn - 1.0) < 1e-14);
  auto r = jacobi_real(0.4, 1.0);
  CHECK(std::abs(r.sn - std::tanh(0.4)) < 1e-12);
  CHECK(std::abs(r.dn - 1.0 / std::cosh(0.4)) < 1e-12);
}

TEST_CASE("elliptic integrals agree with Boost") {
  for (double m : {0.0, 0.1, 0.5, 0.9}) {
    CHECK(std::abs(complete_elliptic_k(m) - boost::math::ellint_1(std::sqrt(m))) < 1e-13);
    for (double phi : {0.2, 1.0, 1.4})
      CHECK(std::abs(elliptic_e_incomplete(phi, m) - boost::math::ellint_2(std::sqrt(m), phi)) < 1e-12);
  }
}

TEST_CASE("adaptive quadrature") {
  cd v = integrate([](double t) { return cd(std::cos(t), std::exp(t)); }, 0.0, 1.0);
  CHECK(std::abs(v - cd(std::sin(1.0), std::exp(1.0) - 1.0)) < 1e-12);
}
