#pragma once

#include <functional>

#include "loopmorph/algebra.hpp"

namespace loopmorph {

enum class JacobiKind { AM, SN, CN, DN, SD };

struct JacobiTriple {
  cd sn, cn, dn;
};

// Modulus k may be real in [0, inf) or purely imaginary.
JacobiTriple jacobi_sncndn(cd u, cd k);
cd jacobi(JacobiKind kind, cd u, cd k);

// Real-argument core, parameter m in [0, 1]: AGM / descending Landen.
// phi is the continuous amplitude.
struct RealJacobi {
  double sn, cn, dn, phi;
};
RealJacobi jacobi_real(double u, double m);

double complete_elliptic_k(double m);

// E(phi | m) = int_0^phi sqrt(1 - m sin^2 t) dt along the straight path.
cd elliptic_e_incomplete(cd phi, cd m);

// Adaptive Gauss-Kronrod over [a, b] for complex-valued integrands.
cd integrate(const std::function<cd(double)>& f, double a, double b, double rel_tol = 1e-12);

}  // namespace loopmorph
