#include "loopmorph/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace loopmorph {

RealJacobi jacobi_real(double u, double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw Error(ErrorKind::DomainError, "jacobi_real: parameter outside [0,1]");
  if (m > 1.0 - 1e-15) {
    double s = std::tanh(u), sech = 1.0 / std::cosh(u);
    return {s, sech, sech, 2.0 * std::atan(std::exp(u)) - std::numbers::pi / 2};
  }
  std::array<double, 48> a{}, c{};
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(c[n]) > 1e-17 && n < 46) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double phi_prev = phi;
  for (int j = n; j >= 1; --j) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  }
  RealJacobi r;
  r.phi = phi;
  r.sn = std::sin(phi);
  r.cn = std::cos(phi);
  r.dn = n > 0 ? r.cn / std::cos(phi_prev - phi) : 1.0;
  return r;
}

double complete_elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw Error(ErrorKind::DomainError, "complete_elliptic_k: m outside [0,1)");
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * a; ++i) {
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

namespace {

JacobiTriple sncndn_real_modulus(cd u, double m) {
  RealJacobi x = jacobi_real(u.real(), m);
  if (u.imag() == 0.0) return {x.sn, x.cn, x.dn};
  RealJacobi y = jacobi_real(u.imag(), 1.0 - m);
  // addition theorem for x + i y
  double den = y.cn * y.cn + m * x.sn * x.sn * y.sn * y.sn;
  if (std::abs(den) < 1e-12) throw Error(ErrorKind::PoleProximity, "argument near a pole");
  cd sn(x.sn * y.dn, x.cn * x.dn * y.sn * y.cn);
  cd cn(x.cn * y.cn, -x.sn * x.dn * y.sn * y.dn);
  cd dn(x.dn * y.cn * y.dn, -m * x.sn * x.cn * y.sn);
  return {sn / den, cn / den, dn / den};
}

}  // namespace

JacobiTriple jacobi_sncndn(cd u, cd k) {
  if (k.imag() == 0.0) {
    double kr = std::abs(k.real());
    if (kr <= 1.0) return sncndn_real_modulus(u, kr * kr);
    JacobiTriple t = sncndn_real_modulus(kr * u, 1.0 / (kr * kr));
    return {t.sn / kr, t.dn, t.cn};
  }
  if (k.real() == 0.0) {
    // imaginary modulus: parameter -kappa^2 reduces to mu = kappa^2/(1+kappa^2)
    double m = k.imag() * k.imag();
    double mu = m / (1.0 + m);
    double r = std::sqrt(1.0 + m);
    JacobiTriple t = sncndn_real_modulus(u * r, mu);
    if (std::abs(t.dn) < 1e-12) throw Error(ErrorKind::PoleProximity, "argument near a pole");
    return {t.sn / t.dn / r, t.cn / t.dn, 1.0 / t.dn};
  }
  throw Error(ErrorKind::DomainError, "modulus must be real or purely imaginary");
}

cd jacobi(JacobiKind kind, cd u, cd k) {
  switch (kind) {
    case JacobiKind::SN: return jacobi_sncndn(u, k).sn;
    case JacobiKind::CN: return jacobi_sncndn(u, k).cn;
    case JacobiKind::DN: return jacobi_sncndn(u, k).dn;
    case JacobiKind::SD: {
      JacobiTriple t = jacobi_sncndn(u, k);
      if (std::abs(t.dn) < 1e-12) throw Error(ErrorKind::PoleProximity, "sd near a pole");
      return t.sn / t.dn;
    }
    case JacobiKind::AM: {
      if (u.imag() == 0.0 && k.imag() == 0.0 && std::abs(k.real()) <= 1.0)
        return jacobi_real(u.real(), k.real() * k.real()).phi;
      // continuous branch of -i log(cn + i sn) along the segment 0 -> u
      int steps = std::max(16, static_cast<int>(std::ceil(16.0 * std::abs(u) * std::max(1.0, std::abs(k)))));
      cd prev(1.0, 0.0), am(0.0, 0.0);
      for (int j = 1; j <= steps; ++j) {
        JacobiTriple t = jacobi_sncndn(u * (static_cast<double>(j) / steps), k);
        cd w = t.cn + cd(0, 1) * t.sn;
        am += cd(0, -1) * std::log(w / prev);
        prev = w;
      }
      return am;
    }
  }
  return 0.0;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<cd(double)>& f, double a, double b, cd& res, double& err) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cd fc = f(c);
  cd rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    cd f1 = f(c - h * kXgk[j]), f2 = f(c + h * kXgk[j]);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  res = rk * h;
  err = std::abs((rk - rg) * h);
}

cd adapt(const std::function<cd(double)>& f, double a, double b, double tol, int depth) {
  cd r;
  double e;
  gk15(f, a, b, r, e);
  if (e <= tol || depth > 40) return r;
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

cd integrate(const std::function<cd(double)>& f, double a, double b, double rel_tol) {
  cd r;
  double e;
  gk15(f, a, b, r, e);
  double tol = std::max(rel_tol * std::abs(r), 1e-300);
  return adapt(f, a, b, tol, 0);
}

cd elliptic_e_incomplete(cd phi, cd m) {
  if (phi == cd(0.0)) return 0.0;
  auto g = [&](double s) {
    cd st = std::sin(s * phi);
    return 1.0 - m * st * st;
  };
  for (int j = 0; j <= 64; ++j)
    if (std::abs(g(j / 64.0)) < 1e-12) throw Error(ErrorKind::DomainError, "elliptic integrand singular on path");
  return integrate([&](double s) { return phi * std::sqrt(g(s)); }, 0.0, 1.0, 1e-13);
}

}  // namespace loopmorph
