#include "loopmorph/potentials.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "loopmorph/special_functions.hpp"

namespace loopmorph {

namespace {
const cd I(0.0, 1.0);

Mat m2(cd a, cd b, cd c, cd d) {
  Mat M(2, 2);
  M << a, b, c, d;
  return M;
}
}  // namespace

cd angle_function(const AngleFunction& w, cd x, cd y) {
  cd s = x - y;
  switch (w.kind) {
    case AngleKind::PSEUD: return 2.0 * std::asin(std::tanh(s));
    case AngleKind::HYPER: {
      if (!(w.b > 0.0)) throw Error(ErrorKind::InvalidParams, "HYPER needs b > 0");
      double r = std::sqrt(1.0 + w.b * w.b);
      cd dn = jacobi(JacobiKind::DN, I * s / r, cd(0.0, w.b));
      return 2.0 * std::asin(dn / r);
    }
    case AngleKind::CONIC: {
      if (!(w.b > 0.0 && w.b < 1.0)) throw Error(ErrorKind::InvalidParams, "CONIC needs 0 < b < 1");
      double kp = std::sqrt(1.0 - w.b * w.b);
      cd sd = jacobi(JacobiKind::SD, s / kp, cd(kp, 0.0));
      return -2.0 * std::asin(w.b * sd) + std::numbers::pi;
    }
  }
  return 0.0;
}

double angle_analytic_radius(const AngleFunction& w) {
  if (w.kind == AngleKind::CONIC) {
    double m = 1.0 - w.b * w.b;
    return std::sqrt(m) * complete_elliptic_k(m);
  }
  return std::numeric_limits<double>::infinity();
}

EntryFunction EntryFunction::polynomial(std::vector<Mat> coeffs) {
  EntryFunction f;
  f.kind = Kind::POLY;
  f.poly = std::move(coeffs);
  return f;
}

EntryFunction EntryFunction::angle_dressed(const AngleFunction& w, Side side, cd prefactor) {
  EntryFunction f;
  f.kind = Kind::ANGLE_DRESSED;
  f.angle = w;
  f.side = side;
  f.prefactor = prefactor;
  return f;
}

Mat EntryFunction::eval(cd s) const {
  if (kind == Kind::POLY) {
    Mat M = Mat::Zero(poly.front().rows(), poly.front().cols());
    for (size_t n = poly.size(); n-- > 0;) M = M * s + poly[n];
    return M;
  }
  cd e;
  if (side == Side::ETA)
    e = std::exp(I * (angle_function(angle, s, 0.0) - angle_function(angle, 0.0, 0.0)));
  else
    e = std::exp(-I * angle_function(angle, 0.0, s));
  return prefactor * m2(0.0, e, 1.0 / e, 0.0);
}

bool CoordinateForm::is_constant() const {
  for (const auto& t : terms)
    if (!t.f.is_constant()) return false;
  return true;
}

const char* to_string(CatalogName c) {
  switch (c) {
    case CatalogName::CYLINDER: return "cylinder";
    case CatalogName::HYPERBOLOID: return "hyperboloid";
    case CatalogName::SPHERE_VARIANT: return "sphere_variant";
    case CatalogName::SMYTH: return "smyth";
    case CatalogName::TODA_PSEUD: return "toda_pseud";
    case CatalogName::TODA_HYPER: return "toda_hyper";
    case CatalogName::TODA_CONIC: return "toda_conic";
    case CatalogName::GRASSMANN4: return "grassmann4";
    case CatalogName::SP2: return "sp2";
  }
  return "?";
}

CatalogName catalog_from_string(const std::string& s) {
  for (auto c : {CatalogName::CYLINDER, CatalogName::HYPERBOLOID, CatalogName::SPHERE_VARIANT, CatalogName::SMYTH,
                 CatalogName::TODA_PSEUD, CatalogName::TODA_HYPER, CatalogName::TODA_CONIC, CatalogName::GRASSMANN4,
                 CatalogName::SP2})
    if (s == to_string(c)) return c;
  throw Error(ErrorKind::InvalidParams, "unknown catalog potential '" + s + "'");
}

namespace {

CoordinateForm single(int power, const EntryFunction& f) { return CoordinateForm{{LoopTerm{power, f, 1.0}}}; }

double param(const std::map<std::string, double>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

void reject_unknown(const std::map<std::string, double>& p, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw Error(ErrorKind::InvalidParams, "unknown parameter '" + k + "'");
  }
}

}  // namespace

PotentialPair catalog_potential(CatalogName name, const std::map<std::string, double>& params) {
  PotentialPair P;
  const Mat I11 = diag_signs({-1, 1});
  const Mat s1 = m2(0, 1, 1, 0);
  const Involution inv_ct = Involution::inverse_conj_transpose();
  const Involution conj = Involution::entrywise_conj();
  P.space.group = GroupSpec{GroupKind::SL2C};
  P.space.sigma = Involution::conjugate_by(I11);
  P.space.nu1 = inv_ct;
  P.space.nu2 = conj;
  P.id = to_string(name);
  switch (name) {
    case CatalogName::CYLINDER:
      reject_unknown(params, {});
      P.eta = {single(-1, EntryFunction::constant(s1))};
      P.tau = {single(1, EntryFunction::constant(-s1))};
      P.domain_half_width = 1.5;
      break;
    case CatalogName::HYPERBOLOID:
      reject_unknown(params, {});
      P.space.nu1 = Involution::compose(Involution::conjugate_by(I11), inv_ct);
      P.space.nu2 = Involution::compose(Involution::conjugate_by(I11), conj);
      P.eta = {single(-1, EntryFunction::constant(m2(0, I, 0, 0)))};
      P.tau = {single(1, EntryFunction::constant(m2(0, 0, -I, 0)))};
      P.domain_half_width = 1.5;
      break;
    case CatalogName::SPHERE_VARIANT:
      reject_unknown(params, {});
      P.space.nu2 = Involution::compose(Involution::conjugate_by(I11), conj);
      P.eta = {single(-1, EntryFunction::constant(m2(0, I, 0, 0)))};
      P.tau = {single(1, EntryFunction::constant(m2(0, 0, I, 0)))};
      P.domain_half_width = 1.5;
      break;
    case CatalogName::SMYTH: {
      reject_unknown(params, {"m"});
      double m = param(params, "m", 1.0);
      if (!(m >= 1.0) || std::floor(m) != m) throw Error(ErrorKind::InvalidParams, "SMYTH needs an integer m >= 1");
      int mi = static_cast<int>(m);
      std::vector<Mat> e(mi + 1, Mat::Zero(2, 2)), t(mi + 1, Mat::Zero(2, 2));
      e[0] = m2(0, 1, 0, 0);
      e[mi] += m2(0, 0, 1, 0);
      t[0] = m2(0, 0, -1, 0);
      t[mi] += m2(0, -1, 0, 0);
      P.id = "smyth(m=" + std::to_string(mi) + ")";
      P.eta = {single(-1, EntryFunction::polynomial(e))};
      P.tau = {single(1, EntryFunction::polynomial(t))};
      P.domain_half_width = 1.5;
      break;
    }
    case CatalogName::TODA_PSEUD:
    case CatalogName::TODA_HYPER:
    case CatalogName::TODA_CONIC: {
      AngleFunction w;
      if (name == CatalogName::TODA_PSEUD) {
        reject_unknown(params, {});
        w.kind = AngleKind::PSEUD;
      } else {
        reject_unknown(params, {"b"});
        w.kind = name == CatalogName::TODA_HYPER ? AngleKind::HYPER : AngleKind::CONIC;
        w.b = param(params, "b", 0.5);
        if (w.kind == AngleKind::HYPER && !(w.b > 0.0)) throw Error(ErrorKind::InvalidParams, "HYPER needs b > 0");
        if (w.kind == AngleKind::CONIC && !(w.b > 0.0 && w.b < 1.0))
          throw Error(ErrorKind::InvalidParams, "CONIC needs 0 < b < 1");
        P.id = std::string(to_string(name)) + "(b=" + std::to_string(w.b) + ")";
      }
      P.space.nu2 = inv_ct;
      P.eta = {single(-1, EntryFunction::angle_dressed(w, Side::ETA, 0.5 * I))};
      P.tau = {single(1, EntryFunction::angle_dressed(w, Side::TAU, -0.5 * I))};
      P.domain_half_width = std::min(0.9, 0.45 * angle_analytic_radius(w));
      P.expect_morphing = name == CatalogName::TODA_CONIC;
      break;
    }
    case CatalogName::GRASSMANN4: {
      reject_unknown(params, {});
      P.space.group = GroupSpec{GroupKind::SL4C};
      P.space.sigma = Involution::conjugate_by(diag_signs({-1, -1, 1, 1}));
      Mat E1 = Mat::Zero(4, 4), E2 = Mat::Zero(4, 4);
      E1(0, 3) = 1.0;
      E1(3, 0) = -1.0;
      E2(1, 2) = 1.0;
      E2(2, 1) = 1.0;
      P.n = 2;
      P.eta = {single(-1, EntryFunction::constant(E1)), single(-1, EntryFunction::constant(E2))};
      P.tau = {single(1, EntryFunction::constant(E1)), single(1, EntryFunction::constant(-E2))};
      P.domain_half_width = 1.0;
      break;
    }
    case CatalogName::SP2: {
      reject_unknown(params, {});
      const Mat K11 = diag_signs({-1, 1, -1, 1});
      P.space.group = GroupSpec{GroupKind::SP2C};
      P.space.sigma = Involution::conjugate_by(K11);
      P.space.nu2 = Involution::compose(Involution::conjugate_by(K11), inv_ct);
      Mat X = Mat::Zero(4, 4);
      X(0, 1) = X(1, 0) = 1.0;
      X(2, 3) = X(3, 2) = -1.0;
      P.n = 2;
      P.eta = {single(-1, EntryFunction::constant(X)), single(1, EntryFunction::constant(-X))};
      P.tau = {single(1, EntryFunction::constant(-X)), single(-1, EntryFunction::constant(X))};
      P.domain_half_width = 1.0;
      break;
    }
  }
  return P;
}

TwistedLoop eval_coordinate_form(const CoordinateForm& f, int dim, cd s) {
  TwistedLoop L = TwistedLoop::zero(dim, 0, 0);
  for (const auto& t : f.terms) L = L + TwistedLoop::monomial(t.scale * t.f.eval(s), t.power);
  return L;
}

std::vector<TwistedLoop> eval_potential(const PotentialPair& P, Side side, const std::vector<cd>& point) {
  if (static_cast<int>(point.size()) != P.n) throw Error(ErrorKind::DomainError, "point dimension mismatch");
  const auto& forms = side == Side::ETA ? P.eta : P.tau;
  std::vector<TwistedLoop> out;
  for (int a = 0; a < P.n; ++a) {
    if (std::abs(point[a]) > P.domain_half_width * std::sqrt(2.0) + 1e-12)
      throw Error(ErrorKind::DomainError, "point outside the analyticity box");
    out.push_back(eval_coordinate_form(forms[a], P.space.group.dim(), point[a]));
  }
  return out;
}

PotentialPair rescale_loop_parameter(const PotentialPair& P, double b) {
  PotentialPair Q = P;
  for (auto* forms : {&Q.eta, &Q.tau})
    for (auto& f : *forms)
      for (auto& t : f.terms) t.scale *= std::pow(b, t.power);
  return Q;
}

double check_morphing(const PotentialPair& P, int samples, int lambdas) {
  const double box = std::min(0.3, 0.5 * P.domain_half_width);
  const int d = P.space.group.dim();
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    // deterministic spread over the complex box
    double t = (j + 0.5) / samples;
    cd z(box * std::cos(2.0 * std::numbers::pi * t * 3.0), box * std::sin(2.0 * std::numbers::pi * t * 5.0));
    for (int a = 0; a < P.n; ++a) {
      cd za = a == 0 ? z : z * cd(0.7, -0.4);
      TwistedLoop eta = eval_coordinate_form(P.eta[a], d, za);
      TwistedLoop lhs = loop_involution_algebra(eta, P.space.nu1, RealityKind::SECOND_KIND);
      TwistedLoop tau = eval_coordinate_form(P.tau[a], d, std::conj(za));
      for (cd lam : unit_circle_samples(lambdas, 0.05)) {
        double scale = std::max(1e-300, loop_eval(eta, lam).norm());
        worst = std::max(worst, (loop_eval(lhs, lam) - loop_eval(tau, lam)).norm() / scale);
      }
    }
  }
  return worst;
}

std::pair<Mat, Mat> split_pm(const Mat& P, const Mat& Q, bool para) {
  if (para) return {P, Q};
  return {0.5 * (P - I * Q), 0.5 * (P + I * Q)};
}

}  // namespace loopmorph
