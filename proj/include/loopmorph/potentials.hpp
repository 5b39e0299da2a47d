#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopmorph/loop.hpp"

namespace loopmorph {

enum class AngleKind { PSEUD, HYPER, CONIC };

struct AngleFunction {
  AngleKind kind = AngleKind::PSEUD;
  double b = 0.0;
};

// omega(x, y); complex arguments continue the closed forms holomorphically.
cd angle_function(const AngleFunction& w, cd x, cd y);
// Largest |x - y| for which omega stays analytic (inf for PSEUD).
double angle_analytic_radius(const AngleFunction& w);

enum class Side { ETA, TAU };

// Matrix-valued function of one base variable s.
struct EntryFunction {
  enum class Kind { POLY, ANGLE_DRESSED } kind = Kind::POLY;
  std::vector<Mat> poly;  // M(s) = sum_n poly[n] s^n
  AngleFunction angle;    // ANGLE_DRESSED
  Side side = Side::ETA;
  cd prefactor = 1.0;

  static EntryFunction constant(const Mat& M) { return polynomial({M}); }
  static EntryFunction polynomial(std::vector<Mat> coeffs);
  static EntryFunction angle_dressed(const AngleFunction& w, Side side, cd prefactor);

  Mat eval(cd s) const;
  bool is_constant() const { return kind == Kind::POLY && poly.size() <= 1; }
};

struct LoopTerm {
  int power = 0;  // lambda^power
  EntryFunction f;
  cd scale = 1.0;
};

// Coefficient of dx^a (eta) or dy^a (tau): sum of lambda^k f_k(s).
struct CoordinateForm {
  std::vector<LoopTerm> terms;
  bool is_constant() const;
};

struct PotentialPair {
  std::string id;
  SymmetricSpaceSpec space;
  int n = 1;                      // complex / para-complex dimension
  std::vector<CoordinateForm> eta;  // size n
  std::vector<CoordinateForm> tau;  // size n
  double domain_half_width = 1.0;
  bool expect_morphing = true;
};

enum class CatalogName {
  CYLINDER,
  HYPERBOLOID,
  SPHERE_VARIANT,
  SMYTH,
  TODA_PSEUD,
  TODA_HYPER,
  TODA_CONIC,
  GRASSMANN4,
  SP2,
};

const char* to_string(CatalogName c);
CatalogName catalog_from_string(const std::string& s);  // InvalidParams on unknown names

PotentialPair catalog_potential(CatalogName name, const std::map<std::string, double>& params = {});

// Loop value of the coefficient of d(coordinate) at base value s.
TwistedLoop eval_coordinate_form(const CoordinateForm& f, int dim, cd s);
// One loop per coordinate.
std::vector<TwistedLoop> eval_potential(const PotentialPair& P, Side side, const std::vector<cd>& point);

// lambda -> b lambda: term lambda^k picks up b^k.
PotentialPair rescale_loop_parameter(const PotentialPair& P, double b);

// max over sample points and lambda in S^1 of |d nu1_C(eta(z)) - tau(conj z)|, relative to |eta|.
double check_morphing(const PotentialPair& P, int samples = 8, int lambdas = 16);

// Splits a g-valued 1-form given by its coordinate components (P dx + Q dy).
// para: returns (P dx, Q dy). Otherwise returns the dz and dzbar coefficients.
std::pair<Mat, Mat> split_pm(const Mat& P, const Mat& Q, bool para);

}  // namespace loopmorph
