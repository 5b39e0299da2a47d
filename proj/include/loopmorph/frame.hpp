#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopmorph/factorization.hpp"
#include "loopmorph/potentials.hpp"

namespace loopmorph {

enum class GridMode { PARA, MORPHED };

struct AxisSpec {
  double min = -1.0;
  double max = 1.0;
  int count = 21;
  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
  double value(int i) const { return count > 1 ? min + i * step() : min; }
  bool operator==(const AxisSpec&) const = default;
};

// PARA axes: x^1..x^n then y^1..y^n. MORPHED axes: (Re z^a, Im z^a) per coordinate.
struct GridSpec {
  GridMode mode = GridMode::PARA;
  std::vector<AxisSpec> axes;

  static GridSpec square(GridMode mode, int n, int count, double half_width);
  size_t node_count() const;
  std::vector<int> unflatten(size_t idx) const;
  size_t flatten(const std::vector<int>& mi) const;
  size_t base_node() const;  // the origin; DomainError when it is not a node
  int n() const { return static_cast<int>(axes.size()) / 2; }
  bool operator==(const GridSpec&) const = default;
};

// Coordinates of a node as (eta point, tau point).
struct NodePoint {
  std::vector<cd> eta_point;
  std::vector<cd> tau_point;
};
NodePoint node_point(const GridSpec& g, size_t idx);

struct FrameSolution {
  TwistedLoop A;
  TwistedLoop Ainv;
};

// Solves A^{-1} dA = form along the straight path from 0 to `point` (coordinates in order).
FrameSolution integrate_frame(const PotentialPair& P, Side side, const std::vector<cd>& point,
                              int band = kDefaultBand);

struct BuildOptions {
  int band = kDefaultBand;
  bool parallel = true;
  bool keep_factors = false;
  IwasawaNormalization normalization = IwasawaNormalization::BALANCED;
};

struct ExtendedFrame {
  GridSpec grid;
  std::string potential_id;
  SymmetricSpaceSpec space;
  int band = kDefaultBand;
  std::vector<TwistedLoop> loops;
  std::vector<uint8_t> valid;
  std::vector<std::string> failure;
  std::vector<double> rcond;
  std::vector<TwistedLoop> Bplus, Bminus;  // when keep_factors
  bool gauge_applied = false;

  size_t valid_count() const;
};

ExtendedFrame build_frame_grid(const PotentialPair& P, const GridSpec& grid, const BuildOptions& opt = {});
// Same kernel without OpenMP; kept as the reference for the parallel path.
ExtendedFrame build_frame_grid_serial(const PotentialPair& P, const GridSpec& grid, BuildOptions opt = {});

// Frame and Iwasawa factors at one (eta point, tau point), integrating straight from the origin.
PairIwasawaResult frame_at(const PotentialPair& P, const NodePoint& p, const BuildOptions& opt = {});

// Checks the morphing condition, then builds the frame on a MORPHED grid.
ExtendedFrame morph_frame(const PotentialPair& P, const GridSpec& grid, const BuildOptions& opt = {});

struct GaugeField {
  std::vector<Mat> X;  // log of C^{-1} nu(C)
  std::vector<Mat> h;  // exp(X / 2)
  double sigma_residual = 0.0;       // max |sigma(X) - X|
  double anti_residual = 0.0;        // max |d nu(X) + X|
  double lambda_spread = 0.0;        // max variation of C^{-1} nu(C) over S^1 samples
  double base_residual = 0.0;        // |h(base) - id|
};

std::pair<ExtendedFrame, GaugeField> unitarize(const ExtendedFrame& frame, const Involution& nu);

// Max relative curvature of alpha^mu over interior nodes.
double check_flatness(const ExtendedFrame& frame, const std::vector<cd>& mus = {cd(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)), 1.0, 2.0});

// Relative mass of Maurer-Cartan coefficients outside the expected band / component placement.
double maurer_cartan_band(const ExtendedFrame& frame, int max_nodes = 25);

// Central-difference weights for the first derivative, order p (2, 4, 6, 8).
std::vector<double> central_weights(int order);
// Same for the second derivative.
std::vector<double> second_derivative_weights(int order);

}  // namespace loopmorph
