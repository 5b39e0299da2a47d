#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopmorph/frame.hpp"
#include "loopmorph/sym.hpp"

namespace loopmorph {

struct PotentialRef {
  std::string catalog;
  std::map<std::string, double> params;
  bool operator==(const PotentialRef&) const = default;
};

PotentialPair resolve_potential(const PotentialRef& ref);

enum class Pipeline { FRAME, MORPH, SURFACE, VERIFY };
enum class OutputFormat { OBJ, CSV, FRAME_CACHE, REPORT_JSON, REPORT_TEXT };

const char* to_string(Pipeline p);
const char* to_string(OutputFormat f);

struct OutputSpec {
  std::string path;
  OutputFormat format = OutputFormat::OBJ;
  bool operator==(const OutputSpec&) const = default;
};

struct RunSpec {
  std::optional<PotentialRef> potential;
  std::optional<GridSpec> grid;  // unset: default_grid()
  int band = kDefaultBand;
  Pipeline pipeline = Pipeline::FRAME;
  std::optional<SymVariant> sym_variant;
  double eval_parameter = 1.0;  // theta for PARA variants
  double lambda_angle = 0.0;    // MORPHED variants evaluate at lambda = e^{i lambda_angle}
  std::string suite = "APPENDIX_ALL";
  std::vector<OutputSpec> outputs;
  bool operator==(const RunSpec&) const = default;
};

// SpecError carrying the JSON pointer of the offending value.
RunSpec parse_spec(const std::string& json_text);
std::string serialize_spec(const RunSpec& spec);

// 21 x 21 on [-w, w]^2 with w = min(1, analyticity half width); 9 per axis for two coordinates.
GridSpec default_grid(const RunSpec& spec, const PotentialPair& P);

// Parses "<nx>x<ny>[@<half-width>]"; SpecError on bad syntax.
struct GridArg {
  int nx = 21, ny = 21;
  std::optional<double> half_width;
};
GridArg parse_grid_arg(const std::string& s);
GridSpec apply_grid_arg(const GridArg& a, GridMode mode, int n, double default_half_width);

// NothingToExport when no node is valid.
void export_obj(const SurfaceSample& s, std::ostream& os);
void export_csv(const SurfaceSample& s, std::ostream& os);
std::string export_surface(const SurfaceSample& s, OutputFormat f);

// Binary frame cache with magic "LPFG1".
void write_frame_cache(std::ostream& os, const ExtendedFrame& F, const PotentialRef& ref);
std::pair<ExtendedFrame, PotentialRef> read_frame_cache(std::istream& is);

}  // namespace loopmorph
