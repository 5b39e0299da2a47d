#include "loopmorph/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "loopmorph/verify.hpp"

namespace loopmorph {

using json = nlohmann::json;

namespace {

[[noreturn]] void spec_error(const std::string& pointer, const std::string& msg) {
  throw Error(ErrorKind::SpecError, (pointer.empty() ? "/" : pointer) + ": " + msg);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) spec_error(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) spec_error(where + "/" + it.key(), "unknown key");
  }
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) spec_error(where, "expected a number");
  return j.get<double>();
}

int int_at(const json& j, const std::string& where) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>()))
    spec_error(where, "expected an integer");
  return static_cast<int>(j.get<double>());
}

std::string string_at(const json& j, const std::string& where) {
  if (!j.is_string()) spec_error(where, "expected a string");
  return j.get<std::string>();
}

template <class E, size_t N>
E enum_at(const json& j, const std::string& where, const E (&all)[N]) {
  std::string s = string_at(j, where);
  for (E e : all)
    if (s == to_string(e)) return e;
  spec_error(where, "unknown value '" + s + "'");
}

constexpr Pipeline kPipelines[] = {Pipeline::FRAME, Pipeline::MORPH, Pipeline::SURFACE, Pipeline::VERIFY};
constexpr OutputFormat kFormats[] = {OutputFormat::OBJ, OutputFormat::CSV, OutputFormat::FRAME_CACHE,
                                     OutputFormat::REPORT_JSON, OutputFormat::REPORT_TEXT};
constexpr SymVariant kVariants[] = {SymVariant::R3_CMC, SymVariant::R31_TIMELIKE, SymVariant::R31_SPACELIKE,
                                    SymVariant::R31_TIMELIKE_HALF, SymVariant::K_SURFACE};

OutputFormat format_from_path(const std::string& path, const std::string& where) {
  auto ends = [&](const char* suf) {
    size_t n = std::strlen(suf);
    return path.size() >= n && path.compare(path.size() - n, n, suf) == 0;
  };
  if (ends(".obj")) return OutputFormat::OBJ;
  if (ends(".csv")) return OutputFormat::CSV;
  if (ends(".lpfg")) return OutputFormat::FRAME_CACHE;
  if (ends(".json")) return OutputFormat::REPORT_JSON;
  if (ends(".txt")) return OutputFormat::REPORT_TEXT;
  spec_error(where, "cannot infer the output format of '" + path + "'");
}

void validate_params(const PotentialRef& ref) {
  CatalogName c;
  try {
    c = catalog_from_string(ref.catalog);
  } catch (const Error&) {
    spec_error("/potential/catalog", "unknown catalog potential '" + ref.catalog + "'");
  }
  std::vector<std::string> allowed;
  if (c == CatalogName::SMYTH) allowed = {"m"};
  if (c == CatalogName::TODA_HYPER || c == CatalogName::TODA_CONIC) allowed = {"b"};
  for (const auto& [k, v] : ref.params) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      spec_error("/potential/params/" + k, "unknown parameter");
    const std::string where = "/potential/params/" + k;
    if (k == "m" && !(v >= 1.0 && std::floor(v) == v)) spec_error(where, "m must be an integer >= 1");
    if (k == "b" && c == CatalogName::TODA_HYPER && !(v > 0.0)) spec_error(where, "b must be positive");
    if (k == "b" && c == CatalogName::TODA_CONIC && !(v > 0.0 && v < 1.0)) spec_error(where, "b must lie in (0, 1)");
  }
}

GridMode default_mode(const RunSpec& s) {
  if (s.pipeline == Pipeline::MORPH) return GridMode::MORPHED;
  if (s.pipeline == Pipeline::SURFACE && s.sym_variant) return variant_mode(*s.sym_variant);
  return GridMode::PARA;
}

json grid_to_json(const GridSpec& g) {
  json axes = json::array();
  for (const auto& a : g.axes) axes.push_back({{"min", a.min}, {"max", a.max}, {"count", a.count}});
  return {{"mode", g.mode == GridMode::PARA ? "PARA" : "MORPHED"}, {"axes", axes}};
}

void check_grid(const GridSpec& g, int n) {
  if (static_cast<int>(g.axes.size()) != 2 * n)
    spec_error("/grid/axes", "expected " + std::to_string(2 * n) + " axes for this potential");
  for (size_t a = 0; a < g.axes.size(); ++a) {
    const std::string where = "/grid/axes/" + std::to_string(a);
    if (g.axes[a].count < 2) spec_error(where + "/count", "need at least 2 nodes");
    if (!(g.axes[a].max > g.axes[a].min)) spec_error(where, "max must exceed min");
  }
  try {
    g.base_node();
  } catch (const Error&) {
    spec_error("/grid", "the origin must be a grid node");
  }
}

}  // namespace

const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::FRAME: return "FRAME";
    case Pipeline::MORPH: return "MORPH";
    case Pipeline::SURFACE: return "SURFACE";
    case Pipeline::VERIFY: return "VERIFY";
  }
  return "?";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::OBJ: return "OBJ";
    case OutputFormat::CSV: return "CSV";
    case OutputFormat::FRAME_CACHE: return "FRAME_CACHE";
    case OutputFormat::REPORT_JSON: return "REPORT_JSON";
    case OutputFormat::REPORT_TEXT: return "REPORT_TEXT";
  }
  return "?";
}

PotentialPair resolve_potential(const PotentialRef& ref) {
  try {
    return catalog_potential(catalog_from_string(ref.catalog), ref.params);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidParams) spec_error("/potential", e.what());
    throw;
  }
}

RunSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    spec_error("", std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "", {"potential", "grid", "band", "pipeline", "sym_variant", "eval_parameter", "lambda_angle", "suite",
                   "outputs"});
  RunSpec s;
  if (j.contains("pipeline")) s.pipeline = enum_at(j["pipeline"], "/pipeline", kPipelines);
  if (j.contains("sym_variant")) s.sym_variant = enum_at(j["sym_variant"], "/sym_variant", kVariants);
  if (j.contains("band")) {
    s.band = int_at(j["band"], "/band");
    if (s.band < 8 || s.band > 128) spec_error("/band", "band must lie in [8, 128]");
  }
  if (j.contains("eval_parameter")) {
    s.eval_parameter = number_at(j["eval_parameter"], "/eval_parameter");
    if (s.eval_parameter == 0.0) spec_error("/eval_parameter", "must be nonzero");
  }
  if (j.contains("lambda_angle")) s.lambda_angle = number_at(j["lambda_angle"], "/lambda_angle");
  if (j.contains("suite")) {
    s.suite = string_at(j["suite"], "/suite");
    auto names = suite_names();
    if (std::find(names.begin(), names.end(), s.suite) == names.end()) spec_error("/suite", "unknown suite '" + s.suite + "'");
  }

  int n = 1;
  if (j.contains("potential")) {
    const json& p = j["potential"];
    only_keys(p, "/potential", {"catalog", "params"});
    if (!p.contains("catalog")) spec_error("/potential/catalog", "missing");
    PotentialRef ref;
    ref.catalog = string_at(p["catalog"], "/potential/catalog");
    if (p.contains("params")) {
      if (!p["params"].is_object()) spec_error("/potential/params", "expected an object");
      for (auto it = p["params"].begin(); it != p["params"].end(); ++it)
        ref.params[it.key()] = number_at(it.value(), "/potential/params/" + it.key());
    }
    validate_params(ref);
    n = resolve_potential(ref).n;
    s.potential = ref;
  } else if (s.pipeline != Pipeline::VERIFY) {
    spec_error("/potential", "required for pipeline " + std::string(to_string(s.pipeline)));
  }
  if (s.pipeline == Pipeline::SURFACE && !s.sym_variant) spec_error("/sym_variant", "required for SURFACE");

  if (j.contains("grid")) {
    const json& gj = j["grid"];
    only_keys(gj, "/grid", {"mode", "axes", "count", "half_width"});
    GridMode mode = default_mode(s);
    if (gj.contains("mode")) {
      std::string m = string_at(gj["mode"], "/grid/mode");
      if (m == "PARA") mode = GridMode::PARA;
      else if (m == "MORPHED") mode = GridMode::MORPHED;
      else spec_error("/grid/mode", "unknown value '" + m + "'");
    }
    GridSpec g;
    if (gj.contains("axes")) {
      if (gj.contains("count") || gj.contains("half_width")) spec_error("/grid", "give either axes or count/half_width");
      if (!gj["axes"].is_array()) spec_error("/grid/axes", "expected an array");
      g.mode = mode;
      for (size_t a = 0; a < gj["axes"].size(); ++a) {
        const std::string where = "/grid/axes/" + std::to_string(a);
        const json& aj = gj["axes"][a];
        only_keys(aj, where, {"min", "max", "count"});
        for (const char* k : {"min", "max", "count"})
          if (!aj.contains(k)) spec_error(where + "/" + k, "missing");
        g.axes.push_back(AxisSpec{number_at(aj["min"], where + "/min"), number_at(aj["max"], where + "/max"),
                                  int_at(aj["count"], where + "/count")});
      }
    } else {
      int count = gj.contains("count") ? int_at(gj["count"], "/grid/count") : (n == 1 ? 21 : 9);
      double hw = gj.contains("half_width") ? number_at(gj["half_width"], "/grid/half_width") : 1.0;
      if (!(hw > 0.0)) spec_error("/grid/half_width", "must be positive");
      if (count < 3 || count % 2 == 0) spec_error("/grid/count", "must be odd and at least 3");
      g = GridSpec::square(mode, n, count, hw);
    }
    check_grid(g, n);
    s.grid = g;
  }

  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) spec_error("/outputs", "expected an array");
    for (size_t i = 0; i < j["outputs"].size(); ++i) {
      const std::string where = "/outputs/" + std::to_string(i);
      const json& oj = j["outputs"][i];
      only_keys(oj, where, {"path", "format"});
      if (!oj.contains("path")) spec_error(where + "/path", "missing");
      OutputSpec o;
      o.path = string_at(oj["path"], where + "/path");
      o.format = oj.contains("format") ? enum_at(oj["format"], where + "/format", kFormats)
                                       : format_from_path(o.path, where + "/path");
      s.outputs.push_back(o);
    }
  }
  return s;
}

std::string serialize_spec(const RunSpec& s) {
  json j;
  if (s.potential) {
    json p = {{"catalog", s.potential->catalog}};
    if (!s.potential->params.empty()) {
      json params = json::object();
      for (const auto& [k, v] : s.potential->params) params[k] = v;
      p["params"] = params;
    }
    j["potential"] = p;
  }
  if (s.grid) j["grid"] = grid_to_json(*s.grid);
  j["band"] = s.band;
  j["pipeline"] = to_string(s.pipeline);
  if (s.sym_variant) j["sym_variant"] = to_string(*s.sym_variant);
  j["eval_parameter"] = s.eval_parameter;
  j["lambda_angle"] = s.lambda_angle;
  j["suite"] = s.suite;
  json outs = json::array();
  for (const auto& o : s.outputs) outs.push_back({{"path", o.path}, {"format", to_string(o.format)}});
  j["outputs"] = outs;
  return j.dump(2);
}

GridSpec default_grid(const RunSpec& s, const PotentialPair& P) {
  if (s.grid) return *s.grid;
  return GridSpec::square(default_mode(s), P.n, P.n == 1 ? 21 : 9, std::min(1.0, P.domain_half_width));
}

GridArg parse_grid_arg(const std::string& text) {
  GridArg a;
  int nx = 0, ny = 0, used = 0;
  double hw = 0.0;
  if (std::sscanf(text.c_str(), "%dx%d%n", &nx, &ny, &used) != 2)
    spec_error("/grid", "expected <nx>x<ny>[@<half-width>], got '" + text + "'");
  std::string rest = text.substr(used);
  if (!rest.empty()) {
    int used2 = 0;
    if (rest[0] != '@' || std::sscanf(rest.c_str() + 1, "%lf%n", &hw, &used2) != 1 ||
        static_cast<size_t>(used2) + 1 != rest.size() || !(hw > 0.0))
      spec_error("/grid", "bad half-width in '" + text + "'");
    a.half_width = hw;
  }
  if (nx < 3 || ny < 3 || nx % 2 == 0 || ny % 2 == 0) spec_error("/grid", "node counts must be odd and at least 3");
  a.nx = nx;
  a.ny = ny;
  return a;
}

GridSpec apply_grid_arg(const GridArg& a, GridMode mode, int n, double default_half_width) {
  const double hw = a.half_width.value_or(default_half_width);
  GridSpec g;
  g.mode = mode;
  if (mode == GridMode::PARA) {
    for (int i = 0; i < n; ++i) g.axes.push_back(AxisSpec{-hw, hw, a.nx});
    for (int i = 0; i < n; ++i) g.axes.push_back(AxisSpec{-hw, hw, a.ny});
  } else {
    for (int i = 0; i < n; ++i) {
      g.axes.push_back(AxisSpec{-hw, hw, a.nx});
      g.axes.push_back(AxisSpec{-hw, hw, a.ny});
    }
  }
  return g;
}

// ---------------------------------------------------------------------------------------------

namespace {
void require_plane(const SurfaceSample& s) {
  if (s.grid.axes.size() != 2) throw Error(ErrorKind::InvalidParams, "surface export needs a 2D grid");
  if (s.valid_count() == 0) throw Error(ErrorKind::NothingToExport, "surface has no valid nodes");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void export_obj(const SurfaceSample& s, std::ostream& os) {
  require_plane(s);
  const GridSpec& g = s.grid;
  os << "# loopmorph surface\n";
  os << "# potential: " << s.potential_id << "\n";
  os << "# variant: " << to_string(s.variant) << "\n";
  os << "# parameter: " << fmt(s.eval_parameter.real()) << " " << fmt(s.eval_parameter.imag()) << "\n";
  os << "# signature: " << to_string(s.signature) << "\n";
  os << "# grid: " << g.axes[0].count << "x" << g.axes[1].count << "\n";
  std::vector<long> vid(s.points.size(), 0);
  long next = 1;
  for (size_t i = 0; i < s.points.size(); ++i) {
    if (!s.valid[i]) continue;
    vid[i] = next++;
    const Vec3& p = s.points[i];
    os << "v " << fmt(p[0]) << " " << fmt(p[1]) << " " << fmt(p[2]) << "\n";
  }
  for (int i = 0; i + 1 < g.axes[0].count; ++i)
    for (int j = 0; j + 1 < g.axes[1].count; ++j) {
      size_t a = g.flatten({i, j}), b = g.flatten({i + 1, j}), c = g.flatten({i + 1, j + 1}), d = g.flatten({i, j + 1});
      if (s.valid[a] && s.valid[b] && s.valid[c] && s.valid[d])
        os << "f " << vid[a] << " " << vid[b] << " " << vid[c] << " " << vid[d] << "\n";
    }
}

void export_csv(const SurfaceSample& s, std::ostream& os) {
  require_plane(s);
  os << "x_param,y_param,X,Y,Z\n";
  for (size_t i = 0; i < s.points.size(); ++i) {
    if (!s.valid[i]) continue;
    auto mi = s.grid.unflatten(i);
    const Vec3& p = s.points[i];
    os << fmt(s.grid.axes[0].value(mi[0])) << "," << fmt(s.grid.axes[1].value(mi[1])) << "," << fmt(p[0]) << ","
       << fmt(p[1]) << "," << fmt(p[2]) << "\n";
  }
}

std::string export_surface(const SurfaceSample& s, OutputFormat f) {
  std::ostringstream os;
  if (f == OutputFormat::OBJ) export_obj(s, os);
  else if (f == OutputFormat::CSV) export_csv(s, os);
  else throw Error(ErrorKind::InvalidParams, std::string("not a surface format: ") + to_string(f));
  return os.str();
}

// ---------------------------------------------------------------------------------------------

namespace {
constexpr char kMagic[] = "LPFG1\n";
}

void write_frame_cache(std::ostream& os, const ExtendedFrame& F, const PotentialRef& ref) {
  json h;
  json params = json::object();
  for (const auto& [k, v] : ref.params) params[k] = v;
  h["potential"] = {{"catalog", ref.catalog}, {"params", params}};
  h["potential_id"] = F.potential_id;
  h["band"] = F.band;
  h["gauge_applied"] = F.gauge_applied;
  h["grid"] = grid_to_json(F.grid);
  h["nodes"] = F.loops.size();
  const std::string header = h.dump();
  os.write(kMagic, sizeof(kMagic) - 1);
  const uint64_t len = header.size();
  os.write(reinterpret_cast<const char*>(&len), sizeof len);
  os.write(header.data(), static_cast<std::streamsize>(len));
  for (size_t i = 0; i < F.loops.size(); ++i) {
    const uint8_t v = F.valid[i];
    os.write(reinterpret_cast<const char*>(&v), 1);
    if (v) write_loop(os, F.loops[i]);
  }
  if (!os) throw Error(ErrorKind::IoError, "failed writing frame cache");
}

std::pair<ExtendedFrame, PotentialRef> read_frame_cache(std::istream& is) {
  char magic[sizeof(kMagic) - 1];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw Error(ErrorKind::IoError, "not a frame cache (bad magic)");
  uint64_t len = 0;
  if (!is.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1u << 24))
    throw Error(ErrorKind::IoError, "corrupt frame cache header");
  std::string header(len, '\0');
  if (!is.read(header.data(), static_cast<std::streamsize>(len))) throw Error(ErrorKind::IoError, "truncated header");
  json h;
  PotentialRef ref;
  ExtendedFrame F;
  try {
    h = json::parse(header);
    ref.catalog = h.at("potential").at("catalog").get<std::string>();
    for (auto it = h["potential"]["params"].begin(); it != h["potential"]["params"].end(); ++it)
      ref.params[it.key()] = it.value().get<double>();
    F.potential_id = h.at("potential_id").get<std::string>();
    F.band = h.at("band").get<int>();
    F.gauge_applied = h.at("gauge_applied").get<bool>();
    const json& g = h.at("grid");
    F.grid.mode = g.at("mode").get<std::string>() == "PARA" ? GridMode::PARA : GridMode::MORPHED;
    for (const auto& a : g.at("axes"))
      F.grid.axes.push_back(AxisSpec{a.at("min").get<double>(), a.at("max").get<double>(), a.at("count").get<int>()});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad frame cache header: ") + e.what());
  }
  F.space = resolve_potential(ref).space;
  const size_t N = F.grid.node_count();
  if (h.at("nodes").get<size_t>() != N) throw Error(ErrorKind::IoError, "node count mismatch");
  F.loops.assign(N, TwistedLoop::identity(F.space.group.dim()));
  F.valid.assign(N, 0);
  F.failure.assign(N, "");
  F.rcond.assign(N, 0.0);
  for (size_t i = 0; i < N; ++i) {
    uint8_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 1)) throw Error(ErrorKind::IoError, "truncated node record");
    F.valid[i] = v ? 1 : 0;
    if (v) F.loops[i] = read_loop(is);
    else F.failure[i] = "not stored";
  }
  return {F, ref};
}

}  // namespace loopmorph
