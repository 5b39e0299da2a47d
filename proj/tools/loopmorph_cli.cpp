// Command-line front end: frame, morph, surface, verify, export.

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopmorph/cli_io.hpp"
#include "loopmorph/verify.hpp"

using namespace loopmorph;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpec = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

struct Flags {
  std::string spec_path;
  std::string potential;
  std::vector<std::string> params;  // k=v
  std::string grid;
  int band = 0;
  std::vector<std::string> outs;
  std::string suite;
  std::string variant;
  std::optional<double> theta;
  std::optional<double> lambda_angle;
  std::string frame_cache;
  int jobs = 0;
  bool quiet = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::SpecError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags override the run-spec file; everything then goes through parse_spec for validation.
RunSpec assemble(const Flags& f, Pipeline pipeline) {
  json j = json::object();
  if (!f.spec_path.empty()) {
    try {
      j = json::parse(slurp(f.spec_path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::SpecError, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::SpecError, ": run spec must be an object");
  }
  j["pipeline"] = to_string(pipeline);
  if (!f.potential.empty()) {
    j["potential"] = {{"catalog", f.potential}};
  }
  if (!f.params.empty()) {
    if (!j.contains("potential")) throw Error(ErrorKind::SpecError, "/potential: --param needs a potential");
    json& p = j["potential"]["params"];
    if (!p.is_object()) p = json::object();
    for (const auto& kv : f.params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::SpecError, "--param expects key=value, got '" + kv + "'");
      try {
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::SpecError, "--param value is not a number: '" + kv + "'");
      }
    }
  }
  if (f.band) j["band"] = f.band;
  if (!f.variant.empty()) j["sym_variant"] = f.variant;
  if (f.theta) j["eval_parameter"] = *f.theta;
  if (f.lambda_angle) j["lambda_angle"] = *f.lambda_angle;
  if (!f.suite.empty()) j["suite"] = f.suite;
  if (!f.outs.empty()) {
    j["outputs"] = json::array();
    for (const auto& o : f.outs) j["outputs"].push_back({{"path", o}});
  }
  RunSpec s = parse_spec(j.dump());
  if (!f.grid.empty() && s.potential) {
    auto P = resolve_potential(*s.potential);
    GridMode mode = pipeline == Pipeline::MORPH ? GridMode::MORPHED : GridMode::PARA;
    if (pipeline == Pipeline::SURFACE && s.sym_variant) mode = variant_mode(*s.sym_variant);
    s.grid = apply_grid_arg(parse_grid_arg(f.grid), mode, P.n, std::min(1.0, P.domain_half_width));
  }
  return s;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << bytes;
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

json frame_summary(const ExtendedFrame& F) {
  json j;
  j["potential_id"] = F.potential_id;
  j["nodes"] = F.loops.size();
  j["valid"] = F.valid_count();
  j["band"] = F.band;
  j["gauge_applied"] = F.gauge_applied;
  json failed = json::array();
  for (size_t i = 0; i < F.valid.size(); ++i)
    if (!F.valid[i]) failed.push_back({{"node", i}, {"reason", F.failure[i]}});
  j["failed"] = failed;
  return j;
}

void require_base(const ExtendedFrame& F) {
  const size_t b = F.grid.base_node();
  if (!F.valid[b]) throw Error(ErrorKind::NotInBigCell, "base point not factorizable: " + F.failure[b]);
}

void emit_frame(const RunSpec& s, const ExtendedFrame& F, bool quiet) {
  for (const auto& o : s.outputs) {
    switch (o.format) {
      case OutputFormat::FRAME_CACHE: {
        std::ostringstream os(std::ios::binary);
        write_frame_cache(os, F, *s.potential);
        write_file(o.path, os.str());
        break;
      }
      case OutputFormat::REPORT_JSON:
        write_file(o.path, frame_summary(F).dump(2) + "\n");
        break;
      case OutputFormat::REPORT_TEXT:
        write_file(o.path, frame_summary(F).dump() + "\n");
        break;
      default:
        throw Error(ErrorKind::SpecError, "/outputs: " + std::string(to_string(o.format)) +
                                              " needs a surface; use the surface or export subcommand");
    }
  }
  if (!quiet)
    std::cout << F.potential_id << ": " << F.valid_count() << "/" << F.loops.size() << " nodes factorized"
              << (F.gauge_applied ? " (unitarized)" : "") << "\n";
}

ExtendedFrame make_frame(const RunSpec& s, GridMode mode) {
  auto P = resolve_potential(*s.potential);
  RunSpec t = s;
  if (!t.grid) {
    t.pipeline = mode == GridMode::MORPHED ? Pipeline::MORPH : Pipeline::FRAME;
  }
  GridSpec g = default_grid(t, P);
  if (g.mode != mode) throw Error(ErrorKind::SpecError, "/grid/mode: expected " + std::string(mode == GridMode::PARA ? "PARA" : "MORPHED"));
  BuildOptions opt;
  opt.band = s.band;
  ExtendedFrame F;
  if (mode == GridMode::PARA) {
    F = build_frame_grid(P, g, opt);
    require_base(F);
  } else {
    F = morph_frame(P, g, opt);
    require_base(F);
    F = unitarize(F, P.space.nu1).first;
  }
  return F;
}

cd eval_point(const RunSpec& s, SymVariant v) {
  if (variant_mode(v) == GridMode::MORPHED) return std::polar(1.0, s.lambda_angle);
  return s.eval_parameter;
}

void emit_surface(const RunSpec& s, const SurfaceSample& S, bool quiet) {
  bool wrote = false;
  for (const auto& o : s.outputs) {
    if (o.format != OutputFormat::OBJ && o.format != OutputFormat::CSV)
      throw Error(ErrorKind::SpecError, "/outputs: surface output must be OBJ or CSV");
    write_file(o.path, export_surface(S, o.format));
    wrote = true;
  }
  if (!wrote) std::cout << export_surface(S, OutputFormat::CSV);
  if (!quiet)
    std::cerr << to_string(S.variant) << ": " << S.valid_count() << "/" << S.points.size() << " points\n";
}

int run(const std::string& sub, const Flags& f) {
  if (f.jobs > 0) omp_set_num_threads(f.jobs);
  if (sub == "frame" || sub == "morph") {
    const bool morph = sub == "morph";
    RunSpec s = assemble(f, morph ? Pipeline::MORPH : Pipeline::FRAME);
    emit_frame(s, make_frame(s, morph ? GridMode::MORPHED : GridMode::PARA), f.quiet);
    return kExitOk;
  }
  if (sub == "surface") {
    RunSpec s = assemble(f, Pipeline::SURFACE);
    const SymVariant v = *s.sym_variant;
    ExtendedFrame F = make_frame(s, variant_mode(v));
    emit_surface(s, sym_formula(F, v, eval_point(s, v)), f.quiet);
    return kExitOk;
  }
  if (sub == "export") {
    if (f.frame_cache.empty()) throw Error(ErrorKind::SpecError, "--frame is required");
    if (f.variant.empty()) throw Error(ErrorKind::SpecError, "--variant is required");
    std::ifstream in(f.frame_cache, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read '" + f.frame_cache + "'");
    auto [F, ref] = read_frame_cache(in);
    Flags g = f;
    g.potential = ref.catalog;
    g.params.clear();
    for (const auto& [k, v] : ref.params) g.params.push_back(k + "=" + std::to_string(v));
    g.grid.clear();
    g.spec_path.clear();
    RunSpec s = assemble(g, Pipeline::SURFACE);
    const SymVariant v = *s.sym_variant;
    emit_surface(s, sym_formula(F, v, eval_point(s, v)), f.quiet);
    return kExitOk;
  }
  // verify
  RunSpec s = assemble(f, Pipeline::VERIFY);
  VerifyOptions opt;
  opt.band = s.band;
  opt.random_loop_band = std::min(opt.random_loop_band, s.band);
  if (!f.quiet) opt.progress = &std::cerr;
  VerificationReport rep = run_verification_suite(s.suite, opt);
  bool wrote_text = false;
  for (const auto& o : s.outputs) {
    if (o.format == OutputFormat::REPORT_JSON) write_file(o.path, rep.to_json() + "\n");
    else if (o.format == OutputFormat::REPORT_TEXT) write_file(o.path, rep.to_text()), wrote_text = true;
    else throw Error(ErrorKind::SpecError, "/outputs: verify writes .json or .txt reports");
  }
  if (!wrote_text) std::cout << rep.to_text();
  return rep.pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loopmorph: loop-group frames, morphing and Sym surfaces"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* c, bool potential) {
    c->add_option("--spec", f.spec_path, "JSON run spec")->check(CLI::ExistingFile);
    c->add_option("--band", f.band, "working Laurent band")->check(CLI::Range(8, 128));
    c->add_option("--out", f.outs, "output path; format from extension (.obj .csv .lpfg .json .txt)");
    c->add_option("--jobs", f.jobs, "OpenMP threads")->check(CLI::PositiveNumber);
    c->add_flag("--quiet", f.quiet, "suppress progress");
    if (potential) {
      c->add_option("--potential", f.potential, "catalog potential name");
      c->add_option("--param", f.params, "potential parameter key=value");
      c->add_option("--grid", f.grid, "<nx>x<ny>[@<half-width>]");
    }
  };
  auto* frame = app.add_subcommand("frame", "extended frame on a para grid");
  common(frame, true);
  auto* morph = app.add_subcommand("morph", "morphed and unitarized frame on a complex grid");
  common(morph, true);
  auto* surface = app.add_subcommand("surface", "Sym surface");
  common(surface, true);
  for (auto* c : {surface}) {
    c->add_option("--variant", f.variant, "Sym variant");
    c->add_option("--theta", f.theta, "loop parameter for para variants");
    c->add_option("--lambda-angle", f.lambda_angle, "lambda = exp(i angle) for morphed variants");
  }
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, false);
  verify->add_option("--suite", f.suite, "suite name");
  auto* exp = app.add_subcommand("export", "surface from a cached frame");
  common(exp, false);
  exp->add_option("--frame", f.frame_cache, "frame cache (.lpfg)")->check(CLI::ExistingFile);
  exp->add_option("--variant", f.variant, "Sym variant");
  exp->add_option("--theta", f.theta, "loop parameter for para variants");
  exp->add_option("--lambda-angle", f.lambda_angle, "lambda = exp(i angle) for morphed variants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitSpec;
  }
  try {
    return run(app.get_subcommands().front()->get_name(), f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::SpecError || e.kind() == ErrorKind::InvalidParams ||
                   e.kind() == ErrorKind::DomainError
               ? kExitSpec : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
