#include <sstream>

#include "doctest.h"
#include "loopmorph/cli_io.hpp"

using namespace loopmorph;

namespace {
std::string spec_error_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SpecError) return e.what();
    return std::string("other: ") + e.what();
  }
  return "";
}

size_t count_prefix(const std::string& text, const std::string& p) {
  std::istringstream is(text);
  std::string line;
  size_t n = 0;
  while (std::getline(is, line)) n += line.rfind(p, 0) == 0;
  return n;
}

SurfaceSample tiny_surface(int count) {
  SurfaceSample s;
  s.grid = GridSpec::square(GridMode::PARA, 1, count, 1.0);
  for (size_t i = 0; i < s.grid.node_count(); ++i) {
    s.points.push_back({double(i), 0.5, -1.0});
    s.valid.push_back(1);
  }
  return s;
}
}  // namespace

TEST_CASE("parse_spec examples") {
  auto a = parse_spec(R"({"potential":{"catalog":"cylinder"},"pipeline":"SURFACE","sym_variant":"R31_TIMELIKE"})");
  CHECK(a.pipeline == Pipeline::SURFACE);
  CHECK(a.sym_variant == SymVariant::R31_TIMELIKE);
  CHECK(a.band == 32);
  CHECK(spec_error_of(R"({"potential":{"catalog":"smyth","params":{"m":0}}})").find("/potential/params/m") !=
        std::string::npos);
  auto c = parse_spec(R"({"potential":{"catalog":"toda_conic","params":{"b":0.5}},"pipeline":"VERIFY"})");
  CHECK(c.pipeline == Pipeline::VERIFY);
  CHECK(c.potential->params.at("b") == 0.5);
}

TEST_CASE("schema violations carry JSON pointers") {
  CHECK(spec_error_of(R"({"potential":{"catalog":"cylinder"},"extra":1})").find("/extra") != std::string::npos);
  CHECK(spec_error_of(R"({"potential":{"catalog":"cylinder"},"band":4})").find("/band") != std::string::npos);
  CHECK(spec_error_of(R"({"potential":{"catalog":"cylinder"},"band":129})").find("/band") != std::string::npos);
  CHECK(spec_error_of(R"({"potential":{"catalog":"nowhere"}})").find("/potential") != std::string::npos);
  CHECK(spec_error_of(R"({"potential":{"catalog":"cylinder"},"pipeline":"SURFACE"})").find("/sym_variant") !=
        std::string::npos);
  CHECK(spec_error_of(R"({"potential":{"catalog":"cylinder"},"grid":{"count":4}})").find("/grid") !=
        std::string::npos);
  CHECK(spec_error_of(R"({"potential":{"catalog":"cylinder"},"outputs":[{"path":"x.png"}]})").find("/outputs/0") !=
        std::string::npos);
  CHECK_FALSE(spec_error_of("{not json").empty());
}

TEST_CASE("serialize then parse is the identity") {
  auto s = parse_spec(R"({"potential":{"catalog":"smyth","params":{"m":2}},"pipeline":"SURFACE",
      "sym_variant":"R31_TIMELIKE","band":24,"eval_parameter":1.5,"grid":{"count":11,"half_width":0.5},
      "outputs":[{"path":"a.obj"},{"path":"b.csv"}]})");
  auto t = parse_spec(serialize_spec(s));
  CHECK(t == s);
  CHECK(serialize_spec(t) == serialize_spec(s));
}

TEST_CASE("default grid") {
  auto s = parse_spec(R"({"potential":{"catalog":"cylinder"}})");
  auto g = default_grid(s, resolve_potential(*s.potential));
  CHECK(g.axes.size() == 2);
  CHECK(g.axes[0].count == 21);
  CHECK(g.axes[0].min == -1.0);
  auto s2 = parse_spec(R"({"potential":{"catalog":"sp2"}})");
  CHECK(default_grid(s2, resolve_potential(*s2.potential)).axes.size() == 4);
}

TEST_CASE("grid arguments") {
  auto a = parse_grid_arg("33x17@0.5");
  CHECK(a.nx == 33);
  CHECK(a.ny == 17);
  CHECK(*a.half_width == 0.5);
  CHECK_FALSE(parse_grid_arg("9x9").half_width.has_value());
  CHECK_THROWS_AS(parse_grid_arg("9by9"), Error);
  auto g = apply_grid_arg(a, GridMode::PARA, 1, 1.0);
  CHECK(g.axes[1].count == 17);
}

TEST_CASE("OBJ export counts") {
  auto s = tiny_surface(3);
  auto two = tiny_surface(2);
  GridSpec g2;
  g2.axes = {{-1.0, 1.0, 2}, {-1.0, 1.0, 2}};
  two.grid = g2;
  std::string obj = export_surface(two, OutputFormat::OBJ);
  CHECK(count_prefix(obj, "v ") == 4);
  CHECK(count_prefix(obj, "f ") == 1);
  s.valid[s.grid.flatten({1, 1})] = 0;
  obj = export_surface(s, OutputFormat::OBJ);
  CHECK(count_prefix(obj, "v ") == 8);
  CHECK(count_prefix(obj, "f ") == 0);
  s.valid[s.grid.flatten({1, 1})] = 1;
  s.valid[s.grid.flatten({0, 0})] = 0;
  CHECK(count_prefix(export_surface(s, OutputFormat::OBJ), "f ") == 3);
}

TEST_CASE("cylinder export is deterministic") {
  auto P = catalog_potential(CatalogName::CYLINDER);
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 21, 1.0));
  auto S = sym_formula(F, SymVariant::R31_TIMELIKE);
  std::string a = export_surface(S, OutputFormat::OBJ);
  CHECK(count_prefix(a, "v ") == 441);
  CHECK(count_prefix(a, "f ") == 400);
  CHECK(a.find("LORENTZ_1") != std::string::npos);
  auto F2 = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 21, 1.0));
  CHECK(export_surface(sym_formula(F2, SymVariant::R31_TIMELIKE), OutputFormat::OBJ) == a);
  std::string csv = export_surface(S, OutputFormat::CSV);
  CHECK(csv.rfind("x_param,y_param,X,Y,Z\n", 0) == 0);
  CHECK(count_prefix(csv, "") == 442);
}

TEST_CASE("empty surfaces cannot be exported") {
  auto s = tiny_surface(3);
  std::fill(s.valid.begin(), s.valid.end(), 0);
  try {
    export_surface(s, OutputFormat::OBJ);
    FAIL("expected NothingToExport");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NothingToExport);
  }
}

TEST_CASE("frame cache round trip") {
  PotentialRef ref{"smyth", {{"m", 1.0}}};
  auto P = resolve_potential(ref);
  auto F = build_frame_grid(P, GridSpec::square(GridMode::PARA, 1, 5, 0.5));
  std::stringstream ss;
  write_frame_cache(ss, F, ref);
  CHECK(ss.str().rfind("LPFG1\n", 0) == 0);
  auto [G, r2] = read_frame_cache(ss);
  CHECK(r2 == ref);
  CHECK(G.grid == F.grid);
  CHECK(G.band == F.band);
  for (size_t i = 0; i < F.loops.size(); ++i) CHECK(coef_distance(G.loops[i], F.loops[i]) == 0.0);
  std::stringstream bad("LPFX1\nxxxx");
  CHECK_THROWS_AS(read_frame_cache(bad), Error);
}
