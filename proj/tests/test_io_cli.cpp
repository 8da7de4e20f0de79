#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "perbif/cli.hpp"
#include "perbif/io.hpp"

using namespace perbif;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("perbif_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& cmd, const json& cfg, const fs::path& out, bool allow_outside = false) {
  cli::Flags f;
  f.out = out;
  f.allow_outside = allow_outside;
  std::ostringstream err;
  return cli::run_command(cmd, cfg, f, err);
}

}  // namespace

TEST_CASE("dump is deterministic and keeps full precision") {
  const json a = json::parse(R"({"b": 0.1, "a": [1, 2.0], "c": {"y": 1e-300, "x": 3}})");
  const json b = json::parse(R"({"c": {"x": 3, "y": 1e-300}, "a": [1, 2.0], "b": 0.1})");
  CHECK(dump(a) == dump(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash(json::parse(R"({"b": 0.1})")));
  const json back = json::parse(dump(a));
  CHECK(back["b"].get<double>() == 0.1);
  CHECK(back["c"]["y"].get<double>() == 1e-300);
  CHECK(json::parse(dump(json(std::nan("")))).is_null());
}

TEST_CASE("complex and parameter parsing") {
  CHECK(complex_from_json(json(2.5)) == cplx(2.5, 0.0));
  CHECK(complex_from_json(json::parse("[1, -2]")) == cplx(1.0, -2.0));
  CHECK(complex_from_json(json::parse(R"({"re": 3, "im": 4})")) == cplx(3.0, 4.0));
  CHECK_THROWS(complex_from_json(json("x")));
  const auto p = param_from_json(json::parse(R"({"d": 3, "c": [[0.5, 0]], "a": [0, 1]})"));
  CHECK(p.d == 3);
  CHECK(p.c.at(0) == cplx(0.5, 0.0));
  CHECK(p.a == cplx(0.0, 1.0));
  CHECK_THROWS(param_from_json(json::parse(R"({"a": 1})")));
  const auto back = param_from_json(to_json(p));
  CHECK(back.a == p.a);
  CHECK(back.c == p.c);
  CHECK_THROWS_AS(slice_from_json(json::parse(R"({"half_width": -1})"), 2), ConfigError);
}

TEST_CASE("field files round trip") {
  const auto dir = scratch("field");
  GridField f;
  f.slice = SliceSpec::quadratic_a(cplx(0.25, -0.5), 1.5, 8);
  f.kind = FieldKind::L_n;
  f.n = 3;
  f.w = cplx(0.1, 0.2);
  f.values.resize(f.slice.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(0.37 * static_cast<double>(i));
  f.values[5] = std::nan("");
  f.mask.assign(f.values.size(), 0);
  f.mask[10] = f.mask[11] = f.mask[40] = 1;
  f.count_nan();
  write_field(f, dir / "g");
  const auto g = read_field(dir / "g");
  CHECK(g.kind == f.kind);
  CHECK(g.n == 3);
  CHECK(g.w == f.w);
  CHECK(g.slice.center == f.slice.center);
  CHECK(g.slice.resolution == 8);
  CHECK(g.nan_count == 1);
  REQUIRE(g.values.size() == f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (i != 5) CHECK(g.values[i] == f.values[i]);
  CHECK(std::isnan(g.values[5]));
  CHECK(g.mask == f.mask);
}

TEST_CASE("spectrum command") {
  const auto dir = scratch("spectrum");
  const json cfg = {{"family", {{"d", 2}, {"a", json::array({0.0, 0.0})}}}, {"n", 2}};
  CHECK(run("spectrum", cfg, dir) == cli::ok);
  const json out = json::parse(read_text(dir / "spectrum.json"));
  REQUIRE(out["values"].size() == 1);
  CHECK(out["values"][0][0].get<double>() == doctest::Approx(4.0));
  CHECK(out["size"] == 1);
  CHECK(out["cycles"].size() == 3);
  const json man = json::parse(read_text(dir / "spectrum_manifest.json"));
  CHECK(man["config_hash"] == config_hash(cfg));
  CHECK(man["exit_code"] == 0);
}

TEST_CASE("lyapunov command") {
  const auto dir = scratch("lyapunov");
  const json cfg = {{"family", {{"d", 2}, {"a", 0.3}}}, {"n", 6}};
  CHECK(run("lyapunov", cfg, dir) == cli::ok);
  const json out = json::parse(read_text(dir / "lyapunov.json"));
  const double cg = out["critical_green"]["value"].get<double>();
  CHECK(cg >= std::log(2.0) - 1e-12);
  CHECK(out["delta"].get<double>() >= 0.0);
}

TEST_CASE("config errors exit with 1") {
  const auto dir = scratch("errors");
  CHECK(run("spectrum", json::parse(R"({"family": {"d": 1, "a": 0}, "n": 1})"), dir) == cli::config_error);
  CHECK(run("spectrum", json::parse(R"({"family": {"d": 2, "a": 0}})"), dir) == cli::config_error);
  CHECK(run("no-such-command", json::object(), dir) == cli::config_error);
  const json field = {{"family", {{"d", 2}, {"a", 0}}},
                      {"field", "L_n_plus"},
                      {"slice", {{"half_width", 1.0}, {"resolution", 8}}}};
  CHECK(run("field", field, dir) == cli::config_error);
  const json eq = {{"family", {{"d", 2}, {"a", 0}}},
                   {"slice", {{"half_width", 2.0}, {"resolution", 16}}},
                   {"periods", {1}},
                   {"w", json::array({2.0, 0.0})}};
  CHECK(run("equidist", eq, dir) == cli::config_error);
}

TEST_CASE("equidist command writes reports and is reproducible") {
  const json eq = {{"family", {{"d", 2}, {"a", 0}}},
                   {"slice", {{"half_width", 2.0}, {"resolution", 16}}},
                   {"periods", {1, 2}},
                   {"ws", {json::array({0.0, 0.0}), json::array({1.0, 0.0})}}};
  const auto d1 = scratch("eq1"), d2 = scratch("eq2");
  CHECK(run("equidist", eq, d1) == cli::ok);
  CHECK(run("equidist", eq, d2) == cli::ok);
  CHECK(read_text(d1 / "equidist.json") == read_text(d2 / "equidist.json"));
  CHECK(read_text(d1 / "equidist.csv") == read_text(d2 / "equidist.csv"));
  const json out = json::parse(read_text(d1 / "equidist.json"));
  CHECK(out["reports"].size() == 2);
  const auto csv = read_text(d1 / "equidist.csv");
  CHECK(csv.rfind("w_re,w_im,n,l1_error,count,mass,failed", 0) == 0);
}

TEST_CASE("field and bifmeasure commands") {
  const auto dir = scratch("field_cmd");
  const json cfg = {{"family", {{"d", 2}, {"a", 0}}},
                    {"field", "L"},
                    {"slice", {{"half_width", 2.5}, {"resolution", 32}}}};
  CHECK(run("field", cfg, dir) == cli::ok);
  CHECK(fs::exists(dir / "field_L.bin"));
  const json bm = {{"family", {{"d", 2}, {"a", 0}}}, {"input", (dir / "field_L").string()}};
  CHECK(run("bifmeasure", bm, dir) == cli::ok);
  const json sum = json::parse(read_text(dir / "bifmeasure_summary.json"));
  CHECK(sum.dump().find("mass") != std::string::npos);
}
