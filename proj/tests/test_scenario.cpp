#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "output.hpp"
#include "scenario.hpp"

using namespace curveflow;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("curveflow_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_error_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("preset catalog") {
  const auto& presets = list_presets();
  CHECK(presets.size() >= 7);
  for (const char* name : {"ap-h25", "ap-a34", "ap-negarea-78", "ap-zeroarea-78", "lp-h25",
                           "lp-eneg-32", "circle-m3"}) {
    const Preset* p = find_preset(name);
    REQUIRE(p);
    CHECK_FALSE(p->clause.empty());
    CHECK_NOTHROW(p->curve.validate());
  }
  CHECK(find_preset("nope") == nullptr);

  const auto neg = generate_support(find_preset("ap-negarea-78")->curve, 512);
  CHECK(geometry(neg).A == doctest::Approx(-0.672).epsilon(1e-3));

  // Zero-area coefficient: a^2 = (b^2/2)((n/m)^2 - 1) = 15/98 for b = 1, (m, n) = (7, 8).
  const double a0 = zero_area_offset(1.0, 8, 7);
  CHECK(a0 == doctest::Approx(std::sqrt(15.0 / 98.0)).epsilon(1e-14));
  const auto zero = generate_support(find_preset("ap-zeroarea-78")->curve, 1024);
  CHECK(std::abs(geometry(zero).A) <= 1e-10);
  CHECK_THROWS_AS(zero_area_offset(1.0, 2, 3), SpecError);

  const auto eneg = find_preset("lp-eneg-32");
  const auto s = generate_support(eneg->curve, 512);
  const auto d = snapshot(s, {1.0, 3, eneg->kind});
  CHECK(d.E < 0);
  CHECK(d.isop_gap < 0);
}

TEST_CASE("config parsing") {
  SUBCASE("a preset name fills every field") {
    const auto c = parse_config_text("preset = ap-h25\n", "x");
    CHECK(c.N == 512);
    CHECK(c.ctl.cfl == 0.25);
    CHECK(c.tol_conv == 1e-3);
    CHECK(c.ctl.kappa_blowup == 1e6);
    CHECK(c.params.alpha == 1.0);
    CHECK(c.params.m == 2);
    CHECK(c.params.kind == FlowKind::AreaPreserving);
    CHECK(c.expected == Expectation::Converged);
    CHECK(c.ctl.dt_min == doctest::Approx(1e-12 * c.ctl.t_end));
    CHECK(std::get<CosinePerturbed>(c.curve.shape).b == 0.12);
  }
  SUBCASE("explicit curve and overrides") {
    const auto c = parse_config_text(
        "# comment\n"
        "curve.type = cosine\ncurve.m = 3\ncurve.a = 1\ncurve.b = 0.3\ncurve.n = 2\n"
        "flow.kind = LP\nflow.alpha = 2  # trailing comment\ngrid.N = 256\n"
        "ctl.t_end = 4\nexpected = BlowUp\nrender_times = 0.5, 0.1\n");
    CHECK(c.params.kind == FlowKind::LengthPreserving);
    CHECK(c.params.alpha == 2.0);
    CHECK(c.params.m == 3);
    CHECK(c.N == 256);
    CHECK(c.ctl.t_end == 4.0);
    CHECK(c.ctl.sample_interval == doctest::Approx(0.02));
    CHECK(c.expected == Expectation::BlowUp);
    REQUIRE(c.render_times.size() == 2);
    CHECK(c.render_times[0] == 0.1);
  }
  SUBCASE("preset with overrides") {
    const auto c = parse_config_text("preset = lp-eneg-32\nflow.alpha = 2\ngrid.N = 128\n");
    CHECK(c.params.alpha == 2.0);
    CHECK(c.N == 128);
    CHECK(c.ctl.t_end == doctest::Approx(5.0));
  }
  SUBCASE("errors carry line numbers") {
    CHECK(parse_error_line("preset = ap-h25\nflow.kind = XP\n") == 2);
    CHECK(parse_error_line("\n\nbogus = 1\n") == 3);
    CHECK(parse_error_line("curve.a 1\n") == 1);
    CHECK(parse_error_line("curve.type = cosine\ncurve.a = one\n") == 2);
    CHECK(parse_error_line("grid.N = 64\ngrid.N = 128\n") == 2);
    CHECK(parse_error_line("preset = nothing\n") == 1);
    CHECK(parse_error_line("expected = maybe\n") == 1);
    CHECK(parse_error_line("curve.type = spiral\n") == 1);
  }
  SUBCASE("validation errors") {
    CHECK_THROWS_AS(parse_config_text("curve.type = cosine\ncurve.m = 2\ncurve.a = 1\n"
                                      "curve.b = 0.5\ncurve.n = 5\n"),
                    ConvexityError);
    CHECK_THROWS_AS(parse_config_text("grid.N = 511\n"), SpecError);
    CHECK_THROWS_AS(parse_config_text("flow.alpha = -1\n"), SpecError);
    CHECK_THROWS_AS(parse_config(fs::temp_directory_path() / "no_such_curveflow.cfg"), IoError);
  }
  SUBCASE("sample files resolve relative to the config") {
    const auto dir = scratch("samples");
    {
      std::ofstream os(dir / "h.txt");
      os << "1 16\n";
      for (int j = 0; j < 16; ++j) os << 2.0 << '\n';
    }
    {
      std::ofstream os(dir / "run.cfg");
      os << "curve.type = samples\ncurve.file = h.txt\nctl.t_end = 0.1\n";
    }
    const auto c = parse_config(dir / "run.cfg");
    CHECK(c.N == 16);
    CHECK(c.curve.m == 1);
    CHECK(c.name == "run");
    fs::remove_all(dir);
  }
}

TEST_CASE("output formats") {
  const auto s = generate_support({CosinePerturbed{1.0, 0.12, 5}, 2}, 64);
  const FlowParams p{1.5, 2, FlowKind::LengthPreserving};

  std::ostringstream os;
  write_timeseries_row(os, snapshot(s, p));
  const std::string row = os.str();
  CHECK(std::count(row.begin(), row.end(), ',') == 15);

  const std::string line = snapshot_json(s, p);
  CHECK(line.find('\n') == std::string::npos);
  FlowParams back_params;
  const auto back = parse_snapshot_json(line, &back_params);
  CHECK(back_params.alpha == 1.5);
  CHECK(back_params.kind == FlowKind::LengthPreserving);
  for (int j = 0; j < 64; ++j) CHECK(back.h[j] == s.h[j]);
  CHECK_THROWS_AS(parse_snapshot_json("{\"t\": 1}"), ParseError);
  CHECK_THROWS_AS(parse_snapshot_json("not json"), ParseError);

  const std::string svg = svg_document(s);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("fill=\"none\"") != std::string::npos);
  CHECK(svg.find("Z\"") != std::string::npos);
  CHECK(svg.find("<title>") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  CHECK(time_stamp(0.0) == "0.000000");
  CHECK(time_stamp(1.25) == "1.250000");
}

TEST_CASE("scenario runs") {
  const auto dir = scratch("runs");

  SUBCASE("circle: artifacts, drift, and bit-reproducible CSV") {
    auto cfg = config_from_preset(*find_preset("circle-m3"), 1.0);
    cfg.N = 64;
    cfg.out_dir = dir / "a";
    const auto r = run_scenario(cfg);
    CHECK(r.exit_status == kExitOk);
    for (const char* f : {"timeseries.csv", "snapshots.jsonl", "report.txt",
                          "curve_t0.000000.svg", "curve_t1.000000.svg"})
      CHECK(fs::exists(cfg.out_dir / f));
    const std::string csv = slurp(cfg.out_dir / "timeseries.csv");
    CHECK(csv.substr(0, csv.find('\n')) == kTimeseriesHeader);
    double drift = 0.0;
    for (int j = 0; j < 64; ++j) drift = std::max(drift, std::abs(r.outcome.final_state.h[j] - 1.0));
    CHECK(drift <= 1e-10);

    cfg.out_dir = dir / "b";
    CHECK(run_scenario(cfg).exit_status == kExitOk);
    CHECK(slurp(dir / "a" / "timeseries.csv") == slurp(dir / "b" / "timeseries.csv"));
    CHECK(slurp(dir / "a" / "snapshots.jsonl") == slurp(dir / "b" / "snapshots.jsonl"));
  }
  SUBCASE("snapshots reproduce their diagnostics") {
    auto cfg = config_from_preset(*find_preset("ap-h25"), 1.0);
    cfg.N = 128;
    cfg.out_dir = dir / "h25";
    const auto r = run_scenario(cfg);
    CHECK(r.exit_status == kExitOk);
    std::ifstream in(cfg.out_dir / "snapshots.jsonl");
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
      REQUIRE(i < r.outcome.series.size());
      FlowParams p;
      const auto s = parse_snapshot_json(line, &p);
      const auto d = snapshot(s, p);
      const auto& e = r.outcome.series[i++];
      CHECK(d.t == e.t);
      for (auto [x, y] : {std::pair{d.L, e.L}, std::pair{d.A, e.A}, std::pair{d.E, e.E},
                          std::pair{d.kappa_max, e.kappa_max}, std::pair{d.psi_max, e.psi_max},
                          std::pair{d.F_int, e.F_int}, std::pair{d.lambda, e.lambda}})
        CHECK(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)));
    }
    CHECK(i == r.outcome.series.size());
  }
  SUBCASE("verdict mismatch exits with 2") {
    auto cfg = config_from_preset(*find_preset("circle-m3"), 1.0);
    cfg.N = 32;
    cfg.expected = Expectation::Converged;
    cfg.out_dir = dir / "mismatch";
    CHECK(run_scenario(cfg).exit_status == kExitMismatch);
    cfg.expected = Expectation::Explore;
    CHECK(run_scenario(cfg).exit_status == kExitOk);
  }
  SUBCASE("a failed monitor exits with 3") {
    // Property P is required but the (3, 2) cosine curve does not satisfy it.
    auto cfg = parse_config_text(
        "curve.type = cosine\ncurve.m = 3\ncurve.a = 1\ncurve.b = 0.3\ncurve.n = 2\n"
        "grid.N = 64\nctl.t_end = 0.05\nmonitor.al_shape = true\nexpected = explore\n");
    cfg.out_dir = dir / "invariant";
    const auto r = run_scenario(cfg);
    CHECK(r.exit_status == kExitInvariant);
    REQUIRE(r.report.find("property_p"));
    CHECK_FALSE(r.report.find("property_p")->passed);
    CHECK(slurp(cfg.out_dir / "report.txt").find("FAIL  property_p") != std::string::npos);
  }
  SUBCASE("unwritable output is an I/O error") {
    std::ofstream(dir / "file") << "x";
    auto cfg = config_from_preset(*find_preset("circle-m3"), 1.0);
    cfg.N = 32;
    cfg.out_dir = dir / "file" / "sub";
    CHECK_THROWS_AS(run_scenario(cfg), IoError);
  }
  fs::remove_all(dir);
}
