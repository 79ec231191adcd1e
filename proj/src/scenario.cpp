#include "scenario.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "output.hpp"

namespace curveflow {

using std::numbers::pi;

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::Converged:
      return "Converged";
    case Expectation::BlowUp:
      return "BlowUp";
    case Expectation::TimeLimit:
      return "TimeLimit";
    case Expectation::Explore:
      break;
  }
  return "explore";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Expectation parse_expectation(std::string_view text) {
  const std::string t = lower(text);
  if (t == "converged") return Expectation::Converged;
  if (t == "blowup" || t == "blow-up") return Expectation::BlowUp;
  if (t == "timelimit" || t == "time-limit") return Expectation::TimeLimit;
  if (t == "explore") return Expectation::Explore;
  throw SpecError("unknown expected verdict '" + std::string(text) +
                  "' (Converged, BlowUp, TimeLimit or explore)");
}

double cosine_area(const CosinePerturbed& c, int m) {
  const double k = static_cast<double>(c.n) / m;
  return m * pi * (c.a * c.a + 0.5 * c.b * c.b * (1.0 - k * k));
}

double zero_area_offset(double b, int n, int m) {
  const double k = static_cast<double>(n) / m;
  if (!(k > 1.0) || b == 0.0)
    throw SpecError("zero algebraic area needs n > m and b != 0 in the cosine family");
  auto area = [&](double a) { return cosine_area({a, b, n}, m); };
  const double hi = std::abs(b) * k;  // area(hi) > 0, area(0) < 0
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      area, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (bracket.first + bracket.second);
}

const std::vector<Preset>& list_presets() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> p;
    p.push_back({"ap-h25", "AP, n-fold symmetric with n > 2m: exists for all time, converges to an m-fold circle",
                 "pentagram-like curve, m=2, n=5, h = 1 + 0.12 cos(5 theta / 2)",
                 {CosinePerturbed{1.0, 0.12, 5}, 2}, FlowKind::AreaPreserving,
                 Expectation::Converged, 20.0, 512});
    p.push_back({"ap-a34", "AP, property P with m < n < 2m: exists for all time, converges to an m-fold circle",
                 "Abresch-Langer type curve, m=3, n=4, h = 1 + 0.5 cos(4 theta / 3)",
                 {CosinePerturbed{1.0, 0.5, 4}, 3}, FlowKind::AreaPreserving,
                 Expectation::Converged, 20.0, 512, true});
    p.push_back({"ap-negarea-78", "AP, L0^2 < 4 m pi A0 (here A0 < 0): a singularity forms in finite time",
                 "negative algebraic area, m=7, n=8, h = 0.35 + cos(8 theta / 7)",
                 {CosinePerturbed{0.35, 1.0, 8}, 7}, FlowKind::AreaPreserving,
                 Expectation::BlowUp, 10.0, 1024});
    p.push_back({"ap-zeroarea-78", "AP, A0 = 0: no convergence to an m-fold circle; expected to shrink to a point",
                 "zero algebraic area, m=7, n=8, a tuned so that A0 = 0",
                 {CosinePerturbed{zero_area_offset(1.0, 8, 7), 1.0, 8}, 7},
                 FlowKind::AreaPreserving, Expectation::Explore, 10.0, 1024});
    p.push_back({"lp-h25", "LP, n-fold symmetric with n >= m: exists for all time, converges to an m-fold circle",
                 "pentagram-like curve, m=2, n=5, h = 1 + 0.12 cos(5 theta / 2)",
                 {CosinePerturbed{1.0, 0.12, 5}, 2}, FlowKind::LengthPreserving,
                 Expectation::Converged, 20.0, 512});
    p.push_back({"lp-eneg-32", "LP, E(0) <= 0 with nonconstant curvature: a singularity forms in finite time",
                 "m=3, n=2, h = 1 + 0.3 cos(2 theta / 3)",
                 {CosinePerturbed{1.0, 0.3, 2}, 3}, FlowKind::LengthPreserving,
                 Expectation::BlowUp, 10.0, 1024});
    p.push_back({"circle-m3", "fixed point: every m-fold circle is stationary",
                 "circle of radius 1 traversed 3 times", {MFoldCircle{1.0}, 3},
                 FlowKind::AreaPreserving, Expectation::TimeLimit, 1.0, 512});
    return p;
  }();
  return presets;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : list_presets())
    if (p.name == name) return &p;
  return nullptr;
}

void ScenarioConfig::validate() const {
  curve.validate();
  params.validate();
  if (params.m != curve.m) throw SpecError("flow turning number must match the curve's m");
  if (N < PeriodicGrid::kMinSamples || N % 2 != 0)
    throw SpecError("grid.N must be even and >= 16, got " + std::to_string(N));
  if (!(tol_conv > 0.0)) throw SpecError("tol_conv must be positive");
  if (!(ctl.cfl > 0.0 && ctl.cfl <= 1.0)) throw SpecError("ctl.cfl must lie in (0, 1]");
  if (!(ctl.t_end > 0.0)) throw SpecError("ctl.t_end must be positive");
  if (!(ctl.dt_min > 0.0 && ctl.dt_min < ctl.dt_max))
    throw SpecError("need 0 < ctl.dt_min < ctl.dt_max");
  if (!(ctl.sample_interval > 0.0)) throw SpecError("ctl.sample_interval must be positive");
}

ScenarioConfig config_from_preset(const Preset& preset, double alpha) {
  ScenarioConfig c;
  c.name = preset.name;
  c.curve = preset.curve;
  c.params = {alpha, preset.curve.m, preset.kind};
  c.ctl = StepControl::for_horizon(preset.t_end / alpha);
  c.N = preset.N;
  c.expected = preset.expected;
  c.out_dir = preset.name;
  c.monitor_al_shape = preset.al_shape;
  c.render_times = {0.0};
  return c;
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

double to_real(const Entry& e, std::string_view key) {
  const std::string& v = e.value;
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ParseError("line " + std::to_string(e.line) + ": '" + std::string(key) +
                         "' expects a real number, got '" + v + "'",
                     e.line);
  return out;
}

int to_int(const Entry& e, std::string_view key) {
  const std::string& v = e.value;
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ParseError("line " + std::to_string(e.line) + ": '" + std::string(key) +
                         "' expects an integer, got '" + v + "'",
                     e.line);
  return out;
}

bool to_bool(const Entry& e, std::string_view key) {
  const std::string v = lower(e.value);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError("line " + std::to_string(e.line) + ": '" + std::string(key) +
                       "' expects true or false",
                   e.line);
}

// Wraps errors raised while interpreting a value so they carry its line.
template <class Fn>
auto at_line(const Entry& e, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const ConvexityError& err) {
    throw ConvexityError("line " + std::to_string(e.line) + ": " + err.what());
  } catch (const Error& err) {
    throw ParseError("line " + std::to_string(e.line) + ": " + err.what(), e.line);
  }
}

const char* const kKnownKeys[] = {
    "preset",          "name",         "curve.type",   "curve.m",       "curve.r",
    "curve.a",         "curve.b",      "curve.n",      "curve.file",    "flow.kind",
    "flow.alpha",      "grid.N",       "ctl.cfl",      "ctl.dt_max",    "ctl.dt_min",
    "ctl.kappa_blowup", "ctl.t_end",   "ctl.sample_interval", "tol_conv", "expected",
    "out_dir",         "render_times", "monitor.al_shape"};

ScenarioConfig build_config(const std::map<std::string, Entry>& kv, const std::string& name,
                            const std::filesystem::path& base_dir, int last_line) {
  auto get = [&](const char* key) -> const Entry* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  ScenarioConfig cfg;
  cfg.name = name;
  cfg.out_dir = name;
  cfg.render_times = {0.0};
  // Defaults when no preset is named.
  cfg.curve = {MFoldCircle{1.0}, 1};
  cfg.ctl = StepControl::for_horizon(cfg.ctl.t_end);
  double alpha = 1.0;
  bool from_preset = false;
  const Preset* preset = nullptr;
  if (const Entry* e = get("preset")) {
    preset = find_preset(e->value);
    if (!preset)
      throw ParseError("line " + std::to_string(e->line) + ": unknown preset '" + e->value + "'",
                       e->line);
    if (const Entry* a = get("flow.alpha")) alpha = to_real(*a, "flow.alpha");
    cfg = config_from_preset(*preset, alpha > 0.0 ? alpha : 1.0);
    cfg.out_dir = preset->name;
    from_preset = true;
  }
  if (const Entry* e = get("name")) cfg.name = e->value;
  if (const Entry* e = get("out_dir")) cfg.out_dir = e->value;

  // Curve.
  int m = cfg.curve.m;
  if (const Entry* e = get("curve.m")) m = to_int(*e, "curve.m");
  std::string type;
  if (const Entry* e = get("curve.type")) type = lower(e->value);
  else if (!from_preset) type = "circle";
  if (!type.empty() || get("curve.a") || get("curve.b") || get("curve.n") || get("curve.r")) {
    if (type.empty()) {
      type = std::holds_alternative<MFoldCircle>(cfg.curve.shape)     ? "circle"
             : std::holds_alternative<CosinePerturbed>(cfg.curve.shape) ? "cosine"
                                                                        : "samples";
    }
    if (type == "circle") {
      MFoldCircle c;
      if (const auto* prev = std::get_if<MFoldCircle>(&cfg.curve.shape)) c = *prev;
      if (const Entry* e = get("curve.r")) c.r = to_real(*e, "curve.r");
      cfg.curve = {c, m};
    } else if (type == "cosine") {
      CosinePerturbed c;
      if (const auto* prev = std::get_if<CosinePerturbed>(&cfg.curve.shape)) c = *prev;
      if (const Entry* e = get("curve.a")) c.a = to_real(*e, "curve.a");
      if (const Entry* e = get("curve.b")) c.b = to_real(*e, "curve.b");
      if (const Entry* e = get("curve.n")) c.n = to_int(*e, "curve.n");
      cfg.curve = {c, m};
    } else if (type == "samples") {
      const Entry* e = get("curve.file");
      if (!e) throw ParseError("curve.type = samples requires curve.file", last_line);
      std::filesystem::path p = e->value;
      if (p.is_relative()) p = base_dir / p;
      cfg.curve = at_line(*e, [&] { return load_support_samples(p); });
      m = cfg.curve.m;
    } else {
      const Entry* e = get("curve.type");
      const int line = e ? e->line : last_line;
      throw ParseError("line " + std::to_string(line) + ": unknown curve.type '" + type +
                           "' (circle, cosine or samples)",
                       line);
    }
  } else {
    cfg.curve.m = m;
  }

  // Flow.
  cfg.params.m = cfg.curve.m;
  if (const Entry* e = get("flow.kind"))
    cfg.params.kind = at_line(*e, [&] { return parse_flow_kind(e->value); });
  if (const Entry* e = get("flow.alpha")) cfg.params.alpha = to_real(*e, "flow.alpha");
  if (const Entry* e = get("grid.N")) cfg.N = to_int(*e, "grid.N");
  if (const auto* fs = std::get_if<FromSamples>(&cfg.curve.shape))
    if (!get("grid.N")) cfg.N = static_cast<int>(fs->h.size());

  // Step control: horizon-dependent defaults follow t_end unless overridden.
  if (const Entry* e = get("ctl.t_end")) {
    const double kb = cfg.ctl.kappa_blowup;
    const double cfl = cfg.ctl.cfl;
    cfg.ctl = StepControl::for_horizon(to_real(*e, "ctl.t_end"));
    cfg.ctl.kappa_blowup = kb;
    cfg.ctl.cfl = cfl;
  }
  if (const Entry* e = get("ctl.sample_interval")) {
    cfg.ctl.sample_interval = to_real(*e, "ctl.sample_interval");
    if (!get("ctl.dt_max")) cfg.ctl.dt_max = cfg.ctl.sample_interval;
  }
  if (const Entry* e = get("ctl.cfl")) cfg.ctl.cfl = to_real(*e, "ctl.cfl");
  if (const Entry* e = get("ctl.dt_max")) cfg.ctl.dt_max = to_real(*e, "ctl.dt_max");
  if (const Entry* e = get("ctl.dt_min")) cfg.ctl.dt_min = to_real(*e, "ctl.dt_min");
  if (const Entry* e = get("ctl.kappa_blowup"))
    cfg.ctl.kappa_blowup = to_real(*e, "ctl.kappa_blowup");
  if (const Entry* e = get("tol_conv")) cfg.tol_conv = to_real(*e, "tol_conv");
  if (const Entry* e = get("expected"))
    cfg.expected = at_line(*e, [&] { return parse_expectation(e->value); });
  if (const Entry* e = get("monitor.al_shape"))
    cfg.monitor_al_shape = to_bool(*e, "monitor.al_shape");
  if (const Entry* e = get("render_times")) {
    cfg.render_times.clear();
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      cfg.render_times.push_back(to_real({t, e->line}, "render_times"));
    }
    std::sort(cfg.render_times.begin(), cfg.render_times.end());
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_impl(std::string_view text, const std::string& name,
                                 const std::filesystem::path& base_dir) {
  std::map<std::string, Entry> kv;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "N") key = "grid.N";
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys))
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                       line_no);
    if (value.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty value for '" + key + "'",
                       line_no);
    if (kv.count(key))
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                           "' (first set on line " + std::to_string(kv[key].line) + ")",
                       line_no);
    kv[key] = {value, line_no};
  }
  return build_config(kv, name, base_dir, line_no);
}

}  // namespace

ScenarioConfig parse_config_text(std::string_view text, const std::string& name) {
  return parse_config_impl(text, name, std::filesystem::current_path());
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_impl(ss.str(), path.stem().string(), path.parent_path());
}

MonitorContext monitor_context(const ScenarioConfig& cfg, const SupportState& s0,
                               const RunOutcome& outcome) {
  MonitorContext ctx;
  ctx.global_existence = outcome.kind() != Verdict::BlowUp;
  if (cfg.monitor_al_shape) {
    const int n = detect_symmetry_order(s0);
    ctx.require_property_p = true;
    if (n > 0) {
      const double lo = evaluate_at(s0.h, cfg.curve.m * pi / n);
      const double hi = s0.h[0];
      ctx.support_window = std::make_pair(lo, hi);
    }
  }
  return ctx;
}

namespace {

bool matches(Expectation e, Verdict v) {
  switch (e) {
    case Expectation::Converged:
      return v == Verdict::Converged;
    case Expectation::BlowUp:
      return v == Verdict::BlowUp;
    case Expectation::TimeLimit:
      return v == Verdict::TimeLimit;
    case Expectation::Explore:
      break;
  }
  return true;
}

void write_report(const ScenarioConfig& cfg, const ScenarioResult& r,
                  const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os.precision(10);
  const RunOutcome& o = r.outcome;
  os << "scenario: " << cfg.name << '\n'
     << "flow: " << to_string(cfg.params.kind) << "  alpha = " << cfg.params.alpha
     << "  m = " << cfg.params.m << "  N = " << cfg.N << '\n'
     << "expected: " << to_string(cfg.expected) << '\n'
     << "verdict: " << to_string(o.kind()) << '\n';
  if (const auto* c = std::get_if<ConvergedVerdict>(&o.verdict)) {
    os << "  r_inf = " << c->r_inf << "\n  max |kappa L / (2 m pi) - 1| = " << c->shape_error
       << "\n  stationarity residual = " << c->residual << '\n';
  } else if (const auto* b = std::get_if<BlowUpVerdict>(&o.verdict)) {
    os << "  t_stop = " << b->t_stop << "\n  kappa_max = " << b->kappa_max
       << "\n  witness = " << to_string(b->witness) << (b->certified ? " (certified)" : " (NOT certified)")
       << (b->shrinking ? "\n  shrinking length" : "") << "\n  " << b->detail << '\n';
  }
  os << "steps: " << o.steps << "  samples: " << o.series.size()
     << "  final t = " << o.final_state.t << '\n';
  if (!o.series.empty()) {
    const Diagnostics& f = o.series.front();
    const Diagnostics& l = o.series.back();
    os << "L: " << f.L << " -> " << l.L << "\nA: " << f.A << " -> " << l.A << "\nE: " << f.E
       << " -> " << l.E << "\nkappa_max: " << f.kappa_max << " -> " << l.kappa_max << '\n';
  }
  os << "\nmonitors:\n";
  for (const auto& c : r.report.checks) {
    os << "  " << (c.reported_only ? "INFO" : (c.passed ? "PASS" : "FAIL")) << "  " << c.name
       << "  worst = " << c.worst << " at t = " << c.t_worst;
    if (!c.detail.empty()) os << "  [" << c.detail << "]";
    os << '\n';
  }
  if (!o.notes.empty()) {
    os << "\nnotes:\n";
    for (const auto& n : o.notes) os << "  " << n << '\n';
  }
  os << "\nexit status: " << r.exit_status << '\n';
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create '" + cfg.out_dir.string() + "': " + ec.message());

  const SupportState s0 = generate_support(cfg.curve, cfg.N);
  std::vector<std::filesystem::path> artifacts;

  const auto jsonl_path = cfg.out_dir / "snapshots.jsonl";
  std::ofstream jsonl(jsonl_path, std::ios::binary);
  if (!jsonl) throw IoError("cannot open '" + jsonl_path.string() + "' for writing");

  std::size_t next_render = 0;
  auto render = [&](const SupportState& s) {
    const auto p = cfg.out_dir / ("curve_t" + time_stamp(s.t) + ".svg");
    render_svg(s, p);
    artifacts.push_back(p);
  };

  RunOptions opts;
  if (cfg.monitor_al_shape) {
    const int n = detect_symmetry_order(s0);
    if (n > 0) opts.symmetry_order = n;
  }
  opts.on_sample = [&](const SupportState& s, const Diagnostics&) {
    jsonl << snapshot_json(s, cfg.params) << '\n';
    bool due = false;
    while (next_render < cfg.render_times.size() && s.t >= cfg.render_times[next_render]) {
      ++next_render;
      due = true;
    }
    if (due) render(s);
  };

  ScenarioResult result{run(s0, cfg.params, cfg.ctl, cfg.tol_conv, opts), {}, kExitOk, {}};
  jsonl.close();
  if (!jsonl) throw IoError("failed writing '" + jsonl_path.string() + "'");
  artifacts.push_back(jsonl_path);

  const SupportState& fin = result.outcome.final_state;
  const std::string final_name = "curve_t" + time_stamp(fin.t) + ".svg";
  if (std::find(artifacts.begin(), artifacts.end(), cfg.out_dir / final_name) == artifacts.end())
    render(fin);
  result.artifacts = std::move(artifacts);

  const auto csv_path = cfg.out_dir / "timeseries.csv";
  emit_timeseries(result.outcome.series, csv_path);
  result.artifacts.push_back(csv_path);

  result.report = check_monotonicity(result.outcome.series, cfg.params, {},
                                     monitor_context(cfg, s0, result.outcome));
  if (const auto* b = std::get_if<BlowUpVerdict>(&result.outcome.verdict)) {
    MonitorCheck c;
    c.name = "blowup_certified";
    c.passed = b->certified;
    c.worst = b->certified ? 0.0 : 1.0;
    c.t_worst = b->t_stop;
    c.detail = std::string("witness ") + std::string(to_string(b->witness));
    result.report.checks.push_back(c);
  }
  if (cfg.expected == Expectation::Explore && result.outcome.kind() == Verdict::Converged &&
      std::abs(result.outcome.series.front().A) <= 1e-8 * result.outcome.series.front().L *
                                                       result.outcome.series.front().L)
    result.outcome.notes.push_back(
        "zero-area start reported Converged; an m-fold circle cannot have zero area");

  if (!result.report.all_passed())
    result.exit_status = kExitInvariant;
  else if (!matches(cfg.expected, result.outcome.kind()))
    result.exit_status = kExitMismatch;
  else
    result.exit_status = kExitOk;

  const auto report_path = cfg.out_dir / "report.txt";
  write_report(cfg, result, report_path);
  result.artifacts.push_back(report_path);
  return result;
}

}  // namespace curveflow
