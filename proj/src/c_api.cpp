#include "curveflow/curveflow.h"

#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "output.hpp"
#include "scenario.hpp"

using namespace curveflow;

struct cf_state {
  SupportState s;
};

struct cf_scenario {
  ScenarioConfig cfg;
  std::optional<Verdict> verdict;
  std::string summary;
  std::string out_dir;
};

namespace {

thread_local std::string g_last_error;

cf_status fail(cf_status status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

template <class Fn>
cf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const ConvexityError& e) {
    return fail(CF_ERR_CONVEXITY, e.what());
  } catch (const ResonanceError& e) {
    return fail(CF_ERR_RESONANCE, e.what());
  } catch (const StepFloorError& e) {
    return fail(CF_ERR_STEP_FLOOR, e.what());
  } catch (const NonFiniteError& e) {
    return fail(CF_ERR_NONFINITE, e.what());
  } catch (const ParseError& e) {
    return fail(CF_ERR_PARSE, e.what());
  } catch (const IoError& e) {
    return fail(CF_ERR_IO, e.what());
  } catch (const SpecError& e) {
    return fail(CF_ERR_SPEC, e.what());
  } catch (const std::exception& e) {
    return fail(CF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CF_ERR_INTERNAL, "unknown error");
  }
}

cf_status null_arg(const char* what) {
  return fail(CF_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

FlowParams to_params(const cf_flow_params& p) {
  FlowParams out{p.alpha, p.m,
                 p.kind == CF_LENGTH_PRESERVING ? FlowKind::LengthPreserving
                                                : FlowKind::AreaPreserving};
  if (p.kind != CF_AREA_PRESERVING && p.kind != CF_LENGTH_PRESERVING)
    throw SpecError("unknown flow kind");
  out.validate();
  return out;
}

cf_status make_state(const CurveSpec& spec, int N, cf_state** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    spec.validate();
    *out = new cf_state{generate_support(spec, N)};
    return CF_OK;
  });
}

}  // namespace

extern "C" {

CF_API const char* cf_last_error(void) { return g_last_error.c_str(); }

CF_API const char* cf_status_string(cf_status status) {
  switch (status) {
    case CF_OK: return "ok";
    case CF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CF_ERR_SPEC: return "invalid specification";
    case CF_ERR_CONVEXITY: return "not locally convex";
    case CF_ERR_RESONANCE: return "resonant mode present";
    case CF_ERR_STEP_FLOOR: return "step size below floor";
    case CF_ERR_NONFINITE: return "non-finite value";
    case CF_ERR_PARSE: return "parse error";
    case CF_ERR_IO: return "i/o error";
    case CF_ERR_STATE: return "invalid call sequence";
    case CF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

CF_API int cf_preset_count(void) {
  try {
    return static_cast<int>(list_presets().size());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return 0;
  }
}

CF_API cf_status cf_preset_info(int index, const char** name, const char** clause,
                                const char** description, const char** expected) {
  return guarded([&] {
    const auto& presets = list_presets();
    if (index < 0 || index >= static_cast<int>(presets.size()))
      return fail(CF_ERR_INVALID_ARGUMENT, "preset index out of range");
    const Preset& p = presets[index];
    if (name) *name = p.name.c_str();
    if (clause) *clause = p.clause.c_str();
    if (description) *description = p.description.c_str();
    if (expected) *expected = to_string(p.expected).data();
    return CF_OK;
  });
}

CF_API cf_status cf_state_circle(int m, double r, int N, cf_state** out) {
  return make_state({MFoldCircle{r}, m}, N, out);
}

CF_API cf_status cf_state_cosine(int m, double a, double b, int n, int N, cf_state** out) {
  return make_state({CosinePerturbed{a, b, n}, m}, N, out);
}

CF_API cf_status cf_state_from_samples(int m, const double* h, int N, cf_state** out) {
  if (!h) return null_arg("h");
  if (N <= 0) return fail(CF_ERR_INVALID_ARGUMENT, "N must be positive");
  return make_state({FromSamples{std::vector<double>(h, h + N)}, m}, N, out);
}

CF_API cf_status cf_state_load(const char* path, cf_state** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    const CurveSpec spec = load_support_samples(path);
    const int N = static_cast<int>(std::get<FromSamples>(spec.shape).h.size());
    spec.validate();
    *out = new cf_state{generate_support(spec, N)};
    return CF_OK;
  });
}

CF_API cf_status cf_state_clone(const cf_state* s, cf_state** out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new cf_state{s->s};
    return CF_OK;
  });
}

CF_API void cf_state_free(cf_state* s) { delete s; }

CF_API int cf_state_size(const cf_state* s) { return s ? s->s.grid().size() : 0; }

CF_API int cf_state_turning(const cf_state* s) { return s ? s->s.grid().m() : 0; }

CF_API double cf_state_time(const cf_state* s) { return s ? s->s.t : 0.0; }

CF_API cf_status cf_state_support(const cf_state* s, double* h, int N) {
  if (!s) return null_arg("state");
  if (!h) return null_arg("h");
  if (N != s->s.grid().size())
    return fail(CF_ERR_INVALID_ARGUMENT, "buffer length does not match the grid size");
  const auto& v = s->s.h.values();
  std::copy(v.begin(), v.end(), h);
  return CF_OK;
}

CF_API cf_status cf_state_geometry(const cf_state* s, cf_geometry* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] {
    const GeometrySummary g = geometry(s->s);
    *out = {g.L, g.A, g.kappa_min, g.kappa_max, g.convexity_margin,
            g.h_min, g.h_max, g.isop_gap, g.rado_gap};
    return CF_OK;
  });
}

CF_API cf_status cf_state_diagnostics(const cf_state* s, const cf_flow_params* params,
                                      cf_diagnostics* out) {
  if (!s) return null_arg("state");
  if (!params) return null_arg("params");
  if (!out) return null_arg("out");
  return guarded([&] {
    const Diagnostics d = snapshot(s->s, to_params(*params));
    *out = {d.t,        d.dt,        d.L,     d.A,     d.lambda,  d.kappa_min,
            d.kappa_max, d.E,        d.F_int, d.psi_max, d.h_min, d.h_max,
            d.h_ratio,  d.isop_gap,  d.rado_gap, d.convexity_margin};
    return CF_OK;
  });
}

CF_API cf_status cf_state_classify(const cf_state* s, cf_class_report* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] {
    const ClassReport r = classify(s->s);
    cf_curve_class c = CF_UNCLASSIFIED;
    if (r.membership == CurveClass::HighlySymmetric) c = CF_HIGHLY_SYMMETRIC;
    if (r.membership == CurveClass::ALType) c = CF_AL_TYPE;
    *out = {r.m, r.n, r.coprime ? 1 : 0, r.property_p ? 1 : 0, c};
    return CF_OK;
  });
}

CF_API cf_status cf_state_step(cf_state* s, const cf_flow_params* params, double dt) {
  if (!s) return null_arg("state");
  if (!params) return null_arg("params");
  return guarded([&] {
    if (!(dt > 0.0)) return fail(CF_ERR_INVALID_ARGUMENT, "dt must be positive");
    s->s = rk4_step(s->s, to_params(*params), dt);
    return CF_OK;
  });
}

CF_API cf_status cf_state_advance(cf_state* s, const cf_flow_params* params, double cfl,
                                  double dt_max, double* dt_taken) {
  if (!s) return null_arg("state");
  if (!params) return null_arg("params");
  return guarded([&] {
    if (!(cfl > 0.0 && cfl <= 1.0)) return fail(CF_ERR_INVALID_ARGUMENT, "cfl must lie in (0, 1]");
    if (!(dt_max > 0.0)) return fail(CF_ERR_INVALID_ARGUMENT, "dt_max must be positive");
    StepControl ctl;
    ctl.cfl = cfl;
    ctl.dt_max = dt_max;
    ctl.dt_min = 0.0;
    StepResult r = advance(s->s, to_params(*params), ctl);
    s->s = std::move(r.state);
    if (dt_taken) *dt_taken = r.dt;
    return CF_OK;
  });
}

CF_API cf_status cf_state_render_svg(const cf_state* s, const char* path) {
  if (!s) return null_arg("state");
  if (!path) return null_arg("path");
  return guarded([&] {
    render_svg(s->s, path);
    return CF_OK;
  });
}

CF_API cf_status cf_scenario_from_preset(const char* name, double alpha, cf_scenario** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  return guarded([&] {
    const Preset* p = find_preset(name);
    if (!p) return fail(CF_ERR_INVALID_ARGUMENT, std::string("unknown preset '") + name + "'");
    ScenarioConfig cfg = config_from_preset(*p, alpha);
    cfg.validate();
    *out = new cf_scenario{std::move(cfg), std::nullopt, {}, {}};
    (*out)->out_dir = (*out)->cfg.out_dir.string();
    return CF_OK;
  });
}

CF_API cf_status cf_scenario_from_config(const char* path, cf_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new cf_scenario{parse_config(path), std::nullopt, {}, {}};
    (*out)->out_dir = (*out)->cfg.out_dir.string();
    return CF_OK;
  });
}

CF_API void cf_scenario_free(cf_scenario* sc) { delete sc; }

CF_API cf_status cf_scenario_set_grid(cf_scenario* sc, int N) {
  if (!sc) return null_arg("scenario");
  return guarded([&] {
    ScenarioConfig cfg = sc->cfg;
    cfg.N = N;
    cfg.validate();
    sc->cfg = std::move(cfg);
    return CF_OK;
  });
}

CF_API cf_status cf_scenario_set_t_end(cf_scenario* sc, double t_end) {
  if (!sc) return null_arg("scenario");
  return guarded([&] {
    if (!(t_end > 0.0)) return fail(CF_ERR_INVALID_ARGUMENT, "t_end must be positive");
    ScenarioConfig cfg = sc->cfg;
    const double cfl = cfg.ctl.cfl;
    const double kb = cfg.ctl.kappa_blowup;
    cfg.ctl = StepControl::for_horizon(t_end);
    cfg.ctl.cfl = cfl;
    cfg.ctl.kappa_blowup = kb;
    cfg.validate();
    sc->cfg = std::move(cfg);
    return CF_OK;
  });
}

CF_API cf_status cf_scenario_set_out_dir(cf_scenario* sc, const char* dir) {
  if (!sc) return null_arg("scenario");
  if (!dir) return null_arg("dir");
  sc->cfg.out_dir = dir;
  sc->out_dir = dir;
  return CF_OK;
}

CF_API cf_status cf_scenario_set_flow_kind(cf_scenario* sc, cf_flow_kind kind) {
  if (!sc) return null_arg("scenario");
  if (kind != CF_AREA_PRESERVING && kind != CF_LENGTH_PRESERVING)
    return fail(CF_ERR_INVALID_ARGUMENT, "unknown flow kind");
  sc->cfg.params.kind =
      kind == CF_LENGTH_PRESERVING ? FlowKind::LengthPreserving : FlowKind::AreaPreserving;
  return CF_OK;
}

CF_API const char* cf_scenario_name(const cf_scenario* sc) {
  return sc ? sc->cfg.name.c_str() : "";
}

CF_API const char* cf_scenario_out_dir(const cf_scenario* sc) {
  return sc ? sc->out_dir.c_str() : "";
}

CF_API cf_status cf_scenario_flow(const cf_scenario* sc, cf_flow_params* out) {
  if (!sc) return null_arg("scenario");
  if (!out) return null_arg("out");
  const FlowParams& p = sc->cfg.params;
  *out = {p.alpha, p.m,
          p.kind == FlowKind::LengthPreserving ? CF_LENGTH_PRESERVING : CF_AREA_PRESERVING};
  return CF_OK;
}

CF_API cf_status cf_scenario_run(cf_scenario* sc, int* exit_status) {
  if (!sc) return null_arg("scenario");
  if (!exit_status) return null_arg("exit_status");
  return guarded([&] {
    const ScenarioResult r = run_scenario(sc->cfg);
    sc->verdict = r.outcome.kind();
    std::ostringstream os;
    os.precision(6);
    os << sc->cfg.name << " " << to_string(sc->cfg.params.kind)
       << " alpha=" << sc->cfg.params.alpha << ": " << to_string(r.outcome.kind())
       << " at t=" << r.outcome.final_state.t << " (expected " << to_string(sc->cfg.expected)
       << ")";
    for (const auto& c : r.report.checks)
      if (!c.passed && !c.reported_only) os << " [invariant " << c.name << " violated]";
    sc->summary = os.str();
    *exit_status = r.exit_status;
    return CF_OK;
  });
}

CF_API cf_status cf_scenario_verdict(const cf_scenario* sc, cf_verdict* out) {
  if (!sc) return null_arg("scenario");
  if (!out) return null_arg("out");
  if (!sc->verdict) return fail(CF_ERR_STATE, "scenario has not been run");
  switch (*sc->verdict) {
    case Verdict::Converged: *out = CF_CONVERGED; break;
    case Verdict::BlowUp: *out = CF_BLOWUP; break;
    case Verdict::TimeLimit: *out = CF_TIMELIMIT; break;
  }
  return CF_OK;
}

CF_API const char* cf_scenario_summary(const cf_scenario* sc) {
  return sc ? sc->summary.c_str() : "";
}

}  // extern "C"
