#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "curve.hpp"
#include "diagnostics.hpp"

namespace curveflow {

inline constexpr std::string_view kTimeseriesHeader =
    "t,dt,L,A,lambda,kappa_min,kappa_max,E,F_int,psi_max,h_min,h_max,h_ratio,isop_gap,rado_gap,"
    "convexity_margin";

void write_timeseries_row(std::ostream& os, const Diagnostics& d);
void emit_timeseries(std::span<const Diagnostics> series, const std::filesystem::path& path);

// One JSON object per line: t, m, N, alpha, kind, h.
std::string snapshot_json(const SupportState& s, const FlowParams& params);
SupportState parse_snapshot_json(std::string_view line, FlowParams* params = nullptr);

// Closed stroke-only path through reconstruct_points, fitted with a 5% margin.
std::string svg_document(const SupportState& s);
void render_svg(const SupportState& s, const std::filesystem::path& path);

// File-name stamp for curve_t<stamp>.svg.
std::string time_stamp(double t);

}  // namespace curveflow
