#include "output.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace curveflow {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

}  // namespace

void write_timeseries_row(std::ostream& os, const Diagnostics& d) {
  const double cols[] = {d.t,        d.dt,       d.L,        d.A,        d.lambda,  d.kappa_min,
                         d.kappa_max, d.E,       d.F_int,    d.psi_max,  d.h_min,   d.h_max,
                         d.h_ratio,  d.isop_gap, d.rado_gap, d.convexity_margin};
  for (std::size_t i = 0; i < std::size(cols); ++i) {
    if (i) os << ',';
    os << g17(cols[i]);
  }
  os << '\n';
}

void emit_timeseries(std::span<const Diagnostics> series, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  os << kTimeseriesHeader << '\n';
  for (const auto& d : series) write_timeseries_row(os, d);
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::string snapshot_json(const SupportState& s, const FlowParams& params) {
  nlohmann::json j;
  j["t"] = s.t;
  j["m"] = s.grid().m();
  j["N"] = s.grid().size();
  j["alpha"] = params.alpha;
  j["kind"] = std::string(to_string(params.kind));
  j["h"] = std::vector<double>(s.h.values().begin(), s.h.values().end());
  return j.dump();
}

SupportState parse_snapshot_json(std::string_view line, FlowParams* params) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
    const int m = j.at("m").get<int>();
    const int n = j.at("N").get<int>();
    auto h = j.at("h").get<std::vector<double>>();
    if (params) {
      params->m = m;
      params->alpha = j.at("alpha").get<double>();
      params->kind = parse_flow_kind(j.at("kind").get<std::string>());
    }
    return {PeriodicField(PeriodicGrid(m, n), std::move(h)), j.at("t").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad snapshot record: ") + e.what(), 0);
  }
}

std::string svg_document(const SupportState& s) {
  const auto pts = reconstruct_points(s);
  double xmin = pts[0].x, xmax = pts[0].x, ymin = -pts[0].y, ymax = -pts[0].y;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, -p.y);
    ymax = std::max(ymax, -p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double pad = 0.05 * (span > 0.0 ? span : 1.0);
  const double w = xmax - xmin + 2.0 * pad;
  const double h = ymax - ymin + 2.0 * pad;
  const GeometrySummary geo = geometry(s);

  std::ostringstream os;
  os.precision(9);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xmin - pad << ' ' << ymin - pad
     << ' ' << w << ' ' << h << "\" width=\"600\" height=\"" << 600.0 * h / w << "\">\n"
     << "  <title>t=" << s.t << " L=" << geo.L << " A=" << geo.A << " kappa_min=" << geo.kappa_min
     << " kappa_max=" << geo.kappa_max << "</title>\n"
     << "  <path fill=\"none\" stroke=\"black\" stroke-width=\"" << 0.004 * span
     << "\" stroke-linejoin=\"round\" d=\"";
  for (std::size_t j = 0; j < pts.size(); ++j)
    os << (j == 0 ? "M" : " L") << pts[j].x << ',' << -pts[j].y;
  os << " Z\"/>\n</svg>\n";
  return os.str();
}

void render_svg(const SupportState& s, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  os << svg_document(s);
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::string time_stamp(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

}  // namespace curveflow
