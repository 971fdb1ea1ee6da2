#pragma once

/// Text formats: sectioned key-value configuration, CSV tables and SVG plots.
///
/// Numbers in CSV use 17 significant digits so a parsed table reproduces the
/// doubles bit for bit; plots rendered from re-read tables are therefore
/// identical to plots rendered from the original data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kropina/error.hpp"
#include "kropina/navigation.hpp"
#include "kropina/planar.hpp"
#include "kropina/scenario.hpp"

namespace kropina::io {

// ---------------------------------------------------------------------------
// Files

inline void write_text(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error(ErrorKind::io, "write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

// ---------------------------------------------------------------------------
// Configuration

struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// Parsed `[section]` / `key = value` text. Comments start with '#' or ';'.
struct ConfigDocument {
  std::string source;
  std::map<std::string, std::map<std::string, ConfigEntry>> sections;

  const ConfigEntry* find(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

inline ConfigDocument parse_config(std::string_view text, std::string source = "<config>") {
  ConfigDocument doc;
  doc.source = std::move(source);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::usage, doc.source + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    // ';' starts a comment only at the beginning of a line; point lists use it as a separator.
    const std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) fail("empty section name");
      doc.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of any [section]");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) fail("empty key");
    auto& sec = doc.sections[section];
    if (sec.contains(key)) fail("duplicate key '" + key + "' in [" + section + "]");
    sec[key] = {value, line_no};
  }
  return doc;
}

/// Real number or a product/quotient of numbers and `pi`, e.g. "pi/8", "-3*pi/4", "0.25".
inline double parse_real(std::string_view text) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw Error(ErrorKind::usage, "empty number");
  std::size_t i = 0;
  auto factor = [&]() -> double {
    double sign = 1.0;
    while (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    if (s.compare(i, 2, "pi") == 0) {
      i += 2;
      return sign * std::numbers::pi;
    }
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw Error(ErrorKind::usage, "cannot parse number '" + s + "'");
    i += static_cast<std::size_t>(end - begin);
    return sign * v;
  };
  double v = factor();
  while (i < s.size()) {
    const char op = s[i++];
    if (op == '*')
      v *= factor();
    else if (op == '/')
      v /= factor();
    else
      throw Error(ErrorKind::usage, "cannot parse number '" + s + "'");
  }
  if (!std::isfinite(v)) throw Error(ErrorKind::usage, "non-finite number '" + s + "'");
  return v;
}

inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(parse_real(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!detail::trim(cur).empty()) out.push_back(parse_real(cur));
  return out;
}

/// "x y; x y; ..." point lists.
inline std::vector<ChartPoint<2>> parse_point_list(std::string_view text) {
  std::vector<ChartPoint<2>> out;
  std::string item;
  auto flush = [&] {
    std::istringstream ss(item);
    std::string a, b, extra;
    if (!(ss >> a)) return;
    if (!(ss >> b) || (ss >> extra)) throw Error(ErrorKind::usage, "points are written 'x y; x y'");
    out.push_back({{parse_real(a), parse_real(b)}});
  };
  for (char c : text) {
    if (c == ';') {
      flush();
      item.clear();
    } else {
      item += c;
    }
  }
  flush();
  return out;
}

inline bool parse_bool(std::string_view text) {
  const std::string s = detail::trim(text);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw Error(ErrorKind::usage, "expected a boolean, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// CSV

struct TrajectoryRow {
  std::size_t ray_id = 0;
  double phi0 = 0.0, t = 0.0, x = 0.0, y = 0.0, vx = 0.0, vy = 0.0, f_value = 0.0, beta = 0.0;
};

inline constexpr std::string_view kTrajectoryHeader = "ray_id,phi0,t,x,y,vx,vy,F_value,beta";
inline constexpr std::string_view kComparisonHeader = "target_x,target_y,phi0_F,T_F,phi0_Ft,T_Ft,delta_T";

inline std::vector<TrajectoryRow> trajectory_rows(const Fan& fan) {
  std::vector<TrajectoryRow> rows;
  for (const auto& r : fan.rays) {
    const auto& tr = r.trajectory;
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
      const auto& s = tr.samples[k];
      rows.push_back({r.id, r.phi0, s.t, s.x[0], s.x[1], s.v[0], s.v[1], tr.f_values[k], tr.beta[k]});
    }
  }
  return rows;
}

inline std::string format_trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.ray_id);
    for (double v : {r.phi0, r.t, r.x, r.y, r.vx, r.vy, r.f_value, r.beta}) {
      out += ',';
      out += fmt17(v);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline double csv_number(const std::string& cell, int line) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0')
    throw Error(ErrorKind::data, "line " + std::to_string(line) + ": bad number '" + cell + "'");
  return v;
}

}  // namespace detail

inline std::vector<TrajectoryRow> parse_trajectory_csv(std::string_view text) {
  std::vector<TrajectoryRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1) {
      if (detail::trim(line) != kTrajectoryHeader) throw Error(ErrorKind::data, "unexpected trajectory CSV header");
      continue;
    }
    if (detail::trim(line).empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 9) throw Error(ErrorKind::data, "line " + std::to_string(n) + ": expected 9 columns");
    TrajectoryRow r;
    r.ray_id = static_cast<std::size_t>(detail::csv_number(c[0], n));
    r.phi0 = detail::csv_number(c[1], n);
    r.t = detail::csv_number(c[2], n);
    r.x = detail::csv_number(c[3], n);
    r.y = detail::csv_number(c[4], n);
    r.vx = detail::csv_number(c[5], n);
    r.vy = detail::csv_number(c[6], n);
    r.f_value = detail::csv_number(c[7], n);
    r.beta = detail::csv_number(c[8], n);
    rows.push_back(r);
  }
  if (n == 0) throw Error(ErrorKind::data, "empty trajectory CSV");
  return rows;
}

/// Complete rows only; excluded targets go to format_excluded_csv.
inline std::string format_comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out(kComparisonHeader);
  out += '\n';
  for (const auto& r : rows) {
    if (!r.complete()) continue;
    const double cells[] = {r.target[0], r.target[1], r.original->phi0, r.original->travel_time,
                            r.generalized->phi0, r.generalized->travel_time, r.delta()};
    for (std::size_t i = 0; i < 7; ++i) {
      if (i) out += ',';
      out += fmt17(cells[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string format_excluded_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "target_x,target_y,reason\n";
  for (const auto& r : rows) {
    if (r.complete()) continue;
    std::string reason = r.excluded_reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    out += fmt17(r.target[0]) + ',' + fmt17(r.target[1]) + ',' + reason + '\n';
  }
  return out;
}

inline std::string format_isochrone_csv(const std::vector<Isochrone>& isos) {
  std::string out = "t,ray_id,phi0,x,y\n";
  for (const auto& iso : isos)
    for (std::size_t k = 0; k < iso.points.size(); ++k)
      out += fmt17(iso.t) + ',' + std::to_string(iso.ray_ids[k]) + ',' + fmt17(iso.phi0[k]) + ',' +
             fmt17(iso.points[k][0]) + ',' + fmt17(iso.points[k][1]) + '\n';
  return out;
}

inline std::string format_polylines_csv(const std::vector<std::vector<planar::Point>>& lines) {
  std::string out = "polyline_id,x,y\n";
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (const auto& p : lines[i]) out += std::to_string(i) + ',' + fmt17(p.x) + ',' + fmt17(p.y) + '\n';
  return out;
}

inline std::string format_points_csv(const std::vector<planar::Point>& pts) {
  std::string out = "x,y\n";
  for (const auto& p : pts) out += fmt17(p.x) + ',' + fmt17(p.y) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// SVG

enum class SeriesStyle { original, generalized };

inline SeriesStyle style_of(ExampleMetric m) {
  return m == ExampleMetric::original ? SeriesStyle::original : SeriesStyle::generalized;
}

struct PlotSeries {
  SeriesStyle style = SeriesStyle::original;
  std::vector<std::vector<planar::Point>> lines;
};

struct PlotIsochrone {
  SeriesStyle style = SeriesStyle::original;
  double t = 0.0;
  std::vector<planar::Point> points;
};

struct WindLayer {
  NavigationData<2> nav;
  SeriesStyle style = SeriesStyle::original;  // unit wind in grey, scaled wind in blue
  bool shade_magnitude = false;
};

struct PlotSpec {
  std::string title;
  std::vector<PlotSeries> series;
  std::vector<PlotIsochrone> isochrones;
  std::vector<std::vector<planar::Point>> boundary;
  std::vector<planar::Point> cloud;
  std::vector<WindLayer> winds;
  std::optional<std::array<double, 4>> bounds;  // xmin, xmax, ymin, ymax
  std::size_t glyphs = 17;                      // wind glyphs per axis
  double width = 640.0, height = 640.0;
};

/// Polylines per ray, in ray order, from trajectory rows.
inline PlotSeries series_from_rows(const std::vector<TrajectoryRow>& rows, SeriesStyle style) {
  PlotSeries s;
  s.style = style;
  std::map<std::size_t, std::size_t> slot;
  for (const auto& r : rows) {
    auto [it, fresh] = slot.try_emplace(r.ray_id, s.lines.size());
    if (fresh) s.lines.emplace_back();
    s.lines[it->second].push_back({r.x, r.y});
  }
  return s;
}

inline std::string_view series_color(SeriesStyle s) { return s == SeriesStyle::original ? "#000000" : "#d62728"; }
inline std::string_view wind_color(SeriesStyle s) { return s == SeriesStyle::original ? "#9a9a9a" : "#1f5fbf"; }

/// Dash pattern of an isochrone: t = 1 dot-dashed, t = 2 solid, t = 3 dashed.
inline std::string isochrone_dash(double t) {
  if (std::abs(t - 1.0) < 1e-12) return "7 3 1.5 3";
  if (std::abs(t - 2.0) < 1e-12) return "";
  if (std::abs(t - 3.0) < 1e-12) return "7 4";
  return "2 3";
}

inline std::string render_svg(const PlotSpec& spec) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](const planar::Point& p) {
    xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
  };
  if (spec.bounds) {
    xmin = (*spec.bounds)[0], xmax = (*spec.bounds)[1], ymin = (*spec.bounds)[2], ymax = (*spec.bounds)[3];
  } else {
    for (const auto& s : spec.series)
      for (const auto& l : s.lines)
        for (const auto& p : l) grow(p);
    for (const auto& iso : spec.isochrones)
      for (const auto& p : iso.points) grow(p);
    for (const auto& l : spec.boundary)
      for (const auto& p : l) grow(p);
    for (const auto& p : spec.cloud) grow(p);
    if (!(xmin <= xmax)) xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    const double pad = 0.05 * std::max({xmax - xmin, ymax - ymin, 1e-9});
    xmin -= pad, xmax += pad, ymin -= pad, ymax += pad;
  }
  // Equal aspect: widen the shorter side.
  {
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double half = 0.5 * std::max(xmax - xmin, (ymax - ymin) * spec.width / spec.height);
    const double half_y = half * spec.height / spec.width;
    xmin = cx - half, xmax = cx + half, ymin = cy - half_y, ymax = cy + half_y;
  }
  const double sx = spec.width / (xmax - xmin), sy = spec.height / (ymax - ymin);
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  auto px = [&](double x) { return num((x - xmin) * sx); };
  auto py = [&](double y) { return num((ymax - y) * sy); };
  auto points_attr = [&](const std::vector<planar::Point>& l) {
    std::string s;
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i) s += ' ';
      s += px(l[i].x) + ',' + py(l[i].y);
    }
    return s;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(spec.width) + "\" height=\"" +
         num(spec.height) + "\" viewBox=\"0 0 " + num(spec.width) + ' ' + num(spec.height) + "\">\n";
  if (!spec.title.empty()) out += "<title>" + spec.title + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(spec.width) + "\" height=\"" + num(spec.height) +
         "\" fill=\"#ffffff\"/>\n";

  // Axes through the origin when visible.
  out += "<g stroke=\"#cccccc\" stroke-width=\"0.6\">\n";
  if (xmin < 0.0 && xmax > 0.0)
    out += "<line x1=\"" + px(0.0) + "\" y1=\"0\" x2=\"" + px(0.0) + "\" y2=\"" + num(spec.height) + "\"/>\n";
  if (ymin < 0.0 && ymax > 0.0)
    out += "<line x1=\"0\" y1=\"" + py(0.0) + "\" x2=\"" + num(spec.width) + "\" y2=\"" + py(0.0) + "\"/>\n";
  out += "</g>\n";

  const std::size_t n = std::max<std::size_t>(spec.glyphs, 2);
  const double cell = std::min(xmax - xmin, ymax - ymin) / static_cast<double>(n);
  for (const auto& layer : spec.winds) {
    if (layer.shade_magnitude) {
      out += "<g stroke=\"none\">\n";
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double x = xmin + (i + 0.5) * (xmax - xmin) / n, y = ymin + (j + 0.5) * (ymax - ymin) / n;
          const auto w = layer.nav.wind(ChartPoint<2>{{x, y}});
          const double m = std::clamp(std::hypot(w[0], w[1]), 0.0, 1.0);
          out += "<rect x=\"" + px(x - 0.5 * (xmax - xmin) / n) + "\" y=\"" + py(y + 0.5 * (ymax - ymin) / n) +
                 "\" width=\"" + num((xmax - xmin) / n * sx) + "\" height=\"" + num((ymax - ymin) / n * sy) +
                 "\" fill=\"" + std::string(wind_color(layer.style)) + "\" fill-opacity=\"" + num(0.35 * m) +
                 "\"/>\n";
        }
      out += "</g>\n";
    }
    out += "<g stroke=\"" + std::string(wind_color(layer.style)) + "\" stroke-width=\"0.8\" fill=\"none\">\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double x = xmin + (i + 0.5) * (xmax - xmin) / n, y = ymin + (j + 0.5) * (ymax - ymin) / n;
        const auto w = layer.nav.wind(ChartPoint<2>{{x, y}});
        const double len = 0.4 * cell;
        const double ex = x + len * w[0], ey = y + len * w[1];
        const double bx = x - len * w[0], by = y - len * w[1];
        const double a = std::atan2(w[1], w[0]);
        const double head = 0.35 * len * std::hypot(w[0], w[1]);
        out += "<path d=\"M" + px(bx) + ',' + py(by) + " L" + px(ex) + ',' + py(ey) + " M" +
               px(ex - head * std::cos(a - 0.5)) + ',' + py(ey - head * std::sin(a - 0.5)) + " L" + px(ex) + ',' +
               py(ey) + " L" + px(ex - head * std::cos(a + 0.5)) + ',' + py(ey - head * std::sin(a + 0.5)) +
               "\"/>\n";
      }
    out += "</g>\n";
  }

  if (!spec.cloud.empty()) {
    out += "<g fill=\"#d62728\" fill-opacity=\"0.25\" stroke=\"none\">\n";
    for (const auto& p : spec.cloud) out += "<circle cx=\"" + px(p.x) + "\" cy=\"" + py(p.y) + "\" r=\"0.6\"/>\n";
    out += "</g>\n";
  }
  for (const auto& s : spec.series) {
    out += "<g fill=\"none\" stroke=\"" + std::string(series_color(s.style)) + "\" stroke-width=\"1.1\">\n";
    for (const auto& l : s.lines)
      if (l.size() > 1) out += "<polyline points=\"" + points_attr(l) + "\"/>\n";
    out += "</g>\n";
  }
  for (const auto& iso : spec.isochrones) {
    if (iso.points.size() < 2) continue;
    const std::string dash = isochrone_dash(iso.t);
    out += "<polygon fill=\"none\" stroke=\"" + std::string(series_color(iso.style)) + "\" stroke-width=\"1.3\"" +
           (dash.empty() ? std::string() : " stroke-dasharray=\"" + dash + "\"") + " points=\"" +
           points_attr(iso.points) + "\"/>\n";
  }
  if (!spec.boundary.empty()) {
    out += "<g fill=\"none\" stroke=\"#000000\" stroke-width=\"1.4\">\n";
    for (const auto& l : spec.boundary)
      if (l.size() > 1) out += "<polyline points=\"" + points_attr(l) + "\"/>\n";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace kropina::io
