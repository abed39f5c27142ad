#include "labelmorph/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace labelmorph {

namespace {

constexpr double kMaxLat = 85.0511287798066;

// Days since 1970-01-01 of a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, const char* what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

void validate(const SpatioPoint& p) {
  if (p.id.empty()) throw Error("point with empty id");
  if (!(p.lon >= -180.0 && p.lon <= 180.0)) throw Error("longitude out of range for '" + p.id + "'");
  if (!(p.lat >= -90.0 && p.lat <= 90.0)) throw Error("latitude out of range for '" + p.id + "'");
  if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) throw Error("invalid weight for '" + p.id + "'");
}

// One CSV record per line; quoted fields may hold commas, doubled quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string signed_number(double v) { return (v >= 0 ? "+" : "") + format_number(v); }

}  // namespace

TimePoint parse_rfc3339(std::string_view s) {
  const std::string str(trim(s));
  auto bad = [&]() { return Error("invalid RFC-3339 timestamp '" + str + "'"); };
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, n = 0;
  if (std::sscanf(str.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &n) != 3 || n != 10) throw bad();
  std::size_t pos = 10;
  if (pos < str.size() && (str[pos] == 'T' || str[pos] == 't' || str[pos] == ' ')) {
    if (std::sscanf(str.c_str() + pos + 1, "%2d:%2d:%2d%n", &h, &mi, &sec, &n) != 3 || n != 8) throw bad();
    pos += 9;
    if (pos < str.size() && str[pos] == '.') {
      ++pos;
      const std::size_t digits = pos;
      while (pos < str.size() && std::isdigit(static_cast<unsigned char>(str[pos]))) ++pos;
      if (pos == digits) throw bad();
    }
  } else if (pos != str.size()) {
    throw bad();
  }
  std::int64_t offset = 0;
  if (pos < str.size()) {
    const char c = str[pos];
    if ((c == 'Z' || c == 'z') && pos + 1 == str.size()) {
      offset = 0;
    } else if ((c == '+' || c == '-') && str.size() - pos == 6 && str[pos + 3] == ':') {
      int oh = 0, om = 0;
      if (std::sscanf(str.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2 || oh > 23 || om > 59) throw bad();
      offset = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    } else {
      throw bad();
    }
  }
  static constexpr int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (mo < 1 || mo > 12 || d < 1 || d > kDays[mo - 1] || (mo == 2 && d == 29 && !leap) || h > 23 || mi > 59 ||
      sec > 60) {
    throw bad();
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 + h * 3600 + mi * 60 +
         sec - offset;
}

std::string format_rfc3339(TimePoint t) {
  std::int64_t days = t >= 0 ? t / 86400 : -((-t + 86399) / 86400);
  std::int64_t rem = t - days * 86400;
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

PointStore::PointStore(std::vector<SpatioPoint> points) : points_(std::move(points)) {
  for (const auto& p : points_) validate(p);
  std::sort(points_.begin(), points_.end(), [](const SpatioPoint& a, const SpatioPoint& b) {
    return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
  });
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i].id, i).second) throw Error("duplicate point id '" + points_[i].id + "'");
  }
}

const SpatioPoint* PointStore::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &points_[it->second];
}

std::vector<SpatioPoint> relevant_points(const PointStore& store, TimePoint t, TimePoint window) {
  const auto& pts = store.points();
  auto lo = std::upper_bound(pts.begin(), pts.end(), t - window,
                             [](TimePoint v, const SpatioPoint& p) { return v < p.timestamp; });
  auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                             [](TimePoint v, const SpatioPoint& p) { return v < p.timestamp; });
  if (window <= 0 || hi <= lo) return {};
  return {lo, hi};
}

PointStore parse_dataset_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error("dataset CSV has no header");
  std::vector<std::string> header;
  for (const auto& h : rows[0]) header.emplace_back(trim(h));
  auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw Error("dataset CSV lacks column '" + name + "'");
      return -1;
    }
    return it - header.begin();
  };
  const auto ci = column("id", true), clon = column("lon", true), clat = column("lat", true),
             ct = column("timestamp", true), ctext = column("text", false), cw = column("weight", false);
  std::vector<SpatioPoint> points;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error("dataset CSV row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                  " fields, expected " + std::to_string(header.size()));
    }
    SpatioPoint p;
    p.id = std::string(trim(row[ci]));
    p.lon = parse_number(row[clon], "longitude");
    p.lat = parse_number(row[clat], "latitude");
    p.timestamp = parse_rfc3339(row[ct]);
    if (ctext >= 0) p.text = row[ctext];
    if (cw >= 0 && !trim(row[cw]).empty()) p.weight = parse_number(row[cw], "weight");
    points.push_back(std::move(p));
  }
  return PointStore(std::move(points));
}

PointStore parse_dataset_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid dataset JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error("dataset JSON must be an array of points");
  std::vector<SpatioPoint> points;
  try {
    for (const auto& item : doc) {
      SpatioPoint p;
      p.id = item.at("id").is_string() ? item.at("id").get<std::string>() : item.at("id").dump();
      p.lon = item.at("lon").get<double>();
      p.lat = item.at("lat").get<double>();
      p.timestamp = parse_rfc3339(item.at("timestamp").get<std::string>());
      p.text = item.value("text", "");
      p.weight = item.value("weight", 1.0);
      points.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid dataset point: ") + e.what());
  }
  return PointStore(std::move(points));
}

PointStore parse_dataset(std::string_view text) {
  const auto t = trim(text);
  if (!t.empty() && t.front() == '[') return parse_dataset_json(t);
  return parse_dataset_csv(text);
}

PointStore load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read dataset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string dataset_to_csv(const PointStore& store) {
  std::string out = "id,lon,lat,timestamp,text,weight\n";
  for (const auto& p : store.points()) {
    out += csv_field(p.id) + ',' + format_number(p.lon) + ',' + format_number(p.lat) + ',' +
           format_rfc3339(p.timestamp) + ',' + csv_field(p.text) + ',' + format_number(p.weight) + '\n';
  }
  return out;
}

PointStore synthetic_dataset(const SyntheticOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Cluster {
    double lon, lat, sigma, mass;
  };
  std::vector<Cluster> clusters;
  for (std::size_t c = 0; c < std::max<std::size_t>(opt.clusters, 1); ++c) {
    Cluster k;
    k.lon = opt.center_lon + opt.spread_lon * (2.0 * unit(rng) - 1.0);
    k.lat = opt.center_lat + opt.spread_lat * (2.0 * unit(rng) - 1.0);
    k.sigma = opt.sigma_min + (opt.sigma_max - opt.sigma_min) * unit(rng);
    k.mass = -std::log(1.0 - unit(rng));  // exponential sizes: a few dominant cities
    clusters.push_back(k);
  }
  std::vector<double> masses;
  for (const auto& k : clusters) masses.push_back(k.mass);
  std::discrete_distribution<std::size_t> pick(masses.begin(), masses.end());
  std::normal_distribution<double> normal(0.0, 1.0);

  const double span = opt.span_hours * 3600.0;
  std::vector<SpatioPoint> points;
  points.reserve(opt.points);
  for (std::size_t i = 0; i < opt.points; ++i) {
    const auto& k = clusters[pick(rng)];
    SpatioPoint p;
    char id[32];
    std::snprintf(id, sizeof id, "p%06zu", i);
    p.id = id;
    p.lon = std::clamp(k.lon + k.sigma * normal(rng), -180.0, 180.0);
    p.lat = std::clamp(k.lat + k.sigma * normal(rng) * 0.75, -kMaxLat, kMaxLat);
    p.timestamp = opt.time + static_cast<TimePoint>(std::floor((unit(rng) - 0.5) * span));
    p.text = "post " + std::to_string(i);
    p.weight = 1.0;
    points.push_back(std::move(p));
  }
  return PointStore(std::move(points));
}

Point project(double lon, double lat) {
  const double phi = std::clamp(lat, -kMaxLat, kMaxLat) * std::numbers::pi / 180.0;
  return {(lon + 180.0) / 360.0 * 256.0,
          128.0 + 128.0 / std::numbers::pi * std::log(std::tan(std::numbers::pi / 4.0 + phi / 2.0))};
}

ViewState make_view(double lon, double lat, int zoom, TimePoint time, const ScreenConfig& screen) {
  if (zoom < screen.min_zoom || zoom > screen.max_zoom) {
    throw Error("zoom " + std::to_string(zoom) + " outside [" + std::to_string(screen.min_zoom) + ", " +
                std::to_string(screen.max_zoom) + "]");
  }
  if (!(lat >= -kMaxLat && lat <= kMaxLat)) throw Error("map center latitude out of range");
  if (!(lon >= -180.0 && lon <= 180.0)) throw Error("map center longitude out of range");
  ViewState v{lon, lat, zoom, time, {}};
  const Point c = project(lon, lat);
  const double scale = std::ldexp(1.0, -zoom);
  const double hw = screen.width_px * scale / 2.0, hh = screen.height_px * scale / 2.0;
  v.viewport = {c.x - hw, c.y - hh, 2.0 * hw, 2.0 * hh};
  return v;
}

std::vector<SpatioPoint> visible_subset(const std::vector<SpatioPoint>& points, const ViewState& view) {
  std::vector<SpatioPoint> out;
  for (const auto& p : points) {
    const Point q = project(p.lon, p.lat);
    if (q.x >= view.viewport.min_x && q.x <= view.viewport.max_x() && q.y >= view.viewport.min_y &&
        q.y <= view.viewport.max_y()) {
      out.push_back(p);
    }
  }
  return out;
}

Action parse_action(std::string_view s) {
  const std::string text(trim(s));
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw Error("invalid action '" + text + "'");
  const std::string name(trim(std::string_view(text).substr(0, open)));
  const std::string_view args = std::string_view(text).substr(open + 1, text.size() - open - 2);
  if (name == "pan") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw Error("pan needs two arguments: '" + text + "'");
    return Action::pan(parse_number(args.substr(0, comma), "pan longitude"),
                       parse_number(args.substr(comma + 1), "pan latitude"));
  }
  if (name == "zoom") {
    const double d = parse_number(args, "zoom step");
    if (d != std::round(d)) throw Error("zoom changes step-wise: '" + text + "'");
    return Action::zoom(static_cast<int>(d));
  }
  if (name == "time" || name == "time_shift") return Action::time_shift(parse_number(args, "time shift"));
  throw Error("unknown action '" + name + "'");
}

std::string to_string(const Action& a) {
  switch (a.kind) {
    case Action::Kind::Pan:
      return "pan(" + signed_number(a.dlon) + "," + signed_number(a.dlat) + ")";
    case Action::Kind::Zoom:
      return "zoom(" + signed_number(a.dzoom) + ")";
    case Action::Kind::TimeShift:
      return "time(" + signed_number(a.minutes) + ")";
  }
  return "?";
}

ViewState apply_interaction(const ViewState& state, const Action& action, const ScreenConfig& screen) {
  switch (action.kind) {
    case Action::Kind::Pan: {
      double lon = state.lon + action.dlon;
      if (lon > 180.0 || lon < -180.0) lon = std::remainder(lon, 360.0);
      return make_view(lon, state.lat + action.dlat, state.zoom, state.time, screen);
    }
    case Action::Kind::Zoom:
      return make_view(state.lon, state.lat, state.zoom + action.dzoom, state.time, screen);
    case Action::Kind::TimeShift: {
      ViewState v = state;
      v.time += static_cast<TimePoint>(std::llround(action.minutes * 60.0));
      return v;
    }
  }
  return state;
}

std::vector<Action> builtin_script(std::string_view name) {
  if (name == "a" || name == "A") {
    return {Action::time_shift(30), Action::zoom(1), Action::pan(0, 0.28), Action::time_shift(5)};
  }
  if (name == "b" || name == "B") {
    return {Action::time_shift(5), Action::pan(0, 0.28), Action::zoom(1), Action::time_shift(30)};
  }
  if (name == "c" || name == "C") {
    return {Action::zoom(1), Action::time_shift(-5), Action::pan(-1.7, 0), Action::time_shift(20)};
  }
  if (name == "sweep3h" || name == "sweep-3h") return std::vector<Action>(36, Action::time_shift(5));
  throw Error("unknown script '" + std::string(name) + "' (a, b, c, sweep3h)");
}

std::vector<Action> parse_script(std::string_view text) {
  const auto t = trim(text);
  if (t.find('(') == std::string_view::npos) return builtin_script(t);
  std::vector<Action> out;
  std::size_t start = 0;
  while (start <= t.size()) {
    const auto end = std::min(t.find(';', start), t.size());
    const auto part = trim(t.substr(start, end - start));
    if (!part.empty()) out.push_back(parse_action(part));
    start = end + 1;
  }
  if (out.empty()) throw Error("empty script");
  return out;
}

const std::vector<ScenarioPreset>& scenario_presets() {
  static const std::vector<ScenarioPreset> presets{
      {"italy", 14.45, 41.30, 7, parse_rfc3339("2021-05-29T13:20:00Z"), "a"},
      {"lausanne", 6.37, 46.45, 7, parse_rfc3339("2021-05-30T10:30:00Z"), "b"},
      {"leeds", -1.60, 53.44, 7, parse_rfc3339("2021-05-29T13:00:00Z"), "b"},
      {"los_angeles", -117.78, 33.84, 9, parse_rfc3339("2021-05-30T03:15:00Z"), "c"},
      {"new_delhi", 71.18, 30.20, 7, parse_rfc3339("2021-05-29T08:30:00Z"), "a"},
      {"sao_paulo", -45.00, -20.65, 7, parse_rfc3339("2021-05-29T02:30:00Z"), "c"},
  };
  return presets;
}

const ScenarioPreset& scenario_preset(std::string_view name) {
  for (const auto& p : scenario_presets()) {
    if (p.name == name) return p;
  }
  throw Error("unknown scenario '" + std::string(name) + "'");
}

SyntheticOptions synthetic_options(const ScenarioPreset& preset, std::uint64_t seed) {
  SyntheticOptions o;
  o.seed = seed;
  o.center_lon = preset.lon;
  o.center_lat = preset.lat;
  o.time = preset.time;
  // keep the clusters inside roughly one screen at the preset zoom
  const double shrink = std::ldexp(1.0, 7 - preset.zoom);
  o.spread_lon *= shrink;
  o.spread_lat *= shrink;
  o.sigma_min *= shrink;
  o.sigma_max *= shrink;
  return o;
}

ViewState preset_view(const ScenarioPreset& preset, const ScreenConfig& screen) {
  return make_view(preset.lon, preset.lat, preset.zoom, preset.time, screen);
}

std::string_view to_string(StabilityPolicy p) {
  switch (p) {
    case StabilityPolicy::PinOnZoom:
      return "pin-on-zoom";
    case StabilityPolicy::PinAlways:
      return "pin-always";
    case StabilityPolicy::PinNever:
      return "pin-never";
  }
  return "?";
}

StabilityPolicy parse_policy(std::string_view s) {
  if (s == "pin-on-zoom") return StabilityPolicy::PinOnZoom;
  if (s == "pin-always") return StabilityPolicy::PinAlways;
  if (s == "pin-never") return StabilityPolicy::PinNever;
  throw Error("unknown stability policy '" + std::string(s) + "'");
}

std::vector<LabelSpec> label_specs(const std::vector<SpatioPoint>& points, int zoom, const ScreenConfig& screen) {
  const double scale = std::ldexp(1.0, -zoom);
  std::vector<LabelSpec> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    out.push_back({p.id, project(p.lon, p.lat), screen.label_width_px * scale, screen.label_height_px * scale,
                   p.weight, p.text});
  }
  return out;
}

Session::Session(std::shared_ptr<const PointStore> store, const ViewState& initial, ScenarioConfig config)
    : store_(std::move(store)), config_(config), view_(initial) {
  if (!store_) throw Error("session without a dataset");
  view_ = make_view(initial.lon, initial.lat, initial.zoom, initial.time, config_.screen);
  const auto specs = label_specs(in_view(view_), view_.zoom, config_.screen);
  labeling_ = greedy_mis(build_conflict_graph(specs));
}

std::vector<SpatioPoint> Session::in_view(const ViewState& v) const {
  return visible_subset(relevant_points(*store_, v.time, config_.relevance_window), v);
}

Catalog Session::catalog() const {
  const auto specs = label_specs(in_view(view_), view_.zoom, config_.screen);
  Catalog out;
  for (const auto& s : specs) {
    if (labeling_.contains(s.id)) out.emplace(s.id, s);
  }
  return out;
}

TransitionRecord Session::interact(const Action& action) {
  TransitionRecord r;
  r.index = count_;
  r.action = action;
  r.before = view_;
  r.after = apply_interaction(view_, action, config_.screen);
  r.from = labeling_;

  const auto now = in_view(r.after);
  const bool pin = config_.policy == StabilityPolicy::PinAlways ||
                   (config_.policy == StabilityPolicy::PinOnZoom && action.kind == Action::Kind::Zoom);
  const auto next_specs = label_specs(now, r.after.zoom, config_.screen);
  const StableLabeling st = relabel_stable(labeling_, next_specs, pin);
  r.to = st.labeling;
  r.kept_previous = st.kept_previous;

  // Both labelings are overlap-free at the larger zoom, where labels are smallest in map units.
  r.zoom = std::max(r.before.zoom, r.after.zoom);
  std::vector<SpatioPoint> involved;
  for (const auto* l : {&r.from, &r.to}) {
    for (const auto& [id, slot] : *l) {
      if (l == &r.to && r.from.contains(id)) continue;
      involved.push_back(*store_->find(id));
    }
  }
  r.catalog = make_catalog(label_specs(involved, r.zoom, config_.screen));

  const LabelingDiff diff = diff_labelings(r.catalog, r.from, r.to, config_.axis_order);
  const MovementGraph g = build_movement_graph(r.catalog, diff.movements);
  r.dependency_edges = g.edges.size();
  DagScheduleInfo info;
  const TransitionPlan dag = plan_dag(diff, g, lowest_in_degree_breaker, &info);
  r.dag_back_edges = info.back_edges.size();
  switch (config_.style) {
    case TransitionStyle::Naive:
      r.plan = plan_naive(diff);
      break;
    case TransitionStyle::Dag:
      r.plan = dag;
      break;
    case TransitionStyle::Simultaneous:
      r.plan = plan_simultaneous(diff);
      break;
  }
  try {
    r.fas_size = min_feedback_arc_set(g).size();
  } catch (const Error&) {
    r.fas_size = r.dag_back_edges;
    r.fas_exact = false;
  }
  r.report = evaluate_plan(r.plan, r.catalog);

  view_ = r.after;
  labeling_ = r.to;
  ++count_;
  return r;
}

TransitionMetrics aggregate_metrics(const std::vector<TransitionRecord>& records) {
  if (records.empty()) throw Error("no transitions to aggregate");
  TransitionMetrics m;
  m.style = records.front().plan.style;
  m.transitions = records.size();
  double duration_sum = 0.0, span_sum = 0.0;
  for (const auto& r : records) {
    m.overlaps_total += r.report.pair_count;
    m.overlaps_max = std::max(m.overlaps_max, r.report.pair_count);
    m.duration_max = std::max(m.duration_max, r.plan.makespan);
    m.movement_span_max = std::max(m.movement_span_max, r.plan.movement_span());
    duration_sum += r.plan.makespan;
    span_sum += r.plan.movement_span();
    m.moved += r.moved();
    m.added += r.added();
    m.removed += r.removed();
  }
  const double n = static_cast<double>(records.size());
  m.overlaps_avg = static_cast<double>(m.overlaps_total) / n;
  m.duration_avg = duration_sum / n;
  m.movement_span_avg = span_sum / n;
  return m;
}

ScriptRun run_script(std::shared_ptr<const PointStore> store, const ViewState& initial,
                     const std::vector<Action>& script, const ScenarioConfig& config) {
  if (script.empty()) throw Error("empty script");
  Session session(std::move(store), initial, config);
  ScriptRun run;
  for (const auto& a : script) run.records.push_back(session.interact(a));
  run.metrics = aggregate_metrics(run.records);
  run.metrics.style = config.style;
  return run;
}

}  // namespace labelmorph
