#include "labelmorph/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace labelmorph {

namespace {

void check_header(const Json& j, std::string_view format) {
  if (!j.is_object()) throw Error("expected a JSON object");
  if (j.contains("format") && j.at("format") != format) {
    throw Error("expected format '" + std::string(format) + "', got " + j.at("format").dump());
  }
  if (j.contains("version") && j.at("version") != kFormatVersion) {
    throw Error("unsupported " + std::string(format) + " version " + j.at("version").dump());
  }
}

Json header(std::string_view format) {
  Json j;
  j["format"] = format;
  j["version"] = kFormatVersion;
  return j;
}

Json placed(const std::vector<PlacedLabel>& labels, const Catalog& catalog) {
  Json arr = Json::array();
  for (const auto& p : labels) {
    arr.push_back({{"id", p.label_id},
                   {"slot", to_string(p.slot)},
                   {"rect", rect_to_json(candidate_rect(spec_of(catalog, p.label_id), p.slot))}});
  }
  return arr;
}

Labeling labeling_map_from_json(const Json& j) {
  Labeling out;
  for (const auto& [id, slot] : j.items()) out[id] = parse_slot(slot.get<std::string>());
  return out;
}

template <typename F>
auto wrap_json(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed JSON document: ") + e.what());
  }
}

}  // namespace

Json rect_to_json(const Rect& r) { return Json::array({r.min_x, r.min_y, r.width, r.height}); }

Json spec_to_json(const LabelSpec& s) {
  Json j{{"id", s.id}, {"x", s.anchor.x}, {"y", s.anchor.y}, {"width", s.width}, {"height", s.height},
         {"weight", s.weight}};
  if (!s.text.empty()) j["text"] = s.text;
  return j;
}

LabelSpec spec_from_json(const Json& j) {
  return wrap_json([&] {
    LabelSpec s;
    s.id = j.at("id").get<std::string>();
    s.anchor = {j.at("x").get<double>(), j.at("y").get<double>()};
    s.width = j.value("width", 1.0);
    s.height = j.value("height", 1.0);
    s.weight = j.value("weight", 1.0);
    s.text = j.value("text", "");
    if (!(s.width > 0.0) || !(s.height > 0.0)) throw Error("label '" + s.id + "' needs positive size");
    if (!(s.weight >= 0.0)) throw Error("label '" + s.id + "' has a negative weight");
    return s;
  });
}

Json labeling_to_json(const Catalog& catalog, const Labeling& labeling) {
  Json j = header("labelmorph.labeling");
  Json labels = Json::array();
  for (const auto& [id, slot] : labeling) {
    const auto& s = spec_of(catalog, id);
    Json l = spec_to_json(s);
    l["slot"] = to_string(slot);
    l["rect"] = rect_to_json(candidate_rect(s, slot));
    labels.push_back(std::move(l));
  }
  j["labels"] = std::move(labels);
  return j;
}

LabelingFile labeling_from_json(const Json& j) {
  check_header(j, "labelmorph.labeling");
  return wrap_json([&] {
    LabelingFile f;
    for (const auto& l : j.at("labels")) {
      LabelSpec s = spec_from_json(l);
      const Slot slot = parse_slot(l.at("slot").get<std::string>());
      if (!f.catalog.emplace(s.id, s).second) throw Error("duplicate label '" + s.id + "'");
      f.labeling[s.id] = slot;
    }
    return f;
  });
}

Catalog merge_catalogs(const Catalog& a, const Catalog& b) {
  Catalog out = a;
  for (const auto& [id, s] : b) {
    const auto [it, fresh] = out.emplace(id, s);
    if (fresh) continue;
    const auto& o = it->second;
    if (o.anchor.x != s.anchor.x || o.anchor.y != s.anchor.y || o.width != s.width || o.height != s.height ||
        o.weight != s.weight) {
      throw Error("label '" + id + "' has different geometry in the two labelings");
    }
  }
  return out;
}

Json instance_to_json(const WeightedInstance& inst) {
  Json j = header("labelmorph.instance");
  Json labels = Json::array();
  for (const auto& [id, s] : inst.catalog) labels.push_back(spec_to_json(s));
  j["labels"] = std::move(labels);
  Json from = Json::object(), to = Json::object(), axis = Json::object();
  for (const auto& p : inst.diff.stationary) from[p.label_id] = to[p.label_id] = to_string(p.slot);
  for (const auto& p : inst.diff.removals) from[p.label_id] = to_string(p.slot);
  for (const auto& p : inst.diff.additions) to[p.label_id] = to_string(p.slot);
  for (const auto& m : inst.diff.movements) {
    from[m.label_id] = to_string(m.from);
    to[m.label_id] = to_string(m.to);
    if (m.diagonal()) axis[m.label_id] = to_string(m.axis_order);
  }
  j["from"] = std::move(from);
  j["to"] = std::move(to);
  j["axis_order"] = std::move(axis);
  j["frozen"] = Json(std::vector<std::string>(inst.frozen.begin(), inst.frozen.end()));
  j["k"] = inst.k;
  return j;
}

WeightedInstance instance_from_json(const Json& j) {
  check_header(j, "labelmorph.instance");
  return wrap_json([&] {
    WeightedInstance inst;
    for (const auto& l : j.at("labels")) {
      LabelSpec s = spec_from_json(l);
      if (!inst.catalog.emplace(s.id, s).second) throw Error("duplicate label '" + s.id + "'");
    }
    const Labeling from = labeling_map_from_json(j.at("from"));
    const Labeling to = labeling_map_from_json(j.at("to"));
    inst.diff = diff_labelings(inst.catalog, from, to);
    if (j.contains("axis_order")) {
      for (const auto& [id, o] : j.at("axis_order").items()) {
        const AxisOrder order = parse_axis_order(o.get<std::string>());
        auto it = std::find_if(inst.diff.movements.begin(), inst.diff.movements.end(),
                               [&](const Movement& m) { return m.label_id == id; });
        if (it == inst.diff.movements.end()) throw Error("axis order given for non-moving label '" + id + "'");
        it->axis_order = order;
      }
    }
    for (const auto& id : j.value("frozen", std::vector<std::string>{})) {
      if (!inst.catalog.contains(id)) throw Error("frozen label '" + id + "' is unknown");
      inst.frozen.insert(id);
    }
    inst.k = j.value("k", 0.0);
    return inst;
  });
}

std::vector<Keyframe> movement_keyframes(const ScheduledMovement& m, const Catalog& catalog, double step) {
  if (!(step > 0.0)) throw Error("keyframe step must be positive");
  const Movement& mv = m.movement;
  const Trajectory traj = make_trajectory(spec_of(catalog, mv.label_id), mv.from, mv.to, mv.axis_order, m.start_time);
  std::vector<double> times;
  const double d = traj.duration();
  const auto samples = static_cast<std::size_t>(std::floor(d / step + 1e-9));
  for (std::size_t k = 0; k <= samples; ++k) times.push_back(static_cast<double>(k) * step);
  for (std::size_t k = 0; k <= traj.legs.size(); ++k) times.push_back(static_cast<double>(k));
  std::sort(times.begin(), times.end());
  std::vector<Keyframe> out;
  for (double local : times) {
    if (!out.empty() && local - (out.back().t - m.start_time) < 1e-9) continue;
    const double t = m.start_time + local;
    // waypoints are exact at leg boundaries
    const double whole = std::round(local);
    const Rect r = std::abs(local - whole) < 1e-9 ? traj.waypoint(static_cast<std::size_t>(whole)) : rect_at(traj, t);
    out.push_back({t, r});
  }
  return out;
}

Json report_to_json(const OverlapReport& report) {
  Json events = Json::array();
  for (const auto& e : report.events) {
    events.push_back({{"a", e.id_a},
                      {"b", e.id_b},
                      {"start", e.interval.start},
                      {"end", e.interval.end},
                      {"penalty", e.penalty}});
  }
  return {{"pair_count", report.pair_count}, {"total_penalty", report.total_penalty}, {"events", events}};
}

Json plan_to_json(const TransitionPlan& plan, const Catalog& catalog, const OverlapReport* report, double step) {
  Json j = header("labelmorph.plan");
  j["style"] = to_string(plan.style);
  j["time_unit_seconds"] = 1.0;
  j["keyframe_step"] = step;
  j["makespan"] = plan.makespan;
  j["movement_span"] = plan.movement_span();

  Json phases = Json::array();
  phases.push_back({{"name", "removal"}, {"start", 0.0}, {"end", plan.movement_start}, {"labels", placed(plan.removals, catalog)}});
  phases.push_back({{"name", "movement"}, {"start", plan.movement_start}, {"end", plan.addition_start}});
  phases.push_back({{"name", "addition"},
                    {"start", plan.addition_start},
                    {"end", plan.makespan},
                    {"labels", placed(plan.additions, catalog)}});
  j["phases"] = std::move(phases);
  j["stationary"] = placed(plan.stationary, catalog);

  Json movements = Json::array();
  for (const auto& m : plan.movements) {
    const auto& spec = spec_of(catalog, m.movement.label_id);
    const Trajectory traj =
        make_trajectory(spec, m.movement.from, m.movement.to, m.movement.axis_order, m.start_time);
    Json legs = Json::array();
    for (std::size_t k = 0; k < traj.legs.size(); ++k) {
      legs.push_back({{"start", m.start_time + static_cast<double>(k)},
                      {"end", m.start_time + static_cast<double>(k + 1)},
                      {"direction", to_string(traj.legs[k].direction)},
                      {"length", traj.legs[k].length},
                      {"from", rect_to_json(traj.waypoint(k))},
                      {"to", rect_to_json(traj.waypoint(k + 1))}});
    }
    Json keys = Json::array();
    for (const auto& k : movement_keyframes(m, catalog, step)) keys.push_back({{"t", k.t}, {"rect", rect_to_json(k.rect)}});
    Json mj{{"id", m.movement.label_id},
            {"from", to_string(m.movement.from)},
            {"to", to_string(m.movement.to)},
            {"start_time", m.start_time},
            {"end_time", m.end_time()},
            {"legs", std::move(legs)},
            {"keyframes", std::move(keys)}};
    if (m.movement.diagonal()) mj["axis_order"] = to_string(m.movement.axis_order);
    movements.push_back(std::move(mj));
  }
  j["movements"] = std::move(movements);
  if (report) j["overlaps"] = report_to_json(*report);
  return j;
}

Json view_to_json(const ViewState& v) {
  return {{"lon", v.lon},
          {"lat", v.lat},
          {"zoom", v.zoom},
          {"time", format_rfc3339(v.time)},
          {"viewport", rect_to_json(v.viewport)}};
}

Action action_from_json(const Json& j) {
  if (j.is_string()) return parse_action(j.get<std::string>());
  return wrap_json([&] {
    if (!j.is_object()) throw Error("action must be a string or an object");
    const std::string type = j.at("type").get<std::string>();
    if (type == "pan") return Action::pan(j.value("dlon", 0.0), j.value("dlat", 0.0));
    if (type == "zoom") {
      const double d = j.at("delta").get<double>();
      if (d != std::round(d)) throw Error("zoom changes step-wise");
      return Action::zoom(static_cast<int>(d));
    }
    if (type == "time_shift" || type == "time") return Action::time_shift(j.at("minutes").get<double>());
    throw Error("unknown action type '" + type + "'");
  });
}

Json action_to_json(const Action& a) {
  switch (a.kind) {
    case Action::Kind::Pan:
      return {{"type", "pan"}, {"dlon", a.dlon}, {"dlat", a.dlat}};
    case Action::Kind::Zoom:
      return {{"type", "zoom"}, {"delta", a.dzoom}};
    case Action::Kind::TimeShift:
      return {{"type", "time_shift"}, {"minutes", a.minutes}};
  }
  return {};
}

Json transition_to_json(const TransitionRecord& r, bool with_plan) {
  Json j{{"index", r.index},
         {"action", to_string(r.action)},
         {"style", to_string(r.plan.style)},
         {"before", view_to_json(r.before)},
         {"after", view_to_json(r.after)},
         {"geometry_zoom", r.zoom},
         {"labels_before", r.from.size()},
         {"labels_after", r.to.size()},
         {"kept_previous", r.kept_previous},
         {"moved", r.moved()},
         {"added", r.added()},
         {"removed", r.removed()},
         {"dependency_edges", r.dependency_edges},
         {"fas_size", r.fas_size},
         {"fas_exact", r.fas_exact},
         {"dag_back_edges", r.dag_back_edges},
         {"overlaps", r.report.pair_count},
         {"duration", r.plan.makespan},
         {"movement_span", r.plan.movement_span()}};
  if (with_plan) {
    j["from"] = labeling_to_json(r.catalog, r.from);
    j["to"] = labeling_to_json(r.catalog, r.to);
    j["plan"] = plan_to_json(r.plan, r.catalog, &r.report);
  }
  return j;
}

Json metrics_to_json(const TransitionMetrics& m) {
  return {{"style", to_string(m.style)},
          {"transitions", m.transitions},
          {"overlaps_avg", m.overlaps_avg},
          {"overlaps_total", m.overlaps_total},
          {"overlaps_max", m.overlaps_max},
          {"duration_max", m.duration_max},
          {"duration_avg", m.duration_avg},
          {"movement_span_max", m.movement_span_max},
          {"movement_span_avg", m.movement_span_avg},
          {"moved", m.moved},
          {"added", m.added},
          {"removed", m.removed}};
}

std::string metrics_csv_header() {
  return "style,transitions,overlaps_avg,overlaps_total,overlaps_max,duration_max,duration_avg,"
         "movement_span_max,movement_span_avg,moved,added,removed\n";
}

std::string metrics_csv_row(const TransitionMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%zu,%.4f,%zu,%zu,%.4f,%.4f,%.4f,%.4f,%zu,%zu,%zu\n",
                std::string(to_string(m.style)).c_str(), m.transitions, m.overlaps_avg, m.overlaps_total,
                m.overlaps_max, m.duration_max, m.duration_avg, m.movement_span_max, m.movement_span_avg, m.moved,
                m.added, m.removed);
  return buf;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path)); }

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace labelmorph
