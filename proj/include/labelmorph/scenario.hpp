#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "labelmorph/labeler.hpp"
#include "labelmorph/planner.hpp"

namespace labelmorph {

/// Seconds since 1970-01-01T00:00:00Z.
using TimePoint = std::int64_t;

inline constexpr TimePoint kRelevanceWindow = 3 * 3600;

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff](Z|+hh:mm|-hh:mm)"; a missing offset
/// means UTC. Fractional seconds are truncated.
TimePoint parse_rfc3339(std::string_view s);
std::string format_rfc3339(TimePoint t);

struct SpatioPoint {
  std::string id;
  double lon = 0.0;
  double lat = 0.0;
  TimePoint timestamp = 0;
  std::string text;
  double weight = 1.0;
};

/// Immutable point set, sorted by (timestamp, id).
class PointStore {
 public:
  PointStore() = default;
  explicit PointStore(std::vector<SpatioPoint> points);

  const std::vector<SpatioPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const SpatioPoint* find(const std::string& id) const;

 private:
  std::vector<SpatioPoint> points_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Points with timestamp in (t - window, t].
std::vector<SpatioPoint> relevant_points(const PointStore& store, TimePoint t,
                                         TimePoint window = kRelevanceWindow);

PointStore parse_dataset_csv(std::string_view text);
PointStore parse_dataset_json(std::string_view text);
/// CSV or JSON, chosen by the first non-blank character.
PointStore parse_dataset(std::string_view text);
PointStore load_dataset(const std::string& path);
std::string dataset_to_csv(const PointStore& store);

struct SyntheticOptions {
  std::uint64_t seed = 1;
  std::size_t points = 2500;
  std::size_t clusters = 30;
  double center_lon = 14.45;
  double center_lat = 41.30;
  double spread_lon = 7.0;  // cluster centers within +-spread of the center
  double spread_lat = 5.0;
  double sigma_min = 0.05;  // cluster radius range, degrees
  double sigma_max = 0.6;
  TimePoint time = parse_rfc3339("2021-05-29T13:20:00Z");
  double span_hours = 9.0;  // timestamps spread over time +- span/2 (plus the sweep)
};

/// Clustered points with uniformly spread timestamps; fully determined by the options.
PointStore synthetic_dataset(const SyntheticOptions& opt);

/// Web Mercator at zoom 0 (a 256-unit world), y pointing north.
Point project(double lon, double lat);

struct ScreenConfig {
  double width_px = 1024.0;
  double height_px = 768.0;
  double label_width_px = 72.0;
  double label_height_px = 18.0;
  int min_zoom = 1;
  int max_zoom = 18;
};

struct ViewState {
  double lon = 0.0;
  double lat = 0.0;
  int zoom = 7;
  TimePoint time = 0;
  Rect viewport;  // map units
};

ViewState make_view(double lon, double lat, int zoom, TimePoint time, const ScreenConfig& screen = {});

/// Points whose projection lies in the viewport (closed).
std::vector<SpatioPoint> visible_subset(const std::vector<SpatioPoint>& points, const ViewState& view);

struct Action {
  enum class Kind { Pan, Zoom, TimeShift };
  Kind kind = Kind::TimeShift;
  double dlon = 0.0;
  double dlat = 0.0;
  int dzoom = 0;
  double minutes = 0.0;

  static Action pan(double dlon, double dlat) { return {Kind::Pan, dlon, dlat, 0, 0.0}; }
  static Action zoom(int delta) { return {Kind::Zoom, 0.0, 0.0, delta, 0.0}; }
  static Action time_shift(double minutes) { return {Kind::TimeShift, 0.0, 0.0, 0, minutes}; }
};

/// "pan(dlon,dlat)", "zoom(+1)", "time(+30)" (also "time_shift(...)").
Action parse_action(std::string_view s);
std::string to_string(const Action& a);

ViewState apply_interaction(const ViewState& state, const Action& action, const ScreenConfig& screen = {});

/// "a", "b", "c", "sweep3h".
std::vector<Action> builtin_script(std::string_view name);
/// Built-in name, or a ';'-separated list of actions.
std::vector<Action> parse_script(std::string_view text);

struct ScenarioPreset {
  std::string name;
  double lon;
  double lat;
  int zoom;
  TimePoint time;
  std::string script;
};
const std::vector<ScenarioPreset>& scenario_presets();
const ScenarioPreset& scenario_preset(std::string_view name);
/// Synthetic data around a preset's map center and time of interest.
SyntheticOptions synthetic_options(const ScenarioPreset& preset, std::uint64_t seed);
ViewState preset_view(const ScenarioPreset& preset, const ScreenConfig& screen = {});

/// When previously shown labels are forced into the new labeling.
enum class StabilityPolicy { PinOnZoom, PinAlways, PinNever };
std::string_view to_string(StabilityPolicy p);
StabilityPolicy parse_policy(std::string_view s);

struct ScenarioConfig {
  ScreenConfig screen;
  TransitionStyle style = TransitionStyle::Dag;
  StabilityPolicy policy = StabilityPolicy::PinOnZoom;
  AxisOrder axis_order = AxisOrder::HorizontalFirst;
  TimePoint relevance_window = kRelevanceWindow;
};

/// Label geometry of the points at a zoom level.
std::vector<LabelSpec> label_specs(const std::vector<SpatioPoint>& points, int zoom, const ScreenConfig& screen);

struct TransitionRecord {
  std::size_t index = 0;
  Action action;
  ViewState before;
  ViewState after;
  Labeling from;
  Labeling to;
  Catalog catalog;  // label geometry the plan is evaluated in
  int zoom = 0;     // zoom level of that geometry
  TransitionPlan plan;
  OverlapReport report;
  std::size_t fas_size = 0;  // minimum feedback arc set, or an upper bound when !fas_exact
  bool fas_exact = true;
  std::size_t dag_back_edges = 0;  // edges the DAG schedule violates
  std::size_t dependency_edges = 0;
  bool kept_previous = false;

  std::size_t moved() const { return plan.movements.size(); }
  std::size_t added() const { return plan.additions.size(); }
  std::size_t removed() const { return plan.removals.size(); }
};

/// One interactive map: a view, the labeling on screen and the transition
/// style. Not thread-safe; callers serialize access.
class Session {
 public:
  Session(std::shared_ptr<const PointStore> store, const ViewState& initial, ScenarioConfig config = {});

  const ViewState& view() const { return view_; }
  const Labeling& labeling() const { return labeling_; }
  const ScenarioConfig& config() const { return config_; }
  /// Geometry of the current labels at the current zoom.
  Catalog catalog() const;
  std::size_t transitions() const { return count_; }

  TransitionRecord interact(const Action& action);

 private:
  std::vector<SpatioPoint> in_view(const ViewState& v) const;

  std::shared_ptr<const PointStore> store_;
  ScenarioConfig config_;
  ViewState view_;
  Labeling labeling_;
  std::size_t count_ = 0;
};

struct TransitionMetrics {
  TransitionStyle style = TransitionStyle::Dag;
  std::size_t transitions = 0;
  std::size_t overlaps_total = 0;
  double overlaps_avg = 0.0;
  std::size_t overlaps_max = 0;
  double duration_max = 0.0;  // seconds
  double duration_avg = 0.0;
  double movement_span_max = 0.0;
  double movement_span_avg = 0.0;
  std::size_t moved = 0;
  std::size_t added = 0;
  std::size_t removed = 0;
};

/// Throws on an empty list.
TransitionMetrics aggregate_metrics(const std::vector<TransitionRecord>& records);

struct ScriptRun {
  std::vector<TransitionRecord> records;
  TransitionMetrics metrics;
};

ScriptRun run_script(std::shared_ptr<const PointStore> store, const ViewState& initial,
                     const std::vector<Action>& script, const ScenarioConfig& config);

}  // namespace labelmorph
