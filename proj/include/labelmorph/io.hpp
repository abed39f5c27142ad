#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "labelmorph/penalty.hpp"
#include "labelmorph/planner.hpp"
#include "labelmorph/scenario.hpp"

namespace labelmorph {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr double kKeyframeStep = 0.1;

Json rect_to_json(const Rect& r);  // [min_x, min_y, width, height]
Json spec_to_json(const LabelSpec& s);
LabelSpec spec_from_json(const Json& j);

/// A labeling together with the geometry of its labels.
struct LabelingFile {
  Catalog catalog;
  Labeling labeling;
};

Json labeling_to_json(const Catalog& catalog, const Labeling& labeling);
LabelingFile labeling_from_json(const Json& j);
/// Union of two catalogs; throws if a label id has different geometry.
Catalog merge_catalogs(const Catalog& a, const Catalog& b);

/// Labels, the two labelings, optional per-label axis orders, frozen set and k.
Json instance_to_json(const WeightedInstance& inst);
WeightedInstance instance_from_json(const Json& j);

struct Keyframe {
  double t = 0.0;
  Rect rect;
};

/// Samples of a movement every `step` time units from its start, plus every
/// leg boundary.
std::vector<Keyframe> movement_keyframes(const ScheduledMovement& m, const Catalog& catalog,
                                         double step = kKeyframeStep);

/// Versioned plan document for animation clients. The overlap report is
/// embedded when given.
Json plan_to_json(const TransitionPlan& plan, const Catalog& catalog, const OverlapReport* report = nullptr,
                  double step = kKeyframeStep);
Json report_to_json(const OverlapReport& report);

Json view_to_json(const ViewState& v);
/// "pan(0,0.28)" strings or {"type": "pan"|"zoom"|"time_shift", ...} objects.
Action action_from_json(const Json& j);
Json action_to_json(const Action& a);

/// Per-transition counts; with `with_plan` also the labelings and the plan.
Json transition_to_json(const TransitionRecord& r, bool with_plan);
Json metrics_to_json(const TransitionMetrics& m);

std::string metrics_csv_header();
std::string metrics_csv_row(const TransitionMetrics& m);

Json parse_json(std::string_view text);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace labelmorph
