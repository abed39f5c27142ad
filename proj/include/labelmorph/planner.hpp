#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "labelmorph/geometry.hpp"

namespace labelmorph {

/// Chosen slot per labeled point.
using Labeling = std::map<LabelId, Slot>;
/// Geometry and weights of every label a transition may touch.
using Catalog = std::map<LabelId, LabelSpec>;

const LabelSpec& spec_of(const Catalog& catalog, const LabelId& id);
Catalog make_catalog(std::span<const LabelSpec> specs);

/// First overlapping pair of a labeling, if any.
std::optional<std::pair<LabelId, LabelId>> find_overlap(const Catalog& catalog,
                                                        const Labeling& labeling);
bool is_overlap_free(const Catalog& catalog, const Labeling& labeling);

struct Movement {
  LabelId label_id;
  Slot from = Slot::TopLeft;
  Slot to = Slot::TopRight;
  AxisOrder axis_order = AxisOrder::HorizontalFirst;

  bool diagonal() const { return is_diagonal(from, to); }
  double duration() const { return diagonal() ? 2.0 : 1.0; }
};

struct PlacedLabel {
  LabelId label_id;
  Slot slot = Slot::TopLeft;
};

/// Removals, additions and movements between two labelings. Movements keep
/// label-id order, which is also the default consecutive order.
struct LabelingDiff {
  std::vector<PlacedLabel> removals;
  std::vector<PlacedLabel> additions;
  std::vector<Movement> movements;
  std::vector<PlacedLabel> stationary;

  bool empty() const { return removals.empty() && additions.empty() && movements.empty(); }
};

LabelingDiff diff_labelings(const Catalog& catalog, const Labeling& l1, const Labeling& l2,
                            AxisOrder default_order = AxisOrder::HorizontalFirst);

/// Copy of `diff` with every diagonal movement using `order`.
LabelingDiff with_axis_order(LabelingDiff diff, AxisOrder order);

/// The discrete rects a movement occupies: start, traversed corner (diagonal
/// moves only) and end.
struct MovementPositions {
  Rect start;
  std::optional<Rect> corner;
  Rect end;
};
MovementPositions movement_positions(const Catalog& catalog, const Movement& m);

using Edge = std::pair<std::size_t, std::size_t>;

/// Directed "must move before" constraints; vertex i is movements[i].
struct MovementGraph {
  std::size_t vertex_count = 0;
  std::vector<std::vector<std::size_t>> out;
  std::vector<Edge> edges;  // sorted

  bool has_edge(std::size_t from, std::size_t to) const;
  std::vector<std::size_t> in_degrees() const;
  bool acyclic() const;
};

MovementGraph build_movement_graph(const Catalog& catalog, std::span<const Movement> movements);

/// Strongly connected components in reverse topological order.
std::vector<std::vector<std::size_t>> strongly_connected_components(const MovementGraph& g);

inline constexpr std::size_t kExactFasLimit = 10;

/// Minimum feedback arc set. Exact search over vertex orderings, applied per
/// strongly connected component; throws if any component exceeds `limit`.
std::vector<Edge> min_feedback_arc_set(const MovementGraph& g, std::size_t limit = kExactFasLimit);

/// Edges pointing backwards with respect to `order` (a feedback arc set).
std::vector<Edge> back_edges(const MovementGraph& g, std::span<const std::size_t> order);

enum class TransitionStyle { Naive, Dag, Simultaneous };
std::string_view to_string(TransitionStyle s);
/// "naive", "dag", "simul"/"simultaneous".
TransitionStyle parse_style(std::string_view s);

struct ScheduledMovement {
  Movement movement;
  double start_time = 0.0;

  double end_time() const { return start_time + movement.duration(); }
};

/// Removal phase, scheduled movements, addition phase. Each nonempty phase of
/// removals or additions takes one time unit.
struct TransitionPlan {
  TransitionStyle style = TransitionStyle::Naive;
  std::vector<PlacedLabel> removals;
  std::vector<PlacedLabel> additions;
  std::vector<PlacedLabel> stationary;
  std::vector<ScheduledMovement> movements;
  double movement_start = 0.0;   // end of the removal phase
  double addition_start = 0.0;   // latest movement finish
  double makespan = 0.0;

  double movement_span() const { return addition_start - movement_start; }
};

TransitionPlan plan_naive(const LabelingDiff& diff);
TransitionPlan plan_naive(const LabelingDiff& diff, std::span<const LabelId> order);

/// Picks the vertex to move unconditionally while cycles remain. `alive`
/// marks vertices still in the graph, `on_cycle` those in a nontrivial
/// strongly connected component of the remaining graph.
using CycleBreaker = std::function<std::size_t(
    const MovementGraph& g, const std::vector<bool>& alive, const std::vector<std::size_t>& on_cycle,
    std::span<const Movement> movements)>;

/// Lowest in-degree in the remaining graph, ties by smallest label id.
std::size_t lowest_in_degree_breaker(const MovementGraph& g, const std::vector<bool>& alive,
                                     const std::vector<std::size_t>& on_cycle,
                                     std::span<const Movement> movements);

struct DagScheduleInfo {
  std::vector<std::size_t> order;   // execution priority, broken vertices first
  std::vector<std::size_t> broken;  // vertices removed by the breaker
  std::vector<Edge> back_edges;     // edges violated by `order`
};

/// Consecutive transition ordered by the movement graph. Movements sharing
/// no edge run simultaneously (longest-path schedule).
TransitionPlan plan_dag(const LabelingDiff& diff, const MovementGraph& g,
                        const CycleBreaker& breaker = lowest_in_degree_breaker,
                        DagScheduleInfo* info = nullptr);
TransitionPlan plan_dag(const Catalog& catalog, const LabelingDiff& diff,
                        DagScheduleInfo* info = nullptr);

/// All movements start together right after the removals, each with its own
/// axis order.
TransitionPlan plan_simultaneous(const LabelingDiff& diff);
TransitionPlan plan_simultaneous(const LabelingDiff& diff, AxisOrder order);

struct OverlapEvent {
  LabelId id_a;  // id_a < id_b
  LabelId id_b;
  Interval interval;
  double penalty = 0.0;
};

struct OverlapReport {
  std::vector<OverlapEvent> events;  // sorted by (id_a, id_b)
  std::size_t pair_count = 0;
  double total_penalty = 0.0;
  double makespan = 0.0;

  /// Number of events involving `id`.
  std::size_t degree(const LabelId& id) const;
};

/// Every pair of labels checked exactly over the plan horizon, honoring when
/// each label exists. Repeated contact episodes of a pair merge into one event.
OverlapReport evaluate_plan(const TransitionPlan& plan, const Catalog& catalog);

/// Rects of all labels present at time t.
std::map<LabelId, Rect> rendered_at(const TransitionPlan& plan, const Catalog& catalog, double t);

/// 7n (naive), n + m (dag), 6n (simultaneous).
std::size_t overlap_bound(TransitionStyle style, std::size_t movers, std::size_t fas_size);
bool check_bound(const OverlapReport& report, TransitionStyle style, std::size_t movers,
                 std::size_t fas_size);
bool check_bound(const OverlapReport& report, std::string_view style, std::size_t movers,
                 std::size_t fas_size);

struct OrderSearchResult {
  std::vector<LabelId> best_order;
  std::size_t best_pairs = 0;
  std::size_t worst_pairs = 0;
  std::size_t orders_tried = 0;
};

/// Evaluates every consecutive order of the movements (n! plans).
OrderSearchResult exhaustive_order_search(const Catalog& catalog, const LabelingDiff& diff,
                                          std::size_t max_movements = 9);

}  // namespace labelmorph
