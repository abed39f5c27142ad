#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "labelmorph/planner.hpp"

namespace labelmorph {

/// Axis order per diagonal movement.
using DirectionAssignment = std::map<LabelId, AxisOrder>;

/// A weighted simultaneous transition and a penalty budget k. Diagonal
/// movements listed in `frozen` keep the axis order stored in the diff.
struct WeightedInstance {
  Catalog catalog;
  LabelingDiff diff;
  double k = 0.0;
  std::set<LabelId> frozen;
};

struct DirectionSolution {
  DirectionAssignment assignment;
  double penalty = 0.0;
  std::size_t evaluations = 0;
};

/// Sum of weight products over the events.
double penalty(const OverlapReport& report);

/// Diagonal movements whose axis order may be chosen, sorted by label id.
std::vector<LabelId> free_diagonals(const WeightedInstance& inst);

/// Total penalty of the simultaneous plan under `assignment` (full plan
/// evaluation). Missing diagonals keep the order stored in the diff.
double evaluate_assignment(const WeightedInstance& inst, const DirectionAssignment& assignment);

/// Diff with the assignment applied.
LabelingDiff apply_assignment(const LabelingDiff& diff, const DirectionAssignment& assignment);

inline constexpr std::size_t kExactDirectionLimit = 20;

/// Minimum-penalty assignment by enumeration of all 2^d choices. Ties go to
/// the lexicographically smallest assignment (HorizontalFirst first, labels
/// by id). Throws when d exceeds `limit`.
DirectionSolution solve_directions_exact(const WeightedInstance& inst,
                                         std::size_t limit = kExactDirectionLimit,
                                         unsigned threads = 0);

/// Best-single-flip local search from all-HorizontalFirst.
DirectionSolution solve_directions_heuristic(const WeightedInstance& inst, std::size_t max_iters = 1000);

/// Is there an assignment with W <= k?
bool decide_weighted(const WeightedInstance& inst, std::size_t limit = kExactDirectionLimit);

/// Two unit-weight diagonal movers. Routing both inward costs exactly one
/// overlap; any outward route costs nothing.
struct ClauseGadget {
  WeightedInstance instance;
  LabelId x;
  LabelId y;
  AxisOrder x_inward = AxisOrder::HorizontalFirst;
  AxisOrder x_outward = AxisOrder::VerticalFirst;
  AxisOrder y_inward = AxisOrder::VerticalFirst;
  AxisOrder y_outward = AxisOrder::HorizontalFirst;
};
ClauseGadget clause_gadget(Point origin = {0.0, 0.0}, const std::string& prefix = "");

}  // namespace labelmorph
