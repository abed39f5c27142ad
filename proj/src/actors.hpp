#pragma once

// Internal: a label's motion over a plan horizon plus the window in which it
// exists. Shared by plan evaluation and the direction optimizer.

#include <optional>
#include <vector>

#include "labelmorph/planner.hpp"

namespace labelmorph::detail {

struct Actor {
  LabelId id;
  Trajectory trajectory;
  Interval window;
  double weight = 1.0;
  Rect bounds;
};

Actor make_actor(const LabelSpec& spec, Trajectory trajectory, Interval window);

std::vector<Actor> plan_actors(const TransitionPlan& plan, const Catalog& catalog);

/// Merged contact interval of two actors (earliest start, latest end).
std::optional<Interval> actor_overlap(const Actor& a, const Actor& b);

}  // namespace labelmorph::detail
