#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace labelmorph {

/// Thrown for contract violations (bad input, impossible requests).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance for interval-boundary and overlap comparisons, in map/time units.
inline constexpr double kEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle, y axis pointing up (north).
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double width = 1.0;
  double height = 1.0;

  double max_x() const { return min_x + width; }
  double max_y() const { return min_y + height; }
  double center_x() const { return min_x + 0.5 * width; }
  double center_y() const { return min_y + 0.5 * height; }

  /// Smallest rect containing both.
  Rect united(const Rect& other) const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// True iff the open interiors intersect. Shared edges and corners do not count.
bool rects_overlap(const Rect& a, const Rect& b);

/// Closed containment of a point.
bool contains(const Rect& r, Point p);

enum class Slot : std::uint8_t { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };
inline constexpr Slot kAllSlots[4] = {Slot::TopLeft, Slot::TopRight, Slot::BottomLeft,
                                      Slot::BottomRight};

enum class AxisOrder : std::uint8_t { HorizontalFirst = 0, VerticalFirst = 1 };

enum class Direction : std::uint8_t { PosX, NegX, PosY, NegY };

std::string_view to_string(Slot s);
std::string_view to_string(AxisOrder o);
std::string_view to_string(Direction d);
/// Accepts "TL"/"TopLeft"/"top_left" style spellings.
Slot parse_slot(std::string_view s);
/// Accepts "horizontal_first"/"H"/"HorizontalFirst" style spellings.
AxisOrder parse_axis_order(std::string_view s);

/// Slots sharing an edge (one axis differs).
bool is_adjacent(Slot a, Slot b);
/// Opposite slots (both axes differ): TL<->BR, TR<->BL.
bool is_diagonal(Slot a, Slot b);
/// The corner slot traversed by a diagonal move under the given axis order.
Slot corner_slot(Slot from, Slot to, AxisOrder order);

using LabelId = std::string;

struct LabelSpec {
  LabelId id;
  Point anchor;
  double width = 1.0;
  double height = 1.0;
  double weight = 1.0;
  std::string text;
};

/// The rect of `slot`; the anchor is the corner opposite to the slot name
/// (TopRight puts the anchor at the bottom-left corner).
Rect candidate_rect(Point anchor, double width, double height, Slot slot);
Rect candidate_rect(const LabelSpec& spec, Slot slot);

struct Leg {
  Direction direction = Direction::PosX;
  double length = 0.0;
};

/// Piecewise axis-aligned path of a label. Every leg takes exactly one time
/// unit (speed is one label width or height per time unit). A trajectory
/// without legs is a stationary label.
struct Trajectory {
  Rect start;
  std::vector<Leg> legs;
  double start_time = 0.0;

  static Trajectory stationary(const Rect& r) { return Trajectory{r, {}, 0.0}; }

  double duration() const { return static_cast<double>(legs.size()); }
  double end_time() const { return start_time + duration(); }
  /// Rect after the first `k` legs; k is clamped to the leg count.
  Rect waypoint(std::size_t k) const;
  Rect end_rect() const { return waypoint(legs.size()); }
  /// Bounding box of everything the label sweeps.
  Rect swept_bounds() const;
};

/// Sliding path between two slots. Diagonal moves get two legs ordered by
/// `order`; adjacent moves get one.
Trajectory make_trajectory(const LabelSpec& spec, Slot from, Slot to, AxisOrder order,
                           double start_time = 0.0);

/// Position at time t, clamped to the start and end rects outside the motion.
Rect rect_at(const Trajectory& traj, double t);

struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// All maximal time intervals inside `horizon` during which the two labels'
/// interiors intersect, in increasing order. Exact: motion is linear between
/// leg boundaries, so each piece reduces to two linear inequalities.
std::vector<Interval> swept_overlap_intervals(const Trajectory& a, const Trajectory& b,
                                              Interval horizon);

/// Earliest maximal overlap interval inside `horizon`, if any.
std::optional<Interval> swept_overlap(const Trajectory& a, const Trajectory& b, Interval horizon);
std::optional<Interval> swept_overlap(const Rect& a, const Trajectory& b, Interval horizon);
std::optional<Interval> swept_overlap(const Trajectory& a, const Rect& b, Interval horizon);
std::optional<Interval> swept_overlap(const Rect& a, const Rect& b, Interval horizon);

/// Upper bound on stationary labels a single diagonal mover can hit when label
/// sides vary: ceil(max w / min w) * ceil(max h / min h).
long rect_overlap_bound(std::span<const double> widths, std::span<const double> heights);

}  // namespace labelmorph
