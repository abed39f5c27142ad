#include "labelmorph/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace labelmorph {

namespace {

bool slot_is_right(Slot s) { return s == Slot::TopRight || s == Slot::BottomRight; }
bool slot_is_top(Slot s) { return s == Slot::TopLeft || s == Slot::TopRight; }

Slot slot_from_sides(bool right, bool top) {
  if (top) return right ? Slot::TopRight : Slot::TopLeft;
  return right ? Slot::BottomRight : Slot::BottomLeft;
}

std::string normalize(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

Leg leg_between(Slot a, Slot b, double width, double height) {
  if (slot_is_right(a) != slot_is_right(b)) {
    return Leg{slot_is_right(b) ? Direction::PosX : Direction::NegX, width};
  }
  return Leg{slot_is_top(b) ? Direction::PosY : Direction::NegY, height};
}

Rect shifted(Rect r, const Leg& leg, double fraction) {
  const double d = leg.length * fraction;
  switch (leg.direction) {
    case Direction::PosX: r.min_x += d; break;
    case Direction::NegX: r.min_x -= d; break;
    case Direction::PosY: r.min_y += d; break;
    case Direction::NegY: r.min_y -= d; break;
  }
  return r;
}

// Sub-interval of [s, e] on which |p + q (t - s)| < limit.
std::optional<Interval> linear_band(double s, double e, double p, double q, double limit) {
  if (limit <= 0.0) return std::nullopt;
  if (std::abs(q) < 1e-15) {
    if (std::abs(p) < limit) return Interval{s, e};
    return std::nullopt;
  }
  double t_a = s + (-limit - p) / q;
  double t_b = s + (limit - p) / q;
  if (t_a > t_b) std::swap(t_a, t_b);
  const double lo = std::max(s, t_a);
  const double hi = std::min(e, t_b);
  if (hi <= lo) return std::nullopt;
  return Interval{lo, hi};
}

}  // namespace

Rect Rect::united(const Rect& other) const {
  const double x0 = std::min(min_x, other.min_x);
  const double y0 = std::min(min_y, other.min_y);
  const double x1 = std::max(max_x(), other.max_x());
  const double y1 = std::max(max_y(), other.max_y());
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

bool rects_overlap(const Rect& a, const Rect& b) {
  const double ox = std::min(a.max_x(), b.max_x()) - std::max(a.min_x, b.min_x);
  const double oy = std::min(a.max_y(), b.max_y()) - std::max(a.min_y, b.min_y);
  return ox > kEps && oy > kEps;
}

bool contains(const Rect& r, Point p) {
  return p.x >= r.min_x && p.x <= r.max_x() && p.y >= r.min_y && p.y <= r.max_y();
}

std::string_view to_string(Slot s) {
  switch (s) {
    case Slot::TopLeft: return "TL";
    case Slot::TopRight: return "TR";
    case Slot::BottomLeft: return "BL";
    case Slot::BottomRight: return "BR";
  }
  return "?";
}

std::string_view to_string(AxisOrder o) {
  return o == AxisOrder::HorizontalFirst ? "horizontal_first" : "vertical_first";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::PosX: return "+x";
    case Direction::NegX: return "-x";
    case Direction::PosY: return "+y";
    case Direction::NegY: return "-y";
  }
  return "?";
}

Slot parse_slot(std::string_view s) {
  const std::string n = normalize(s);
  if (n == "tl" || n == "topleft") return Slot::TopLeft;
  if (n == "tr" || n == "topright") return Slot::TopRight;
  if (n == "bl" || n == "bottomleft") return Slot::BottomLeft;
  if (n == "br" || n == "bottomright") return Slot::BottomRight;
  throw Error("unknown slot '" + std::string(s) + "'");
}

AxisOrder parse_axis_order(std::string_view s) {
  const std::string n = normalize(s);
  if (n == "h" || n == "horizontalfirst" || n == "horizontal") return AxisOrder::HorizontalFirst;
  if (n == "v" || n == "verticalfirst" || n == "vertical") return AxisOrder::VerticalFirst;
  throw Error("unknown axis order '" + std::string(s) + "'");
}

bool is_adjacent(Slot a, Slot b) {
  return (slot_is_right(a) != slot_is_right(b)) != (slot_is_top(a) != slot_is_top(b));
}

bool is_diagonal(Slot a, Slot b) {
  return slot_is_right(a) != slot_is_right(b) && slot_is_top(a) != slot_is_top(b);
}

Slot corner_slot(Slot from, Slot to, AxisOrder order) {
  if (!is_diagonal(from, to)) throw Error("corner_slot requires a diagonal move");
  if (order == AxisOrder::HorizontalFirst) return slot_from_sides(slot_is_right(to), slot_is_top(from));
  return slot_from_sides(slot_is_right(from), slot_is_top(to));
}

Rect candidate_rect(Point anchor, double width, double height, Slot slot) {
  const double x = slot_is_right(slot) ? anchor.x : anchor.x - width;
  const double y = slot_is_top(slot) ? anchor.y : anchor.y - height;
  return Rect{x, y, width, height};
}

Rect candidate_rect(const LabelSpec& spec, Slot slot) {
  return candidate_rect(spec.anchor, spec.width, spec.height, slot);
}

Rect Trajectory::waypoint(std::size_t k) const {
  Rect r = start;
  for (std::size_t i = 0; i < std::min(k, legs.size()); ++i) r = shifted(r, legs[i], 1.0);
  return r;
}

Rect Trajectory::swept_bounds() const {
  Rect box = start;
  for (std::size_t k = 1; k <= legs.size(); ++k) box = box.united(waypoint(k));
  return box;
}

Trajectory make_trajectory(const LabelSpec& spec, Slot from, Slot to, AxisOrder order,
                           double start_time) {
  if (from == to) throw Error("null movement");
  Trajectory traj{candidate_rect(spec, from), {}, start_time};
  if (is_diagonal(from, to)) {
    const Slot mid = corner_slot(from, to, order);
    traj.legs.push_back(leg_between(from, mid, spec.width, spec.height));
    traj.legs.push_back(leg_between(mid, to, spec.width, spec.height));
  } else {
    traj.legs.push_back(leg_between(from, to, spec.width, spec.height));
  }
  return traj;
}

Rect rect_at(const Trajectory& traj, double t) {
  if (traj.legs.empty() || t <= traj.start_time) return traj.start;
  const double elapsed = t - traj.start_time;
  if (elapsed >= traj.duration()) return traj.end_rect();
  const auto k = static_cast<std::size_t>(std::floor(elapsed));
  return shifted(traj.waypoint(k), traj.legs[k], elapsed - static_cast<double>(k));
}

std::vector<Interval> swept_overlap_intervals(const Trajectory& a, const Trajectory& b,
                                              Interval horizon) {
  std::vector<Interval> out;
  if (!(horizon.end > horizon.start)) return out;

  std::vector<double> cuts{horizon.start, horizon.end};
  for (const Trajectory* tr : {&a, &b}) {
    for (std::size_t k = 0; k <= tr->legs.size(); ++k) {
      const double t = tr->start_time + static_cast<double>(k);
      if (t > horizon.start && t < horizon.end) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double half_w = 0.5 * (a.start.width + b.start.width) - kEps;
  const double half_h = 0.5 * (a.start.height + b.start.height) - kEps;

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s = cuts[i];
    const double e = cuts[i + 1];
    if (e - s <= 0.0) continue;
    const Rect as = rect_at(a, s), ae = rect_at(a, e);
    const Rect bs = rect_at(b, s), be = rect_at(b, e);
    const double dx_s = as.center_x() - bs.center_x();
    const double dy_s = as.center_y() - bs.center_y();
    const double qx = ((ae.center_x() - be.center_x()) - dx_s) / (e - s);
    const double qy = ((ae.center_y() - be.center_y()) - dy_s) / (e - s);
    const auto ix = linear_band(s, e, dx_s, qx, half_w);
    if (!ix) continue;
    const auto iy = linear_band(s, e, dy_s, qy, half_h);
    if (!iy) continue;
    const double lo = std::max(ix->start, iy->start);
    const double hi = std::min(ix->end, iy->end);
    if (hi - lo <= kEps) continue;
    if (!out.empty() && lo - out.back().end <= kEps) {
      out.back().end = std::max(out.back().end, hi);
    } else {
      out.push_back(Interval{lo, hi});
    }
  }
  return out;
}

std::optional<Interval> swept_overlap(const Trajectory& a, const Trajectory& b, Interval horizon) {
  auto all = swept_overlap_intervals(a, b, horizon);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::optional<Interval> swept_overlap(const Rect& a, const Trajectory& b, Interval horizon) {
  return swept_overlap(Trajectory::stationary(a), b, horizon);
}

std::optional<Interval> swept_overlap(const Trajectory& a, const Rect& b, Interval horizon) {
  return swept_overlap(a, Trajectory::stationary(b), horizon);
}

std::optional<Interval> swept_overlap(const Rect& a, const Rect& b, Interval horizon) {
  return swept_overlap(Trajectory::stationary(a), Trajectory::stationary(b), horizon);
}

long rect_overlap_bound(std::span<const double> widths, std::span<const double> heights) {
  if (widths.empty() || heights.empty()) throw Error("rect_overlap_bound needs nonempty size lists");
  auto ratio_ceil = [](std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (!(*lo > 0.0)) throw Error("label sizes must be positive");
    return static_cast<long>(std::ceil(*hi / *lo - 1e-9));
  };
  return ratio_ceil(widths) * ratio_ceil(heights);
}

}  // namespace labelmorph
