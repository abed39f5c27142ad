#include "labelmorph/planner.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

#include "actors.hpp"

namespace labelmorph {

const LabelSpec& spec_of(const Catalog& catalog, const LabelId& id) {
  auto it = catalog.find(id);
  if (it == catalog.end()) throw Error("unknown label '" + id + "'");
  return it->second;
}

Catalog make_catalog(std::span<const LabelSpec> specs) {
  Catalog catalog;
  for (const auto& s : specs) {
    if (!(s.width > 0.0) || !(s.height > 0.0)) throw Error("label '" + s.id + "' has non-positive size");
    if (s.weight < 0.0) throw Error("label '" + s.id + "' has negative weight");
    if (!catalog.emplace(s.id, s).second) throw Error("duplicate label id '" + s.id + "'");
  }
  return catalog;
}

std::optional<std::pair<LabelId, LabelId>> find_overlap(const Catalog& catalog,
                                                        const Labeling& labeling) {
  std::vector<std::pair<Rect, const LabelId*>> rects;
  rects.reserve(labeling.size());
  for (const auto& [id, slot] : labeling) rects.emplace_back(candidate_rect(spec_of(catalog, id), slot), &id);
  std::sort(rects.begin(), rects.end(),
            [](const auto& a, const auto& b) { return a.first.min_x < b.first.min_x; });
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      if (rects[j].first.min_x >= rects[i].first.max_x()) break;
      if (rects_overlap(rects[i].first, rects[j].first)) {
        auto a = *rects[i].second, b = *rects[j].second;
        if (b < a) std::swap(a, b);
        return std::make_pair(a, b);
      }
    }
  }
  return std::nullopt;
}

bool is_overlap_free(const Catalog& catalog, const Labeling& labeling) {
  return !find_overlap(catalog, labeling).has_value();
}

namespace {

void require_overlap_free(const Catalog& catalog, const Labeling& labeling) {
  if (auto pair = find_overlap(catalog, labeling)) {
    throw Error("labeling not overlap-free: '" + pair->first + "' overlaps '" + pair->second + "'");
  }
}

}  // namespace

LabelingDiff diff_labelings(const Catalog& catalog, const Labeling& l1, const Labeling& l2,
                            AxisOrder default_order) {
  require_overlap_free(catalog, l1);
  require_overlap_free(catalog, l2);
  LabelingDiff diff;
  for (const auto& [id, slot] : l1) {
    auto it = l2.find(id);
    if (it == l2.end()) {
      diff.removals.push_back({id, slot});
    } else if (it->second == slot) {
      diff.stationary.push_back({id, slot});
    } else {
      diff.movements.push_back(Movement{id, slot, it->second, default_order});
    }
  }
  for (const auto& [id, slot] : l2) {
    if (!l1.contains(id)) diff.additions.push_back({id, slot});
  }
  return diff;
}

LabelingDiff with_axis_order(LabelingDiff diff, AxisOrder order) {
  for (auto& m : diff.movements) m.axis_order = order;
  return diff;
}

MovementPositions movement_positions(const Catalog& catalog, const Movement& m) {
  const LabelSpec& spec = spec_of(catalog, m.label_id);
  MovementPositions p{candidate_rect(spec, m.from), std::nullopt, candidate_rect(spec, m.to)};
  if (m.diagonal()) p.corner = candidate_rect(spec, corner_slot(m.from, m.to, m.axis_order));
  return p;
}

bool MovementGraph::has_edge(std::size_t from, std::size_t to) const {
  return std::binary_search(edges.begin(), edges.end(), Edge{from, to});
}

std::vector<std::size_t> MovementGraph::in_degrees() const {
  std::vector<std::size_t> deg(vertex_count, 0);
  for (const auto& [u, v] : edges) ++deg[v];
  return deg;
}

bool MovementGraph::acyclic() const {
  for (const auto& scc : strongly_connected_components(*this)) {
    if (scc.size() > 1) return false;
  }
  return true;
}

MovementGraph build_movement_graph(const Catalog& catalog, std::span<const Movement> movements) {
  const std::size_t n = movements.size();
  std::vector<MovementPositions> pos;
  pos.reserve(n);
  std::set<LabelId> seen;
  for (const auto& m : movements) {
    if (m.from == m.to) throw Error("null movement for '" + m.label_id + "'");
    if (!seen.insert(m.label_id).second) throw Error("two movements for label '" + m.label_id + "'");
    pos.push_back(movement_positions(catalog, m));
  }
  auto hits = [](const std::optional<Rect>& a, const Rect& b) { return a && rects_overlap(*a, b); };

  MovementGraph g;
  g.vertex_count = n;
  g.out.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& pi = pos[i];
      const auto& pj = pos[j];
      // i must move before j.
      const bool before = hits(pj.corner, pi.start) || rects_overlap(pj.end, pi.start) ||
                          hits(pi.corner, pj.end) ||
                          (i < j && pi.corner && pj.corner && rects_overlap(*pi.corner, *pj.corner));
      if (before) g.edges.emplace_back(i, j);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  for (const auto& [u, v] : g.edges) g.out[u].push_back(v);
  return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const MovementGraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.vertex_count;
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < g.out[v].size()) {
        const std::size_t w = g.out[v][next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comps;
}

std::vector<Edge> back_edges(const MovementGraph& g, std::span<const std::size_t> order) {
  std::vector<std::size_t> pos(g.vertex_count, 0);
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  std::vector<Edge> out;
  for (const auto& e : g.edges) {
    if (pos[e.first] > pos[e.second]) out.push_back(e);
  }
  return out;
}

std::vector<Edge> min_feedback_arc_set(const MovementGraph& g, std::size_t limit) {
  std::vector<Edge> result;
  for (const auto& comp : strongly_connected_components(g)) {
    const std::size_t k = comp.size();
    if (k < 2) continue;
    if (k > limit || k > 24) {
      throw Error("movement graph component of " + std::to_string(k) +
                  " vertices exceeds exact limit; use heuristic");
    }
    // out_mask[a]: local successors of a. Placing a after the set `mask`
    // turns every edge a -> mask into a back edge.
    std::vector<std::uint32_t> out_mask(k, 0);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a != b && g.has_edge(comp[a], comp[b])) out_mask[a] |= 1u << b;
      }
    }
    const std::uint32_t full = (k == 32) ? 0xffffffffu : ((1u << k) - 1u);
    std::vector<std::uint32_t> cost(std::size_t{1} << k, std::numeric_limits<std::uint32_t>::max());
    std::vector<std::uint8_t> last(std::size_t{1} << k, 0);
    cost[0] = 0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (cost[mask] == std::numeric_limits<std::uint32_t>::max()) continue;
      for (std::size_t a = 0; a < k; ++a) {
        if (mask & (1u << a)) continue;
        const std::uint32_t next = mask | (1u << a);
        const std::uint32_t c = cost[mask] + static_cast<std::uint32_t>(std::popcount(out_mask[a] & mask));
        if (c < cost[next]) {
          cost[next] = c;
          last[next] = static_cast<std::uint8_t>(a);
        }
      }
    }
    std::vector<std::size_t> local_order;
    for (std::uint32_t mask = full; mask != 0; mask &= ~(1u << last[mask])) local_order.push_back(last[mask]);
    std::reverse(local_order.begin(), local_order.end());
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[local_order[i]] = i;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if ((out_mask[a] & (1u << b)) && pos[a] > pos[b]) result.emplace_back(comp[a], comp[b]);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::string_view to_string(TransitionStyle s) {
  switch (s) {
    case TransitionStyle::Naive: return "naive";
    case TransitionStyle::Dag: return "dag";
    case TransitionStyle::Simultaneous: return "simul";
  }
  return "?";
}

TransitionStyle parse_style(std::string_view s) {
  if (s == "naive") return TransitionStyle::Naive;
  if (s == "dag") return TransitionStyle::Dag;
  if (s == "simul" || s == "simultaneous") return TransitionStyle::Simultaneous;
  throw Error("unknown transition style '" + std::string(s) + "'");
}

namespace {

TransitionPlan plan_skeleton(const LabelingDiff& diff, TransitionStyle style) {
  TransitionPlan plan;
  plan.style = style;
  plan.removals = diff.removals;
  plan.additions = diff.additions;
  plan.stationary = diff.stationary;
  plan.movement_start = diff.removals.empty() ? 0.0 : 1.0;
  return plan;
}

void finish_plan(TransitionPlan& plan) {
  double end = plan.movement_start;
  for (const auto& sm : plan.movements) end = std::max(end, sm.end_time());
  plan.addition_start = end;
  plan.makespan = end + (plan.additions.empty() ? 0.0 : 1.0);
}

}  // namespace

TransitionPlan plan_naive(const LabelingDiff& diff) {
  std::vector<LabelId> order;
  for (const auto& m : diff.movements) order.push_back(m.label_id);
  return plan_naive(diff, order);
}

TransitionPlan plan_naive(const LabelingDiff& diff, std::span<const LabelId> order) {
  if (order.size() != diff.movements.size()) throw Error("order is not a permutation of the movements");
  std::map<LabelId, std::size_t> index;
  for (std::size_t i = 0; i < diff.movements.size(); ++i) index[diff.movements[i].label_id] = i;
  std::vector<bool> used(diff.movements.size(), false);

  TransitionPlan plan = plan_skeleton(diff, TransitionStyle::Naive);
  double t = plan.movement_start;
  for (const auto& id : order) {
    auto it = index.find(id);
    if (it == index.end() || used[it->second]) throw Error("order is not a permutation of the movements");
    used[it->second] = true;
    const Movement& m = diff.movements[it->second];
    plan.movements.push_back({m, t});
    t += m.duration();
  }
  finish_plan(plan);
  return plan;
}

std::size_t lowest_in_degree_breaker(const MovementGraph& g, const std::vector<bool>& alive,
                                     const std::vector<std::size_t>& on_cycle,
                                     std::span<const Movement> movements) {
  std::vector<std::size_t> deg(g.vertex_count, 0);
  for (const auto& [u, v] : g.edges) {
    if (alive[u] && alive[v]) ++deg[v];
  }
  std::size_t best = on_cycle.front();
  for (std::size_t v : on_cycle) {
    if (deg[v] < deg[best] ||
        (deg[v] == deg[best] && movements[v].label_id < movements[best].label_id)) {
      best = v;
    }
  }
  return best;
}

TransitionPlan plan_dag(const LabelingDiff& diff, const MovementGraph& g, const CycleBreaker& breaker,
                        DagScheduleInfo* info) {
  const std::size_t n = diff.movements.size();
  if (g.vertex_count != n) throw Error("movement graph does not match the diff");

  std::vector<bool> alive(n, true);
  std::vector<std::size_t> broken;
  while (true) {
    MovementGraph rest;
    rest.vertex_count = n;
    rest.out.assign(n, {});
    for (const auto& e : g.edges) {
      if (alive[e.first] && alive[e.second]) {
        rest.edges.push_back(e);
        rest.out[e.first].push_back(e.second);
      }
    }
    std::vector<std::size_t> on_cycle;
    for (const auto& comp : strongly_connected_components(rest)) {
      if (comp.size() > 1) on_cycle.insert(on_cycle.end(), comp.begin(), comp.end());
    }
    if (on_cycle.empty()) break;
    std::sort(on_cycle.begin(), on_cycle.end());
    const std::size_t v = breaker(g, alive, on_cycle, diff.movements);
    if (v >= n || !alive[v]) throw Error("cycle breaker returned an invalid vertex");
    alive[v] = false;
    broken.push_back(v);
  }

  // Broken vertices first, then a topological order of the rest (Kahn,
  // smallest index first).
  std::vector<std::size_t> order = broken;
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& [u, v] : g.edges) {
    if (alive[u] && alive[v]) ++indeg[v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v] && indeg[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    const std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t w : g.out[v]) {
      if (alive[w] && --indeg[w] == 0) ready.push(w);
    }
  }

  std::vector<std::size_t> pos(n, 0);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
  std::vector<std::vector<std::size_t>> earlier_neighbors(n);
  for (const auto& [u, v] : g.edges) {
    if (pos[u] < pos[v]) earlier_neighbors[v].push_back(u);
    else earlier_neighbors[u].push_back(v);
  }

  TransitionPlan plan = plan_skeleton(diff, TransitionStyle::Dag);
  std::vector<double> finish(n, plan.movement_start);
  std::vector<ScheduledMovement> scheduled(n);
  for (std::size_t v : order) {
    double start = plan.movement_start;
    for (std::size_t u : earlier_neighbors[v]) start = std::max(start, finish[u]);
    scheduled[v] = {diff.movements[v], start};
    finish[v] = start + diff.movements[v].duration();
  }
  for (std::size_t v : order) plan.movements.push_back(scheduled[v]);
  finish_plan(plan);

  if (info) {
    info->order = order;
    info->broken = broken;
    info->back_edges = back_edges(g, order);
  }
  return plan;
}

TransitionPlan plan_dag(const Catalog& catalog, const LabelingDiff& diff, DagScheduleInfo* info) {
  const MovementGraph g = build_movement_graph(catalog, diff.movements);
  return plan_dag(diff, g, lowest_in_degree_breaker, info);
}

TransitionPlan plan_simultaneous(const LabelingDiff& diff) {
  TransitionPlan plan = plan_skeleton(diff, TransitionStyle::Simultaneous);
  for (const auto& m : diff.movements) plan.movements.push_back({m, plan.movement_start});
  finish_plan(plan);
  return plan;
}

TransitionPlan plan_simultaneous(const LabelingDiff& diff, AxisOrder order) {
  return plan_simultaneous(with_axis_order(diff, order));
}

namespace detail {

Actor make_actor(const LabelSpec& spec, Trajectory trajectory, Interval window) {
  Actor a{spec.id, std::move(trajectory), window, spec.weight, {}};
  a.bounds = a.trajectory.swept_bounds();
  return a;
}

std::vector<Actor> plan_actors(const TransitionPlan& plan, const Catalog& catalog) {
  std::vector<Actor> actors;
  const Interval whole{0.0, plan.makespan};
  for (const auto& p : plan.removals) {
    const LabelSpec& s = spec_of(catalog, p.label_id);
    actors.push_back(make_actor(s, Trajectory::stationary(candidate_rect(s, p.slot)),
                                {0.0, plan.movement_start}));
  }
  for (const auto& p : plan.stationary) {
    const LabelSpec& s = spec_of(catalog, p.label_id);
    actors.push_back(make_actor(s, Trajectory::stationary(candidate_rect(s, p.slot)), whole));
  }
  for (const auto& sm : plan.movements) {
    const LabelSpec& s = spec_of(catalog, sm.movement.label_id);
    actors.push_back(make_actor(
        s, make_trajectory(s, sm.movement.from, sm.movement.to, sm.movement.axis_order, sm.start_time),
        whole));
  }
  for (const auto& p : plan.additions) {
    const LabelSpec& s = spec_of(catalog, p.label_id);
    actors.push_back(make_actor(s, Trajectory::stationary(candidate_rect(s, p.slot)),
                                {plan.addition_start, plan.makespan}));
  }
  return actors;
}

std::optional<Interval> actor_overlap(const Actor& a, const Actor& b) {
  if (!rects_overlap(a.bounds, b.bounds)) return std::nullopt;
  const Interval horizon{std::max(a.window.start, b.window.start), std::min(a.window.end, b.window.end)};
  if (horizon.end - horizon.start <= kEps) return std::nullopt;
  const auto episodes = swept_overlap_intervals(a.trajectory, b.trajectory, horizon);
  if (episodes.empty()) return std::nullopt;
  return Interval{episodes.front().start, episodes.back().end};
}

}  // namespace detail

std::size_t OverlapReport::degree(const LabelId& id) const {
  return static_cast<std::size_t>(std::count_if(
      events.begin(), events.end(), [&](const OverlapEvent& e) { return e.id_a == id || e.id_b == id; }));
}

OverlapReport evaluate_plan(const TransitionPlan& plan, const Catalog& catalog) {
  OverlapReport report;
  report.makespan = plan.makespan;
  if (plan.makespan <= 0.0) return report;

  auto actors = detail::plan_actors(plan, catalog);
  std::sort(actors.begin(), actors.end(), [](const detail::Actor& a, const detail::Actor& b) {
    if (a.bounds.min_x != b.bounds.min_x) return a.bounds.min_x < b.bounds.min_x;
    return a.id < b.id;
  });
  for (std::size_t i = 0; i < actors.size(); ++i) {
    for (std::size_t j = i + 1; j < actors.size(); ++j) {
      if (actors[j].bounds.min_x >= actors[i].bounds.max_x()) break;
      const auto hit = detail::actor_overlap(actors[i], actors[j]);
      if (!hit) continue;
      OverlapEvent ev{actors[i].id, actors[j].id, *hit, actors[i].weight * actors[j].weight};
      if (ev.id_b < ev.id_a) std::swap(ev.id_a, ev.id_b);
      report.events.push_back(std::move(ev));
    }
  }
  std::sort(report.events.begin(), report.events.end(), [](const OverlapEvent& a, const OverlapEvent& b) {
    return std::tie(a.id_a, a.id_b) < std::tie(b.id_a, b.id_b);
  });
  report.pair_count = report.events.size();
  for (const auto& e : report.events) report.total_penalty += e.penalty;
  return report;
}

std::map<LabelId, Rect> rendered_at(const TransitionPlan& plan, const Catalog& catalog, double t) {
  std::map<LabelId, Rect> out;
  if (t < plan.movement_start) {
    for (const auto& p : plan.removals) out[p.label_id] = candidate_rect(spec_of(catalog, p.label_id), p.slot);
  }
  for (const auto& p : plan.stationary) out[p.label_id] = candidate_rect(spec_of(catalog, p.label_id), p.slot);
  for (const auto& sm : plan.movements) {
    const LabelSpec& s = spec_of(catalog, sm.movement.label_id);
    out[s.id] = rect_at(make_trajectory(s, sm.movement.from, sm.movement.to, sm.movement.axis_order,
                                        sm.start_time),
                        t);
  }
  if (t > plan.addition_start) {
    for (const auto& p : plan.additions) out[p.label_id] = candidate_rect(spec_of(catalog, p.label_id), p.slot);
  }
  return out;
}

std::size_t overlap_bound(TransitionStyle style, std::size_t movers, std::size_t fas_size) {
  switch (style) {
    case TransitionStyle::Naive: return 7 * movers;
    case TransitionStyle::Dag: return movers + fas_size;
    case TransitionStyle::Simultaneous: return 6 * movers;
  }
  throw Error("unknown transition style");
}

bool check_bound(const OverlapReport& report, TransitionStyle style, std::size_t movers,
                 std::size_t fas_size) {
  return report.pair_count <= overlap_bound(style, movers, fas_size);
}

bool check_bound(const OverlapReport& report, std::string_view style, std::size_t movers,
                 std::size_t fas_size) {
  return check_bound(report, parse_style(style), movers, fas_size);
}

OrderSearchResult exhaustive_order_search(const Catalog& catalog, const LabelingDiff& diff,
                                          std::size_t max_movements) {
  if (diff.movements.size() > max_movements) throw Error("too many movements for exhaustive order search");
  std::vector<LabelId> order;
  for (const auto& m : diff.movements) order.push_back(m.label_id);
  std::sort(order.begin(), order.end());
  OrderSearchResult result;
  result.best_pairs = std::numeric_limits<std::size_t>::max();
  do {
    const auto report = evaluate_plan(plan_naive(diff, order), catalog);
    ++result.orders_tried;
    if (report.pair_count < result.best_pairs) {
      result.best_pairs = report.pair_count;
      result.best_order = order;
    }
    result.worst_pairs = std::max(result.worst_pairs, report.pair_count);
  } while (std::next_permutation(order.begin(), order.end()));
  return result;
}

}  // namespace labelmorph
