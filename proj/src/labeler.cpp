#include "labelmorph/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace labelmorph {

std::size_t ConflictGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adj) twice += a.size();
  return twice / 2;
}

Candidate ConflictGraph::candidate(std::size_t v) const { return {points.at(v / 4).id, static_cast<Slot>(v % 4)}; }

Rect ConflictGraph::rect(std::size_t v) const { return candidate_rect(points.at(v / 4), static_cast<Slot>(v % 4)); }

bool ConflictGraph::adjacent(std::size_t u, std::size_t v) const {
  return std::binary_search(adj.at(u).begin(), adj.at(u).end(), v);
}

std::size_t ConflictGraph::vertex(const LabelId& point, Slot slot) const {
  auto it = std::lower_bound(points.begin(), points.end(), point,
                             [](const LabelSpec& s, const LabelId& id) { return s.id < id; });
  if (it == points.end() || it->id != point) throw Error("unknown point '" + point + "'");
  return 4 * static_cast<std::size_t>(it - points.begin()) + static_cast<std::size_t>(slot);
}

ConflictGraph build_conflict_graph(std::span<const LabelSpec> specs) {
  ConflictGraph g;
  g.points.assign(specs.begin(), specs.end());
  std::sort(g.points.begin(), g.points.end(), [](const LabelSpec& a, const LabelSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < g.points.size(); ++i) {
    if (g.points[i].id == g.points[i - 1].id) throw Error("duplicate point id '" + g.points[i].id + "'");
  }
  const std::size_t n = g.points.size();
  g.adj.assign(4 * n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        if (a != b) g.adj[4 * i + a].push_back(4 * i + b);
      }
    }
  }
  if (n == 0) return g;

  // Candidates of two points can only meet when their anchors are closer than
  // the sum of widths (heights); bucket anchors on a grid of twice the largest size.
  double cw = 0.0, ch = 0.0;
  for (const auto& p : g.points) {
    cw = std::max(cw, 2.0 * p.width);
    ch = std::max(ch, 2.0 * p.height);
  }
  auto key = [&](long cx, long cy) { return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy); };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  std::vector<std::pair<long, long>> cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell[i] = {static_cast<long>(std::floor(g.points[i].anchor.x / cw)),
               static_cast<long>(std::floor(g.points[i].anchor.y / ch))};
    grid[key(cell[i].first, cell[i].second)].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(cell[i].first + dx, cell[i].second + dy));
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          for (std::size_t a = 0; a < 4; ++a) {
            const Rect ra = candidate_rect(g.points[i], static_cast<Slot>(a));
            for (std::size_t b = 0; b < 4; ++b) {
              if (rects_overlap(ra, candidate_rect(g.points[j], static_cast<Slot>(b)))) {
                g.adj[4 * i + a].push_back(4 * j + b);
                g.adj[4 * j + b].push_back(4 * i + a);
              }
            }
          }
        }
      }
    }
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

Labeling greedy_mis(const ConflictGraph& g, const Labeling& pinned) {
  const std::size_t nv = g.vertex_count();
  std::vector<bool> alive(nv, true);
  std::vector<std::size_t> degree(nv);
  for (std::size_t v = 0; v < nv; ++v) degree[v] = g.adj[v].size();
  std::set<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t v = 0; v < nv; ++v) queue.emplace(degree[v], v);

  Labeling out;
  auto take = [&](std::size_t v) {
    out[g.candidate(v).point] = static_cast<Slot>(v % 4);
    std::vector<std::size_t> gone{v};
    for (std::size_t u : g.adj[v]) {
      if (alive[u]) gone.push_back(u);
    }
    for (std::size_t u : gone) {
      alive[u] = false;
      queue.erase({degree[u], u});
    }
    for (std::size_t u : gone) {
      for (std::size_t w : g.adj[u]) {
        if (!alive[w]) continue;
        queue.erase({degree[w], w});
        --degree[w];
        queue.emplace(degree[w], w);
      }
    }
  };

  std::vector<std::size_t> pins;
  for (const auto& [point, slot] : pinned) pins.push_back(g.vertex(point, slot));
  for (std::size_t i = 0; i < pins.size(); ++i) {
    for (std::size_t j = i + 1; j < pins.size(); ++j) {
      if (g.adjacent(pins[i], pins[j])) {
        throw Error("pinned set internally conflicting: " + g.candidate(pins[i]).point + " and " +
                    g.candidate(pins[j]).point);
      }
    }
  }
  for (std::size_t v : pins) take(v);
  while (!queue.empty()) take(queue.begin()->second);
  return out;
}

bool keep_previous(std::size_t i1, std::size_t i2) { return 100 * i2 < 102 * i1; }

StableLabeling relabel_stable(const Labeling& prev, std::span<const LabelSpec> specs_now, bool pin) {
  const ConflictGraph g = build_conflict_graph(specs_now);

  // Surviving previous labels, minus any that now conflict (id order).
  Labeling survivors;
  std::vector<std::size_t> kept;
  for (const auto& [point, slot] : prev) {
    const auto it = std::lower_bound(g.points.begin(), g.points.end(), point,
                                     [](const LabelSpec& s, const LabelId& id) { return s.id < id; });
    if (it == g.points.end() || it->id != point) continue;
    const std::size_t v = g.vertex(point, slot);
    if (std::any_of(kept.begin(), kept.end(), [&](std::size_t u) { return g.adjacent(u, v); })) continue;
    kept.push_back(v);
    survivors[point] = slot;
  }

  StableLabeling r;
  const Labeling fresh = greedy_mis(g, pin ? survivors : Labeling{});
  r.i1 = survivors.size();
  r.i2 = fresh.size();
  if (!keep_previous(r.i1, r.i2)) {
    r.labeling = fresh;
    return r;
  }
  r.kept_previous = true;
  r.labeling = survivors;
  for (const auto& p : g.points) {
    if (prev.contains(p.id)) continue;
    for (Slot s : kAllSlots) {
      const std::size_t v = g.vertex(p.id, s);
      if (std::none_of(kept.begin(), kept.end(), [&](std::size_t u) { return g.adjacent(u, v); })) {
        kept.push_back(v);
        r.labeling[p.id] = s;
        break;
      }
    }
  }
  return r;
}

}  // namespace labelmorph
