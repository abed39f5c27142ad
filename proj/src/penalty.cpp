#include "labelmorph/penalty.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "actors.hpp"

namespace labelmorph {

double penalty(const OverlapReport& report) {
  double w = 0.0;
  for (const auto& e : report.events) w += e.penalty;
  return w;
}

std::vector<LabelId> free_diagonals(const WeightedInstance& inst) {
  std::vector<LabelId> out;
  for (const auto& m : inst.diff.movements) {
    if (m.diagonal() && !inst.frozen.contains(m.label_id)) out.push_back(m.label_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabelingDiff apply_assignment(const LabelingDiff& diff, const DirectionAssignment& assignment) {
  LabelingDiff out = diff;
  for (auto& m : out.movements) {
    auto it = assignment.find(m.label_id);
    if (it == assignment.end()) continue;
    if (!m.diagonal()) throw Error("assignment names non-diagonal movement '" + m.label_id + "'");
    m.axis_order = it->second;
  }
  return out;
}

double evaluate_assignment(const WeightedInstance& inst, const DirectionAssignment& assignment) {
  return penalty(evaluate_plan(plan_simultaneous(apply_assignment(inst.diff, assignment)), inst.catalog));
}

namespace {

bool tied(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

// W(x) = constant + sum unary[i][x_i] + sum over pairs of pair[x_a][x_b],
// where x_i is 0 for HorizontalFirst and 1 for VerticalFirst.
struct PenaltyTable {
  std::vector<LabelId> vars;
  double constant = 0.0;
  std::vector<std::array<double, 2>> unary;
  struct Pair {
    std::size_t a, b;
    double p[2][2];
  };
  std::vector<Pair> pairs;

  bool bit(std::uint64_t mask, std::size_t i) const { return ((mask >> (vars.size() - 1 - i)) & 1u) != 0; }

  double eval(std::uint64_t mask) const {
    double w = constant;
    for (std::size_t i = 0; i < vars.size(); ++i) w += unary[i][bit(mask, i)];
    for (const auto& p : pairs) w += p.p[bit(mask, p.a)][bit(mask, p.b)];
    return w;
  }

  DirectionAssignment assignment(std::uint64_t mask, const WeightedInstance& inst) const {
    DirectionAssignment out;
    for (const auto& m : inst.diff.movements) {
      if (m.diagonal()) out[m.label_id] = m.axis_order;
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
      out[vars[i]] = bit(mask, i) ? AxisOrder::VerticalFirst : AxisOrder::HorizontalFirst;
    }
    return out;
  }
};

PenaltyTable build_table(const WeightedInstance& inst) {
  PenaltyTable table;
  table.vars = free_diagonals(inst);
  table.unary.assign(table.vars.size(), {0.0, 0.0});
  std::map<LabelId, std::size_t> var_of;
  for (std::size_t i = 0; i < table.vars.size(); ++i) var_of[table.vars[i]] = i;

  DirectionAssignment all_h, all_v;
  for (const auto& id : table.vars) {
    all_h[id] = AxisOrder::HorizontalFirst;
    all_v[id] = AxisOrder::VerticalFirst;
  }
  const auto variant = [&](const DirectionAssignment& a) {
    return detail::plan_actors(plan_simultaneous(apply_assignment(inst.diff, a)), inst.catalog);
  };
  const auto h = variant(all_h);
  const auto v = variant(all_v);
  const std::size_t n = h.size();

  std::vector<std::size_t> idx(n);
  std::vector<Rect> hull(n);
  std::vector<long> var(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = i;
    hull[i] = h[i].bounds.united(v[i].bounds);
    if (auto it = var_of.find(h[i].id); it != var_of.end() && h[i].trajectory.legs.size() == 2) {
      var[i] = static_cast<long>(it->second);
    }
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (hull[a].min_x != hull[b].min_x) return hull[a].min_x < hull[b].min_x;
    return a < b;
  });

  for (std::size_t ii = 0; ii < n; ++ii) {
    for (std::size_t jj = ii + 1; jj < n; ++jj) {
      std::size_t a = idx[ii], b = idx[jj];
      if (hull[b].min_x >= hull[a].max_x()) break;
      if (!rects_overlap(hull[a], hull[b])) continue;
      if (var[a] < 0 && var[b] >= 0) std::swap(a, b);
      const double w = h[a].weight * h[b].weight;
      double p[2][2];
      for (int oa = 0; oa < 2; ++oa) {
        for (int ob = 0; ob < 2; ++ob) {
          const auto& xa = oa ? v[a] : h[a];
          const auto& xb = ob ? v[b] : h[b];
          p[oa][ob] = detail::actor_overlap(xa, xb) ? w : 0.0;
        }
      }
      if (var[a] < 0) {
        table.constant += p[0][0];
      } else if (var[b] < 0) {
        table.unary[var[a]][0] += p[0][0];
        table.unary[var[a]][1] += p[1][0];
      } else if (p[0][0] != 0.0 || p[0][1] != 0.0 || p[1][0] != 0.0 || p[1][1] != 0.0) {
        PenaltyTable::Pair pair{static_cast<std::size_t>(var[a]), static_cast<std::size_t>(var[b]), {}};
        for (int oa = 0; oa < 2; ++oa) {
          for (int ob = 0; ob < 2; ++ob) pair.p[oa][ob] = p[oa][ob];
        }
        table.pairs.push_back(pair);
      }
    }
  }
  return table;
}

}  // namespace

DirectionSolution solve_directions_exact(const WeightedInstance& inst, std::size_t limit, unsigned threads) {
  const PenaltyTable table = build_table(inst);
  const std::size_t d = table.vars.size();
  if (d > limit || d > 40) {
    throw Error(std::to_string(d) + " diagonal movements exceeds exact limit of " + std::to_string(limit) +
                "; use heuristic mode");
  }
  const std::uint64_t total = std::uint64_t{1} << d;
  // Fixed chunking keeps the reduction independent of the thread count.
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 64);
  struct Best {
    double w = std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0;
  };
  std::vector<Best> best(chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
      Best b;
      for (std::uint64_t m = lo; m < hi; ++m) {
        const double w = table.eval(m);
        if (w < b.w && !tied(w, b.w)) b = {w, m};
      }
      best[c] = b;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1 || total < 4096) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Best overall = best.front();
  for (const auto& b : best) {
    if (b.w < overall.w && !tied(b.w, overall.w)) overall = b;
  }

  DirectionSolution sol;
  sol.assignment = table.assignment(overall.mask, inst);
  sol.penalty = evaluate_assignment(inst, sol.assignment);
  sol.evaluations = static_cast<std::size_t>(total);
  return sol;
}

DirectionSolution solve_directions_heuristic(const WeightedInstance& inst, std::size_t max_iters) {
  const PenaltyTable table = build_table(inst);
  const std::size_t d = table.vars.size();
  if (d > 63) throw Error("too many diagonal movements");
  std::uint64_t mask = 0;
  double current = table.eval(mask);
  std::size_t evaluations = 1;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    long pick = -1;
    double pick_w = current;
    for (std::size_t i = 0; i < d; ++i) {
      const double w = table.eval(mask ^ (std::uint64_t{1} << (d - 1 - i)));
      ++evaluations;
      if (w < pick_w && !tied(w, pick_w)) {
        pick = static_cast<long>(i);
        pick_w = w;
      }
    }
    if (pick < 0) break;
    mask ^= std::uint64_t{1} << (d - 1 - static_cast<std::size_t>(pick));
    current = pick_w;
  }
  DirectionSolution sol;
  sol.assignment = table.assignment(mask, inst);
  sol.penalty = evaluate_assignment(inst, sol.assignment);
  sol.evaluations = evaluations;
  return sol;
}

bool decide_weighted(const WeightedInstance& inst, std::size_t limit) {
  const auto sol = solve_directions_exact(inst, limit);
  return sol.penalty <= inst.k || tied(sol.penalty, inst.k);
}

ClauseGadget clause_gadget(Point origin, const std::string& prefix) {
  ClauseGadget g;
  g.x = prefix + "x";
  g.y = prefix + "y";
  const LabelSpec x{g.x, origin, 1.0, 1.0, 1.0, g.x};
  const LabelSpec y{g.y, {origin.x + 1.5, origin.y + 1.5}, 1.0, 1.0, 1.0, g.y};
  g.instance.catalog = {{g.x, x}, {g.y, y}};
  const Labeling before{{g.x, Slot::TopLeft}, {g.y, Slot::TopLeft}};
  const Labeling after{{g.x, Slot::BottomRight}, {g.y, Slot::BottomRight}};
  g.instance.diff = diff_labelings(g.instance.catalog, before, after);
  return g;
}

}  // namespace labelmorph
