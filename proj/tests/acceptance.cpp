// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "labelmorph/fixtures.hpp"
#include "labelmorph/labeler.hpp"
#include "labelmorph/penalty.hpp"
#include "labelmorph/scenario.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace labelmorph;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "[failed: " << what << "] ";
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int number, const char* name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0) {
    o.detail << "limit " << time_limit << " s; ";
    o.require(secs < time_limit, "runtime");
  }
  std::printf("%s  %2d %-28s %s(%.2f s)\n", o.ok ? "PASS" : "FAIL", number, name, o.detail.str().c_str(), secs);
  std::fflush(stdout);
  failures += !o.ok;
}

bool fixture_ok(Outcome& o, const std::string& name) {
  const auto r = verify_fixture(name);
  for (const auto& c : r.checks) o.require(c.ok(), name + ": " + c.what);
  return r.passed();
}

// Overlap degree of `focus` from the sampling oracle.
std::size_t sampled_degree(const Fixture& f, const TransitionPlan& plan) {
  std::size_t d = 0;
  for (const auto& [a, b] : oracle::sampled_pairs(plan, f.catalog)) d += a == f.focus || b == f.focus;
  return d;
}

std::vector<LabelId> shuffled_ids(const LabelingDiff& diff, std::mt19937_64& rng) {
  std::vector<LabelId> ids;
  for (const auto& m : diff.movements) ids.push_back(m.label_id);
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

// One equal-sized diagonal mover at the origin plus up to ten stationary
// labels placed near it, none overlapping the mover's end positions.
gen::Instance single_mover(std::mt19937_64& rng) {
  static const double sizes[] = {0.5, 1.0, 2.0};
  std::uniform_int_distribution<int> pick(0, 2), coin(0, 1), slot(0, 3), count(0, 10), cell(-40, 40);
  const double w = sizes[pick(rng)], h = sizes[pick(rng)];
  gen::Instance inst;
  const Slot from = static_cast<Slot>(slot(rng));
  const Slot to = static_cast<Slot>(3 - static_cast<int>(from));
  inst.catalog["m"] = LabelSpec{"m", {0, 0}, w, h, 1, ""};
  inst.before["m"] = from;
  inst.after["m"] = to;
  std::vector<Rect> taken{candidate_rect(inst.catalog["m"], from), candidate_rect(inst.catalog["m"], to)};
  const int want = count(rng);
  for (int tries = 0, placed = 0; placed < want && tries < 400; ++tries) {
    const LabelSpec s{"s" + std::to_string(placed), {cell(rng) * w / 16.0, cell(rng) * h / 16.0}, w, h, 1, ""};
    const Slot sl = static_cast<Slot>(slot(rng));
    const Rect r = candidate_rect(s, sl);
    if (std::any_of(taken.begin(), taken.end(), [&](const Rect& t) { return rects_overlap(t, r); })) continue;
    taken.push_back(r);
    inst.catalog[s.id] = s;
    inst.before[s.id] = sl;
    inst.after[s.id] = sl;
    ++placed;
  }
  inst.diff = diff_labelings(inst.catalog, inst.before, inst.after, coin(rng) ? AxisOrder::VerticalFirst
                                                                              : AxisOrder::HorizontalFirst);
  return inst;
}

void lemma1(Outcome& o) {
  fixture_ok(o, "lemma1");
  const Fixture f = lemma1_fixture();
  o.require(oracle::sampled_pairs(f.plan(), f.catalog).size() == 1, "fixture sampled pairs");
  std::mt19937_64 rng(1001);
  std::size_t worst = 0, with_one = 0;
  const int runs = 1500;
  for (int i = 0; i < runs; ++i) {
    const auto inst = single_mover(rng);
    const auto pairs = evaluate_plan(plan_naive(inst.diff), inst.catalog).pair_count;
    worst = std::max(worst, pairs);
    with_one += pairs == 1;
  }
  o.require(worst <= 1, "random suite exceeded one overlap");
  o.detail << "fixture 1 pair; " << runs << " random, max " << worst << " (" << with_one << " with one); ";
}

void fig4b(Outcome& o) {
  fixture_ok(o, "fig4b_degree14");
  const Fixture f = fig4b_fixture();
  const auto degree = sampled_degree(f, f.plan());
  o.require(degree == 14, "sampled center degree");
  std::mt19937_64 rng(1002);
  double worst_ratio = 0;
  const int runs = 1500;
  for (int i = 0; i < runs; ++i) {
    const auto inst = gen::random_instance(rng, {.max_labels = 12, .extent = i % 2 ? 2.0 : 3.0, .keep = 1.0});
    const auto n = inst.diff.movements.size();
    if (n == 0) continue;
    const auto pairs = evaluate_plan(plan_naive(inst.diff, shuffled_ids(inst.diff, rng)), inst.catalog).pair_count;
    o.require(pairs <= 7 * n, "pair_count <= 7n");
    worst_ratio = std::max(worst_ratio, static_cast<double>(pairs) / static_cast<double>(n));
  }
  o.detail << "center degree " << degree << "; " << runs << " random, max pairs/n " << worst_ratio << "; ";
}

void fig5(Outcome& o) {
  fixture_ok(o, "fig5_n_plus_m");
  const Fixture f = fig5_fixture();
  const auto diff = f.diff();
  const auto g = build_movement_graph(f.catalog, diff.movements);
  const auto fas = oracle::brute_force_fas(g.vertex_count, g.edges);
  o.require(diff.movements.size() == 8 && fas == 1, "n = 8, m = 1");
  std::vector<LabelId> order;
  for (const auto& m : diff.movements) order.push_back(m.label_id);
  std::sort(order.begin(), order.end());
  std::size_t best = SIZE_MAX, tried = 0;
  do {
    best = std::min(best, evaluate_plan(plan_naive(diff, order), f.catalog).pair_count);
    ++tried;
  } while (std::next_permutation(order.begin(), order.end()));
  o.require(best == 9 && tried == 40320, "exhaustive best order");
  const auto dag = evaluate_plan(plan_dag(f.catalog, diff), f.catalog).pair_count;
  o.require(dag == 9, "dag plan");
  o.detail << "n 8, m " << fas << ", best of " << tried << " orders " << best << ", dag " << dag << "; ";
}

void fig8b(Outcome& o) {
  fixture_ok(o, "fig8b_twelve");
  const Fixture f = fig8b_fixture();
  o.require(is_overlap_free(f.catalog, f.before) && is_overlap_free(f.catalog, f.after), "labelings overlap-free");
  std::size_t partners = 0;
  for (const auto& [a, b] : oracle::sampled_pairs(f.plan(), f.catalog)) {
    if (a != f.focus && b != f.focus) continue;
    const auto& other = a == f.focus ? b : a;
    partners += f.before.contains(other) && f.after.contains(other) && f.before.at(other) != f.after.at(other);
  }
  o.require(partners == 12, "sampled moving partners");
  std::mt19937_64 rng(1004);
  double worst_ratio = 0;
  const int runs = 1500;
  for (int i = 0; i < runs; ++i) {
    const auto inst = gen::random_instance(rng, {.max_labels = 14, .extent = i % 2 ? 2.0 : 3.0, .keep = 1.0});
    const auto n = inst.diff.movements.size();
    if (n == 0) continue;
    const auto pairs = evaluate_plan(plan_simultaneous(inst.diff), inst.catalog).pair_count;
    o.require(pairs <= 6 * n, "pair_count <= 6n");
    worst_ratio = std::max(worst_ratio, static_cast<double>(pairs) / static_cast<double>(n));
  }
  o.detail << "moving partners " << partners << "; " << runs << " random, max pairs/n " << worst_ratio << "; ";
}

void shift_chain(Outcome& o) {
  const Fixture f = shift_chain_fixture(5);
  const auto diff = f.diff();
  const auto naive = f.plan();
  const auto naive_pairs = evaluate_plan(naive, f.catalog).pair_count;
  const auto dag_pairs = evaluate_plan(plan_dag(f.catalog, diff), f.catalog).pair_count;
  const auto simul = plan_simultaneous(diff);
  const auto simul_pairs = evaluate_plan(simul, f.catalog).pair_count;
  o.require(naive_pairs == 4, "naive overlaps k-1");
  o.require(naive.movement_span() == 5.0, "naive span k");
  o.require(dag_pairs == 0, "dag overlaps");
  o.require(simul_pairs == 0 && simul.movement_span() == 1.0, "simultaneous");
  fixture_ok(o, "shift_chain(5)");
  o.detail << "k 5: naive " << naive_pairs << " pairs / span " << naive.movement_span() << ", dag " << dag_pairs
           << ", simul " << simul_pairs << " / span " << simul.movement_span() << "; ";
}

void swept_oracle(Outcome& o) {
  static const double sizes[] = {0.5, 1.0, 1.5, 2.0};
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<int> slot(0, 3), coin(0, 1), grid(-48, 48), start(0, 4), size(0, 3);
  const int runs = 12000;
  int agree = 0, with_overlap = 0;
  double worst = 0;
  for (int i = 0; i < runs; ++i) {
    const double wa = sizes[size(rng)], ha = sizes[size(rng)], wb = sizes[size(rng)], hb = sizes[size(rng)];
    const double ax = grid(rng) / 16.0, ay = grid(rng) / 16.0, bx = grid(rng) / 16.0, by = grid(rng) / 16.0;
    int fa = slot(rng), ta = slot(rng), fb = slot(rng), tb = slot(rng);
    if (fa == ta) ta = 3 - fa;
    const bool b_moves = coin(rng);
    if (b_moves && fb == tb) tb = (tb + 1) % 4;
    const bool va = coin(rng), vb = coin(rng);
    const double sa = start(rng) / 2.0, sb = start(rng) / 2.0;
    const auto order = [](bool v) { return v ? AxisOrder::VerticalFirst : AxisOrder::HorizontalFirst; };

    const LabelSpec la{"a", {ax, ay}, wa, ha, 1, ""}, lb{"b", {bx, by}, wb, hb, 1, ""};
    const Trajectory A = make_trajectory(la, static_cast<Slot>(fa), static_cast<Slot>(ta), order(va), sa);
    const Trajectory B = b_moves ? make_trajectory(lb, static_cast<Slot>(fb), static_cast<Slot>(tb), order(vb), sb)
                                 : Trajectory::stationary(candidate_rect(lb, static_cast<Slot>(fb)));
    const auto pa = oracle::movement_path(ax, ay, wa, ha, fa, ta, va, sa);
    const auto pb = b_moves ? oracle::movement_path(bx, by, wb, hb, fb, tb, vb, sb)
                            : oracle::Path{{oracle::slot_rect(bx, by, wb, hb, fb)}, 0.0};

    const auto analytic = swept_overlap_intervals(A, B, {0, 5});
    const auto sampled = oracle::sampled_overlaps(pa, pb, 0, 5, 1e-3);
    bool ok = analytic.empty() == sampled.empty() && analytic.size() == sampled.size();
    for (std::size_t k = 0; ok && k < analytic.size(); ++k) {
      const double d = std::max(std::abs(analytic[k].start - sampled[k].start),
                                std::abs(analytic[k].end - sampled[k].end));
      worst = std::max(worst, d);
      ok = d < 1e-2;
    }
    agree += ok;
    with_overlap += !analytic.empty();
  }
  o.require(agree == runs, "agreement");
  o.detail << agree << "/" << runs << " agree (" << with_overlap << " overlapping), max endpoint error " << worst
           << "; ";
}

std::size_t diagonal_count(const LabelingDiff& d) {
  return static_cast<std::size_t>(
      std::count_if(d.movements.begin(), d.movements.end(), [](const Movement& m) { return m.diagonal(); }));
}

double brute_force_min(const WeightedInstance& inst) {
  const auto vars = free_diagonals(inst);
  double best = 1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    DirectionAssignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      a[vars[i]] = (mask >> i) & 1 ? AxisOrder::VerticalFirst : AxisOrder::HorizontalFirst;
    }
    best = std::min(best, evaluate_assignment(inst, a));
  }
  return best;
}

void weighted(Outcome& o) {
  const auto g = clause_gadget();
  const double table[4] = {
      evaluate_assignment(g.instance, {{g.x, g.x_outward}, {g.y, g.y_outward}}),
      evaluate_assignment(g.instance, {{g.x, g.x_outward}, {g.y, g.y_inward}}),
      evaluate_assignment(g.instance, {{g.x, g.x_inward}, {g.y, g.y_outward}}),
      evaluate_assignment(g.instance, {{g.x, g.x_inward}, {g.y, g.y_inward}}),
  };
  o.require(table[0] == 0 && table[1] == 0 && table[2] == 0 && table[3] == 1, "clause truth table");
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<int> kk(0, 8);
  int runs = 0, yes = 0;
  while (runs < 120) {
    auto gi = gen::random_instance(rng, {.max_labels = 14, .min_labels = 6, .extent = 3.0, .keep = 1.0,
                                         .random_axis = false, .weighted = true});
    const auto d = diagonal_count(gi.diff);
    if (d < 1 || d > 10) continue;
    WeightedInstance inst{gi.catalog, gi.diff, static_cast<double>(kk(rng)), {}};
    const auto exact = solve_directions_exact(inst);
    const auto heur = solve_directions_heuristic(inst);
    const double brute = brute_force_min(inst);
    o.require(heur.penalty >= exact.penalty - 1e-9, "heuristic >= exact");
    o.require(std::abs(exact.penalty - brute) < 1e-9, "exact == brute force");
    const bool decided = decide_weighted(inst);
    o.require(decided == (brute <= inst.k), "decision");
    yes += decided;
    ++runs;
  }
  o.detail << "W table {" << table[0] << "," << table[1] << "," << table[2] << "," << table[3] << "}; " << runs
           << " random (" << yes << " yes); ";
}

void corollary1(Outcome& o) {
  const double w[] = {8, 3};
  const auto bound = rect_overlap_bound(w, w);
  o.require(bound == 9, "rect_overlap_bound");
  fixture_ok(o, "corollary1");
  const Fixture f = corollary1_fixture();
  const auto degree = evaluate_plan(f.plan(), f.catalog).degree(f.focus);
  o.require(degree == 9 && sampled_degree(f, f.plan()) == 9, "mover degree");
  o.detail << "bound " << bound << ", mover overlaps " << degree << "; ";
}

void labeler(Outcome& o) {
  std::mt19937_64 rng(1009);
  std::uniform_int_distribution<std::size_t> count(1, 40);
  const int runs = 1500;
  int small = 0;
  double worst_ratio = 1;
  for (int i = 0; i < runs; ++i) {
    const std::size_t n = i % 2 ? count(rng) : 1 + count(rng) % 8;
    const double extent = i % 3 == 0 ? 3.0 : 8.0;
    std::uniform_real_distribution<double> pos(0.0, extent);
    std::vector<LabelSpec> pts;
    for (std::size_t p = 0; p < n; ++p) {
      const std::string id = "p" + std::to_string(1000 + p);
      pts.push_back(LabelSpec{id, {pos(rng), pos(rng)}, 1.0, 0.5, 1.0, id});
    }
    const auto g = build_conflict_graph(pts);
    const auto l = greedy_mis(g);
    std::vector<std::size_t> in;
    for (const auto& [p, s] : l) in.push_back(g.vertex(p, s));
    bool independent = true;
    for (std::size_t a = 0; a < in.size(); ++a) {
      for (std::size_t b = a + 1; b < in.size(); ++b) independent = independent && !g.adjacent(in[a], in[b]);
    }
    bool maximal = true;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      maximal = maximal && std::any_of(in.begin(), in.end(), [&](std::size_t u) { return u == v || g.adjacent(u, v); });
    }
    o.require(independent && maximal, "independent and maximal");
    if (n <= 8) {
      std::vector<std::vector<bool>> adj(g.vertex_count(), std::vector<bool>(g.vertex_count()));
      for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        for (std::size_t v = 0; v < g.vertex_count(); ++v) adj[u][v] = u != v && g.adjacent(u, v);
      }
      const auto best = oracle::max_independent_labels(adj, n);
      o.require(2 * l.size() >= best, "half of optimum");
      if (best) worst_ratio = std::min(worst_ratio, static_cast<double>(l.size()) / static_cast<double>(best));
      ++small;
    }
  }
  o.detail << runs << " random; " << small << " with <= 8 points, min greedy/opt " << worst_ratio << "; ";
}

struct SeedRuns {
  ScriptRun naive, dag, simul;
};

SeedRuns run_seed(std::uint64_t seed) {
  const ScenarioPreset& preset = scenario_preset("italy");
  const auto store = std::make_shared<const PointStore>(synthetic_dataset(synthetic_options(preset, seed)));
  const auto script = parse_script("sweep3h");
  auto run = [&](TransitionStyle style) {
    ScenarioConfig config;
    config.style = style;
    return run_script(store, preset_view(preset, config.screen), script, config);
  };
  return {run(TransitionStyle::Naive), run(TransitionStyle::Dag), run(TransitionStyle::Simultaneous)};
}

std::vector<SeedRuns> seed_runs;

void monotonicity(Outcome& o) {
  seed_runs.push_back(run_seed(1));
  const auto& r = seed_runs.front();
  const auto n = r.naive.records.size();
  o.require(n == 36 && r.dag.records.size() == n && r.simul.records.size() == n, "36 transitions per style");
  std::size_t checked = 0, strict = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = r.simul.records[i].plan.makespan, b = r.dag.records[i].plan.makespan,
                 c = r.naive.records[i].plan.makespan;
    o.require(r.naive.records[i].to == r.dag.records[i].to && r.dag.records[i].to == r.simul.records[i].to,
              "same labelings");
    o.require(a <= b && b <= c, "makespan order at transition " + std::to_string(i));
    ++checked;
    strict += a < b && b < c;
  }
  o.detail << checked << " transitions x 3 styles (" << strict << " strictly ordered); ";
}

void case_study(Outcome& o) {
  for (std::uint64_t seed = 2; seed <= 20; ++seed) seed_runs.push_back(run_seed(seed));
  int dag_le_naive = 0, dependent = 0, strict = 0;
  for (const auto& r : seed_runs) {
    dag_le_naive += r.dag.metrics.overlaps_avg <= r.naive.metrics.overlaps_avg;
    const bool has_dependent = std::any_of(r.dag.records.begin(), r.dag.records.end(),
                                           [](const TransitionRecord& t) { return t.dependency_edges > 0; });
    if (!has_dependent) continue;
    ++dependent;
    const bool ordered = r.simul.metrics.duration_avg < r.dag.metrics.duration_avg &&
                         r.dag.metrics.duration_avg < r.naive.metrics.duration_avg;
    strict += ordered;
  }
  const int seeds = static_cast<int>(seed_runs.size());
  o.require(seeds == 20, "20 seeds");
  o.require(10 * dag_le_naive >= 9 * seeds, "dag overlaps <= naive in 90% of seeds");
  o.require(strict == dependent, "strict duration order");
  o.detail << "dag ovl <= naive in " << dag_le_naive << "/" << seeds << "; duration simul < dag < naive in " << strict
           << "/" << dependent << " runs with dependent movements; ";
}

void print_table() {
  const auto& r = seed_runs.front();
  std::printf("\nsynthetic italy, seed 1, sweep3h\n");
  std::printf("%-7s %6s %8s %8s %8s %8s %8s\n", "style", "trans", "ovl avg", "ovl max", "dur avg", "dur max", "moved");
  for (const auto* m : {&r.naive.metrics, &r.dag.metrics, &r.simul.metrics}) {
    std::printf("%-7s %6zu %8.2f %8zu %8.2f %8.1f %8zu\n", std::string(to_string(m->style)).c_str(), m->transitions,
                m->overlaps_avg, m->overlaps_max, m->duration_avg, m->duration_max, m->moved);
  }
  std::printf("\n%-5s %10s %10s %10s %10s %10s %10s\n", "seed", "naive ovl", "dag ovl", "simul ovl", "naive dur",
              "dag dur", "simul dur");
  for (std::size_t i = 0; i < seed_runs.size(); ++i) {
    const auto& s = seed_runs[i];
    std::printf("%-5zu %10.2f %10.2f %10.2f %10.2f %10.2f %10.2f\n", i + 1, s.naive.metrics.overlaps_avg,
                s.dag.metrics.overlaps_avg, s.simul.metrics.overlaps_avg, s.naive.metrics.duration_avg,
                s.dag.metrics.duration_avg, s.simul.metrics.duration_avg);
  }
}

}  // namespace

int main() {
  criterion(1, "single diagonal mover", 5, lemma1);
  criterion(2, "consecutive degree 14, 7n", 30, fig4b);
  criterion(3, "n + m tightness", 60, fig5);
  criterion(4, "simultaneous twelve, 6n", 30, fig8b);
  criterion(5, "shift chain", 0, shift_chain);
  criterion(6, "swept overlap oracle", 60, swept_oracle);
  criterion(7, "weighted decision", 0, weighted);
  criterion(8, "overlap bound of a mover", 0, corollary1);
  criterion(9, "greedy labeler", 0, labeler);
  criterion(10, "makespan monotonicity", 0, monotonicity);
  criterion(11, "case study, 20 seeds", 0, case_study);
  if (seed_runs.size() == 20) print_table();
  std::printf("\n%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
