#include "labelmorph/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "labelmorph/penalty.hpp"

namespace labelmorph {

namespace {

constexpr auto H = AxisOrder::HorizontalFirst;
constexpr auto V = AxisOrder::VerticalFirst;
constexpr auto TL = Slot::TopLeft;
constexpr auto TR = Slot::TopRight;
constexpr auto BL = Slot::BottomLeft;
constexpr auto BR = Slot::BottomRight;

void add_label(Fixture& f, const LabelId& id, double x, double y, double w, double h) {
  f.catalog[id] = LabelSpec{id, {x, y}, w, h, 1.0, id};
}

void add_mover(Fixture& f, const LabelId& id, double x, double y, double size, Slot from, Slot to,
               AxisOrder order = H) {
  add_label(f, id, x, y, size, size);
  f.before[id] = from;
  f.after[id] = to;
  if (is_diagonal(from, to)) f.axis_orders[id] = order;
}

void add_stationary(Fixture& f, const LabelId& id, double x, double y, double w, double h, Slot slot) {
  add_label(f, id, x, y, w, h);
  f.before[id] = slot;
  f.after[id] = slot;
}

std::string padded(std::size_t i, int width = 2) {
  std::string s = std::to_string(i);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

// Unit diagonal mover with a stationary label on its traversed corner.
void add_lemma1_gadget(Fixture& f, const std::string& mover, const std::string& blocker, double x, double y) {
  add_mover(f, mover, x, y, 1.0, TL, BR, V);
  add_stationary(f, blocker, x - 0.5, y - 0.5, 1.0, 1.0, BL);
}

// Two unit movers, each ending on the other's start.
void add_swap_pair(Fixture& f, const std::string& a, const std::string& b, double x, double y) {
  add_mover(f, a, x, y, 1.0, TL, BR, V);
  add_mover(f, b, x + 0.5, y + 0.5, 1.0, BR, TL, V);
}

struct MoverRow {
  double x, y;
  Slot from, to;
  AxisOrder order;
};

std::size_t moving_partners(const OverlapReport& report, const Fixture& f) {
  std::size_t count = 0;
  for (const auto& e : report.events) {
    if (e.id_a != f.focus && e.id_b != f.focus) continue;
    const LabelId& other = e.id_a == f.focus ? e.id_b : e.id_a;
    const auto b = f.before.find(other), a = f.after.find(other);
    if (b != f.before.end() && a != f.after.end() && b->second != a->second) ++count;
  }
  return count;
}

std::optional<std::size_t> parameter(std::string_view name, std::string_view base) {
  std::string_view rest = name.substr(base.size());
  if (rest.empty()) return std::nullopt;
  if (rest.front() == ':' ) {
    rest.remove_prefix(1);
  } else if (rest.front() == '(' && rest.back() == ')') {
    rest = rest.substr(1, rest.size() - 2);
  } else {
    throw Error("bad fixture parameter in '" + std::string(name) + "'");
  }
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc() || ptr != rest.data() + rest.size()) {
    throw Error("bad fixture parameter in '" + std::string(name) + "'");
  }
  return v;
}

}  // namespace

LabelingDiff Fixture::diff() const {
  LabelingDiff d = diff_labelings(catalog, before, after);
  for (auto& m : d.movements) {
    if (auto it = axis_orders.find(m.label_id); it != axis_orders.end()) m.axis_order = it->second;
  }
  return d;
}

TransitionPlan Fixture::plan() const {
  const LabelingDiff d = diff();
  switch (style) {
    case TransitionStyle::Naive: return order.empty() ? plan_naive(d) : plan_naive(d, order);
    case TransitionStyle::Dag: return plan_dag(catalog, d);
    case TransitionStyle::Simultaneous: return plan_simultaneous(d);
  }
  throw Error("unknown style");
}

Fixture lemma1_fixture() {
  Fixture f;
  f.name = "lemma1";
  add_lemma1_gadget(f, "mover", "blocker", 0.0, 0.0);
  f.style = TransitionStyle::Simultaneous;
  f.focus = "mover";
  f.expected = 1;
  return f;
}

Fixture fig4b_fixture() {
  // 2x2 labels on an integer grid. The center moves TL -> BR through BL.
  static const MoverRow before_center[] = {
      {-3, -3, BL, TR, H}, {-3, -1, BL, TR, H}, {-3, 1, BL, TR, H}, {-3, 2, TR, BL, V},
      {-3, 3, BL, TR, H},  {-1, 3, TR, BR, H},  {1, 3, BR, TL, H},
  };
  static const MoverRow after_center[] = {
      {-3, -2, TR, TL, H}, {-1, -3, TR, BL, H}, {1, -3, TR, BL, H}, {2, -3, BL, TR, V},
      {2, 1, BL, BR, H},   {3, -3, TR, BL, H},  {3, 1, BR, TL, H},
  };
  Fixture f;
  f.name = "fig4b_degree14";
  std::size_t i = 0;
  for (const auto& r : before_center) {
    const std::string id = "p" + padded(++i);
    add_mover(f, id, r.x, r.y, 2.0, r.from, r.to, r.order);
    f.order.push_back(id);
  }
  add_mover(f, "center", 0, 0, 2.0, TL, BR, V);
  f.order.push_back("center");
  for (const auto& r : after_center) {
    const std::string id = "p" + padded(++i);
    add_mover(f, id, r.x, r.y, 2.0, r.from, r.to, r.order);
    f.order.push_back(id);
  }
  f.style = TransitionStyle::Naive;
  f.focus = "center";
  f.expected = 14;
  return f;
}

Fixture fig5_fixture() {
  Fixture f;
  f.name = "fig5_n_plus_m";
  for (std::size_t g = 0; g < 6; ++g) {
    add_lemma1_gadget(f, "g" + std::to_string(g + 1), "k" + std::to_string(g + 1), 10.0 * static_cast<double>(g), 0.0);
  }
  add_swap_pair(f, "sa", "sb", 60.0, 0.0);
  add_stationary(f, "ka", 59.5, -0.5, 1.0, 1.0, BL);
  add_stationary(f, "kb", 61.0, 1.0, 1.0, 1.0, TR);
  f.style = TransitionStyle::Dag;
  f.expected = 9;
  return f;
}

Fixture shift_chain_fixture(std::size_t k) {
  if (k == 0) throw Error("shift_chain needs k >= 1");
  Fixture f;
  f.name = "shift_chain(" + std::to_string(k) + ")";
  for (std::size_t i = 0; i < k; ++i) {
    add_mover(f, "s" + padded(i), 1.5 * static_cast<double>(i), 0.0, 1.0, TL, TR);
  }
  f.style = TransitionStyle::Naive;
  f.expected = k - 1;
  return f;
}

Fixture fig8b_fixture() {
  // 6x6 labels on an integer grid; all thirteen movers start together.
  static const MoverRow rows[] = {
      {-11, -11, TL, BR, H}, {-11, -10, BR, TL, V}, {-10, -4, BR, TL, V}, {-10, 1, BL, TR, H},
      {-10, 7, BL, TR, H},   {-5, -11, BR, TL, V},  {-4, -5, BR, TL, H},  {2, -11, TR, BL, H},
      {2, 2, BR, TL, H},     {2, 8, BR, TL, H},     {8, -9, TR, BL, H},   {8, 3, BR, TL, H},
  };
  Fixture f;
  f.name = "fig8b_twelve";
  add_mover(f, "center", 0, 0, 6.0, TL, BR, V);
  std::size_t i = 0;
  for (const auto& r : rows) add_mover(f, "q" + padded(++i), r.x, r.y, 6.0, r.from, r.to, r.order);
  f.style = TransitionStyle::Simultaneous;
  f.focus = "center";
  f.expected = 12;
  return f;
}

Fixture clause_gadget_fixture() {
  const ClauseGadget g = clause_gadget();
  Fixture f;
  f.name = "clause_gadget";
  f.catalog = g.instance.catalog;
  f.before = {{g.x, TL}, {g.y, TL}};
  f.after = {{g.x, BR}, {g.y, BR}};
  f.axis_orders = {{g.x, g.x_inward}, {g.y, g.y_inward}};
  f.style = TransitionStyle::Simultaneous;
  f.expected = 1;
  return f;
}

Fixture swap_cycle_fixture(std::size_t m) {
  if (m == 0) throw Error("swap_cycle needs m >= 1");
  Fixture f;
  f.name = "swap_cycle(" + std::to_string(m) + ")";
  for (std::size_t i = 0; i < m; ++i) {
    add_swap_pair(f, "w" + padded(i) + "a", "w" + padded(i) + "b", 5.0 * static_cast<double>(i), 0.0);
  }
  f.style = TransitionStyle::Dag;
  f.expected = m;
  return f;
}

Fixture corollary1_fixture() {
  Fixture f;
  f.name = "corollary1";
  add_mover(f, "big", 0, 0, 8.0, TL, BR, V);
  std::size_t i = 0;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      // anchor at the tile's top-right corner
      add_stationary(f, "t" + std::to_string(++i), -3.0 * col, -3.0 * row, 3.0, 3.0, BL);
    }
  }
  f.style = TransitionStyle::Simultaneous;
  f.focus = "big";
  f.expected = 9;
  return f;
}

std::vector<std::string> fixture_names() {
  return {"lemma1",       "fig4b_degree14", "fig5_n_plus_m",  "shift_chain(5)",
          "fig8b_twelve", "clause_gadget",  "swap_cycle(2)", "corollary1"};
}

Fixture make_fixture(std::string_view name) {
  if (name == "lemma1") return lemma1_fixture();
  if (name == "fig4b_degree14" || name == "fig4b") return fig4b_fixture();
  if (name == "fig5_n_plus_m" || name == "fig5") return fig5_fixture();
  if (name == "fig8b_twelve" || name == "fig8b") return fig8b_fixture();
  if (name == "clause_gadget") return clause_gadget_fixture();
  if (name == "corollary1") return corollary1_fixture();
  if (name.starts_with("shift_chain")) return shift_chain_fixture(parameter(name, "shift_chain").value_or(5));
  if (name.starts_with("swap_cycle")) return swap_cycle_fixture(parameter(name, "swap_cycle").value_or(2));
  throw Error("unknown fixture '" + std::string(name) + "'");
}

bool VerifyResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const FixtureCheck& c) { return c.ok(); });
}

VerifyResult verify_fixture(const Fixture& f) {
  VerifyResult r;
  r.fixture = f.name;
  const LabelingDiff diff = f.diff();  // throws if either labeling overlaps
  const TransitionPlan plan = f.plan();
  r.report = evaluate_plan(plan, f.catalog);
  const auto n = static_cast<double>(diff.movements.size());
  auto check = [&](std::string what, double expected, double actual) {
    r.checks.push_back({std::move(what), expected, actual});
  };
  auto pairs = [&](const TransitionPlan& p) { return static_cast<double>(evaluate_plan(p, f.catalog).pair_count); };

  if (f.name == "lemma1") {
    check("overlap pairs", 1, static_cast<double>(r.report.pair_count));
  } else if (f.name == "fig4b_degree14") {
    check("overlaps of the center label", 14, static_cast<double>(r.report.degree(f.focus)));
    check("within 7n", 1, r.report.pair_count <= 7 * diff.movements.size());
  } else if (f.name == "fig5_n_plus_m") {
    const auto fas = min_feedback_arc_set(build_movement_graph(f.catalog, diff.movements)).size();
    const auto search = exhaustive_order_search(f.catalog, diff, 8);
    check("movers", 8, n);
    check("minimum feedback arc set", 1, static_cast<double>(fas));
    check("best consecutive order", 9, static_cast<double>(search.best_pairs));
    check("dag plan overlap pairs", 9, static_cast<double>(r.report.pair_count));
  } else if (f.name.starts_with("shift_chain")) {
    const double k = n;
    const TransitionPlan simul = plan_simultaneous(diff);
    check("naive overlap pairs", k - 1, static_cast<double>(r.report.pair_count));
    check("naive movement span", k, plan.movement_span());
    check("dag overlap pairs", 0, pairs(plan_dag(f.catalog, diff)));
    check("simultaneous overlap pairs", 0, pairs(simul));
    check("simultaneous movement span", 1, simul.movement_span());
  } else if (f.name == "fig8b_twelve") {
    check("moving partners of the center", 12, static_cast<double>(moving_partners(r.report, f)));
    check("within 6n", 1, r.report.pair_count <= 6 * diff.movements.size());
  } else if (f.name == "clause_gadget") {
    const ClauseGadget g = clause_gadget();
    const AxisOrder xs[2] = {g.x_outward, g.x_inward};
    const AxisOrder ys[2] = {g.y_outward, g.y_inward};
    const char* names[2] = {"outward", "inward"};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double w = evaluate_assignment(g.instance, {{g.x, xs[a]}, {g.y, ys[b]}});
        check(std::string("W(") + names[a] + ", " + names[b] + ")", (a == 1 && b == 1) ? 1 : 0, w);
      }
    }
    check("exact optimum W", 0, solve_directions_exact(g.instance).penalty);
  } else if (f.name.starts_with("swap_cycle")) {
    const double m = n / 2;
    check("minimum feedback arc set", m,
          static_cast<double>(min_feedback_arc_set(build_movement_graph(f.catalog, diff.movements)).size()));
    check("dag overlap pairs", m, static_cast<double>(r.report.pair_count));
    if (diff.movements.size() <= 8) {
      check("best consecutive order", m,
            static_cast<double>(exhaustive_order_search(f.catalog, diff, 8).best_pairs));
    }
  } else if (f.name == "corollary1") {
    std::vector<double> ws, hs;
    for (const auto& [id, s] : f.catalog) {
      ws.push_back(s.width);
      hs.push_back(s.height);
    }
    check("rect_overlap_bound", 9, static_cast<double>(rect_overlap_bound(ws, hs)));
    check("overlaps of the mover", 9, static_cast<double>(r.report.degree(f.focus)));
  } else {
    check("overlap pairs", static_cast<double>(f.expected), static_cast<double>(r.report.pair_count));
  }
  return r;
}

VerifyResult verify_fixture(std::string_view name) { return verify_fixture(make_fixture(name)); }

}  // namespace labelmorph
