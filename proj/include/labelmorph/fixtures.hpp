#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "labelmorph/planner.hpp"

namespace labelmorph {

/// A pair of labelings with a designated transition style and the overlap
/// count it must produce.
struct Fixture {
  std::string name;
  Catalog catalog;
  Labeling before;
  Labeling after;
  std::map<LabelId, AxisOrder> axis_orders;  // diagonal movements only
  TransitionStyle style = TransitionStyle::Naive;
  std::vector<LabelId> order;  // consecutive order; empty means enumeration order
  LabelId focus;               // label whose overlaps are counted, if any
  std::size_t expected = 0;

  LabelingDiff diff() const;
  /// Plan in the designated style (and order).
  TransitionPlan plan() const;
};

Fixture lemma1_fixture();
Fixture fig4b_fixture();
Fixture fig5_fixture();
Fixture shift_chain_fixture(std::size_t k);
Fixture fig8b_fixture();
Fixture clause_gadget_fixture();
Fixture swap_cycle_fixture(std::size_t m);
Fixture corollary1_fixture();

/// "lemma1", "fig4b_degree14", "fig5_n_plus_m", "shift_chain(k)",
/// "fig8b_twelve", "clause_gadget", "swap_cycle(m)", "corollary1".
/// Parameters may also be written as "shift_chain:7".
Fixture make_fixture(std::string_view name);
std::vector<std::string> fixture_names();

struct FixtureCheck {
  std::string what;
  double expected = 0.0;
  double actual = 0.0;
  bool ok() const { return expected == actual; }
};

struct VerifyResult {
  std::string fixture;
  std::vector<FixtureCheck> checks;
  OverlapReport report;  // of the designated plan

  bool passed() const;
};

VerifyResult verify_fixture(const Fixture& fixture);
VerifyResult verify_fixture(std::string_view name);

}  // namespace labelmorph
