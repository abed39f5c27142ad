#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "labelmorph/planner.hpp"

namespace labelmorph {

struct Candidate {
  LabelId point;
  Slot slot = Slot::TopLeft;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Four candidates per point; vertex 4*i + slot belongs to points[i]. Points
/// are sorted by id, so vertex order is (point id, slot) order.
struct ConflictGraph {
  std::vector<LabelSpec> points;
  std::vector<std::vector<std::size_t>> adj;  // sorted

  std::size_t vertex_count() const { return adj.size(); }
  std::size_t edge_count() const;
  Candidate candidate(std::size_t v) const;
  Rect rect(std::size_t v) const;
  bool adjacent(std::size_t u, std::size_t v) const;
  /// Vertex of a candidate; throws for unknown points.
  std::size_t vertex(const LabelId& point, Slot slot) const;
};

ConflictGraph build_conflict_graph(std::span<const LabelSpec> specs);

/// Maximal independent set by repeatedly taking a vertex of minimum residual
/// degree, after the pinned candidates. Throws if pins conflict.
Labeling greedy_mis(const ConflictGraph& g, const Labeling& pinned = {});

/// True when the previous labeling is kept: |I2| < 1.02 |I1|, in integers.
bool keep_previous(std::size_t i1, std::size_t i2);

struct StableLabeling {
  Labeling labeling;
  bool kept_previous = false;
  std::size_t i1 = 0;  // surviving previous labels
  std::size_t i2 = 0;  // size of the recomputed labeling
};

/// Recompute a labeling for `specs_now` while staying close to `prev`.
/// With `pin`, the surviving previous candidates are forced into the
/// recomputed set (pins that now conflict are dropped in id order). When the
/// recomputed set is less than 2% larger, the surviving previous labels are
/// kept and extended greedily, in id order, by points not labeled before.
StableLabeling relabel_stable(const Labeling& prev, std::span<const LabelSpec> specs_now, bool pin = true);

}  // namespace labelmorph
