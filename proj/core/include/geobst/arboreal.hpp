#pragma once

// Tree view of a BST execution: reconfigurations of a root subtree, recorded
// executions, and the converters between executions and point sets.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geobst/bstree.hpp"
#include "geobst/model.hpp"

namespace geobst {

struct PointerChange {
  enum class Slot { Left, Right, Root };
  /// Node whose link changes; 0 for the root link.
  Key node = 0;
  Slot slot = Slot::Root;
  Key old_child = 0;
  Key new_child = 0;

  friend bool operator==(const PointerChange&, const PointerChange&) = default;
};

/// Replaces the root subtree on `tau` by the tree whose preorder is
/// `tau_prime`.
struct Reconfiguration {
  OpKind kind = OpKind::Access;
  Key op_key = 0;
  /// Ascending.
  std::vector<Key> tau;
  /// Preorder of the replacement tree.
  std::vector<Key> tau_prime;
  /// Only for an insert of a new extreme with empty tau: the node on the
  /// matching spine that becomes the new key's child. 0 appends the key
  /// below the end of the spine; the root makes it the new root.
  Key anchor = 0;
  /// Link edits performed by the neighbor-based update primitives before
  /// reshaping. Informational; empty for hand-written steps.
  std::vector<PointerChange> links;

  /// max(|tau|, |tau'|).
  std::int64_t cost() const;
  /// |tau ∪ tau'|, the number of grid points the step contributes.
  std::int64_t touched() const;
};

enum class ReconfigFault {
  KeyNotInTree,
  RootNotInTau,
  DisconnectedTau,
  SetRelationMismatch,
  ReplacementNotBst,
  NeighborNotTouched,
  PendantLinkFailure,
};

const char* to_string(ReconfigFault fault);

class ReconfigError : public ModelError {
 public:
  ReconfigError(ReconfigFault fault, const std::string& detail);
  ReconfigFault fault() const { return fault_; }
  const std::string& detail() const { return detail_; }

 private:
  ReconfigFault fault_;
  std::string detail_;
};

struct ReconfigOutcome {
  BSTree tree;
  std::int64_t cost = 0;
  std::int64_t touched = 0;
};

/// Checks r against t and returns the reconfigured tree. Pendant subtrees of
/// tau are reattached to the null slots of tau' in key order. An empty tau is
/// accepted only for inserting a new minimum or maximum, which is spliced
/// into the matching spine at r.anchor at cost 1. Throws ReconfigError.
ReconfigOutcome validate_reconfiguration(const BSTree& t, const Reconfiguration& r);

struct Execution {
  UpdateSequence sequence;
  BSTree initial;
  /// steps[t - 1] serves row t.
  std::vector<Reconfiguration> steps;
};

struct ExecutionCost {
  /// Sum of |tau ∪ tau'|.
  std::int64_t touched = 0;
  /// Sum of max(|tau|, |tau'|).
  std::int64_t reconfiguration = 0;
};

/// Trees T_0 .. T_m. Throws ModelError naming the first failing step.
std::vector<BSTree> replay(const Execution& e);
ExecutionCost execution_cost(const Execution& e);

/// Touched grid of a valid execution.
PointSet tree_to_geometry(const Execution& e);

/// First row >= t0 holding a point of column x; nullopt stands for infinity.
std::optional<Time> next_touch_time(const PointSet& x, Key key, Time t0);

/// Offline converter from a satisfied point set to an execution realizing it
/// exactly. Each tree is the treap of live keys prioritized by next touch
/// time (earlier first, ties to the smaller key, never-again last). Throws
/// ModelError if x is unsatisfied or a treap invariant breaks.
Execution geometry_to_tree_offline(const PointSet& x);

/// Inserts y by linking it under its tree predecessor (or successor) in tau,
/// or as the new root when y is a new extreme, then rotates tau ∪ {y} into
/// `target` (preorder) if given. Throws ReconfigError(NeighborNotTouched)
/// when no hypothesis holds.
Reconfiguration insert_via_neighbor(const BSTree& t, std::span<const Key> tau, Key y,
                                    std::optional<std::span<const Key>> target = std::nullopt);

/// Deletes y in tau by splicing it out next to its predecessor (or
/// successor) in tau, or from the end of the tree when y is an extreme.
Reconfiguration delete_via_neighbor(const BSTree& t, std::span<const Key> tau, Key y,
                                    std::optional<std::span<const Key>> target = std::nullopt);

/// Reinterprets an access-only permutation point set as the same grid with
/// every access turned into an insert, and checks the result is satisfied.
/// Throws ShapeError if the input is not a permutation access set or touches
/// a key before its access row, ModelError if the result is unsatisfied.
PointSet access_to_insertion(const PointSet& p_access);

/// In-order traversal of the final tree of geometry_to_tree_offline(p).
std::vector<Key> sort_via_bst(const PointSet& p_insert);

/// Random valid execution of s: random initial tree, random root subtrees
/// and random replacement shapes.
Execution random_execution(const UpdateSequence& s, std::uint64_t seed);

}  // namespace geobst
