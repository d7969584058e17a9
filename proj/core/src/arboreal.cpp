#include "geobst/arboreal.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>
#include <utility>

#include "geobst/rng.hpp"

namespace geobst {

std::int64_t Reconfiguration::cost() const {
  return static_cast<std::int64_t>(std::max(tau.size(), tau_prime.size()));
}

std::int64_t Reconfiguration::touched() const {
  std::vector<Key> all(tau.begin(), tau.end());
  all.insert(all.end(), tau_prime.begin(), tau_prime.end());
  std::sort(all.begin(), all.end());
  return static_cast<std::int64_t>(std::unique(all.begin(), all.end()) - all.begin());
}

const char* to_string(ReconfigFault fault) {
  switch (fault) {
    case ReconfigFault::KeyNotInTree: return "key-not-in-tree";
    case ReconfigFault::RootNotInTau: return "root-not-in-tau";
    case ReconfigFault::DisconnectedTau: return "disconnected-tau";
    case ReconfigFault::SetRelationMismatch: return "set-relation-mismatch";
    case ReconfigFault::ReplacementNotBst: return "replacement-not-bst";
    case ReconfigFault::NeighborNotTouched: return "neighbor-not-touched";
    case ReconfigFault::PendantLinkFailure: return "pendant-link-failure";
  }
  return "unknown";
}

ReconfigError::ReconfigError(ReconfigFault fault, const std::string& detail)
    : ModelError(std::string(to_string(fault)) + ": " + detail), fault_(fault), detail_(detail) {}

namespace {

using KeySet = std::unordered_set<Key>;

std::string key_str(Key k) { return std::to_string(k); }

[[noreturn]] void fail(ReconfigFault f, const std::string& detail) { throw ReconfigError(f, detail); }

std::vector<Key> sorted_unique(std::span<const Key> keys, const char* what) {
  std::vector<Key> v(keys.begin(), keys.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    fail(ReconfigFault::SetRelationMismatch, std::string(what) + " repeats a key");
  }
  return v;
}

// tau must sit in t, hold the root and be closed under parents.
void require_root_subtree(const BSTree& t, std::span<const Key> tau, const KeySet& in_tau) {
  for (Key k : tau) {
    if (!t.contains(k)) fail(ReconfigFault::KeyNotInTree, "key " + key_str(k) + " of tau is not in the tree");
  }
  if (tau.empty()) return;
  if (!in_tau.count(t.root())) {
    fail(ReconfigFault::RootNotInTau, "tau does not contain the root " + key_str(t.root()));
  }
  for (Key k : tau) {
    if (k != t.root() && !in_tau.count(t.parent(k))) {
      fail(ReconfigFault::DisconnectedTau,
           "parent " + key_str(t.parent(k)) + " of " + key_str(k) + " is outside tau");
    }
  }
}

BSTree shape_of(Key universe, std::span<const Key> preorder) {
  try {
    return BSTree::from_preorder(universe, preorder);
  } catch (const Error& e) {
    fail(ReconfigFault::ReplacementNotBst, e.what());
  }
}

void rotate_to(BSTree& w, Key k, Key anchor) {
  while (w.parent(k) != anchor) w.rotate_up(k);
}

// Rotates the root-connected portion below `anchor` into the tree with the
// given preorder. Every rotation stays inside the portion.
void reshape(BSTree& w, std::span<const Key> pre, Key anchor) {
  if (pre.empty()) return;
  const Key r = pre.front();
  rotate_to(w, r, anchor);
  std::size_t split = 1;
  while (split < pre.size() && pre[split] < r) ++split;
  reshape(w, pre.subspan(1, split - 1), r);
  reshape(w, pre.subspan(split), r);
}

std::vector<Key> portion_preorder(const BSTree& w, const KeySet& portion) {
  std::vector<Key> out;
  if (w.root() == 0 || !portion.count(w.root())) return out;
  std::vector<Key> stack{w.root()};
  while (!stack.empty()) {
    const Key v = stack.back();
    stack.pop_back();
    out.push_back(v);
    if (w.right(v) && portion.count(w.right(v))) stack.push_back(w.right(v));
    if (w.left(v) && portion.count(w.left(v))) stack.push_back(w.left(v));
  }
  return out;
}

void apply_target(BSTree& w, Reconfiguration& r, const KeySet& portion,
                  std::optional<std::span<const Key>> target) {
  if (target) {
    std::vector<Key> want = sorted_unique(*target, "target");
    std::vector<Key> have(portion.begin(), portion.end());
    std::sort(have.begin(), have.end());
    if (want != have) fail(ReconfigFault::SetRelationMismatch, "target keys differ from the replacement set");
    shape_of(w.universe(), *target);
    reshape(w, *target, 0);
  }
  r.tau_prime = portion_preorder(w, portion);
}

// The spine a new extreme key hangs from: right spine for a new maximum.
bool on_spine(const BSTree& t, Key anchor, bool maximum) {
  for (Key v = t.root(); v != 0; v = maximum ? t.right(v) : t.left(v)) {
    if (v == anchor) return true;
  }
  return false;
}

ReconfigOutcome splice_extreme(const BSTree& t, const Reconfiguration& r) {
  const Key y = r.op_key;
  if (r.tau_prime.size() != 1 || r.tau_prime.front() != y) {
    fail(ReconfigFault::SetRelationMismatch, "insert with empty tau must have tau' = {" + key_str(y) + "}");
  }
  BSTree w = t;
  if (t.empty()) {
    if (r.anchor != 0) fail(ReconfigFault::PendantLinkFailure, "anchor given for an insert into the empty tree");
    w.add_node(y);
    w.set_root(y);
    return {std::move(w), 1, 1};
  }
  const bool maximum = y > t.subtree_max(t.root());
  const bool minimum = y < t.subtree_min(t.root());
  if (!maximum && !minimum) {
    fail(ReconfigFault::RootNotInTau, "empty tau for inserting " + key_str(y) + ", which is not a new extreme");
  }
  w.add_node(y);
  if (r.anchor == 0) {
    const Key end = maximum ? t.subtree_max(t.root()) : t.subtree_min(t.root());
    if (maximum) {
      w.set_right(end, y);
    } else {
      w.set_left(end, y);
    }
  } else {
    if (!t.contains(r.anchor) || !on_spine(t, r.anchor, maximum)) {
      fail(ReconfigFault::PendantLinkFailure, "anchor " + key_str(r.anchor) + " is not on the " +
                                                  (maximum ? "right" : "left") + " spine");
    }
    const Key above = t.parent(r.anchor);
    if (maximum) {
      w.set_left(y, r.anchor);
    } else {
      w.set_right(y, r.anchor);
    }
    w.replace_child(above, r.anchor, y);
  }
  return {std::move(w), 1, 1};
}

}  // namespace

ReconfigOutcome validate_reconfiguration(const BSTree& t, const Reconfiguration& r) {
  const Key y = r.op_key;
  const std::vector<Key> tau = sorted_unique(r.tau, "tau");
  const KeySet in_tau(tau.begin(), tau.end());
  for (Key k : tau) {
    if (!t.contains(k)) fail(ReconfigFault::KeyNotInTree, "key " + key_str(k) + " of tau is not in the tree");
  }

  if (tau.empty() && r.kind == OpKind::Insert && !t.contains(y) && y >= 1 && y <= t.universe()) {
    return splice_extreme(t, r);
  }
  if (tau.empty() && !t.empty()) fail(ReconfigFault::RootNotInTau, "tau is empty");
  require_root_subtree(t, tau, in_tau);

  // Set relation between tau and tau'.
  const std::vector<Key> tau_prime = sorted_unique(r.tau_prime, "tau'");
  std::vector<Key> expected = tau;
  switch (r.kind) {
    case OpKind::Access:
      if (!in_tau.count(y)) fail(ReconfigFault::SetRelationMismatch, "accessed key " + key_str(y) + " not in tau");
      break;
    case OpKind::Insert:
      if (t.contains(y)) fail(ReconfigFault::SetRelationMismatch, "inserted key " + key_str(y) + " already present");
      expected.insert(std::lower_bound(expected.begin(), expected.end(), y), y);
      break;
    case OpKind::Delete:
      if (!in_tau.count(y)) fail(ReconfigFault::SetRelationMismatch, "deleted key " + key_str(y) + " not in tau");
      expected.erase(std::lower_bound(expected.begin(), expected.end(), y));
      break;
  }
  if (tau_prime != expected) {
    fail(ReconfigFault::SetRelationMismatch, std::string("tau' is not the required set for ") + to_char(r.kind) +
                                                 " " + key_str(y));
  }
  const BSTree shape = shape_of(t.universe(), r.tau_prime);

  // A non-extreme update must touch a tree neighbor.
  if (r.kind != OpKind::Access) {
    const auto p = t.pred(y);
    const auto s = t.succ(y);
    if (p && s && !in_tau.count(*p) && !in_tau.count(*s)) {
      fail(ReconfigFault::NeighborNotTouched,
           "neither " + key_str(*p) + " nor " + key_str(*s) + " is touched when updating " + key_str(y));
    }
  }

  // Pendant subtrees hang in the gaps between consecutive tau' keys; each gap
  // has exactly one free slot.
  struct Pendant {
    Key root, lo, hi;
  };
  std::vector<Pendant> pendants;
  for (Key v : tau) {
    for (Key c : {t.left(v), t.right(v)}) {
      if (c != 0 && !in_tau.count(c)) pendants.push_back({c, t.subtree_min(c), t.subtree_max(c)});
    }
  }
  std::vector<std::uint8_t> gap_used(tau_prime.size() + 1, 0);
  BSTree w = t;
  for (Key v : tau) w.remove_node(v);
  for (Key v : tau_prime) w.add_node(v);
  for (Key v : tau_prime) {
    w.set_left(v, shape.left(v));
    w.set_right(v, shape.right(v));
  }
  w.set_root(shape.root());
  for (const Pendant& pd : pendants) {
    const auto g = static_cast<std::size_t>(std::lower_bound(tau_prime.begin(), tau_prime.end(), pd.lo) -
                                            tau_prime.begin());
    if (g < tau_prime.size() && tau_prime[g] <= pd.hi) {
      fail(ReconfigFault::PendantLinkFailure,
           "tau' key " + key_str(tau_prime[g]) + " splits the pendant subtree under " + key_str(pd.root));
    }
    if (gap_used[g]) {
      fail(ReconfigFault::PendantLinkFailure,
           "two pendant subtrees fall between the same tau' keys (one under " + key_str(pd.root) + ")");
    }
    gap_used[g] = 1;
    if (tau_prime.empty()) {
      w.set_root(pd.root);
    } else if (g < tau_prime.size() && w.left(tau_prime[g]) == 0) {
      w.set_left(tau_prime[g], pd.root);
    } else {
      w.set_right(tau_prime[g - 1], pd.root);
    }
  }
  if (!w.is_valid()) fail(ReconfigFault::PendantLinkFailure, "reattached tree is not a BST");
  return {std::move(w), r.cost(), r.touched()};
}

namespace {

// Replays e, calling visit(t, tree_after_row_t, step) per row.
template <class Visit>
BSTree replay_with(const Execution& e, Visit&& visit) {
  const UpdateSequence& s = e.sequence;
  if (e.initial.universe() != s.universe()) throw ModelError("initial tree universe differs from the sequence");
  if (!e.initial.is_valid()) throw ModelError("initial tree is not a binary search tree");
  for (Key x = 1; x <= s.universe(); ++x) {
    if (e.initial.contains(x) != s.initially_present(x)) {
      throw ModelError("initial tree " + std::string(e.initial.contains(x) ? "holds" : "misses") + " key " +
                       key_str(x) + ", contrary to the sequence");
    }
  }
  if (static_cast<Time>(e.steps.size()) != s.length()) {
    throw ModelError("execution has " + std::to_string(e.steps.size()) + " steps for " +
                     std::to_string(s.length()) + " operations");
  }
  BSTree tree = e.initial;
  for (Time t = 1; t <= s.length(); ++t) {
    const Reconfiguration& r = e.steps[static_cast<std::size_t>(t - 1)];
    const Op& op = s.op(t);
    if (r.kind != op.kind || r.op_key != op.key) {
      throw ModelError("step " + std::to_string(t) + ": does not serve " + to_char(op.kind) + " " + key_str(op.key));
    }
    try {
      tree = validate_reconfiguration(tree, r).tree;
    } catch (const ReconfigError& err) {
      throw ReconfigError(err.fault(), "step " + std::to_string(t) + ": " + err.detail());
    }
    visit(t, tree, r);
  }
  return tree;
}

}  // namespace

std::vector<BSTree> replay(const Execution& e) {
  std::vector<BSTree> trees{e.initial};
  replay_with(e, [&](Time, const BSTree& tree, const Reconfiguration&) { trees.push_back(tree); });
  return trees;
}

ExecutionCost execution_cost(const Execution& e) {
  ExecutionCost c;
  replay_with(e, [&](Time, const BSTree&, const Reconfiguration& r) {
    c.touched += r.touched();
    c.reconfiguration += r.cost();
  });
  return c;
}

PointSet tree_to_geometry(const Execution& e) {
  std::vector<Cell> cells;
  replay_with(e, [&](Time t, const BSTree&, const Reconfiguration& r) {
    for (Key k : r.tau) cells.push_back({k, t});
    for (Key k : r.tau_prime) cells.push_back({k, t});
  });
  return PointSet(e.sequence, cells);
}

std::optional<Time> next_touch_time(const PointSet& x, Key key, Time t0) {
  if (key < 1 || key > x.universe()) throw RangeError("key " + key_str(key) + " outside the universe");
  if (t0 < 1) throw RangeError("timestep " + std::to_string(t0) + " before the first row");
  const auto col = x.column(key);
  auto it = std::lower_bound(col.begin(), col.end(), t0);
  if (it == col.end()) return std::nullopt;
  return *it;
}

namespace {

constexpr Time kNever = std::numeric_limits<Time>::max();

// Treap priority: earlier next touch first, then smaller key.
struct Priority {
  const PointSet& x;
  Time from;
  std::pair<Time, Key> operator()(Key k) const { return {next_touch_time(x, k, from).value_or(kNever), k}; }
};

// Preorder of the Cartesian tree over ascending keys.
std::vector<Key> cartesian_preorder(std::span<const Key> keys, const Priority& prio) {
  const std::size_t k = keys.size();
  std::vector<std::pair<Time, Key>> pr(k);
  for (std::size_t i = 0; i < k; ++i) pr[i] = prio(keys[i]);
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> left(k, none), right(k, none), stack;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t last = none;
    while (!stack.empty() && pr[i] < pr[stack.back()]) {
      last = stack.back();
      stack.pop_back();
    }
    left[i] = last;
    if (!stack.empty()) right[stack.back()] = i;
    stack.push_back(i);
  }
  std::vector<Key> out;
  out.reserve(k);
  if (k == 0) return out;
  std::vector<std::size_t> walk{stack.front()};
  while (!walk.empty()) {
    const std::size_t i = walk.back();
    walk.pop_back();
    out.push_back(keys[i]);
    if (right[i] != none) walk.push_back(right[i]);
    if (left[i] != none) walk.push_back(left[i]);
  }
  return out;
}

void check_heap_around(const BSTree& tree, std::span<const Key> changed, const Priority& prio, Time t) {
  auto broken = [&](Key up, Key down) {
    throw ModelError("converter invariant broken after row " + std::to_string(t) + ": parent " + key_str(up) +
                     " has a later next touch than child " + key_str(down));
  };
  // Equal next touches are fine: both keys land in the same tau.
  for (Key v : changed) {
    const Time pv = prio(v).first;
    if (Key p = tree.parent(v); p != 0 && pv < prio(p).first) broken(p, v);
    for (Key c : {tree.left(v), tree.right(v)}) {
      if (c != 0 && prio(c).first < pv) broken(v, c);
    }
  }
}

}  // namespace

Execution geometry_to_tree_offline(const PointSet& x) {
  if (auto sat = is_satisfied(x); !sat) {
    throw ModelError("converter needs a satisfied point set; " + sat.witness->describe());
  }
  const UpdateSequence& seq = x.sequence();
  const Key n = seq.universe();

  std::vector<Key> initial_keys;
  for (Key k = 1; k <= n; ++k) {
    if (seq.initially_present(k)) initial_keys.push_back(k);
  }
  Execution e{seq, BSTree::from_preorder(n, cartesian_preorder(initial_keys, Priority{x, 1})), {}};
  e.steps.reserve(static_cast<std::size_t>(seq.length()));

  BSTree tree = e.initial;
  for (Time t = 1; t <= seq.length(); ++t) {
    const Op& op = seq.op(t);
    const Key y = op.key;
    const Priority next{x, t + 1};
    std::vector<Key> row;
    for (const Point& p : x.row(t)) row.push_back(p.x);

    std::vector<Key> tau = row;
    std::vector<Key> after = row;
    if (op.kind == OpKind::Insert) tau.erase(std::find(tau.begin(), tau.end(), y));
    if (op.kind == OpKind::Delete) after.erase(std::find(after.begin(), after.end(), y));
    const std::vector<Key> target = cartesian_preorder(after, next);

    Reconfiguration r;
    try {
      if (op.kind == OpKind::Access) {
        r = Reconfiguration{OpKind::Access, y, tau, target, 0, {}};
      } else if (op.kind == OpKind::Insert && tau.empty()) {
        // New extreme touched alone: hang it from the spine where its
        // priority places it.
        r = Reconfiguration{OpKind::Insert, y, {}, {y}, 0, {}};
        const bool maximum = tree.empty() || y > tree.subtree_max(tree.root());
        for (Key v = tree.root(); v != 0; v = maximum ? tree.right(v) : tree.left(v)) {
          if (next(y) < next(v)) {
            r.anchor = v;
            break;
          }
        }
      } else if (op.kind == OpKind::Insert) {
        r = insert_via_neighbor(tree, tau, y, std::span<const Key>(target));
      } else {
        r = delete_via_neighbor(tree, tau, y, std::span<const Key>(target));
      }
      tree = validate_reconfiguration(tree, r).tree;
    } catch (const ReconfigError& err) {
      throw ModelError("converter invariant broken at row " + std::to_string(t) + ": " + err.what());
    }
    check_heap_around(tree, r.tau_prime, next, t);
    e.steps.push_back(std::move(r));
  }
  return e;
}

Reconfiguration insert_via_neighbor(const BSTree& t, std::span<const Key> tau, Key y,
                                    std::optional<std::span<const Key>> target) {
  const std::vector<Key> sorted = sorted_unique(tau, "tau");
  KeySet in_tau(sorted.begin(), sorted.end());
  if (t.contains(y)) fail(ReconfigFault::SetRelationMismatch, "inserted key " + key_str(y) + " already present");
  require_root_subtree(t, sorted, in_tau);
  if (sorted.empty() && !t.empty()) {
    const bool extreme = y > t.subtree_max(t.root()) || y < t.subtree_min(t.root());
    if (!extreme) fail(ReconfigFault::RootNotInTau, "tau is empty");
  }

  Reconfiguration r{OpKind::Insert, y, sorted, {}, 0, {}};
  BSTree w = t;
  const auto p = t.pred(y);
  const auto s = t.succ(y);
  w.add_node(y);
  if (p && in_tau.count(*p)) {
    const Key old = w.right(*p);
    w.set_right(y, old);
    w.set_right(*p, y);
    r.links = {{y, PointerChange::Slot::Right, 0, old}, {*p, PointerChange::Slot::Right, old, y}};
  } else if (s && in_tau.count(*s)) {
    const Key old = w.left(*s);
    w.set_left(y, old);
    w.set_left(*s, y);
    r.links = {{y, PointerChange::Slot::Left, 0, old}, {*s, PointerChange::Slot::Left, old, y}};
  } else if (!p || !s) {
    const Key old = t.root();
    const auto slot = p ? PointerChange::Slot::Left : PointerChange::Slot::Right;
    if (p) {
      w.set_left(y, old);
    } else {
      w.set_right(y, old);
    }
    w.set_root(y);
    r.links = {{y, slot, 0, old}, {0, PointerChange::Slot::Root, old, y}};
    if (sorted.empty()) r.anchor = old;
  } else {
    fail(ReconfigFault::NeighborNotTouched,
         "neither " + key_str(*p) + " nor " + key_str(*s) + " is in tau when inserting " + key_str(y));
  }
  in_tau.insert(y);
  apply_target(w, r, in_tau, target);
  return r;
}

Reconfiguration delete_via_neighbor(const BSTree& t, std::span<const Key> tau, Key y,
                                    std::optional<std::span<const Key>> target) {
  const std::vector<Key> sorted = sorted_unique(tau, "tau");
  KeySet in_tau(sorted.begin(), sorted.end());
  require_root_subtree(t, sorted, in_tau);
  if (!in_tau.count(y)) fail(ReconfigFault::SetRelationMismatch, "deleted key " + key_str(y) + " not in tau");

  Reconfiguration r{OpKind::Delete, y, sorted, {}, 0, {}};
  BSTree w = t;
  const auto p = t.pred(y);
  const auto s = t.succ(y);
  if (p && in_tau.count(*p)) {
    rotate_to(w, *p, 0);
    rotate_to(w, y, *p);
    const Key rest = w.right(y);
    w.remove_node(y);
    w.set_right(*p, rest);
    r.links = {{*p, PointerChange::Slot::Right, y, rest}};
  } else if (s && in_tau.count(*s)) {
    rotate_to(w, *s, 0);
    rotate_to(w, y, *s);
    const Key rest = w.left(y);
    w.remove_node(y);
    w.set_left(*s, rest);
    r.links = {{*s, PointerChange::Slot::Left, y, rest}};
  } else if (!p || !s) {
    rotate_to(w, y, 0);
    const Key rest = p ? w.left(y) : w.right(y);
    w.remove_node(y);
    w.set_root(rest);
    r.links = {{0, PointerChange::Slot::Root, y, rest}};
  } else {
    fail(ReconfigFault::NeighborNotTouched,
         "neither " + key_str(*p) + " nor " + key_str(*s) + " is in tau when deleting " + key_str(y));
  }
  in_tau.erase(y);
  apply_target(w, r, in_tau, target);
  return r;
}

PointSet access_to_insertion(const PointSet& p_access) {
  const UpdateSequence& seq = p_access.sequence();
  const Key n = seq.universe();
  if (seq.length() != n) throw ShapeError("access set has " + std::to_string(seq.length()) + " rows for " +
                                          std::to_string(n) + " keys; not a permutation");
  std::vector<Time> when(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Op> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (Time t = 1; t <= seq.length(); ++t) {
    const Op& op = seq.op(t);
    if (op.kind != OpKind::Access) throw ShapeError("row " + std::to_string(t) + " is not an access");
    if (when[static_cast<std::size_t>(op.key)] != 0) {
      throw ShapeError("key " + key_str(op.key) + " is accessed twice; not a permutation");
    }
    when[static_cast<std::size_t>(op.key)] = t;
    ops.push_back({op.key, OpKind::Insert});
  }
  for (const Point& q : p_access.points()) {
    if (q.t < when[static_cast<std::size_t>(q.x)]) {
      throw ShapeError("point " + to_string(q) + " touches its key before the key is accessed");
    }
  }
  PointSet out(UpdateSequence(n, std::move(ops)), p_access.cells());
  if (auto bad = first_invalid_point(out)) throw ModelError("converted point " + to_string(*bad) + " is not valid");
  if (auto sat = is_satisfied(out); !sat) {
    throw ModelError("converted insertion set is not satisfied; " + sat.witness->describe());
  }
  return out;
}

std::vector<Key> sort_via_bst(const PointSet& p_insert) {
  const Execution e = geometry_to_tree_offline(p_insert);
  return replay_with(e, [](Time, const BSTree&, const Reconfiguration&) {}).inorder();
}

namespace {

std::vector<Key> random_shape(std::span<const Key> sorted, Rng& rng) {
  std::vector<Key> out;
  out.reserve(sorted.size());
  std::vector<std::pair<std::size_t, std::size_t>> ranges{{0, sorted.size()}};
  while (!ranges.empty()) {
    auto [lo, hi] = ranges.back();
    ranges.pop_back();
    if (lo >= hi) continue;
    const std::size_t mid = lo + rng.below(hi - lo);
    out.push_back(sorted[mid]);
    ranges.push_back({mid + 1, hi});
    ranges.push_back({lo, mid});
  }
  return out;
}

}  // namespace

Execution random_execution(const UpdateSequence& s, std::uint64_t seed) {
  Rng rng(seed);
  const Key n = s.universe();
  std::vector<Key> initial_keys;
  for (Key k = 1; k <= n; ++k) {
    if (s.initially_present(k)) initial_keys.push_back(k);
  }
  Execution e{s, BSTree::from_preorder(n, random_shape(initial_keys, rng)), {}};
  BSTree tree = e.initial;

  for (Time t = 1; t <= s.length(); ++t) {
    const Op& op = s.op(t);
    const Key y = op.key;
    Reconfiguration r;
    const auto p = tree.pred(y);
    const auto q = tree.succ(y);

    if (op.kind == OpKind::Insert && (!p || !q) && (tree.empty() || rng.chance(0.3))) {
      // Only the root splice keeps tau a root subtree; deeper splices are
      // reserved for the offline converter, whose treap order makes them safe.
      r = Reconfiguration{OpKind::Insert, y, {}, {y}, tree.root(), {}};
    } else {
      std::vector<Key> seeds;
      if (op.kind != OpKind::Insert) seeds.push_back(y);
      if (op.kind != OpKind::Access) {
        std::vector<Key> neighbors;
        if (p) neighbors.push_back(*p);
        if (q) neighbors.push_back(*q);
        if (!neighbors.empty()) seeds.push_back(neighbors[rng.below(neighbors.size())]);
      }
      if (seeds.empty() && !tree.empty()) seeds.push_back(tree.root());
      KeySet in_tau;
      for (Key k : seeds) {
        for (Key v = k; v != 0 && !in_tau.count(v); v = tree.parent(v)) in_tau.insert(v);
      }
      const auto grow = rng.below(4);
      for (std::uint64_t i = 0; i < grow && !in_tau.empty(); ++i) {
        std::vector<Key> frontier;
        for (Key v : in_tau) {
          for (Key c : {tree.left(v), tree.right(v)}) {
            if (c != 0 && !in_tau.count(c)) frontier.push_back(c);
          }
        }
        if (frontier.empty()) break;
        std::sort(frontier.begin(), frontier.end());
        in_tau.insert(frontier[rng.below(frontier.size())]);
      }
      std::vector<Key> tau(in_tau.begin(), in_tau.end());
      std::sort(tau.begin(), tau.end());
      std::vector<Key> after = tau;
      if (op.kind == OpKind::Insert) after.insert(std::lower_bound(after.begin(), after.end(), y), y);
      if (op.kind == OpKind::Delete) after.erase(std::lower_bound(after.begin(), after.end(), y));
      const std::vector<Key> shape = random_shape(after, rng);
      if (op.kind == OpKind::Access) {
        r = Reconfiguration{OpKind::Access, y, tau, shape, 0, {}};
      } else if (op.kind == OpKind::Insert) {
        r = insert_via_neighbor(tree, tau, y, std::span<const Key>(shape));
      } else {
        r = delete_via_neighbor(tree, tau, y, std::span<const Key>(shape));
      }
    }
    tree = validate_reconfiguration(tree, r).tree;
    e.steps.push_back(std::move(r));
  }
  return e;
}

}  // namespace geobst
