#include "geobst/bstree.hpp"

#include <cctype>
#include <charconv>
#include <utility>

namespace geobst {

BSTree::BSTree(Key universe)
    : n_(universe),
      left_(static_cast<std::size_t>(universe) + 1, 0),
      right_(static_cast<std::size_t>(universe) + 1, 0),
      parent_(static_cast<std::size_t>(universe) + 1, 0),
      present_(static_cast<std::size_t>(universe) + 1, 0) {
  if (universe < 0) throw RangeError("negative universe");
}

std::size_t BSTree::idx(Key x) const {
  if (x < 1 || x > n_) throw RangeError("key " + std::to_string(x) + " outside [1, " + std::to_string(n_) + "]");
  return static_cast<std::size_t>(x);
}

bool BSTree::contains(Key x) const { return x >= 1 && x <= n_ && present_[static_cast<std::size_t>(x)]; }

BSTree BSTree::from_preorder(Key universe, std::span<const Key> preorder) {
  BSTree t(universe);
  std::vector<Key> stack;
  Key lower = 0;
  for (Key k : preorder) {
    if (t.contains(k)) throw ModelError("preorder repeats key " + std::to_string(k));
    t.add_node(k);
    if (k < lower) throw ModelError("sequence is not a BST preorder at key " + std::to_string(k));
    Key popped = 0;
    while (!stack.empty() && k > stack.back()) {
      popped = stack.back();
      stack.pop_back();
    }
    if (popped != 0) {
      lower = popped;
      t.set_right(popped, k);
    } else if (!stack.empty()) {
      t.set_left(stack.back(), k);
    } else {
      t.set_root(k);
    }
    stack.push_back(k);
  }
  return t;
}

namespace {

struct TreeParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("tree text at offset " + std::to_string(pos) + ": " + what);
  }
  void expect(char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  Key number() {
    skip();
    Key v = 0;
    auto [end, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc()) fail("expected a key");
    pos = static_cast<std::size_t>(end - s.data());
    return v;
  }

  // Returns the subtree root, or 0 for '-'.
  Key subtree(BSTree& t) {
    skip();
    if (pos < s.size() && s[pos] == '-') {
      ++pos;
      return 0;
    }
    expect('(');
    const Key l = subtree(t);
    const Key k = number();
    if (k < 1 || k > t.universe()) fail("key " + std::to_string(k) + " outside the universe");
    if (t.contains(k)) fail("repeated key " + std::to_string(k));
    t.add_node(k);
    const Key r = subtree(t);
    expect(')');
    if (l) t.set_left(k, l);
    if (r) t.set_right(k, r);
    return k;
  }
};

}  // namespace

BSTree BSTree::parse(Key universe, std::string_view text) {
  BSTree t(universe);
  TreeParser p{text};
  const Key root = p.subtree(t);
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  if (root) t.set_root(root);
  if (!t.is_valid()) throw ParseError("tree text is not a binary search tree");
  return t;
}

std::optional<Key> BSTree::pred(Key x) const {
  std::optional<Key> best;
  for (Key v = root_; v != 0;) {
    if (v < x) {
      best = v;
      v = right(v);
    } else {
      v = left(v);
    }
  }
  return best;
}

std::optional<Key> BSTree::succ(Key x) const {
  std::optional<Key> best;
  for (Key v = root_; v != 0;) {
    if (v > x) {
      best = v;
      v = left(v);
    } else {
      v = right(v);
    }
  }
  return best;
}

std::vector<Key> BSTree::inorder() const {
  std::vector<Key> out;
  out.reserve(size_);
  std::vector<Key> stack;
  Key v = root_;
  while (v != 0 || !stack.empty()) {
    while (v != 0) {
      stack.push_back(v);
      v = left(v);
    }
    v = stack.back();
    stack.pop_back();
    out.push_back(v);
    v = right(v);
  }
  return out;
}

std::vector<Key> BSTree::subtree(Key x) const {
  std::vector<Key> out;
  if (x == 0) return out;
  std::vector<Key> stack{x};
  while (!stack.empty()) {
    const Key v = stack.back();
    stack.pop_back();
    out.push_back(v);
    if (right(v)) stack.push_back(right(v));
    if (left(v)) stack.push_back(left(v));
  }
  return out;
}

std::vector<Key> BSTree::preorder() const { return subtree(root_); }

Key BSTree::subtree_min(Key x) const {
  while (left(x)) x = left(x);
  return x;
}

Key BSTree::subtree_max(Key x) const {
  while (right(x)) x = right(x);
  return x;
}

std::size_t BSTree::depth(Key x) const {
  std::size_t d = 0;
  for (Key v = parent(x); v != 0; v = parent(v)) ++d;
  return d;
}

void BSTree::add_node(Key x) {
  const auto i = idx(x);
  if (present_[i]) throw ModelError("key " + std::to_string(x) + " already in the tree");
  present_[i] = 1;
  left_[i] = right_[i] = parent_[i] = 0;
  ++size_;
}

void BSTree::remove_node(Key x) {
  const auto i = idx(x);
  if (!present_[i]) throw ModelError("key " + std::to_string(x) + " not in the tree");
  if (root_ == x) root_ = 0;
  present_[i] = 0;
  left_[i] = right_[i] = parent_[i] = 0;
  --size_;
}

void BSTree::set_root(Key x) {
  root_ = x;
  if (x) parent_[idx(x)] = 0;
}

void BSTree::set_left(Key p, Key c) {
  left_[idx(p)] = c;
  if (c) parent_[idx(c)] = p;
}

void BSTree::set_right(Key p, Key c) {
  right_[idx(p)] = c;
  if (c) parent_[idx(c)] = p;
}

void BSTree::replace_child(Key p, Key old_child, Key new_child) {
  if (p == 0) {
    set_root(new_child);
  } else if (left(p) == old_child) {
    set_left(p, new_child);
  } else if (right(p) == old_child) {
    set_right(p, new_child);
  } else {
    throw ModelError("key " + std::to_string(old_child) + " is not a child of " + std::to_string(p));
  }
}

void BSTree::rotate_up(Key x) {
  const Key p = parent(x);
  if (p == 0) throw ModelError("cannot rotate the root " + std::to_string(x));
  const Key g = parent(p);
  if (left(p) == x) {
    set_left(p, right(x));
    set_right(x, p);
  } else {
    set_right(p, left(x));
    set_left(x, p);
  }
  replace_child(g, p, x);
}

bool BSTree::is_valid() const {
  if (root_ == 0) return size_ == 0;
  if (!contains(root_) || parent(root_) != 0) return false;
  std::size_t seen = 0;
  std::vector<std::pair<Key, std::pair<Key, Key>>> stack{{root_, {0, n_ + 1}}};
  while (!stack.empty()) {
    auto [v, range] = stack.back();
    stack.pop_back();
    if (!contains(v) || v <= range.first || v >= range.second) return false;
    if (++seen > size_) return false;
    for (Key c : {left(v), right(v)}) {
      if (c == 0) continue;
      if (!contains(c) || parent(c) != v) return false;
    }
    if (left(v)) stack.push_back({left(v), {range.first, v}});
    if (right(v)) stack.push_back({right(v), {v, range.second}});
  }
  return seen == size_;
}

std::string BSTree::to_string() const { return to_string(root_); }

std::string BSTree::to_string(Key x) const {
  if (x == 0) return "-";
  // Iterative so that path-shaped trees do not exhaust the stack.
  std::string out;
  std::vector<std::pair<Key, int>> stack{{x, 0}};
  while (!stack.empty()) {
    auto& [v, stage] = stack.back();
    if (stage == 0) {
      out += '(';
      stage = 1;
      if (left(v)) {
        stack.push_back({left(v), 0});
      } else {
        out += '-';
      }
    } else if (stage == 1) {
      out += ' ';
      out += std::to_string(v);
      out += ' ';
      stage = 2;
      if (right(v)) {
        stack.push_back({right(v), 0});
      } else {
        out += '-';
      }
    } else {
      out += ')';
      stack.pop_back();
    }
  }
  return out;
}

bool operator==(const BSTree& a, const BSTree& b) {
  if (a.n_ != b.n_ || a.root_ != b.root_ || a.size_ != b.size_) return false;
  for (Key x = 1; x <= a.n_; ++x) {
    if (a.contains(x) != b.contains(x)) return false;
    if (a.contains(x) && (a.left(x) != b.left(x) || a.right(x) != b.right(x))) return false;
  }
  return true;
}

}  // namespace geobst
