#pragma once

// Pointer-based binary search tree over keys [1, universe], stored as
// parallel child/parent arrays indexed by key. 0 is the null link.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geobst/model.hpp"

namespace geobst {

class BSTree {
 public:
  BSTree() = default;
  explicit BSTree(Key universe);

  /// Tree whose preorder is exactly `preorder`. Throws ModelError if the
  /// keys repeat, leave the universe, or are not the preorder of any BST.
  static BSTree from_preorder(Key universe, std::span<const Key> preorder);
  /// Parses the parenthesized form produced by to_string().
  static BSTree parse(Key universe, std::string_view text);

  Key universe() const { return n_; }
  Key root() const { return root_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool contains(Key x) const;

  Key left(Key x) const { return left_[idx(x)]; }
  Key right(Key x) const { return right_[idx(x)]; }
  Key parent(Key x) const { return parent_[idx(x)]; }

  /// Largest present key below x / smallest above x; x need not be present.
  std::optional<Key> pred(Key x) const;
  std::optional<Key> succ(Key x) const;

  std::vector<Key> inorder() const;
  std::vector<Key> preorder() const;
  /// Keys of the subtree rooted at x, preorder.
  std::vector<Key> subtree(Key x) const;
  Key subtree_min(Key x) const;
  Key subtree_max(Key x) const;
  std::size_t depth(Key x) const;

  /// Raw link edits. They keep parent pointers consistent and leave BST
  /// order to the caller.
  void add_node(Key x);
  void remove_node(Key x);
  void set_root(Key x);
  void set_left(Key p, Key c);
  void set_right(Key p, Key c);
  /// Replaces p's link to `old_child` (or the root link if p == 0).
  void replace_child(Key p, Key old_child, Key new_child);

  /// Rotates x above its parent.
  void rotate_up(Key x);

  /// Structural consistency plus strict in-order.
  bool is_valid() const;

  /// `-` for the empty tree, otherwise `(<left> <key> <right>)`.
  std::string to_string() const;
  std::string to_string(Key x) const;

  friend bool operator==(const BSTree& a, const BSTree& b);

 private:
  std::size_t idx(Key x) const;

  Key n_ = 0;
  Key root_ = 0;
  std::size_t size_ = 0;
  std::vector<Key> left_;
  std::vector<Key> right_;
  std::vector<Key> parent_;
  std::vector<std::uint8_t> present_;
};

}  // namespace geobst
