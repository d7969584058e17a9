// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `acceptance 3 7` runs only criteria 3 and 7.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geobst/arboreal.hpp"
#include "geobst/greedy.hpp"
#include "geobst/harness.hpp"
#include "geobst/patterns.hpp"
#include "geobst/rng.hpp"
#include "geobst/sequences.hpp"
#include "oracles.hpp"
#include "reconfig_cases.hpp"

using namespace geobst;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

// Log-uniform in [lo, hi], so small instances show up often.
std::int64_t log_uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi) + 1.0);
  const auto v = static_cast<std::int64_t>(std::exp(a + (b - a) * rng.unit()));
  return std::clamp(v, lo, hi);
}

ExperimentConfig deque_config(bool restricted, Key n, Time m, std::uint64_t count) {
  ExperimentConfig c;
  c.experiment = restricted ? "restricted-linear" : "general-quasilinear";
  c.restricted = restricted;
  c.n = n;
  c.m = m;
  for (std::uint64_t s = 1; s <= count; ++s) c.seeds.push_back(s);
  return c;
}

std::string first_failure(const ExperimentReport& r) {
  if (!r.failures.empty()) return r.failures.front();
  for (const auto& [name, ok] : r.checks) {
    if (!ok) return "check " + name + " failed";
  }
  return "";
}

Outcome greedy_satisfied() {
  Rng rng(20241);
  int brute = 0;
  for (std::uint64_t i = 1; i <= 1000; ++i) {
    const auto n = static_cast<Key>(log_uniform(rng, 1, 50));
    const auto m = static_cast<Time>(log_uniform(rng, 1, 200));
    const auto s = random_update_sequence(n, m, i);
    const PointSet p = greedy_execute(s).points;
    const std::string where = " (n " + std::to_string(n) + ", m " + std::to_string(m) + ", seed " +
                              std::to_string(i) + ")";
    if (!is_valid_set(p)) return {false, "invalid point in GREEDY output" + where};
    if (auto sat = is_satisfied(p); !sat) return {false, "unsatisfied: " + sat.witness->describe() + where};
    if (p.size() <= 12) {
      ++brute;
      if (!oracle::satisfied(p)) return {false, "brute-force checker disagrees" + where};
    }
  }
  return {true, "1000 sequences satisfied; " + std::to_string(brute) + " cross-checked by brute force"};
}

Outcome greedy_round_trip() {
  ExperimentConfig c;
  c.experiment = "roundtrip";
  c.n = 12;
  c.m = 40;
  for (std::uint64_t s = 1; s <= 500; ++s) c.seeds.push_back(s);
  const ExperimentReport r = run_roundtrip(c);
  if (!r.pass()) return {false, first_failure(r)};
  return {true, "500 GREEDY sets and 500 random executions round-trip exactly; touched cost equals |X|"};
}

Outcome pattern_avoidance() {
  Rng rng(777);
  for (std::uint64_t i = 1; i <= 500; ++i) {
    for (bool restricted : {false, true}) {
      const auto n = static_cast<Key>(rng.between(2, 300));
      const auto m = static_cast<Time>(rng.between(1, 2000));
      const UpdateSequence c = concentrate(gen_deque(n, m, i, restricted));
      if (!is_concentrated(c)) return {false, "concentration failed at seed " + std::to_string(i)};
      const BinaryMatrix mat = matrix_from_pointset(greedy_execute(c).points);
      const Pattern& pat = restricted ? p4() : p5();
      if (contains_pattern(mat, pat)) {
        return {false, pat.name + " found: geobst bench-deque --n " + std::to_string(n) + " --m " +
                           std::to_string(m) + " --seed " + std::to_string(i) + (restricted ? " --restricted" : "")};
      }
    }
  }
  const std::vector<Pattern> pats{p4(), p5(), flip_rows(p4()), flip_rows(p5())};
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto r = static_cast<std::int32_t>(rng.between(1, 8));
    const auto c = static_cast<std::int32_t>(rng.between(1, 8));
    const double density = 0.15 + 0.55 * rng.unit();
    std::vector<Entry> ones;
    for (std::int32_t a = 1; a <= r; ++a) {
      for (std::int32_t b = 1; b <= c; ++b) {
        if (rng.chance(density)) ones.push_back({a, b});
      }
    }
    const BinaryMatrix m(r, c, ones);
    for (const Pattern& p : pats) {
      const bool want = oracle::contains(m, p.matrix);
      if (contains_pattern(m, p).found != want) return {false, "oracle disagrees on " + p.name + " at matrix " +
                                                                   std::to_string(i)};
      hits += want;
    }
  }
  return {true, "500 general runs avoid P5, 500 restricted runs avoid P4; 10000 small matrices match the oracle (" +
                    std::to_string(hits) + " containments)"};
}

Outcome restricted_linear() {
  std::string detail;
  const std::vector<std::pair<Time, Key>> sizes{{1000, 100}, {10000, 1000}, {100000, 10000}};
  for (const auto& [m, n] : sizes) {
    const ExperimentReport r = run_deque_bound(deque_config(true, n, m, 50));
    if (!r.pass()) return {false, first_failure(r)};
    double ones_ratio = 0;
    for (const RunRow& row : r.rows) ones_ratio = std::max(ones_ratio, row.extra[0] / row.extra[1]);
    detail += "m " + std::to_string(m) + ": max cost/(24m+12n) " + fmt(r.max_ratio()) + ", max ones/12(u+v) " +
              fmt(ones_ratio) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {true, detail};
}

Outcome general_quasilinear() {
  std::string detail;
  double prev = 0;
  bool pass = true;
  std::int64_t skipped = 0;
  for (Time m : {1000, 10000, 100000, 1000000}) {
    const ExperimentReport r = run_deque_bound(deque_config(false, m / 10, m, 5));
    if (!r.pass()) return {false, first_failure(r)};
    skipped += r.skipped_pattern_checks;
    const double ratio = r.max_ratio();
    if (prev > 0 && ratio > 1.10 * prev) pass = false;
    detail += "m " + std::to_string(m) + ": " + fmt(ratio) + "; ";
    prev = ratio;
  }
  detail += "P5 searches skipped as too large: " + std::to_string(skipped);
  return {pass, "max cost/(m 2^alpha + n) " + detail};
}

Outcome sequential() {
  const ExperimentReport r = run_sequential({100, 1000, 10000, 100000}, 0.10);
  std::string detail = "(cost + n)/n:";
  for (const RunRow& row : r.rows) detail += " " + fmt(row.ratio);
  if (!r.pass()) return {false, first_failure(r) + "; " + detail};
  return {true, detail + " for n = 1e2..1e5, within 37n"};
}

Outcome reduction_chain() {
  bool pass = true;
  std::string detail;
  for (Key n : {64, 256, 1024}) {
    ExperimentConfig c;
    c.experiment = "lowerbound";
    c.n = n;
    for (std::uint64_t s = 1; s <= 100; ++s) c.seeds.push_back(s);
    const ExperimentReport r = run_lowerbound(c);
    const double floor_bits = r.rows.empty() ? 0 : r.rows.front().bound;
    detail += "n " + std::to_string(n) + ": " + (r.failures.empty() ? "chain ok" : r.failures.front()) +
              ", mean cost " + fmt(r.mean_cost(), 6) + " vs log2(n!) " + fmt(floor_bits, 6) + "; ";
    if (!r.pass()) pass = false;
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome concentration_cost() {
  Rng rng(4242);
  for (std::uint64_t i = 1; i <= 500; ++i) {
    const auto n = static_cast<Key>(rng.between(1, 8));
    const auto m = static_cast<Time>(rng.between(1, 16));
    const bool restricted = rng.chance(0.5);
    const UpdateSequence s = gen_deque(n, m, i, restricted);
    const auto a = greedy_execute(s).cost;
    const auto b = greedy_execute(concentrate(s)).cost;
    if (a != b) {
      return {false, "cost " + std::to_string(a) + " vs " + std::to_string(b) + " at n " + std::to_string(n) +
                         ", m " + std::to_string(m) + ", seed " + std::to_string(i)};
    }
  }
  return {true, "500 deques (n <= 8, m <= 16) cost the same as their concentrations"};
}

// Random BST over a random subset of [1, n].
BSTree random_tree(Key n, Rng& rng) {
  std::vector<Key> keys;
  for (Key k = 1; k <= n; ++k) {
    if (rng.chance(0.6)) keys.push_back(k);
  }
  rng.shuffle(keys);
  BSTree t(n);
  for (Key k : keys) {
    t.add_node(k);
    if (t.root() == 0) {
      t.set_root(k);
      continue;
    }
    Key v = t.root();
    for (Key next = k < v ? t.left(v) : t.right(v); next != 0; next = k < v ? t.left(v) : t.right(v)) v = next;
    if (k < v) {
      t.set_left(v, k);
    } else {
      t.set_right(v, k);
    }
  }
  return t;
}

Outcome reconfiguration_rejections() {
  int curated = 0;
  for (const auto& c : cases::invalid_reconfigurations()) {
    const BSTree t = BSTree::parse(cases::kUniverse, c.tree);
    try {
      validate_reconfiguration(t, c.step);
      return {false, "accepted: " + c.name};
    } catch (const ReconfigError& e) {
      if (e.fault() != c.fault) {
        return {false, c.name + ": expected " + to_string(c.fault) + ", got " + to_string(e.fault())};
      }
    }
    ++curated;
  }
  if (curated < 20) return {false, "only " + std::to_string(curated) + " curated cases"};

  // Random non-extreme updates whose tau misses both tree neighbors.
  Rng rng(31337);
  int random = 0;
  for (int iter = 0; iter < 20000 && random < 2000; ++iter) {
    const Key n = 16;
    const BSTree t = random_tree(n, rng);
    if (t.size() < 3) continue;
    const bool insert = rng.chance(0.5);
    Key y = 0;
    if (insert) {
      std::vector<Key> inner;
      for (Key k = 1; k <= n; ++k) {
        if (!t.contains(k) && t.pred(k) && t.succ(k)) inner.push_back(k);
      }
      if (inner.empty()) continue;
      y = inner[rng.below(inner.size())];
    } else {
      std::vector<Key> inner;
      for (Key k : t.inorder()) {
        if (t.left(k) != 0 && t.right(k) != 0) inner.push_back(k);
      }
      if (inner.empty()) continue;
      y = inner[rng.below(inner.size())];
    }
    const Key p = *t.pred(y);
    const Key s = *t.succ(y);
    std::set<Key> tau;
    if (!insert) {
      for (Key v = y; v != 0; v = t.parent(v)) tau.insert(v);
    } else {
      tau.insert(t.root());
    }
    const auto grow = rng.below(5);
    for (std::uint64_t g = 0; g < grow; ++g) {
      std::vector<Key> frontier;
      for (Key v : tau) {
        for (Key c : {t.left(v), t.right(v)}) {
          if (c != 0 && !tau.count(c) && c != p && c != s) frontier.push_back(c);
        }
      }
      if (frontier.empty()) break;
      tau.insert(frontier[rng.below(frontier.size())]);
    }
    if (tau.count(p) || tau.count(s)) continue;
    std::vector<Key> after(tau.begin(), tau.end());
    if (insert) {
      after.insert(std::lower_bound(after.begin(), after.end(), y), y);
    } else {
      after.erase(std::find(after.begin(), after.end(), y));
    }
    // Balanced shape over the replacement keys.
    std::vector<Key> pre;
    std::function<void(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) {
      if (lo >= hi) return;
      const std::size_t mid = (lo + hi) / 2;
      pre.push_back(after[mid]);
      build(lo, mid);
      build(mid + 1, hi);
    };
    build(0, after.size());
    const Reconfiguration r{insert ? OpKind::Insert : OpKind::Delete, y, {tau.begin(), tau.end()}, pre, 0, {}};
    try {
      validate_reconfiguration(t, r);
      return {false, "accepted a " + std::string(insert ? "insert" : "delete") + " of " + std::to_string(y) +
                         " without touching " + std::to_string(p) + " or " + std::to_string(s) + " in " +
                         t.to_string()};
    } catch (const ReconfigError& e) {
      if (e.fault() != ReconfigFault::NeighborNotTouched) return {false, std::string("unexpected ") + e.what()};
    }
    ++random;
  }
  if (random < 1000) return {false, "only " + std::to_string(random) + " random neighbor cases generated"};
  return {true, std::to_string(curated) + " curated invalid reconfigurations rejected with the expected fault; " +
                    std::to_string(random) + " random neighbor-less updates rejected"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "GREEDY output is satisfied", greedy_satisfied},
      {2, "point set to execution round trip", greedy_round_trip},
      {3, "deque runs avoid P4 and P5", pattern_avoidance},
      {4, "restricted deque cost within 24m+12n", restricted_linear},
      {5, "general deque cost ratio stays flat", general_quasilinear},
      {6, "sequential access cost is linear", sequential},
      {7, "permutation access to insertion to sorting", reduction_chain},
      {8, "concentration keeps GREEDY cost", concentration_cost},
      {9, "invalid reconfigurations are rejected", reconfiguration_rejections},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  bool all_pass = true;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << ": " << o.detail << " ["
              << fmt(secs, 3) << " s]" << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
