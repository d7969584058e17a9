#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "geobst/arboreal.hpp"
#include "geobst/greedy.hpp"
#include "geobst/sequences.hpp"
#include "geobst/text_io.hpp"

using namespace geobst;

namespace {

bool same_steps(const Execution& a, const Execution& b) {
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const Reconfiguration& x = a.steps[i];
    const Reconfiguration& y = b.steps[i];
    if (x.kind != y.kind || x.op_key != y.op_key || x.tau != y.tau || x.tau_prime != y.tau_prime ||
        x.anchor != y.anchor) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("sequence text") {
  const UpdateSequence s(3, {{2, OpKind::Insert}, {2, OpKind::Access}, {3, OpKind::Delete}});
  const std::string text = format_sequence(s);
  CHECK(text == "3 3\n1 I 2\n2 A 2\n3 D 3\n");
  CHECK(parse_sequence(text) == s);
  CHECK(parse_sequence("# comment\n\n3 3\n1 I 2\n\n3 D 3\n2 A 2\n") == s);
}

TEST_CASE("point set and execution round trips") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = random_update_sequence(9, 20, seed);
    REQUIRE(parse_sequence(format_sequence(s)) == s);
    const PointSet p = greedy_execute(s).points;
    REQUIRE(parse_pointset(format_pointset(p)) == p);
    for (const Execution& e : {geometry_to_tree_offline(p), random_execution(s, seed)}) {
      const Execution back = parse_execution(format_execution(e));
      REQUIRE(back.sequence == e.sequence);
      REQUIRE(back.initial == e.initial);
      REQUIRE(same_steps(back, e));
      REQUIRE(tree_to_geometry(back) == tree_to_geometry(e));
    }
  }
}

TEST_CASE("anchors survive the execution format") {
  const UpdateSequence s(12, {{12, OpKind::Insert}});
  Execution e{s, BSTree::parse(12, "(((- 1 -) 3 (- 4 (- 5 -))) 6 (((- 7 -) 8 -) 9 (- 11 -)))"),
              {{OpKind::Insert, 12, {}, {12}, 9, {}}}};
  // 2 and 10 have no operation, so the sequence keeps them in the initial
  // tree; this execution only needs the text form, not a replay.
  const Execution back = parse_execution(format_execution(e));
  CHECK(back.steps.front().anchor == 9);
}

TEST_CASE("matrix text") {
  const BinaryMatrix m(3, 4, {{1, 2}, {3, 4}});
  CHECK(format_matrix(m) == "3 4\n1 2\n3 4\n");
  CHECK(parse_matrix(format_matrix(m)) == m);
  CHECK(parse_matrix("2 2\n") == BinaryMatrix(2, 2, {}));
}

TEST_CASE("malformed text is reported") {
  CHECK_THROWS_AS(parse_sequence(""), ParseError);
  CHECK_THROWS_AS(parse_sequence("3\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 2 1\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 1\n1 X 2\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 2\n1 A 2\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 1\n1 A 2\n1 A 3\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 1\n2 A 2\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 1\n1 T 2\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence("3 1\n1 A\n"), ParseError);
  CHECK_THROWS_AS(parse_pointset("3 1\n1 A 2\n1 T 2\n"), ParseError);
  CHECK_THROWS_AS(parse_pointset("3 1\n1 A 2\n1 T 9\n"), RangeError);
  CHECK_THROWS_AS(parse_execution("3 1\nstep 1 A 2 tau 2 (- 2 -)\n"), ParseError);
  CHECK_THROWS_AS(parse_execution("3 1\ninit (- 2 -)\nstep 2 A 2 tau 2 (- 2 -)\n"), ParseError);
  CHECK_THROWS_AS(parse_execution("3 2\ninit (- 2 -)\nstep 1 A 2 tau 2 (- 2 -)\n"), ParseError);
  CHECK_THROWS_AS(parse_execution("3 1\ninit (- 2 -)\nstep 1 A 2 tau x (- 2 -)\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("2 2\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("2 2\n3 1\n"), RangeError);
  try {
    parse_sequence("2 1\n\n1 Q 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("files") {
  const auto path = (std::filesystem::temp_directory_path() / "geobst_text_io_test.txt").string();
  write_text_file(path, "2 1\n1 A 1\n");
  CHECK(read_text_file(path) == "2 1\n1 A 1\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), ParseError);
}
