#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geobst/arboreal.hpp"
#include "geobst/errors.hpp"
#include "geobst/greedy.hpp"
#include "geobst/harness.hpp"
#include "geobst/patterns.hpp"
#include "geobst/sequences.hpp"
#include "geobst/text_io.hpp"

using namespace geobst;

namespace {

struct Options {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::string seeds = "1";
  bool restricted = false;
  std::string out;
  std::string format = "csv";
  std::string input;
  std::string kind = "mix";
  std::string pattern = "p4";
  bool flipped = false;
  bool from_points = false;
  double tolerance = 0.10;
  std::vector<std::int64_t> sizes;
};

std::string input_text(const Options& o) {
  if (o.input.empty() || o.input == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  return read_text_file(o.input);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

int report(const Options& o, const ExperimentReport& r) {
  if (!o.out.empty()) r.write(o.out);
  std::cout << (o.format == "json" ? r.json() : r.csv());
  for (const auto& f : r.failures) std::cerr << "FAIL " << f << '\n';
  for (const auto& [name, ok] : r.checks) {
    if (!ok) std::cerr << "FAIL check " << name << '\n';
  }
  return r.pass() ? 0 : 1;
}

ExperimentConfig config(const Options& o, std::string experiment) {
  ExperimentConfig c;
  c.experiment = std::move(experiment);
  c.n = static_cast<Key>(o.n);
  c.m = static_cast<Time>(o.m);
  c.seeds = parse_seed_list(o.seeds);
  c.restricted = o.restricted;
  c.tolerance = o.tolerance;
  return c;
}

UpdateSequence generate(const Options& o) {
  const auto seed = parse_seed_list(o.seeds).front();
  const auto n = static_cast<Key>(o.n);
  const auto m = static_cast<Time>(o.m);
  if (o.kind == "deque") return gen_deque(n, m, seed, o.restricted);
  if (o.kind == "mix") return random_update_sequence(n, m, seed);
  if (o.kind == "sequential") return sequential_as_deletions(n);
  if (o.kind == "permutation") return random_permutation_access(n, seed);
  throw RangeError("unknown sequence kind \"" + o.kind + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric BST model with insertions and deletions"};
  app.require_subcommand(1);
  Options o;

  auto sizes = [&](CLI::App* sub, bool with_m) {
    sub->add_option("--n", o.n, "Key universe size")->required()->check(CLI::PositiveNumber);
    if (with_m) sub->add_option("--m", o.m, "Sequence length")->required()->check(CLI::PositiveNumber);
  };
  auto seeds = [&](CLI::App* sub) {
    sub->add_option("--seed,--seeds", o.seeds, "Seed, list \"1,2,3\" or range \"1-50\"");
  };
  auto outputs = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write <out>.csv and <out>.json");
    sub->add_option("--format", o.format, "Report format on stdout")->check(CLI::IsMember({"csv", "json"}));
  };
  auto input = [&](CLI::App* sub) { sub->add_option("--input", o.input, "Input file, '-' for stdin"); };

  auto* gen = app.add_subcommand("gen", "Print a generated update sequence");
  sizes(gen, false);
  gen->add_option("--m", o.m, "Sequence length");
  gen->add_option("--kind", o.kind, "deque, mix, sequential or permutation")
      ->check(CLI::IsMember({"deque", "mix", "sequential", "permutation"}));
  gen->add_flag("--restricted", o.restricted, "Deque deletions only at the minimum");
  seeds(gen);
  gen->add_option("--out", o.out, "Output file");

  auto* greedy_run = app.add_subcommand("greedy-run", "Run GREEDY on a sequence and print the point set");
  input(greedy_run);
  greedy_run->add_option("--out", o.out, "Output file");

  auto* to_geometry = app.add_subcommand("to-geometry", "Record an execution as a point set");
  input(to_geometry);
  to_geometry->add_option("--out", o.out, "Output file");

  auto* to_tree = app.add_subcommand("to-tree", "Convert a satisfied point set to an execution");
  input(to_tree);
  to_tree->add_option("--out", o.out, "Output file");

  auto* check = app.add_subcommand("check-satisfied", "Check a point set for arboreal satisfaction");
  input(check);

  auto* pattern = app.add_subcommand("pattern-check", "Search a matrix for P4 or P5; exit 0 iff avoided");
  input(pattern);
  pattern->add_option("--pattern", o.pattern, "p4 or p5")->check(CLI::IsMember({"p4", "p5"}));
  pattern->add_flag("--flipped", o.flipped, "Search for the row-reversed pattern");
  pattern->add_flag("--from-points", o.from_points, "Input is a point set rather than a matrix");

  auto* deque = app.add_subcommand("bench-deque", "Deque sequences against the linear or quasilinear bound");
  sizes(deque, true);
  seeds(deque);
  deque->add_flag("--restricted", o.restricted, "Output-restricted deques, checked against 24m+12n");
  outputs(deque);

  auto* lower = app.add_subcommand("bench-lowerbound", "Access, insertion and sorting on random permutations");
  sizes(lower, false);
  seeds(lower);
  outputs(lower);

  auto* round = app.add_subcommand("roundtrip", "Random sequences through both converters");
  sizes(round, true);
  seeds(round);
  outputs(round);

  auto* seq = app.add_subcommand("bench-sequential", "GREEDY on sequential deletions");
  seq->add_option("--n", o.sizes, "One or more sizes")->required()->check(CLI::PositiveNumber);
  seq->add_option("--tolerance", o.tolerance, "Allowed relative change of (cost+n)/n between sizes");
  outputs(seq);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (o.m < 1 && (o.kind == "deque" || o.kind == "mix")) throw RangeError("--m is required for this kind");
      emit(o, format_sequence(generate(o)));
      return 0;
    }
    if (greedy_run->parsed()) {
      const GreedyResult g = greedy_execute(parse_sequence(input_text(o)));
      emit(o, format_pointset(g.points));
      std::cerr << "cost " << g.cost << '\n';
      return 0;
    }
    if (to_geometry->parsed()) {
      emit(o, format_pointset(tree_to_geometry(parse_execution(input_text(o)))));
      return 0;
    }
    if (to_tree->parsed()) {
      const PointSet p = parse_pointset(input_text(o));
      if (auto sat = is_satisfied(p); !sat) {
        std::cerr << "not satisfied: " << sat.witness->describe() << '\n';
        return 1;
      }
      emit(o, format_execution(geometry_to_tree_offline(p)));
      return 0;
    }
    if (check->parsed()) {
      const PointSet p = parse_pointset(input_text(o));
      if (auto bad = first_invalid_point(p)) {
        std::cout << "invalid point " << to_string(*bad) << '\n';
        return 1;
      }
      const SatisfactionResult sat = is_satisfied(p);
      if (sat) {
        std::cout << "satisfied\n";
        return 0;
      }
      std::cout << "unsatisfied: " << sat.witness->describe() << '\n';
      return 1;
    }
    if (pattern->parsed()) {
      const std::string text = input_text(o);
      const BinaryMatrix mat = o.from_points ? matrix_from_pointset(parse_pointset(text)) : parse_matrix(text);
      const Pattern base = o.pattern == "p4" ? p4() : p5();
      const Pattern pat = o.flipped ? flip_rows(base) : base;
      const PatternMatch hit = contains_pattern(mat, pat);
      const BoundReport b = bound_report(mat, o.pattern == "p4" ? BoundKind::P4Linear : BoundKind::P5Quasilinear);
      std::cout << "ones " << b.ones << " bound " << b.bound << " ratio " << b.ratio << '\n';
      if (!hit) {
        std::cout << pat.name << " avoided\n";
        return 0;
      }
      std::cout << pat.name << " found at rows";
      for (auto r : hit.rows) std::cout << ' ' << r;
      std::cout << " cols";
      for (auto c : hit.cols) std::cout << ' ' << c;
      std::cout << '\n';
      return 1;
    }
    if (deque->parsed()) {
      return report(o, run_deque_bound(config(o, o.restricted ? "restricted-linear" : "general-quasilinear")));
    }
    if (lower->parsed()) return report(o, run_lowerbound(config(o, "lowerbound")));
    if (round->parsed()) return report(o, run_roundtrip(config(o, "roundtrip")));
    if (seq->parsed()) {
      std::vector<Key> ns(o.sizes.begin(), o.sizes.end());
      return report(o, run_sequential(ns, o.tolerance));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
