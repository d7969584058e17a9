#pragma once

// Line-oriented text formats. Blank lines and lines starting with '#' are
// ignored on input.
//
//   sequence / point set:  "n m", then "t kind x" per point, kind in A I D T,
//                          ordered by (t, x); sequences have no T lines
//   execution:             "n m", "init <tree>", then per row
//                          "step t kind key tau <k1,k2,...|-> <tree> [anchor k]"
//                          where <tree> is "-" or "(<left> key <right>)"
//   matrix:                "u v", then "r c" per one

#include <string>
#include <string_view>

#include "geobst/arboreal.hpp"
#include "geobst/model.hpp"
#include "geobst/patterns.hpp"

namespace geobst {

std::string format_sequence(const UpdateSequence& s);
UpdateSequence parse_sequence(std::string_view text);

std::string format_pointset(const PointSet& p);
PointSet parse_pointset(std::string_view text);

std::string format_execution(const Execution& e);
Execution parse_execution(std::string_view text);

std::string format_matrix(const BinaryMatrix& m);
BinaryMatrix parse_matrix(std::string_view text);

/// Whole file; throws ParseError if it cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace geobst
