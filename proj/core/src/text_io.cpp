#include "geobst/text_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace geobst {

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    ++number;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back({number, std::move(line)});
  }
  return out;
}

[[noreturn]] void fail_at(const Line& line, const std::string& what) {
  throw ParseError("line " + std::to_string(line.number) + ": " + what + " in \"" + line.text + "\"");
}

std::pair<std::int64_t, std::int64_t> header(const std::vector<Line>& lines, const char* what) {
  if (lines.empty()) throw ParseError(std::string("empty ") + what + " text");
  std::istringstream in(lines.front().text);
  std::int64_t a = 0, b = 0;
  std::string extra;
  if (!(in >> a >> b) || (in >> extra) || a < 0 || b < 0) fail_at(lines.front(), "bad header");
  return {a, b};
}

OpKind op_kind(const Line& line, char c) {
  switch (c) {
    case 'A': return OpKind::Access;
    case 'I': return OpKind::Insert;
    case 'D': return OpKind::Delete;
    default: fail_at(line, std::string("unknown op kind '") + c + "'");
  }
}

struct PointLine {
  Time t;
  char kind;
  Key x;
};

std::vector<PointLine> point_lines(const std::vector<Line>& lines) {
  std::vector<PointLine> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i].text);
    PointLine p{};
    std::string kind, extra;
    if (!(in >> p.t >> kind >> p.x) || kind.size() != 1 || (in >> extra)) fail_at(lines[i], "expected \"t kind x\"");
    p.kind = kind[0];
    out.push_back(p);
  }
  return out;
}

// Builds the sequence from the A/I/D lines: exactly one per row 1..m.
UpdateSequence sequence_from(const std::vector<Line>& lines, const std::vector<PointLine>& pts, Key n, Time m) {
  std::vector<Op> ops(static_cast<std::size_t>(m));
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const PointLine& p = pts[i];
    const Line& line = lines[i + 1];
    if (p.t < 1 || p.t > m) fail_at(line, "row outside [1, " + std::to_string(m) + "]");
    if (p.kind == 'T') continue;
    auto& flag = seen[static_cast<std::size_t>(p.t - 1)];
    if (flag) fail_at(line, "second operation in row " + std::to_string(p.t));
    flag = 1;
    ops[static_cast<std::size_t>(p.t - 1)] = {p.x, op_kind(line, p.kind)};
  }
  for (Time t = 1; t <= m; ++t) {
    if (!seen[static_cast<std::size_t>(t - 1)]) throw ParseError("row " + std::to_string(t) + " has no operation");
  }
  return UpdateSequence(n, std::move(ops));
}

}  // namespace

std::string format_sequence(const UpdateSequence& s) {
  std::ostringstream out;
  out << s.universe() << ' ' << s.length() << '\n';
  for (Time t = 1; t <= s.length(); ++t) out << t << ' ' << to_char(s.op(t).kind) << ' ' << s.op(t).key << '\n';
  return out.str();
}

UpdateSequence parse_sequence(std::string_view text) {
  const auto lines = content_lines(text);
  const auto [n, m] = header(lines, "sequence");
  const auto pts = point_lines(lines);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].kind == 'T') fail_at(lines[i + 1], "touched point in a sequence");
  }
  return sequence_from(lines, pts, static_cast<Key>(n), static_cast<Time>(m));
}

std::string format_pointset(const PointSet& p) {
  std::ostringstream out;
  out << p.universe() << ' ' << p.horizon() << '\n';
  for (const Point& q : p.points()) out << q.t << ' ' << to_char(q.kind) << ' ' << q.x << '\n';
  return out.str();
}

PointSet parse_pointset(std::string_view text) {
  const auto lines = content_lines(text);
  const auto [n, m] = header(lines, "point set");
  const auto pts = point_lines(lines);
  UpdateSequence seq = sequence_from(lines, pts, static_cast<Key>(n), static_cast<Time>(m));
  std::vector<Cell> touched;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].kind != 'T') continue;
    if (seq.op(pts[i].t).key == pts[i].x) fail_at(lines[i + 1], "touched point on top of the row's operation");
    touched.push_back({pts[i].x, pts[i].t});
  }
  return PointSet(std::move(seq), touched);
}

std::string format_execution(const Execution& e) {
  std::ostringstream out;
  out << e.sequence.universe() << ' ' << e.sequence.length() << '\n';
  out << "init " << e.initial.to_string() << '\n';
  Time t = 0;
  for (const Reconfiguration& r : e.steps) {
    out << "step " << ++t << ' ' << to_char(r.kind) << ' ' << r.op_key << " tau ";
    if (r.tau.empty()) out << '-';
    for (std::size_t i = 0; i < r.tau.size(); ++i) out << (i ? "," : "") << r.tau[i];
    out << ' ' << BSTree::from_preorder(e.sequence.universe(), r.tau_prime).to_string();
    if (r.anchor != 0) out << " anchor " << r.anchor;
    out << '\n';
  }
  return out.str();
}

Execution parse_execution(std::string_view text) {
  const auto lines = content_lines(text);
  const auto [n_, m_] = header(lines, "execution");
  const auto n = static_cast<Key>(n_);
  const auto m = static_cast<Time>(m_);
  if (lines.size() < 2 || lines[1].text.rfind("init ", 0) != 0) throw ParseError("missing \"init <tree>\" line");
  BSTree initial = BSTree::parse(n, std::string_view(lines[1].text).substr(5));

  std::vector<Op> ops;
  std::vector<Reconfiguration> steps;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const Line& line = lines[i];
    std::istringstream in(line.text);
    std::string word, kind, tau_word, tau_list;
    Time t = 0;
    Key key = 0;
    if (!(in >> word >> t >> kind >> key >> tau_word >> tau_list) || word != "step" || tau_word != "tau" ||
        kind.size() != 1) {
      fail_at(line, "expected \"step t kind key tau <keys> <tree>\"");
    }
    if (t != static_cast<Time>(steps.size()) + 1) fail_at(line, "steps out of order");
    Reconfiguration r;
    r.kind = op_kind(line, kind[0]);
    r.op_key = key;
    if (tau_list != "-") {
      std::istringstream keys(tau_list);
      std::string item;
      while (std::getline(keys, item, ',')) {
        try {
          r.tau.push_back(static_cast<Key>(std::stol(item)));
        } catch (const std::exception&) {
          fail_at(line, "bad key \"" + item + "\" in tau");
        }
      }
    }
    std::string rest;
    std::getline(in, rest);
    if (const auto at = rest.find(" anchor "); at != std::string::npos) {
      try {
        r.anchor = static_cast<Key>(std::stol(rest.substr(at + 8)));
      } catch (const std::exception&) {
        fail_at(line, "bad anchor");
      }
      rest.resize(at);
    }
    r.tau_prime = BSTree::parse(n, rest).preorder();
    ops.push_back({key, r.kind});
    steps.push_back(std::move(r));
  }
  if (static_cast<Time>(steps.size()) != m) {
    throw ParseError("execution header promises " + std::to_string(m) + " steps, found " +
                     std::to_string(steps.size()));
  }
  return Execution{UpdateSequence(n, std::move(ops)), std::move(initial), std::move(steps)};
}

std::string format_matrix(const BinaryMatrix& m) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << '\n';
  for (const Entry& e : m.ones()) out << e.r << ' ' << e.c << '\n';
  return out.str();
}

BinaryMatrix parse_matrix(std::string_view text) {
  const auto lines = content_lines(text);
  const auto [u, v] = header(lines, "matrix");
  std::vector<Entry> ones;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i].text);
    Entry e;
    std::string extra;
    if (!(in >> e.r >> e.c) || (in >> extra)) fail_at(lines[i], "expected \"r c\"");
    ones.push_back(e);
  }
  return BinaryMatrix(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v), std::move(ones));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace geobst
