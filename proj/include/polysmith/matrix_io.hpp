#pragma once

#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "parser.hpp"
#include "polymatrix.hpp"

namespace polysmith {

// Matrix file format:
//   vars: x y z
//   rows: 3
//   cols: 3
//   [i,j] = <expr>      (1-indexed; omitted entries are 0)
// Blank lines and lines starting with '#' are ignored.
inline PolyMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<VarSet> vs;
  std::optional<std::size_t> nrows, ncols;
  std::optional<PolyMatrix> m;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  auto trim_start = [](const std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
  };
  auto parse_count = [&](const std::string& s, std::size_t col) {
    std::size_t b = trim_start(s);
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b >= s.size() || e == std::string::npos) throw ParseError("missing count", lineno, col + b);
    std::string d = s.substr(b, e - b + 1);
    for (char c : d)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("expected a positive integer, found '" + d + "'", lineno, col + b);
    if (d.size() > 6 || std::stoul(d) == 0) throw ParseError("count out of range: " + d, lineno, col + b);
    return std::size_t(std::stoul(d));
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = trim_start(line);
    if (b == line.size() || line[b] == '#') continue;
    std::string body = line.substr(b);
    if (body.rfind("vars:", 0) == 0) {
      if (vs) throw ParseError("duplicate 'vars:' header", lineno, b + 1);
      std::istringstream ns(body.substr(5));
      std::vector<std::string> names;
      std::string n;
      while (ns >> n) {
        bool ok = std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_';
        for (char c : n) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
        if (!ok) throw ParseError("bad variable name '" + n + "'", lineno, b + 1 + body.find(n));
        names.push_back(n);
      }
      if (names.empty()) throw ParseError("'vars:' lists no variables", lineno, b + 1);
      try {
        vs = VarSet(names);
      } catch (const UsageError& e) {
        throw ParseError(e.what(), lineno, b + 1);
      }
    } else if (body.rfind("rows:", 0) == 0) {
      if (nrows) throw ParseError("duplicate 'rows:' header", lineno, b + 1);
      nrows = parse_count(body.substr(5), b + 6);
    } else if (body.rfind("cols:", 0) == 0) {
      if (ncols) throw ParseError("duplicate 'cols:' header", lineno, b + 1);
      ncols = parse_count(body.substr(5), b + 6);
    } else if (body[0] == '[') {
      if (!vs || !nrows || !ncols) throw ParseError("entry before 'vars:', 'rows:' and 'cols:' headers", lineno, b + 1);
      if (!m) m = PolyMatrix(*vs, *nrows, *ncols);
      static const std::regex idx(R"(^\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=)");
      std::smatch sm;
      if (!std::regex_search(body, sm, idx)) throw ParseError("expected '[i,j] = <expr>'", lineno, b + 1);
      std::size_t i = std::stoul(sm[1].str()), j = std::stoul(sm[2].str());
      if (i < 1 || i > *nrows || j < 1 || j > *ncols)
        throw ParseError("entry index [" + sm[1].str() + "," + sm[2].str() + "] out of range", lineno, b + 1);
      if (!seen.insert({i, j}).second)
        throw ParseError("duplicate entry [" + sm[1].str() + "," + sm[2].str() + "]", lineno, b + 1);
      std::size_t off = b + std::size_t(sm.length(0));
      (*m)(i - 1, j - 1) = PolyParser(std::string_view(line).substr(off), *vs, lineno, off + 1).parse();
    } else {
      throw ParseError("unrecognized line", lineno, b + 1);
    }
  }
  if (!vs) throw ParseError("missing 'vars:' header", lineno, 1);
  if (!nrows || !ncols) throw ParseError("missing 'rows:' or 'cols:' header", lineno, 1);
  if (!m) m = PolyMatrix(*vs, *nrows, *ncols);
  return *m;
}

inline std::string render_matrix(const PolyMatrix& m) {
  std::ostringstream os;
  os << "vars:";
  for (auto& n : m.varset().names()) os << " " << n;
  os << "\nrows: " << m.rows() << "\ncols: " << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) os << "[" << i + 1 << "," << j + 1 << "] = " << m(i, j) << "\n";
  return os.str();
}

}  // namespace polysmith
