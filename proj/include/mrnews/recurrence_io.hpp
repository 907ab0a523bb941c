#pragma once

// Debug dumps of a recurrence matrix.
//
// Run-length sidecar (text):
//   mrnews-rle 1
//   n <N>
//   epsilon <eps>
//   degenerate <0|1>
//   followed by N lines, one per row: space-separated run lengths that
//   alternate 0-runs and 1-runs, always starting with a 0-run (possibly of
//   length 0). Each row's runs sum to N.
//
// Edge list: CSV `i,j` with 0-based node indices and i < j.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mrnews/detail/csv.hpp"
#include "mrnews/recurrence.hpp"

namespace mrnews {

inline void write_rle(const RecurrenceMatrix& r, std::ostream& out) {
  out << "mrnews-rle 1\n"
      << "n " << r.size() << '\n'
      << "epsilon " << detail::format_exact(r.epsilon()) << '\n'
      << "degenerate " << (r.degenerate() ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < r.size(); ++i) {
    bool current = false;
    std::size_t run = 0;
    bool first = true;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r.at(i, j) != current) {
        out << (first ? "" : " ") << run;
        first = false;
        current = !current;
        run = 0;
      }
      ++run;
    }
    out << (first ? "" : " ") << run << '\n';
  }
}

inline RecurrenceMatrix read_rle(std::istream& in) {
  auto fail = [](const std::string& what) { return Error(ErrorKind::ParseError, "rle: " + what); };
  std::string tag;
  int version = 0;
  std::size_t n = 0;
  std::string eps_text;
  int degenerate = 0;
  std::string key;
  if (!(in >> tag >> version) || tag != "mrnews-rle" || version != 1) throw fail("bad header");
  if (!(in >> key >> n) || key != "n") throw fail("missing n");
  if (!(in >> key >> eps_text) || key != "epsilon") throw fail("missing epsilon");
  if (!(in >> key >> degenerate) || key != "degenerate") throw fail("missing degenerate");
  const auto eps = detail::parse_double(eps_text);
  std::string line;
  std::getline(in, line);
  if (!eps) throw fail("bad epsilon");
  RecurrenceMatrix r(n, *eps);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw fail("truncated at row " + std::to_string(i));
    std::istringstream row(line);
    std::size_t run = 0;
    std::size_t col = 0;
    bool ones = false;
    while (row >> run) {
      if (ones)
        for (std::size_t j = col; j < col + run && j < n; ++j)
          if (i < j) r.add_edge(i, j);
      col += run;
      ones = !ones;
    }
    if (col != n) throw fail("row " + std::to_string(i) + " does not sum to n");
  }
  r.set_degenerate(degenerate != 0);
  return r;
}

inline void write_edge_list(const RecurrenceMatrix& r, std::ostream& out) {
  out << "i,j\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      if (r.at(i, j)) out << i << ',' << j << '\n';
}

}  // namespace mrnews
