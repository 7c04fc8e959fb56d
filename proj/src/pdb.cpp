// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/pdb.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "flampred/csv.hpp"
#include "flampred/error.hpp"

namespace flampred {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// 1-based inclusive column range, clipped to the line.
std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

std::string normalize_symbol(std::string_view raw) {
  std::string s;
  for (char c : raw)
    if (std::isalpha(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return s;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  for (std::size_t i = 1; i < s.size(); ++i)
    s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  return s;
}

// Atom names put two-letter elements in column 13 and one-letter elements in
// column 14 ("CL1 " vs " CA ").
std::string element_from_name(std::string_view name) {
  if (name.size() >= 2 && name[0] != ' ' && std::isalpha(static_cast<unsigned char>(name[1]))) {
    std::string two = normalize_symbol(name.substr(0, 2));
    if (find_element(two)) return two;
  }
  for (char c : name)
    if (std::isalpha(static_cast<unsigned char>(c))) return normalize_symbol(std::string_view(&c, 1));
  return {};
}

bool parse_int(std::string_view field, long& out) {
  field = trim(field);
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc{} && ptr == field.data() + field.size();
}

struct PdbAtom {
  Atom atom;
  std::array<double, 3> xyz{};
};

}  // namespace

MolGraph parse_pdb(std::string_view text) {
  std::vector<PdbAtom> atoms;
  std::map<long, std::size_t> by_serial;
  std::vector<std::pair<std::size_t, std::pair<long, long>>> conect;  // (line, (from, to))

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    const std::string_view record = columns(line, 1, 6);
    if (record == "ATOM  " || record == "HETATM" || trim(record) == "ATOM") {
      if (line.size() < 54) throw ParseError("truncated atom record", line_no, ParseError::Unit::kLine);
      long serial = 0;
      if (!parse_int(columns(line, 7, 11), serial))
        throw ParseError("bad atom serial", line_no, ParseError::Unit::kLine);
      PdbAtom a;
      for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t first = 31 + 8 * k;
        if (!csv::parse_double(columns(line, first, first + 7), a.xyz[k]) || !std::isfinite(a.xyz[k]))
          throw ParseError("bad coordinate", line_no, ParseError::Unit::kLine);
      }
      std::string symbol = normalize_symbol(trim(columns(line, 77, 78)));
      if (symbol.empty()) symbol = element_from_name(columns(line, 13, 16));
      if (symbol.empty() || !find_element(symbol) || symbol == kWildcard)
        throw ParseError("unknown element '" + symbol + "'", line_no, ParseError::Unit::kLine);
      a.atom.element = symbol;
      const std::string_view charge = trim(columns(line, 79, 80));
      if (charge.size() == 2 && std::isdigit(static_cast<unsigned char>(charge[0])) &&
          (charge[1] == '+' || charge[1] == '-'))
        a.atom.formal_charge = (charge[0] - '0') * (charge[1] == '+' ? 1 : -1);
      by_serial[serial] = atoms.size();
      atoms.push_back(std::move(a));
    } else if (record == "CONECT") {
      long from = 0;
      if (!parse_int(columns(line, 7, 11), from))
        throw ParseError("bad CONECT serial", line_no, ParseError::Unit::kLine);
      for (std::size_t first : {12, 17, 22, 27}) {
        const std::string_view field = columns(line, first, first + 4);
        if (trim(field).empty()) continue;
        long to = 0;
        if (!parse_int(field, to))
          throw ParseError("bad CONECT partner", line_no, ParseError::Unit::kLine);
        conect.push_back({line_no, {from, to}});
      }
    }
    if (end == text.size()) break;
  }

  if (atoms.empty()) throw ParseError("no ATOM/HETATM records", line_no, ParseError::Unit::kLine);

  MolGraph graph;
  graph.source = StructureSource::kPdb;
  for (const auto& a : atoms) graph.atoms.push_back(a.atom);

  if (!conect.empty()) {
    for (const auto& [ln, pair] : conect) {
      auto a = by_serial.find(pair.first);
      auto b = by_serial.find(pair.second);
      if (a == by_serial.end() || b == by_serial.end())
        throw ParseError("CONECT references unknown atom", ln, ParseError::Unit::kLine);
      if (a->second == b->second)
        throw ParseError("CONECT bonds an atom to itself", ln, ParseError::Unit::kLine);
      if (!graph.find_bond(a->second, b->second))
        graph.bonds.push_back({a->second, b->second, BondOrder::kSingle});
    }
  } else {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double ri = find_element(atoms[i].atom.element)->covalent_radius;
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        const double rj = find_element(atoms[j].atom.element)->covalent_radius;
        double d2 = 0;
        for (std::size_t k = 0; k < 3; ++k) {
          const double d = atoms[i].xyz[k] - atoms[j].xyz[k];
          d2 += d * d;
        }
        if (std::sqrt(d2) <= ri + rj + kBondSlack)
          graph.bonds.push_back({i, j, BondOrder::kSingle});
      }
    }
  }
  return fold_hydrogens(graph);
}

}  // namespace flampred
