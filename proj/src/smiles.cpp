// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/smiles.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "flampred/error.hpp"

namespace flampred {
namespace {

struct RingOpening {
  std::size_t atom;
  std::optional<BondOrder> order;
  std::size_t offset;
};

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  MolGraph run() {
    if (text_.empty()) throw ParseError("empty SMILES", 0);
    while (pos_ < text_.size()) step();

    if (pending_bond_) throw ParseError("bond without a following atom", pending_offset_);
    if (!branches_.empty()) throw ParseError("unbalanced parentheses", branches_.back().second);
    if (!rings_.empty()) throw ParseError("unmatched ring closure", rings_.begin()->second.offset);
    if (graph_.atoms.empty()) throw ParseError("no atoms", 0);

    assign_implicit_hydrogens();
    graph_.source = StructureSource::kSmiles;
    return std::move(graph_);
  }

 private:
  void step() {
    const char c = text_[pos_];
    switch (c) {
      case '(':
        if (!prev_) throw ParseError("branch without a preceding atom", pos_);
        if (pending_bond_) throw ParseError("bond before branch", pos_);
        branches_.emplace_back(*prev_, pos_);
        ++pos_;
        return;
      case ')':
        if (branches_.empty()) throw ParseError("unbalanced parentheses", pos_);
        if (pending_bond_) throw ParseError("bond without a following atom", pending_offset_);
        prev_ = branches_.back().first;
        branches_.pop_back();
        ++pos_;
        return;
      case '-': case '=': case '#': case ':': case '/': case '\\': case '$':
        read_bond();
        return;
      case '.':
        if (pending_bond_) throw ParseError("bond without a following atom", pending_offset_);
        if (!prev_) throw ParseError("'.' without a preceding atom", pos_);
        prev_.reset();
        ++pos_;
        return;
      case '%':
        ring_closure(read_percent_ring());
        return;
      case '[':
        add_atom(read_bracket_atom());
        return;
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          const std::size_t at = pos_++;
          ring_closure({c - '0', at});
          return;
        }
        add_atom(read_organic_atom());
    }
  }

  void read_bond() {
    if (pending_bond_) throw ParseError("consecutive bond symbols", pos_);
    if (!prev_) throw ParseError("bond without a preceding atom", pos_);
    switch (text_[pos_]) {
      case '-': case '/': case '\\': pending_bond_ = BondOrder::kSingle; break;
      case '=': pending_bond_ = BondOrder::kDouble; break;
      case '#': pending_bond_ = BondOrder::kTriple; break;
      case ':': pending_bond_ = BondOrder::kAromatic; break;
      default: throw ParseError("quadruple bonds are not supported", pos_);
    }
    pending_offset_ = pos_++;
  }

  std::pair<int, std::size_t> read_percent_ring() {
    const std::size_t at = pos_;
    if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
      throw ParseError("'%' must be followed by two digits", at);
    const int number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
    pos_ += 3;
    return {number, at};
  }

  struct ParsedAtom {
    Atom atom;
    bool bracket = false;
    std::size_t offset = 0;
  };

  ParsedAtom read_organic_atom() {
    const std::size_t at = pos_;
    ParsedAtom out;
    out.offset = at;
    const char c = text_[pos_];
    auto next_is = [&](char n) { return pos_ + 1 < text_.size() && text_[pos_ + 1] == n; };

    if (c == 'C' && next_is('l')) {
      out.atom.element = "Cl";
      pos_ += 2;
    } else if (c == 'B' && next_is('r')) {
      out.atom.element = "Br";
      pos_ += 2;
    } else if (std::string_view("BCNOPSFI").find(c) != std::string_view::npos) {
      out.atom.element = std::string(1, c);
      ++pos_;
    } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      out.atom.element = std::string(1, static_cast<char>(std::toupper(c)));
      out.atom.aromatic = true;
      ++pos_;
    } else if (c == '*') {
      out.atom.element = std::string(kWildcard);
      ++pos_;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      throw ParseError(std::string("unknown element '") + c + "' (use brackets for non-organic atoms)",
                       at);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", at);
    }
    return out;
  }

  int read_int(std::size_t max_digits = 9) {
    int value = 0;
    std::size_t n = 0;
    while (pos_ < text_.size() && n < max_digits &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_++] - '0');
      ++n;
    }
    return value;
  }

  ParsedAtom read_bracket_atom() {
    const std::size_t open = pos_++;
    ParsedAtom out;
    out.bracket = true;
    out.offset = open;
    auto peek = [&]() -> char { return pos_ < text_.size() ? text_[pos_] : '\0'; };

    if (std::isdigit(static_cast<unsigned char>(peek()))) out.atom.isotope = read_int();

    const std::size_t sym_at = pos_;
    const char c = peek();
    if (c == '*') {
      out.atom.element = std::string(kWildcard);
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      // Aromatic bracket symbols: b c n o p s, plus two-letter se and as.
      if (text_.substr(pos_, 2) == "se" || text_.substr(pos_, 2) == "as") {
        throw ParseError("unknown element '" + std::string(text_.substr(pos_, 2)) + "'", sym_at);
      }
      if (std::string_view("bcnops").find(c) == std::string_view::npos)
        throw ParseError(std::string("unknown aromatic element '") + c + "'", sym_at);
      out.atom.element = std::string(1, static_cast<char>(std::toupper(c)));
      out.atom.aromatic = true;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string symbol(1, c);
      ++pos_;
      if (std::islower(static_cast<unsigned char>(peek()))) {
        std::string two = symbol + peek();
        if (find_element(two)) {
          symbol = two;
          ++pos_;
        }
      }
      if (!find_element(symbol)) throw ParseError("unknown element '" + symbol + "'", sym_at);
      out.atom.element = symbol;
    } else {
      throw ParseError("missing element symbol in bracket atom", sym_at);
    }

    // Chirality is parsed and ignored: @, @@, @TH1, @SP2, @OH12 ...
    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') {
        ++pos_;
      } else if (std::isupper(static_cast<unsigned char>(peek()))) {
        pos_ += 2;
        read_int(2);
      }
    }

    if (peek() == 'H') {
      ++pos_;
      out.atom.implicit_h = std::isdigit(static_cast<unsigned char>(peek())) ? read_int(1) : 1;
    }

    if (peek() == '+' || peek() == '-') {
      const int sign = peek() == '+' ? 1 : -1;
      const char symbol = peek();
      ++pos_;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = read_int(2);
      } else {
        while (peek() == symbol) {
          ++magnitude;
          ++pos_;
        }
      }
      out.atom.formal_charge = sign * magnitude;
    }

    if (peek() == ':') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError("atom class must be numeric", pos_);
      read_int();
    }

    if (peek() != ']') throw ParseError("unterminated bracket atom", open);
    ++pos_;
    if (out.atom.is_wildcard()) out.atom.implicit_h = 0;
    return out;
  }

  void add_atom(ParsedAtom parsed) {
    const std::size_t index = graph_.atoms.size();
    graph_.atoms.push_back(std::move(parsed.atom));
    bracket_.push_back(parsed.bracket);
    offsets_.push_back(parsed.offset);
    if (prev_) {
      const BondOrder order = pending_bond_ ? *pending_bond_ : default_order(*prev_, index);
      graph_.bonds.push_back({*prev_, index, order});
    }
    pending_bond_.reset();
    prev_ = index;
  }

  BondOrder default_order(std::size_t a, std::size_t b) const {
    return graph_.atoms[a].aromatic && graph_.atoms[b].aromatic ? BondOrder::kAromatic
                                                                : BondOrder::kSingle;
  }

  void ring_closure(std::pair<int, std::size_t> ring) {
    const auto [number, at] = ring;
    if (!prev_) throw ParseError("ring closure without a preceding atom", at);
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_.emplace(number, RingOpening{*prev_, pending_bond_, at});
      pending_bond_.reset();
      return;
    }
    const RingOpening open = it->second;
    rings_.erase(it);
    if (open.atom == *prev_) throw ParseError("ring closure bonds an atom to itself", at);
    if (graph_.find_bond(open.atom, *prev_)) throw ParseError("duplicate bond from ring closure", at);
    if (open.order && pending_bond_ && *open.order != *pending_bond_)
      throw ParseError("conflicting ring-closure bond orders", at);
    BondOrder order = default_order(open.atom, *prev_);
    if (open.order) order = *open.order;
    if (pending_bond_) order = *pending_bond_;
    graph_.bonds.push_back({open.atom, *prev_, order});
    pending_bond_.reset();
  }

  void assign_implicit_hydrogens() {
    std::vector<double> used(graph_.atoms.size(), 0.0);
    for (const auto& b : graph_.bonds) {
      const double v = b.order == BondOrder::kAromatic ? 1.0 : bond_valence(b.order);
      used[b.a] += v;
      used[b.b] += v;
    }
    for (std::size_t i = 0; i < graph_.atoms.size(); ++i) {
      Atom& atom = graph_.atoms[i];
      if (bracket_[i] || atom.is_wildcard()) continue;
      const ElementInfo* info = find_element(atom.element);
      const int bond_sum = static_cast<int>(used[i]) + (atom.aromatic ? 1 : 0);
      atom.implicit_h = 0;
      bool fitted = false;
      for (int v : info->valences) {
        if (v >= bond_sum) {
          atom.implicit_h = v - bond_sum;
          fitted = true;
          break;
        }
      }
      // Aromatic heteroatoms such as furan o donate a lone pair and end up
      // above their valence under this count; they simply get no hydrogen.
      if (!fitted && !atom.aromatic)
        throw ParseError("valence violation on " + atom.element, offsets_[i]);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  MolGraph graph_;
  std::vector<bool> bracket_;
  std::vector<std::size_t> offsets_;
  std::optional<std::size_t> prev_;
  std::optional<BondOrder> pending_bond_;
  std::size_t pending_offset_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> branches_;  // (atom, offset of '(')
  std::map<int, RingOpening> rings_;
};

}  // namespace

MolGraph parse_smiles(std::string_view text) { return SmilesParser(text).run(); }

}  // namespace flampred
