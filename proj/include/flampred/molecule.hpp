// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flampred {

struct ElementInfo {
  std::string_view symbol;
  int atomic_number;
  double weight;            // standard atomic weight, g/mol
  double covalent_radius;   // Angstrom
  std::span<const int> valences;  // ascending; empty if no default valence model
};

// Lookup by case-sensitive symbol ("Cl", not "CL"). nullptr if unknown.
// The wildcard "*" is a pseudo-element with zero weight.
const ElementInfo* find_element(std::string_view symbol);

inline constexpr double kHydrogenWeight = 1.008;
inline constexpr std::string_view kWildcard = "*";

struct Atom {
  std::string element;  // symbol, or "*" for an attachment point
  int formal_charge = 0;
  bool aromatic = false;
  int implicit_h = 0;
  std::optional<int> isotope;

  bool is_wildcard() const { return element == kWildcard; }
  bool is_hydrogen() const { return element == "H"; }
};

enum class BondOrder { kSingle = 1, kDouble = 2, kTriple = 3, kAromatic = 4 };

// Contribution to an atom's valence; aromatic bonds count 1.5.
double bond_valence(BondOrder order);

struct Bond {
  std::size_t a = 0;
  std::size_t b = 0;
  BondOrder order = BondOrder::kSingle;
};

enum class StructureSource { kSmiles, kPdb };

struct MolGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  StructureSource source = StructureSource::kSmiles;
  int stripped_wildcards = 0;  // set by strip_wildcards

  // Neighbor list per atom as (neighbor index, bond index).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;
  std::optional<std::size_t> find_bond(std::size_t a, std::size_t b) const;
  std::size_t component_count() const;
  // bonds - atoms + components
  std::size_t cycle_rank() const;
};

struct StripResult {
  MolGraph graph;
  int wildcard_count = 0;
};

// Removes wildcard atoms and their bonds. Neighbors keep their hydrogen
// counts, so open valences stay uncapped.
StripResult strip_wildcards(const MolGraph& graph);

// Sum of standard atomic weights plus implicit hydrogens. Throws DomainError
// when wildcards remain.
double molecular_weight(const MolGraph& graph);

// Removes explicit hydrogen atoms bonded to exactly one non-hydrogen atom and
// adds them to that atom's implicit_h.
MolGraph fold_hydrogens(const MolGraph& graph);

// Labelling-independent hash from iterated neighborhood refinement. Equal for
// isomorphic graphs; collisions between non-isomorphic graphs are possible
// but unlikely for small molecules.
std::uint64_t graph_fingerprint(const MolGraph& graph);

}  // namespace flampred
