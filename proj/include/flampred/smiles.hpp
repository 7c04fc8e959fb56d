// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "flampred/molecule.hpp"

namespace flampred {

// Parses a SMILES string into a molecular graph.
//
// Supported: organic-subset atoms (B C N O P S F Cl Br I) and their aromatic
// lowercase forms, bracket atoms with isotope, explicit H count, charge and
// atom class, bonds - = # : / \, branches, ring closures (digits and %nn),
// the wildcard *, and '.' separated components. Stereo marks (/ \ @) are
// accepted and discarded. Aromaticity is taken as written.
//
// Implicit hydrogens of organic-subset atoms fill the lowest standard valence
// that is at least the bond-order sum (aromatic bonds count 1, and an
// aromatic atom adds 1). Wildcards and bracket atoms never get implicit H.
//
// Throws ParseError with the 0-based character offset of the fault.
MolGraph parse_smiles(std::string_view text);

}  // namespace flampred
