// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "flampred/molecule.hpp"

namespace flampred {

// Slack added to the sum of covalent radii when inferring bonds from
// coordinates.
inline constexpr double kBondSlack = 0.45;

// Reads ATOM/HETATM and CONECT records (PDB v3.3 fixed columns).
//
// The element comes from columns 77-78, falling back to the atom name in
// columns 13-16. CONECT records, when present, are the only source of bonds.
// Without them, atoms closer than the sum of their covalent radii plus
// kBondSlack are bonded. Every bond is single. Explicit hydrogens are folded
// into their heavy neighbor's implicit_h.
//
// Throws ParseError with a 1-based line number.
MolGraph parse_pdb(std::string_view text);

}  // namespace flampred
