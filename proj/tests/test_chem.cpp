// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

#include "flampred/dataset.hpp"
#include "flampred/error.hpp"
#include "flampred/molecule.hpp"
#include "flampred/pdb.hpp"
#include "flampred/pipeline.hpp"
#include "flampred/smiles.hpp"
#include "test_util.hpp"

using namespace flampred;
using flampred::testing::kDataDir;
using flampred::testing::read_file;

namespace {

std::map<std::string, int> formula(const MolGraph& g) {
  std::map<std::string, int> f;
  for (const auto& a : g.atoms) {
    ++f[a.element];
    f["H"] += a.implicit_h;
  }
  if (f["H"] == 0) f.erase("H");
  return f;
}

// Hand-written atomic weights, kept separate from the library's table.
double formula_weight(const std::map<std::string, int>& f) {
  static const std::map<std::string, double> w = {{"C", 12.011}, {"H", 1.008}, {"N", 14.007},
                                                   {"O", 15.999}, {"F", 18.998}, {"S", 32.06},
                                                   {"Cl", 35.45}};
  double total = 0;
  for (const auto& [el, n] : f) total += w.at(el) * n;
  return total;
}

int bond_sum(const MolGraph& g, std::size_t i) {
  int s = 0;
  for (const auto& b : g.bonds)
    if (b.a == i || b.b == i) s += static_cast<int>(b.order == BondOrder::kAromatic ? 1 : static_cast<int>(b.order));
  return s;
}

MolGraph permuted(const MolGraph& g, std::mt19937_64& gen) {
  std::vector<std::size_t> perm(g.atoms.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  MolGraph out = g;
  for (std::size_t i = 0; i < perm.size(); ++i) out.atoms[perm[i]] = g.atoms[i];
  for (auto& b : out.bonds) {
    b.a = perm[b.a];
    b.b = perm[b.b];
    if (gen() & 1) std::swap(b.a, b.b);
  }
  std::shuffle(out.bonds.begin(), out.bonds.end(), gen);
  return out;
}

}  // namespace

TEST(Smiles, StyreneRepeatUnit) {
  MolGraph g = parse_smiles("*C(c1ccccc1)C*");
  int carbons = 0, wild = 0;
  for (const auto& a : g.atoms) {
    carbons += a.element == "C";
    wild += a.is_wildcard();
  }
  EXPECT_EQ(carbons, 8);
  EXPECT_EQ(wild, 2);
  StripResult s = strip_wildcards(g);
  EXPECT_EQ(s.wildcard_count, 2);
  EXPECT_EQ(s.graph.cycle_rank(), 1u);
  EXPECT_EQ(formula(s.graph), (std::map<std::string, int>{{"C", 8}, {"H", 8}}));
  EXPECT_NEAR(molecular_weight(s.graph), 104.15, 0.01);
}

TEST(Smiles, Methane) {
  MolGraph g = parse_smiles("C");
  ASSERT_EQ(g.atoms.size(), 1u);
  EXPECT_EQ(g.atoms[0].implicit_h, 4);
}

TEST(Smiles, Cyclopropane) {
  MolGraph g = parse_smiles("C1CC1");
  EXPECT_EQ(g.cycle_rank(), 1u);
  EXPECT_EQ(g.bonds.size(), 3u);
  for (const auto& b : g.bonds) EXPECT_EQ(b.order, BondOrder::kSingle);
  for (const auto& a : g.atoms) EXPECT_EQ(a.implicit_h, 2);
}

TEST(Smiles, UnmatchedRingClosureReportsOffset) {
  try {
    parse_smiles("C1CC");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 1u);
    EXPECT_NE(std::string(e.what()).find("ring closure"), std::string::npos);
  }
}

TEST(Smiles, ErrorOffsets) {
  auto offset_of = [](const std::string& s) -> long {
    try {
      parse_smiles(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  EXPECT_EQ(offset_of("C(C"), 1);
  EXPECT_EQ(offset_of("CC)"), 2);
  EXPECT_EQ(offset_of("CXC"), 1);
  EXPECT_EQ(offset_of("C[Xx]"), 2);
  EXPECT_EQ(offset_of("CC(C)(C)(C)C"), 1);
  EXPECT_EQ(offset_of(""), 0);
  EXPECT_EQ(offset_of("C="), 1);
}

TEST(Smiles, CycleRanks) {
  EXPECT_EQ(parse_smiles("c1ccccc1").cycle_rank(), 1u);
  EXPECT_EQ(parse_smiles("C1CC1.C1CC1").cycle_rank(), 2u);
  EXPECT_EQ(parse_smiles("C1CC1.C1CC1").component_count(), 2u);
  EXPECT_EQ(parse_smiles("C12CC1CC2").cycle_rank(), 2u);
}

TEST(Smiles, BracketAtoms) {
  MolGraph g = parse_smiles("[13CH4]");
  EXPECT_EQ(g.atoms[0].isotope, 13);
  EXPECT_EQ(g.atoms[0].implicit_h, 4);
  MolGraph n = parse_smiles("C[N+](C)(C)C");
  EXPECT_EQ(n.atoms[1].formal_charge, 1);
  EXPECT_EQ(n.atoms[1].implicit_h, 0);
  MolGraph o = parse_smiles("[O-]C");
  EXPECT_EQ(o.atoms[0].formal_charge, -1);
  MolGraph cl = parse_smiles("[Cl-:3]");
  EXPECT_EQ(cl.atoms[0].element, "Cl");
}

TEST(Smiles, BondsAndPercentRings) {
  MolGraph g = parse_smiles("C=CC#N");
  ASSERT_EQ(g.bonds.size(), 3u);
  EXPECT_EQ(g.bonds[0].order, BondOrder::kDouble);
  EXPECT_EQ(g.bonds[1].order, BondOrder::kSingle);
  EXPECT_EQ(g.bonds[2].order, BondOrder::kTriple);
  EXPECT_EQ(g.atoms[0].implicit_h, 2);
  EXPECT_EQ(g.atoms[1].implicit_h, 1);
  EXPECT_EQ(g.atoms[2].implicit_h, 0);
  EXPECT_EQ(g.atoms[3].implicit_h, 0);
  MolGraph r = parse_smiles("C%12CC%12");
  EXPECT_EQ(r.cycle_rank(), 1u);
}

TEST(Smiles, StereoTokensIgnored) {
  MolGraph a = parse_smiles("F/C=C/F");
  MolGraph b = parse_smiles("FC=CF");
  EXPECT_EQ(graph_fingerprint(a), graph_fingerprint(b));
  MolGraph c = parse_smiles("N[C@@H](C)C(=O)O");
  EXPECT_EQ(c.atoms[1].implicit_h, 1);
}

TEST(Smiles, ImplicitHydrogenFillsStandardValence) {
  // Neutral, non-aromatic organic atoms: bond-order sum + implicit H equals
  // one of the element's standard valences.
  static const std::map<std::string, std::vector<int>> valences = {
      {"B", {3}}, {"C", {4}}, {"N", {3, 5}}, {"O", {2}}, {"P", {3, 5}},
      {"S", {2, 4, 6}}, {"F", {1}}, {"Cl", {1}}, {"Br", {1}}, {"I", {1}}};
  auto units = load_repeat_units(kDataDir / "repeat_units.csv");
  std::vector<std::string> corpus = {"CS(=O)(=O)C", "CP(=O)(O)O", "OB(O)O", "ClC(Br)I",
                                     "C#CC=CN", "O=S(=O)=O"};
  for (const auto& u : units) corpus.push_back(u.smiles);
  for (const auto& s : corpus) {
    MolGraph g = parse_smiles(s);
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
      const Atom& a = g.atoms[i];
      if (a.is_wildcard() || a.aromatic || a.formal_charge) continue;
      const auto& v = valences.at(a.element);
      int total = bond_sum(g, i) + a.implicit_h;
      EXPECT_NE(std::find(v.begin(), v.end(), total), v.end()) << s << " atom " << i;
    }
  }
}

TEST(Smiles, FingerprintStableUnderRelabeling) {
  std::mt19937_64 gen(4);
  auto units = load_repeat_units(kDataDir / "repeat_units.csv");
  for (const auto& u : units) {
    MolGraph a = parse_smiles(u.smiles);
    MolGraph b = parse_smiles(u.smiles);
    EXPECT_EQ(graph_fingerprint(a), graph_fingerprint(b)) << u.name;
    EXPECT_EQ(graph_fingerprint(permuted(a, gen)), graph_fingerprint(a)) << u.name;
  }
  EXPECT_NE(graph_fingerprint(parse_smiles("CCO")), graph_fingerprint(parse_smiles("COC")));
  EXPECT_EQ(graph_fingerprint(parse_smiles("CCO")), graph_fingerprint(parse_smiles("OCC")));
}

TEST(StripWildcards, Polyethylene) {
  StripResult s = strip_wildcards(parse_smiles("*C*"));
  ASSERT_EQ(s.graph.atoms.size(), 1u);
  EXPECT_EQ(s.graph.atoms[0].implicit_h, 2);
  EXPECT_EQ(s.wildcard_count, 2);
  EXPECT_NEAR(molecular_weight(s.graph), 14.03, 0.01);
}

TEST(StripWildcards, NoWildcardsIsIdentity) {
  MolGraph g = parse_smiles("CCO");
  StripResult s = strip_wildcards(g);
  EXPECT_EQ(s.wildcard_count, 0);
  EXPECT_EQ(graph_fingerprint(s.graph), graph_fingerprint(g));
  EXPECT_EQ(s.graph.atoms.size(), 3u);
  EXPECT_EQ(s.graph.bonds.size(), 2u);
}

TEST(StripWildcards, OnlyWildcards) {
  StripResult s = strip_wildcards(parse_smiles("*[*]"));
  EXPECT_TRUE(s.graph.atoms.empty());
  EXPECT_TRUE(s.graph.bonds.empty());
  EXPECT_EQ(s.wildcard_count, 2);
  EXPECT_EQ(molecular_weight(s.graph), 0.0);
}

TEST(MolecularWeight, WildcardIsDomainError) {
  EXPECT_THROW(molecular_weight(parse_smiles("*C*")), DomainError);
}

TEST(MolecularWeight, AssetsMatchTableOneAndFormulaOracle) {
  auto records = load_fi_table(kDataDir / "table1.csv");
  auto units = load_repeat_units(kDataDir / "repeat_units.csv");
  int checked = 0;
  for (const auto& r : records) {
    auto it = std::find_if(units.begin(), units.end(), [&](auto& u) { return u.name == r.name; });
    ASSERT_NE(it, units.end()) << r.name;
    MolGraph g = strip_wildcards(parse_smiles(it->smiles)).graph;
    double mw = molecular_weight(g);
    EXPECT_NEAR(mw, r.mol_wt, 0.05) << r.name;
    EXPECT_NEAR(mw, formula_weight(formula(g)), 1e-9) << r.name;
    ++checked;
  }
  EXPECT_EQ(checked, 32);
}

TEST(MolecularWeight, CuratedUnitsHaveExpectedFormulas) {
  auto units = load_repeat_units(kDataDir / "repeat_units.csv");
  std::map<std::string, std::map<std::string, int>> expected = {
      {"Polycaprolactone", {{"C", 6}, {"H", 10}, {"O", 2}}},
      {"Poly(chlorotrifluoroethylene)", {{"C", 2}, {"F", 3}, {"Cl", 1}}},
      {"Nylon66", {{"C", 12}, {"H", 22}, {"N", 2}, {"O", 2}}},
      {"Poly(tetrafluoroethylene)", {{"C", 1}, {"F", 2}}},
  };
  for (const auto& [name, f] : expected) {
    auto it = std::find_if(units.begin(), units.end(), [&](auto& u) { return u.name == name; });
    ASSERT_NE(it, units.end());
    EXPECT_EQ(formula(strip_wildcards(parse_smiles(it->smiles)).graph), f) << name;
  }
}

namespace {

std::string atom_line(int serial, const std::string& name, double x, double y, double z,
                      const std::string& element) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "HETATM%5d %-4s MOL A   1    %8.3f%8.3f%8.3f  1.00  0.00          %2s",
                serial, name.c_str(), x, y, z, element.c_str());
  return buf;
}

}  // namespace

TEST(Pdb, InfersBondWithinCovalentSum) {
  std::string text = atom_line(1, "C1", 0, 0, 0, "C") + "\n" + atom_line(2, "C2", 1.54, 0, 0, "C") + "\n";
  MolGraph g = parse_pdb(text);
  EXPECT_EQ(g.atoms.size(), 2u);
  EXPECT_EQ(g.bonds.size(), 1u);
  EXPECT_EQ(g.bonds[0].order, BondOrder::kSingle);
  EXPECT_EQ(g.source, StructureSource::kPdb);
}

TEST(Pdb, NoBondBeyondCovalentSum) {
  std::string text = atom_line(1, "C1", 0, 0, 0, "C") + "\n" + atom_line(2, "C2", 3.0, 0, 0, "C") + "\n";
  EXPECT_EQ(parse_pdb(text).bonds.size(), 0u);
  // 0.76 + 0.76 + 0.45 = 1.97 is the cutoff for carbon pairs.
  std::string edge = atom_line(1, "C1", 0, 0, 0, "C") + "\n" + atom_line(2, "C2", 1.96, 0, 0, "C") + "\n";
  EXPECT_EQ(parse_pdb(edge).bonds.size(), 1u);
  std::string over = atom_line(1, "C1", 0, 0, 0, "C") + "\n" + atom_line(2, "C2", 1.98, 0, 0, "C") + "\n";
  EXPECT_EQ(parse_pdb(over).bonds.size(), 0u);
}

TEST(Pdb, ConectWinsOverDistance) {
  std::string text = atom_line(1, "C1", 0, 0, 0, "C") + "\n" + atom_line(2, "C2", 1.54, 0, 0, "C") +
                     "\n" + atom_line(3, "C3", 0.0, 1.54, 0, "C") + "\nCONECT    1    2\nEND\n";
  MolGraph g = parse_pdb(text);
  ASSERT_EQ(g.bonds.size(), 1u);
  EXPECT_TRUE(g.find_bond(0, 1).has_value());
}

TEST(Pdb, ElementFallsBackToAtomName) {
  std::string line = atom_line(1, "O1", 0, 0, 0, "");
  MolGraph g = parse_pdb(line + "\n");
  EXPECT_EQ(g.atoms[0].element, "O");
  EXPECT_EQ(g.atoms[0].implicit_h, 0);
}

TEST(Pdb, NoAtomsIsError) {
  EXPECT_THROW(parse_pdb("REMARK nothing here\nEND\n"), ParseError);
}

TEST(Pdb, MalformedCoordinateReportsLine) {
  std::string bad = atom_line(1, "C1", 0, 0, 0, "C");
  bad.replace(30, 8, "   abc  ");
  try {
    parse_pdb("REMARK x\n" + bad + "\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.unit(), ParseError::Unit::kLine);
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Pdb, EthylbenzeneAssetFoldsHydrogens) {
  MolGraph g = parse_pdb(read_file(kDataDir / "structures" / "ethylbenzene.pdb"));
  EXPECT_EQ(g.atoms.size(), 8u);
  EXPECT_EQ(g.bonds.size(), 8u);
  EXPECT_EQ(g.cycle_rank(), 1u);
  EXPECT_EQ(formula(g), (std::map<std::string, int>{{"C", 8}, {"H", 10}}));
  EXPECT_NEAR(molecular_weight(g), 106.17, 0.01);
}

TEST(Pdb, DistanceInferenceMatchesConectOnAsset) {
  std::string text = read_file(kDataDir / "structures" / "ethylbenzene.pdb");
  std::string no_conect;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end - start);
    if (line.rfind("CONECT", 0) != 0) no_conect += line + "\n";
    start = end == std::string::npos ? text.size() : end + 1;
  }
  EXPECT_EQ(graph_fingerprint(parse_pdb(no_conect)), graph_fingerprint(parse_pdb(text)));
}
