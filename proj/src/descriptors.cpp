// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "flampred/error.hpp"
#include "flampred/smiles.hpp"

namespace flampred {

std::vector<std::string> DescriptorCatalog::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.name);
  return out;
}

const DescriptorCatalog& chem1_catalog() {
  static const DescriptorCatalog catalog{
      "CHEM-1",
      {
          {"molecular_weight", "sum of standard atomic weights incl. implicit H (g/mol)"},
          {"heavy_atom_count", "number of non-hydrogen atoms"},
          {"carbon_count", "number of C atoms"},
          {"nitrogen_count", "number of N atoms"},
          {"oxygen_count", "number of O atoms"},
          {"sulfur_count", "number of S atoms"},
          {"fluorine_count", "number of F atoms"},
          {"chlorine_count", "number of Cl atoms"},
          {"halogen_count", "number of F, Cl, Br and I atoms"},
          {"hydrogen_count", "implicit plus explicit hydrogens"},
          {"heteroatom_fraction", "non-carbon heavy atoms / heavy atoms (0 if no heavy atoms)"},
          {"single_bond_count", "single bonds between heavy atoms"},
          {"double_bond_count", "double bonds between heavy atoms"},
          {"triple_bond_count", "triple bonds between heavy atoms"},
          {"aromatic_bond_count", "aromatic bonds between heavy atoms"},
          {"aromatic_atom_count", "atoms flagged aromatic"},
          {"ring_count", "cycle rank of the heavy-atom graph"},
          {"rotatable_bond_count", "acyclic single bonds whose endpoints both have heavy degree >= 2"},
          {"hbd_count", "N or O atoms carrying at least one hydrogen"},
          {"hba_count", "number of N plus O atoms"},
          {"fraction_csp3", "carbons without double, triple or aromatic bonds / carbons (0 if none)"},
          {"branching_atom_count", "heavy atoms with heavy degree >= 3"},
          {"max_degree", "largest heavy-atom degree"},
          {"mean_degree", "mean heavy-atom degree (0 if no heavy atoms)"},
          {"mean_atomic_mass", "molecular weight / (heavy atoms + hydrogens)"},
          {"oc_ratio", "O count / C count (0 if no C)"},
          {"hc_ratio", "H count / C count (0 if no C)"},
          {"wiener_index", "sum of shortest-path distances over heavy-atom pairs within a component"},
          {"zagreb_m1", "sum of squared heavy-atom degrees"},
          {"zagreb_m2", "sum over heavy-atom bonds of endpoint degree products"},
          {"wildcard_count", "attachment points removed before computation"},
      }};
  return catalog;
}

const DescriptorCatalog& catalog_by_id(std::string_view catalog_id) {
  if (catalog_id == chem1_catalog().catalog_id) return chem1_catalog();
  throw ConfigError("unknown descriptor catalog '" + std::string(catalog_id) + "'");
}

namespace {

// Bond indices that lie on a cycle: bond (u,v) is cyclic iff u and v stay
// connected once it is removed.
std::vector<bool> cyclic_bonds(const MolGraph& g,
                               const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj) {
  std::vector<bool> cyclic(g.bonds.size(), false);
  std::vector<char> seen(g.atoms.size());
  for (std::size_t bi = 0; bi < g.bonds.size(); ++bi) {
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<std::size_t> queue{g.bonds[bi].a};
    seen[g.bonds[bi].a] = 1;
    while (!queue.empty() && !cyclic[bi]) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (auto [v, e] : adj[u]) {
        if (e == bi || seen[v]) continue;
        if (v == g.bonds[bi].b) {
          cyclic[bi] = true;
          break;
        }
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return cyclic;
}

double wiener_index(const MolGraph& g,
                    const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj) {
  double total = 0;
  std::vector<long> dist(g.atoms.size());
  for (std::size_t s = 0; s < g.atoms.size(); ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (auto [v, e] : adj[u]) {
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
    for (std::size_t t = s + 1; t < g.atoms.size(); ++t)
      if (dist[t] > 0) total += static_cast<double>(dist[t]);
  }
  return total;
}

}  // namespace

FeatureVector compute_descriptors(const MolGraph& input, const DescriptorCatalog& catalog) {
  for (const auto& a : input.atoms)
    if (a.is_wildcard()) throw DomainError("descriptors require a wildcard-free graph");
  if (catalog.catalog_id != chem1_catalog().catalog_id)
    throw ConfigError("no descriptor implementation for catalog '" + catalog.catalog_id + "'");

  const MolGraph folded = fold_hydrogens(input);
  const double mw = molecular_weight(folded);

  // Heavy-atom view: remaining explicit hydrogens (H2, bridging H) count
  // only toward hydrogen totals.
  MolGraph heavy;
  double hydrogens = 0;
  {
    std::vector<std::size_t> remap(folded.atoms.size(), SIZE_MAX);
    for (std::size_t i = 0; i < folded.atoms.size(); ++i) {
      const Atom& a = folded.atoms[i];
      hydrogens += a.implicit_h;
      if (a.is_hydrogen()) {
        hydrogens += 1;
        continue;
      }
      remap[i] = heavy.atoms.size();
      heavy.atoms.push_back(a);
    }
    for (const auto& b : folded.bonds)
      if (remap[b.a] != SIZE_MAX && remap[b.b] != SIZE_MAX)
        heavy.bonds.push_back({remap[b.a], remap[b.b], b.order});
  }

  const auto adj = heavy.adjacency();
  const std::size_t n_heavy = heavy.atoms.size();
  std::map<std::string, double> count;
  for (const auto& a : heavy.atoms) count[a.element] += 1;
  auto element_count = [&](const char* e) {
    auto it = count.find(e);
    return it == count.end() ? 0.0 : it->second;
  };
  const double carbons = element_count("C");

  double single = 0, dbl = 0, triple = 0, arom_bonds = 0;
  for (const auto& b : heavy.bonds) {
    switch (b.order) {
      case BondOrder::kSingle: single += 1; break;
      case BondOrder::kDouble: dbl += 1; break;
      case BondOrder::kTriple: triple += 1; break;
      case BondOrder::kAromatic: arom_bonds += 1; break;
    }
  }

  std::vector<double> degree(n_heavy);
  for (std::size_t i = 0; i < n_heavy; ++i) degree[i] = static_cast<double>(adj[i].size());

  const auto cyclic = cyclic_bonds(heavy, adj);
  double rotatable = 0;
  for (std::size_t bi = 0; bi < heavy.bonds.size(); ++bi) {
    const Bond& b = heavy.bonds[bi];
    if (b.order == BondOrder::kSingle && !cyclic[bi] && degree[b.a] >= 2 && degree[b.b] >= 2)
      rotatable += 1;
  }

  double aromatic_atoms = 0, hbd = 0, csp3 = 0, branching = 0, max_degree = 0, zagreb1 = 0;
  for (std::size_t i = 0; i < n_heavy; ++i) {
    const Atom& a = heavy.atoms[i];
    aromatic_atoms += a.aromatic ? 1 : 0;
    if ((a.element == "N" || a.element == "O") && a.implicit_h >= 1) hbd += 1;
    if (a.element == "C" && !a.aromatic) {
      bool unsaturated = false;
      for (auto [j, e] : adj[i]) unsaturated |= heavy.bonds[e].order != BondOrder::kSingle;
      if (!unsaturated) csp3 += 1;
    }
    if (degree[i] >= 3) branching += 1;
    max_degree = std::max(max_degree, degree[i]);
    zagreb1 += degree[i] * degree[i];
  }
  double zagreb2 = 0;
  for (const auto& b : heavy.bonds) zagreb2 += degree[b.a] * degree[b.b];
  double degree_sum = 0;
  for (double d : degree) degree_sum += d;

  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  const double heavy_n = static_cast<double>(n_heavy);

  std::map<std::string_view, double> value{
      {"molecular_weight", mw},
      {"heavy_atom_count", heavy_n},
      {"carbon_count", carbons},
      {"nitrogen_count", element_count("N")},
      {"oxygen_count", element_count("O")},
      {"sulfur_count", element_count("S")},
      {"fluorine_count", element_count("F")},
      {"chlorine_count", element_count("Cl")},
      {"halogen_count",
       element_count("F") + element_count("Cl") + element_count("Br") + element_count("I")},
      {"hydrogen_count", hydrogens},
      {"heteroatom_fraction", ratio(heavy_n - carbons, heavy_n)},
      {"single_bond_count", single},
      {"double_bond_count", dbl},
      {"triple_bond_count", triple},
      {"aromatic_bond_count", arom_bonds},
      {"aromatic_atom_count", aromatic_atoms},
      {"ring_count", static_cast<double>(heavy.cycle_rank())},
      {"rotatable_bond_count", rotatable},
      {"hbd_count", hbd},
      {"hba_count", element_count("N") + element_count("O")},
      {"fraction_csp3", ratio(csp3, carbons)},
      {"branching_atom_count", branching},
      {"max_degree", max_degree},
      {"mean_degree", ratio(degree_sum, heavy_n)},
      {"mean_atomic_mass", ratio(mw, heavy_n + hydrogens)},
      {"oc_ratio", ratio(element_count("O"), carbons)},
      {"hc_ratio", ratio(hydrogens, carbons)},
      {"wiener_index", wiener_index(heavy, adj)},
      {"zagreb_m1", zagreb1},
      {"zagreb_m2", zagreb2},
      {"wildcard_count", static_cast<double>(input.stripped_wildcards)},
  };

  FeatureVector out;
  out.catalog_id = catalog.catalog_id;
  out.values.reserve(catalog.size());
  for (const auto& entry : catalog.entries) out.values.push_back(value.at(entry.name));
  return out;
}

FeatureTable descriptor_table(const std::vector<MolGraph>& graphs,
                              const DescriptorCatalog& catalog) {
  FeatureTable table;
  table.catalog_id = catalog.catalog_id;
  table.column_names = catalog.names();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    try {
      table.rows.push_back(compute_descriptors(graphs[i], catalog).values);
    } catch (const Error& e) {
      throw DomainError("descriptor computation failed for graph " + std::to_string(i) + ": " +
                        e.what());
    }
  }
  return table;
}

FeatureVector descriptors_from_smiles(std::string_view smiles, const DescriptorCatalog& catalog) {
  return compute_descriptors(strip_wildcards(parse_smiles(smiles)).graph, catalog);
}

}  // namespace flampred
