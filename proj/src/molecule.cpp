// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/molecule.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>

#include "flampred/error.hpp"
#include "flampred/random.hpp"

namespace flampred {
namespace {

constexpr std::array<int, 0> kNone{};
constexpr std::array<int, 1> kV1{1};
constexpr std::array<int, 1> kV2{2};
constexpr std::array<int, 1> kV3{3};
constexpr std::array<int, 1> kV4{4};
constexpr std::array<int, 2> kV35{3, 5};
constexpr std::array<int, 3> kV246{2, 4, 6};

// Weights: IUPAC abridged standard values. Radii: Cordero et al. (2008).
constexpr std::array<ElementInfo, 20> kElements{{
    {"*", 0, 0.0, 0.0, kNone},
    {"H", 1, 1.008, 0.31, kV1},
    {"B", 5, 10.81, 0.84, kV3},
    {"C", 6, 12.011, 0.76, kV4},
    {"N", 7, 14.007, 0.71, kV35},
    {"O", 8, 15.999, 0.66, kV2},
    {"F", 9, 18.998, 0.57, kV1},
    {"Na", 11, 22.990, 1.66, kNone},
    {"Mg", 12, 24.305, 1.41, kNone},
    {"Al", 13, 26.982, 1.21, kNone},
    {"Si", 14, 28.085, 1.11, kV4},
    {"P", 15, 30.974, 1.07, kV35},
    {"S", 16, 32.06, 1.05, kV246},
    {"Cl", 17, 35.45, 1.02, kV1},
    {"K", 19, 39.098, 2.03, kNone},
    {"Ca", 20, 40.078, 1.76, kNone},
    {"Zn", 30, 65.38, 1.22, kNone},
    {"Br", 35, 79.904, 1.20, kV1},
    {"Sn", 50, 118.71, 1.39, kNone},
    {"I", 53, 126.90, 1.39, kV1},
}};

}  // namespace

const ElementInfo* find_element(std::string_view symbol) {
  for (const auto& e : kElements)
    if (e.symbol == symbol) return &e;
  return nullptr;
}

double bond_valence(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle: return 1.0;
    case BondOrder::kDouble: return 2.0;
    case BondOrder::kTriple: return 3.0;
    case BondOrder::kAromatic: return 1.5;
  }
  return 0.0;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> MolGraph::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(atoms.size());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    adj[bonds[i].a].emplace_back(bonds[i].b, i);
    adj[bonds[i].b].emplace_back(bonds[i].a, i);
  }
  return adj;
}

std::optional<std::size_t> MolGraph::find_bond(std::size_t a, std::size_t b) const {
  for (std::size_t i = 0; i < bonds.size(); ++i)
    if ((bonds[i].a == a && bonds[i].b == b) || (bonds[i].a == b && bonds[i].b == a)) return i;
  return std::nullopt;
}

std::size_t MolGraph::component_count() const {
  std::vector<std::size_t> parent(atoms.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = atoms.size();
  for (const auto& b : bonds) {
    const std::size_t ra = root(b.a), rb = root(b.b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

std::size_t MolGraph::cycle_rank() const {
  return bonds.size() + component_count() - atoms.size();
}

namespace {

// Copies the atoms flagged in `keep`, remapping bond endpoints.
MolGraph subgraph(const MolGraph& graph, const std::vector<bool>& keep) {
  MolGraph out;
  out.source = graph.source;
  out.stripped_wildcards = graph.stripped_wildcards;
  std::vector<std::size_t> remap(graph.atoms.size(), SIZE_MAX);
  for (std::size_t i = 0; i < graph.atoms.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = out.atoms.size();
    out.atoms.push_back(graph.atoms[i]);
  }
  for (const auto& b : graph.bonds)
    if (keep[b.a] && keep[b.b]) out.bonds.push_back({remap[b.a], remap[b.b], b.order});
  return out;
}

}  // namespace

StripResult strip_wildcards(const MolGraph& graph) {
  std::vector<bool> keep(graph.atoms.size());
  int removed = 0;
  for (std::size_t i = 0; i < graph.atoms.size(); ++i) {
    keep[i] = !graph.atoms[i].is_wildcard();
    removed += keep[i] ? 0 : 1;
  }
  StripResult result{subgraph(graph, keep), removed};
  result.graph.stripped_wildcards = graph.stripped_wildcards + removed;
  return result;
}

double molecular_weight(const MolGraph& graph) {
  double total = 0.0;
  for (const auto& atom : graph.atoms) {
    if (atom.is_wildcard()) throw DomainError("molecular weight undefined with wildcard atoms");
    const ElementInfo* info = find_element(atom.element);
    if (!info) throw DomainError("unknown element '" + atom.element + "'");
    total += info->weight + atom.implicit_h * kHydrogenWeight;
  }
  return total;
}

MolGraph fold_hydrogens(const MolGraph& graph) {
  const auto adj = graph.adjacency();
  MolGraph working = graph;
  std::vector<bool> keep(graph.atoms.size(), true);
  for (std::size_t i = 0; i < graph.atoms.size(); ++i) {
    if (!graph.atoms[i].is_hydrogen() || adj[i].size() != 1) continue;
    const std::size_t heavy = adj[i][0].first;
    if (graph.atoms[heavy].is_hydrogen()) continue;
    keep[i] = false;
    working.atoms[heavy].implicit_h += 1 + graph.atoms[i].implicit_h;
  }
  return subgraph(working, keep);
}

std::uint64_t graph_fingerprint(const MolGraph& graph) {
  const auto adj = graph.adjacency();
  const std::size_t n = graph.atoms.size();
  std::vector<std::uint64_t> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = graph.atoms[i];
    std::uint64_t h = 0;
    for (char c : a.element) h = mix64(h ^ static_cast<unsigned char>(c));
    h = mix64(h ^ static_cast<std::uint64_t>(a.formal_charge + 64));
    h = mix64(h ^ (a.aromatic ? 1u : 0u));
    h = mix64(h ^ static_cast<std::uint64_t>(a.implicit_h));
    label[i] = h;
  }
  for (std::size_t round = 0; round < n + 1; ++round) {
    std::vector<std::uint64_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint64_t> nb;
      for (auto [j, bi] : adj[i])
        nb.push_back(mix64(label[j] ^ static_cast<std::uint64_t>(graph.bonds[bi].order)));
      std::sort(nb.begin(), nb.end());
      std::uint64_t h = label[i];
      for (std::uint64_t v : nb) h = mix64(h + v);
      next[i] = h;
    }
    label = std::move(next);
  }
  std::sort(label.begin(), label.end());
  std::uint64_t h = mix64(n);
  for (std::uint64_t v : label) h = mix64(h + v);
  return mix64(h ^ graph.bonds.size());
}

}  // namespace flampred
