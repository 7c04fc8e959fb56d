// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flampred/dataset.hpp"
#include "flampred/molecule.hpp"

namespace flampred {

struct DescriptorEntry {
  std::string name;
  std::string definition;
};

// Ordered, named descriptor set. Column order is fixed per catalog id.
struct DescriptorCatalog {
  std::string catalog_id;
  std::vector<DescriptorEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<std::string> names() const;
};

// The default topological/compositional catalog.
const DescriptorCatalog& chem1_catalog();

// Throws ConfigError for unknown ids.
const DescriptorCatalog& catalog_by_id(std::string_view catalog_id);

struct FeatureVector {
  std::vector<double> values;
  std::string catalog_id;
};

// Graph must be wildcard-free (see strip_wildcards); throws DomainError
// otherwise. Explicit hydrogen atoms are folded before counting.
FeatureVector compute_descriptors(const MolGraph& graph, const DescriptorCatalog& catalog);

// One row per graph. Failures are rethrown as DomainError naming the index.
FeatureTable descriptor_table(const std::vector<MolGraph>& graphs,
                              const DescriptorCatalog& catalog);

// SMILES -> strip wildcards -> descriptors, the path used for repeat units.
FeatureVector descriptors_from_smiles(std::string_view smiles, const DescriptorCatalog& catalog);

}  // namespace flampred
