#pragma once

#include <memory>
#include <string>
#include <vector>

#include "apm/projections/basis.hpp"
#include "apm/structure/analysis.hpp"

namespace apm {

constexpr std::size_t kDefaultTruncation = 1024;

struct InstanceCatalogEntry {
  std::string id;
  std::string description;
  std::vector<GeneratorDesc> generators;
  std::string default_start = "e1";
  std::string anchor;
  std::vector<Verdict> expected_verdicts;  // sorted as analyze() reports them
};

/// The built-in registry, sorted by id.
const std::vector<InstanceCatalogEntry>& catalog();

/// Throws NotFound for an unknown id.
const InstanceCatalogEntry& find_entry(const std::string& id);
const InstanceCatalogEntry& find_entry(const std::vector<InstanceCatalogEntry>& entries, const std::string& id);

// Parametrized families.
InstanceCatalogEntry remark_harmonic_entry();
InstanceCatalogEntry geometric_pair_entry(double alpha);
InstanceCatalogEntry general_pair_entry(double alpha1, double alpha2, double c_ratio);
InstanceCatalogEntry signed_pair_entry();

/// Generators evaluated at n, orthonormalized at that truncation.
std::shared_ptr<const Basis> build_basis(const std::vector<GeneratorDesc>& generators, std::size_t n);
std::shared_ptr<const Basis> build_basis(const InstanceCatalogEntry& entry, std::size_t n);

}  // namespace apm
