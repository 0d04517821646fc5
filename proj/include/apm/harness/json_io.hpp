#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "apm/harness/catalog.hpp"
#include "apm/structure/analysis.hpp"

namespace apm {

using Json = nlohmann::ordered_json;

/// {"family": ..., "parameters": {...}, "normalization": x}
Json descriptor_to_json(const GeneratorDesc& desc);
/// Strict inverse of descriptor_to_json; unknown keys are ConfigErrors.
GeneratorDesc descriptor_from_json(const Json& j);

Json index_set_to_json(const IndexSet& s);
Json verdicts_to_json(const std::vector<Verdict>& verdicts);

/// {verdicts, overlaps, certificates, partition, vectors}
Json analysis_to_json(const AnalysisReport& report);

Json catalog_entry_to_json(const InstanceCatalogEntry& entry);
InstanceCatalogEntry catalog_entry_from_json(const Json& j);
/// A catalog file is {"schema_version": 1, "entries": [...]}.
std::vector<InstanceCatalogEntry> load_catalog_file(const std::string& path);

/// Rejects keys outside `allowed` with a ConfigError naming `where`.
void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace apm
