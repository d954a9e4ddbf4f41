#ifndef PATER_REGISTRY_HPP
#define PATER_REGISTRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "pater/loaders.hpp"

namespace pater {

/// One registry row: where a dataset lives, how to parse it, and the
/// expected case count / imbalance ratio used for verification.
struct DatasetSpec {
  std::string name;
  std::string path;                 // relative to the registry root
  std::string format;               // "libsvm" or "delimited"
  DelimitedOptions delimited;       // used when format == "delimited"
  LibsvmOptions libsvm;             // used when format == "libsvm"
  std::optional<std::size_t> expected_cases;
  std::optional<double> expected_ratio;
  std::string notes;
};

struct Registry {
  std::string root;  // base directory for relative paths
  std::vector<DatasetSpec> datasets;

  const DatasetSpec* find(const std::string& name) const;
};

/// Parses a JSON registry file. The data root resolves in this order:
/// explicit "root" in the file, the PATER_DATA_DIR environment variable,
/// then the registry file's own directory.
Registry load_registry(const std::string& path);

/// Loads and verifies one registry entry: the case count must match exactly
/// and the imbalance ratio to within 0.01 when expectations are present.
Dataset load_registry_dataset(const Registry& registry, const DatasetSpec& spec);

}  // namespace pater

#endif  // PATER_REGISTRY_HPP
