#include "pater/registry.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace pater {

namespace {

using nlohmann::json;

ColumnRef parse_column_ref(const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const long long idx = j.get<long long>();
    if (idx < 0) throw ParseError("registry: column index must be non-negative");
    return ColumnRef{static_cast<std::size_t>(idx)};
  }
  return ColumnRef{j.get<std::string>()};
}

LabelMap parse_label_map(const json& j) {
  LabelMap map;
  map.entries.clear();
  for (auto it = j.begin(); it != j.end(); ++it) {
    map.entries[it.key()] = it.value().get<int>();
  }
  return map;
}

DatasetSpec parse_spec(const json& j) {
  DatasetSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.path = j.value("path", std::string{});
  spec.format = j.value("format", std::string{"libsvm"});
  if (j.contains("notes")) spec.notes = j.at("notes").get<std::string>();
  if (j.contains("expected_cases")) {
    spec.expected_cases = j.at("expected_cases").get<std::size_t>();
  }
  if (j.contains("expected_ratio")) {
    spec.expected_ratio = j.at("expected_ratio").get<double>();
  }

  if (spec.format == "delimited") {
    DelimitedOptions& opt = spec.delimited;
    if (j.contains("delimiter")) {
      const std::string d = j.at("delimiter").get<std::string>();
      if (d.size() != 1) throw ParseError("registry: delimiter must be one character");
      opt.delimiter = d[0];
    }
    opt.has_header = j.value("header", false);
    if (j.contains("missing_token")) {
      opt.missing_token = j.at("missing_token").get<std::string>();
    }
    if (j.contains("label_column")) {
      opt.label_column = parse_column_ref(j.at("label_column"));
    }
    if (j.contains("label_map")) opt.label_map = parse_label_map(j.at("label_map"));
    if (j.contains("missing_policy")) {
      const std::string policy = j.at("missing_policy").get<std::string>();
      if (policy == "drop_rows") {
        opt.policy = MissingPolicy::kDropRows;
      } else if (policy == "drop_column") {
        opt.policy = MissingPolicy::kDropColumn;
        opt.policy_column = parse_column_ref(j.at("policy_column"));
      } else {
        throw ParseError("registry: unknown missing_policy '" + policy + "'");
      }
    }
    if (j.contains("exclude_columns")) {
      for (const json& c : j.at("exclude_columns")) {
        opt.exclude_columns.push_back(parse_column_ref(c));
      }
    }
    opt.append_bias = j.value("add_bias", false);
  } else if (spec.format == "libsvm") {
    if (j.contains("label_map")) spec.libsvm.label_map = parse_label_map(j.at("label_map"));
    if (j.contains("dimension")) {
      spec.libsvm.dimension = j.at("dimension").get<std::size_t>();
    }
    spec.libsvm.append_bias = j.value("add_bias", false);
  } else {
    throw ParseError("registry: unknown format '" + spec.format + "' for dataset '" +
                     spec.name + "'");
  }
  return spec;
}

}  // namespace

const DatasetSpec* Registry::find(const std::string& name) const {
  for (const DatasetSpec& spec : datasets) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

Registry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open registry file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("registry '" + path + "': " + e.what());
  }

  Registry registry;
  if (j.contains("root")) {
    registry.root = j.at("root").get<std::string>();
  } else if (const char* env = std::getenv("PATER_DATA_DIR"); env != nullptr && *env) {
    registry.root = env;
  } else {
    registry.root = std::filesystem::path(path).parent_path().string();
  }
  try {
    for (const json& entry : j.at("datasets")) {
      registry.datasets.push_back(parse_spec(entry));
    }
  } catch (const json::exception& e) {
    throw ParseError("registry '" + path + "': " + e.what());
  }
  return registry;
}

Dataset load_registry_dataset(const Registry& registry, const DatasetSpec& spec) {
  if (spec.path.empty()) {
    throw Error("dataset '" + spec.name + "' has no path in the registry" +
                (spec.notes.empty() ? "" : " (" + spec.notes + ")"));
  }
  std::filesystem::path file(spec.path);
  if (file.is_relative() && !registry.root.empty()) {
    file = std::filesystem::path(registry.root) / file;
  }
  std::ifstream in(file);
  if (!in) throw Error("cannot open dataset file '" + file.string() + "'");

  Dataset dataset = spec.format == "delimited"
                        ? load_delimited(in, spec.delimited, spec.name)
                        : load_libsvm(in, spec.libsvm, spec.name);

  if (spec.expected_cases && dataset.size() != *spec.expected_cases) {
    throw ProtocolError("dataset '" + spec.name + "': expected " +
                        std::to_string(*spec.expected_cases) + " cases, loaded " +
                        std::to_string(dataset.size()));
  }
  if (spec.expected_ratio) {
    const double ratio = dataset.imbalance_ratio();
    if (std::abs(ratio - *spec.expected_ratio) > 0.01) {
      throw ProtocolError("dataset '" + spec.name + "': imbalance ratio " +
                          std::to_string(ratio) + " differs from expected " +
                          std::to_string(*spec.expected_ratio));
    }
  }
  return dataset;
}

}  // namespace pater
