#include "pater/loaders.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace pater {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, std::size_t line, const char* what) {
  if (token.empty()) throw ParseError(std::string("empty ") + what, line);
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size()) {
    throw ParseError(std::string("invalid ") + what + " '" + token + "'", line);
  }
  if (!std::isfinite(v)) {
    throw ParseError(std::string("non-finite ") + what + " '" + token + "'", line);
  }
  return v;
}

long parse_long(const std::string& token, std::size_t line, const char* what) {
  if (token.empty()) throw ParseError(std::string("empty ") + what, line);
  const char* begin = token.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + token.size()) {
    throw ParseError(std::string("invalid ") + what + " '" + token + "'", line);
  }
  return v;
}

// A space delimiter means "any whitespace run" so that UCI-style files with
// leading or doubled spaces parse cleanly; other delimiters split literally.
std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  if (delimiter == ' ') {
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) out.push_back(token);
    return out;
  }
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delimiter)) out.push_back(cell);
  if (!line.empty() && line.back() == delimiter) out.push_back("");
  return out;
}

}  // namespace

int LabelMap::resolve(const std::string& token, std::size_t line) const {
  std::string key = trim(token);
  if (key.size() > 1 && key.front() == '+') key.erase(key.begin());
  auto it = entries.find(key);
  if (it == entries.end()) {
    throw LabelError("line " + std::to_string(line) + ": unmappable label '" + token +
                     "' (configure the label map)");
  }
  check_label(it->second);
  return it->second;
}

Dataset load_libsvm(std::istream& in, const LibsvmOptions& options, const std::string& name) {
  Dataset dataset;
  dataset.name = name;
  std::size_t max_index = options.dimension.value_or(0);
  std::vector<std::vector<std::pair<std::size_t, double>>> sparse_rows;
  std::vector<int> labels;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    std::istringstream tokens(line);
    std::string token;
    tokens >> token;
    labels.push_back(options.label_map.resolve(token, line_no));

    std::vector<std::pair<std::size_t, double>> row;
    std::size_t prev_index = 0;
    while (tokens >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
        throw ParseError("expected <index>:<value>, got '" + token + "'", line_no);
      }
      const long index = parse_long(token.substr(0, colon), line_no, "feature index");
      if (index < 1) {
        throw ParseError("feature indices are 1-based, got " + std::to_string(index),
                         line_no);
      }
      if (static_cast<std::size_t>(index) <= prev_index) {
        throw ParseError("feature indices must be strictly increasing", line_no);
      }
      prev_index = static_cast<std::size_t>(index);
      const double value = parse_double(token.substr(colon + 1), line_no, "feature value");
      row.emplace_back(prev_index, value);
    }
    max_index = std::max(max_index, prev_index);
    sparse_rows.push_back(std::move(row));
  }

  if (sparse_rows.empty()) {
    throw EmptyDatasetError("no samples in LIBSVM input '" + name + "'");
  }

  dataset.dimension = max_index + (options.append_bias ? 1 : 0);
  dataset.samples.reserve(sparse_rows.size());
  for (std::size_t i = 0; i < sparse_rows.size(); ++i) {
    LabeledSample sample;
    sample.label = labels[i];
    sample.features.assign(dataset.dimension, 0.0);
    for (const auto& [index, value] : sparse_rows[i]) {
      sample.features[index - 1] = value;
    }
    if (options.append_bias) sample.features.back() = 1.0;
    dataset.samples.push_back(std::move(sample));
  }
  return dataset;
}

void save_libsvm(const Dataset& dataset, std::ostream& out) {
  char buf[64];
  for (const LabeledSample& s : dataset.samples) {
    out << (s.label > 0 ? "+1" : "-1");
    for (std::size_t j = 0; j < s.features.size(); ++j) {
      if (s.features[j] == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%zu:%.17g", j + 1, s.features[j]);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

Dataset load_delimited(std::istream& in, const DelimitedOptions& options,
                       const std::string& name) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  std::vector<std::string> header;

  std::string raw;
  std::size_t line_no = 0;
  std::size_t arity = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    while (!raw.empty() && (raw.back() == '\r' || raw.back() == '\n')) raw.pop_back();
    if (trim(raw).empty()) continue;
    std::vector<std::string> cells = split(raw, options.delimiter);
    for (std::string& c : cells) c = trim(c);
    if (options.has_header && header.empty()) {
      header = std::move(cells);
      arity = header.size();
      continue;
    }
    if (arity == 0) arity = cells.size();
    if (cells.size() != arity) {
      throw ParseError("expected " + std::to_string(arity) + " columns, got " +
                       std::to_string(cells.size()), line_no);
    }
    rows.push_back(std::move(cells));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) {
    throw EmptyDatasetError("no data rows in delimited input '" + name + "'");
  }

  auto resolve_column = [&](const ColumnRef& ref, const char* what) -> std::size_t {
    if (std::holds_alternative<std::size_t>(ref)) {
      const std::size_t idx = std::get<std::size_t>(ref);
      if (idx >= arity) {
        throw ParseError(std::string(what) + " index " + std::to_string(idx) +
                         " out of range (arity " + std::to_string(arity) + ")");
      }
      return idx;
    }
    const std::string& column_name = std::get<std::string>(ref);
    if (header.empty()) {
      throw ParseError(std::string(what) + " '" + column_name +
                       "' referenced by name but the input has no header");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == column_name) return i;
    }
    throw ParseError(std::string(what) + " '" + column_name + "' not found in header");
  };

  const std::size_t label_col = resolve_column(options.label_column, "label column");

  std::vector<bool> removed(arity, false);
  for (const ColumnRef& ref : options.exclude_columns) {
    removed[resolve_column(ref, "excluded column")] = true;
  }
  if (removed[label_col]) throw ParseError("label column cannot be excluded");

  if (options.policy == MissingPolicy::kDropColumn) {
    if (!options.policy_column.has_value()) {
      throw ParseError("missing policy drop_column needs a column reference");
    }
    const std::size_t target = resolve_column(*options.policy_column, "policy column");
    if (target == label_col) throw ParseError("policy column cannot be the label column");
    bool has_missing = false;
    for (const auto& cells : rows) {
      if (cells[target] == options.missing_token) {
        has_missing = true;
        break;
      }
    }
    // Only a column that actually carries missing cells gets removed;
    // otherwise the policy is a no-op and row dropping below decides.
    if (has_missing) removed[target] = true;
  }

  Dataset dataset;
  dataset.name = name;
  std::size_t feature_count = 0;
  for (std::size_t c = 0; c < arity; ++c) {
    if (c != label_col && !removed[c]) ++feature_count;
  }
  dataset.dimension = feature_count + (options.append_bias ? 1 : 0);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    bool missing = false;
    for (std::size_t c = 0; c < arity; ++c) {
      if (removed[c]) continue;
      if (cells[c] == options.missing_token) {
        missing = true;
        break;
      }
    }
    if (missing) continue;  // DROP_ROWS applies under every policy

    LabeledSample sample;
    sample.label = options.label_map.resolve(cells[label_col], row_lines[r]);
    sample.features.reserve(dataset.dimension);
    for (std::size_t c = 0; c < arity; ++c) {
      if (c == label_col || removed[c]) continue;
      sample.features.push_back(parse_double(cells[c], row_lines[r], "feature value"));
    }
    if (options.append_bias) sample.features.push_back(1.0);
    dataset.samples.push_back(std::move(sample));
  }

  if (dataset.samples.empty()) {
    throw EmptyDatasetError("all rows of '" + name + "' were dropped by the missing-value policy");
  }
  return dataset;
}

}  // namespace pater
