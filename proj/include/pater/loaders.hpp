#ifndef PATER_LOADERS_HPP
#define PATER_LOADERS_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pater/dataset.hpp"

namespace pater {

/// Maps raw label tokens to {-1, +1}. Tokens are trimmed and a leading '+'
/// is dropped before lookup, so "+1" and "1" resolve identically. Defaults
/// cover the UCI/LIBSVM conventions: {1} -> +1, {-1, 0, 2} -> -1.
struct LabelMap {
  std::map<std::string, int> entries = {{"1", 1}, {"-1", -1}, {"0", -1}, {"2", -1}};

  int resolve(const std::string& token, std::size_t line) const;
};

/// Column reference: 0-based raw index or header name.
using ColumnRef = std::variant<std::size_t, std::string>;

enum class MissingPolicy {
  kDropRows,    // remove every row containing a missing cell
  kDropColumn,  // remove the named column if it has missing cells, then drop rows
};

struct LibsvmOptions {
  LabelMap label_map;
  /// Pad to at least this dimension (indices beyond it still extend it).
  std::optional<std::size_t> dimension;
  bool append_bias = false;  // appends a constant-1 feature to every sample
};

/// Parses LIBSVM text: `<label> <index>:<value> ...`, 1-based strictly
/// increasing indices, `#` starts a comment. Dimension is the maximum index
/// seen; absent indices are zero. Throws ParseError (with line number),
/// LabelError, or EmptyDatasetError.
Dataset load_libsvm(std::istream& in, const LibsvmOptions& options = {},
                    const std::string& name = "libsvm");

/// Writes LIBSVM text with full-precision values; zero entries are skipped.
void save_libsvm(const Dataset& dataset, std::ostream& out);

struct DelimitedOptions {
  char delimiter = ',';
  bool has_header = false;
  std::string missing_token = "?";
  ColumnRef label_column = std::size_t{0};
  LabelMap label_map;
  MissingPolicy policy = MissingPolicy::kDropRows;
  std::optional<ColumnRef> policy_column;      // required for kDropColumn
  std::vector<ColumnRef> exclude_columns;      // always removed (ids etc.)
  bool append_bias = false;
};

/// Parses delimited text with a designated label column and a missing-value
/// policy. Rows must share the header's arity. Throws ParseError, LabelError,
/// or EmptyDatasetError (also when every row is dropped).
Dataset load_delimited(std::istream& in, const DelimitedOptions& options,
                       const std::string& name = "delimited");

}  // namespace pater

#endif  // PATER_LOADERS_HPP
