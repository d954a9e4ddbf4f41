#ifndef PATER_COMMON_HPP
#define PATER_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pater {

/// Dense feature vector. Dimension is fixed per learner/dataset.
using FeatureVector = std::vector<double>;

/// One unit of streaming input: features plus a label in {-1, +1}.
struct LabeledSample {
  FeatureVector features;
  int label = 1;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input with the wrong dimension or shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A label token that the active label map cannot resolve.
class LabelError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

/// Violation of the evaluation protocol (empty folds, missing cells, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient or numerically unusable linear system.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value where the stream must abort.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

/// Bad command-line or configuration input.
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Small dense-vector helpers
// ---------------------------------------------------------------------------

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(std::span<const double> v) { return dot(v, v); }

inline double norm(std::span<const double> v) { return std::sqrt(squared_norm(v)); }

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void check_dimension(std::size_t expected, std::size_t actual, const char* context) {
  if (expected != actual) {
    throw DimensionError(std::string(context) + ": expected dimension " +
                         std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

inline void check_label(int label) {
  if (label != -1 && label != 1) {
    throw Error("label must be -1 or +1, got " + std::to_string(label));
  }
}

}  // namespace pater

#endif  // PATER_COMMON_HPP
