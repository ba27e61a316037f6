#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcsvm/support_vector_set.hpp"

namespace dcsvm {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

struct Sample {
  VectorPtr x;
  std::size_t label = 0;  // index into Dataset::label_set
};

struct Dataset {
  std::vector<Sample> samples;
  std::size_t dimension = 0;            // max feature index + 1
  std::vector<std::string> label_set;   // first-appearance order

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  const std::string& label_of(std::size_t i) const { return label_set[samples[i].label]; }

  /// Compares vector contents, not pointers.
  friend bool operator==(const Dataset& a, const Dataset& b);
};

/// Parses "<label> <idx>:<val> ..." lines with 1-based, strictly increasing
/// indices. Blank lines and lines starting with '#' are skipped; stored
/// zeros are dropped. Labels must be numeric but are kept as written.
Dataset parse_sparse(std::string_view text);

/// Reads a whole file (gzip when the name ends in ".gz") and parses it.
Dataset parse_sparse_file(const std::filesystem::path& path);

void write_sparse(const Dataset& ds, std::ostream& out);

/// Number of dataset file reads performed by this process so far.
std::uint64_t file_read_count();

/// Fisher-Yates permutation of 0..n-1 driven by std::mt19937_64(seed) with
/// rejection-sampled bounded draws; identical on every platform.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

Dataset shuffle(const Dataset& ds, std::uint64_t seed);

/// Shuffles with `seed`, then returns (first round(fraction*N), rest).
std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed);

/// Per-dimension affine map of [lo, hi] onto [0, 1]. Implicit zeros count
/// toward the range; constant dimensions map to 0. Features beyond the
/// recorded dimension pass through unchanged.
struct ScalingRecord {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dimension() const { return lo.size(); }
  SparseVector apply(const SparseVector& x) const;
  Dataset apply(const Dataset& ds) const;

  static ScalingRecord fit(const Dataset& ds);

  friend bool operator==(const ScalingRecord&, const ScalingRecord&) = default;
};

std::pair<Dataset, ScalingRecord> scale_features(const Dataset& ds);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace dcsvm
