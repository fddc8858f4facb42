#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfb/core.hpp"

namespace hfb {

// Raised by the dataset reader; carries the 1-based line of the fault
// (0 when the problem is not tied to a line, e.g. a missing instance).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct FeatureEntry {
  std::uint32_t index;
  double value;
  bool operator==(const FeatureEntry&) const = default;
};

struct Instance {
  std::vector<FeatureEntry> features;
  std::vector<ActionIndex> labels;
  bool operator==(const Instance&) const = default;

  bool has_label(ActionIndex a) const;
};

// Multi-label corpus in the sparse "labels features" layout. Immutable after
// load; shared across run threads by const reference.
struct MultiLabelDataset {
  std::size_t num_features = 0;  // m
  std::size_t num_labels = 0;    // k
  std::vector<Instance> rows;

  std::size_t size() const { return rows.size(); }
  bool operator==(const MultiLabelDataset&) const = default;

  // Throws std::invalid_argument naming the first offending row.
  void validate() const;
};

Vector densify(const Instance& inst, std::size_t num_features);

// w^T x without materializing x; for corpora whose m is too large to densify.
double sparse_dot(const Instance& inst, const Vector& w);

// Format:
//   n m k
//   l1,l2,... f1:v1 f2:v2 ...      (n lines; label list may be empty)
MultiLabelDataset parse_xmlc(std::istream& in, const std::string& source = "<stream>");
MultiLabelDataset load_xmlc(const std::filesystem::path& path);

// Values use the shortest round-trip representation, so a reload is exact.
void write_xmlc(std::ostream& out, const MultiLabelDataset& ds);
void save_xmlc(const std::filesystem::path& path, const MultiLabelDataset& ds);

// Small learnable corpus: each instance draws a primary label, features are
// that label's Gaussian prototype plus noise (entries with |v| < 0.3 dropped,
// values rounded to 4 decimals), a second label is added with probability
// 0.3 and the label set is emptied with probability 0.04.
MultiLabelDataset make_toy_multilabel(std::size_t n, std::size_t m, std::size_t k,
                                      std::uint64_t seed);

}  // namespace hfb
