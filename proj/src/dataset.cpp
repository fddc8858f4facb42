#include "hfb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

#include "hfb/io.hpp"

namespace hfb {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

bool Instance::has_label(ActionIndex a) const {
  return std::find(labels.begin(), labels.end(), a) != labels.end();
}

void MultiLabelDataset::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& f : rows[r].features) {
      if (f.index >= num_features) {
        throw std::invalid_argument("row " + std::to_string(r) + ": feature index " +
                                    std::to_string(f.index) + " >= m");
      }
      if (!std::isfinite(f.value)) {
        throw std::invalid_argument("row " + std::to_string(r) + ": non-finite feature value");
      }
    }
    for (auto l : rows[r].labels) {
      if (l >= num_labels) {
        throw std::invalid_argument("row " + std::to_string(r) + ": label " +
                                    std::to_string(l) + " >= k");
      }
    }
  }
}

Vector densify(const Instance& inst, std::size_t num_features) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(num_features));
  for (const auto& f : inst.features) x(f.index) += f.value;
  return x;
}

double sparse_dot(const Instance& inst, const Vector& w) {
  double s = 0.0;
  for (const auto& f : inst.features) s += w(f.index) * f.value;
  return s;
}

namespace {

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  if (tok.empty()) return false;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

MultiLabelDataset parse_xmlc(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(source, 1, "missing header line");
  std::size_t n = 0;
  MultiLabelDataset ds;
  {
    std::vector<std::string_view> toks;
    for (auto t : split(line, ' ')) {
      if (!t.empty()) toks.push_back(t);
    }
    if (toks.size() != 3 || !parse_number(toks[0], n) || !parse_number(toks[1], ds.num_features) ||
        !parse_number(toks[2], ds.num_labels)) {
      throw ParseError(source, lineno, "malformed header, expected \"n m k\"");
    }
  }

  ds.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_line()) {
      throw ParseError(source, lineno + 1,
                       "expected " + std::to_string(n) + " instances, found " + std::to_string(i));
    }
    Instance inst;
    const std::string_view sv(line);
    const std::size_t space = sv.find(' ');
    const std::string_view label_part = sv.substr(0, space);
    const std::string_view feature_part =
        space == std::string_view::npos ? std::string_view{} : sv.substr(space + 1);

    if (!label_part.empty()) {
      for (auto tok : split(label_part, ',')) {
        std::size_t l = 0;
        if (!parse_number(tok, l)) {
          throw ParseError(source, lineno, "bad label token '" + std::string(tok) + "'");
        }
        if (l >= ds.num_labels) {
          throw ParseError(source, lineno,
                           "label " + std::to_string(l) + " out of range (k=" +
                               std::to_string(ds.num_labels) + ")");
        }
        inst.labels.push_back(l);
      }
    }
    for (auto tok : split(feature_part, ' ')) {
      if (tok.empty()) continue;
      const std::size_t colon = tok.find(':');
      FeatureEntry f{};
      if (colon == std::string_view::npos || !parse_number(tok.substr(0, colon), f.index) ||
          !parse_number(tok.substr(colon + 1), f.value) || !std::isfinite(f.value)) {
        throw ParseError(source, lineno, "bad feature token '" + std::string(tok) + "'");
      }
      if (f.index >= ds.num_features) {
        throw ParseError(source, lineno,
                         "feature index " + std::to_string(f.index) + " out of range (m=" +
                             std::to_string(ds.num_features) + ")");
      }
      inst.features.push_back(f);
    }
    ds.rows.push_back(std::move(inst));
  }
  while (next_line()) {
    if (!line.empty()) throw ParseError(source, lineno, "trailing content after last instance");
  }
  return ds;
}

MultiLabelDataset load_xmlc(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open dataset");
  return parse_xmlc(in, path.string());
}

void write_xmlc(std::ostream& out, const MultiLabelDataset& ds) {
  out << ds.rows.size() << ' ' << ds.num_features << ' ' << ds.num_labels << '\n';
  char buf[40];
  for (const auto& inst : ds.rows) {
    for (std::size_t j = 0; j < inst.labels.size(); ++j) {
      if (j) out << ',';
      out << inst.labels[j];
    }
    for (const auto& f : inst.features) {
      // Shortest representation that parses back to the same double.
      auto res = std::to_chars(buf, buf + sizeof buf, f.value);
      out << ' ' << f.index << ':' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

void save_xmlc(const std::filesystem::path& path, const MultiLabelDataset& ds) {
  std::ostringstream ss;
  write_xmlc(ss, ds);
  write_file_atomic(path, ss.str());
}

MultiLabelDataset make_toy_multilabel(std::size_t n, std::size_t m, std::size_t k,
                                      std::uint64_t seed) {
  if (m == 0 || k == 0) throw std::invalid_argument("toy dataset: m and k must be >= 1");
  RngStream rng(seed);
  Matrix prototypes(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < prototypes.rows(); ++i) {
    for (Eigen::Index j = 0; j < prototypes.cols(); ++j) prototypes(i, j) = rng.normal();
  }
  MultiLabelDataset ds;
  ds.num_features = m;
  ds.num_labels = k;
  ds.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Instance inst;
    const auto primary = static_cast<ActionIndex>(rng.uniform_index(k));
    inst.labels.push_back(primary);
    if (k > 1 && rng.bernoulli(0.3)) {
      const auto offset = static_cast<ActionIndex>(1 + rng.uniform_index(k - 1));
      inst.labels.push_back((primary + offset) % k);
    }
    if (rng.bernoulli(0.04)) inst.labels.clear();
    for (std::size_t j = 0; j < m; ++j) {
      const double v = prototypes(static_cast<Eigen::Index>(primary), static_cast<Eigen::Index>(j)) +
                       0.5 * rng.normal();
      const double rounded = std::round(v * 1e4) / 1e4;
      if (std::abs(rounded) >= 0.3) {
        inst.features.push_back({static_cast<std::uint32_t>(j), rounded});
      }
    }
    ds.rows.push_back(std::move(inst));
  }
  return ds;
}

}  // namespace hfb
