#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hfb {

class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Writes to "<path>.tmp" then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// printf("%.9g"); the serialization used by every CSV writer.
std::string format_g9(double v);

}  // namespace hfb
