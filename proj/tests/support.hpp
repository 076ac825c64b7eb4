#pragma once

#include <filesystem>
#include <string>
#include <unistd.h>

#include "quartersim/csv.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(QUARTERSIM_SOURCE_DIR); }
inline fs::path grid_dir(const std::string& name) { return source_dir() / "data" / "simbench" / name; }
inline fs::path fixture(const std::string& rel) { return source_dir() / "tests" / "fixtures" / rel; }

/// Fresh, empty directory removed at scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() / ("quartersim_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline std::string read(const fs::path& p) { return quartersim::csv::read_text(p); }

}  // namespace testsupport
