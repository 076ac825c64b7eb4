#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "quartersim/quarter.hpp"

namespace quartersim {

inline constexpr int kBundleSchemaVersion = 1;

struct Manifest {
  int schema_version = kBundleSchemaVersion;
  std::string name;
  std::uint64_t seed = 0;
  /// Bundle-relative path -> lowercase hex SHA-256.
  std::map<std::string, std::string> digests;
  bool operator==(const Manifest&) const = default;
};

/// Persistence seam: callers depend on this interface, not on the storage format.
class QuarterStore {
 public:
  virtual ~QuarterStore() = default;
  virtual Manifest save(const QuarterModel& q, const std::filesystem::path& location) = 0;
  virtual QuarterModel load(const std::filesystem::path& location) = 0;
};

/// Directory bundle: tables/*.csv, profiles/*.csv, scenario.json and manifest.json
/// (written last; its presence marks a complete bundle).
class CsvBundleStore final : public QuarterStore {
 public:
  Manifest save(const QuarterModel& q, const std::filesystem::path& dir) override;
  QuarterModel load(const std::filesystem::path& dir) override;
};

Manifest save(const QuarterModel& q, const std::filesystem::path& dir);
QuarterModel load(const std::filesystem::path& dir);

Manifest read_manifest(const std::filesystem::path& dir);
std::string sha256_hex(std::string_view data);

}  // namespace quartersim
