#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>

namespace adgen::config {

// "key = value" files, one entry per line, '#' comments.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_long(const std::string& key, long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;

  // Rejects keys outside the given set; callers list everything they read.
  void require_known(std::initializer_list<const char*> keys) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace adgen::config
