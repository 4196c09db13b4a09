#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qmclab {

/// Flat key-value configuration with [section] headers, '#' comments, and
/// `key = value` lines. Lookup keys are "section.key".
class KeyValueConfig {
  public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;  // comma-separated

    /// Canonical "key = value" lines sorted by key; hashed into reports.
    std::string canonical_text() const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace qmclab
