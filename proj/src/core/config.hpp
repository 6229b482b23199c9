#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cellscape {

// key=value run configuration with '#' comments. Keys are validated against
// a fixed schema: unknown keys, duplicates, and type errors are rejected
// with line numbers. Values not present fall back to schema defaults.
class RunConfig {
public:
  static RunConfig load(const std::string& path);
  // Parses from text (for tests); `origin` names the source in messages.
  static RunConfig parse(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int64_t get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  // input_error naming every listed key that is unset.
  void require_keys(const std::vector<std::string>& keys) const;

  static const std::vector<std::string>& known_keys();

private:
  std::string origin_;
  std::map<std::string, std::string> values_;  // explicit + defaults

  const std::string& raw(const std::string& key) const;
};

}  // namespace cellscape
