#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cellscape {

// Splits a CSV line on commas. Fields in this toolkit never contain commas
// or quotes, so no quoting rules apply.
std::vector<std::string_view> split_csv(std::string_view line);

int64_t parse_i64(std::string_view field, const std::string& path, size_t line_no);
double parse_f64(std::string_view field, const std::string& path, size_t line_no);

// Calls `row` for every non-empty line after the header. Verifies the header
// matches `expected_header` exactly. Line numbers are 1-based.
void for_each_csv_row(const std::string& path, const std::string& expected_header,
                      const std::function<void(size_t line_no,
                                               const std::vector<std::string_view>&)>& row);

// Variant for `id,wkt`-style files: splits each line at the first comma only,
// since WKT bodies contain commas themselves.
void for_each_id_payload_row(const std::string& path, const std::string& expected_header,
                             const std::function<void(size_t line_no, std::string_view id,
                                                      std::string_view payload)>& row);

// Collects output then writes it atomically (temp file + rename).
class AtomicWriter {
public:
  explicit AtomicWriter(std::string path);
  void append(std::string_view s) { buf_.append(s); }
  void appendf(const char* fmt, ...) __attribute__((format(printf, 2, 3)));
  void commit();  // throws input_error on I/O failure; no-op afterwards

private:
  std::string path_;
  std::string buf_;
  bool committed_ = false;
};

}  // namespace cellscape
