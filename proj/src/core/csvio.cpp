#include "csvio.hpp"

#include <cstdarg>
#include <cstdio>
#include <charconv>
#include <fstream>

#include "error.hpp"

namespace cellscape {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

int64_t parse_i64(std::string_view f, const std::string& path, size_t line_no) {
  int64_t v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || p != f.data() + f.size())
    throw input_error(path + ":" + std::to_string(line_no) + ": not an integer: '" +
                      std::string(f) + "'");
  return v;
}

double parse_f64(std::string_view f, const std::string& path, size_t line_no) {
  double v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || p != f.data() + f.size())
    throw input_error(path + ":" + std::to_string(line_no) + ": not a number: '" +
                      std::string(f) + "'");
  return v;
}

void for_each_csv_row(const std::string& path, const std::string& expected_header,
                      const std::function<void(size_t, const std::vector<std::string_view>&)>& row) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != expected_header)
        throw input_error(path + ":1: expected header '" + expected_header + "', got '" + line +
                          "'");
      saw_header = true;
      continue;
    }
    row(line_no, split_csv(line));
  }
  if (!saw_header) throw input_error(path + ": empty file, expected header '" + expected_header + "'");
}

void for_each_id_payload_row(const std::string& path, const std::string& expected_header,
                             const std::function<void(size_t, std::string_view, std::string_view)>& row) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != expected_header)
        throw input_error(path + ":1: expected header '" + expected_header + "', got '" + line + "'");
      saw_header = true;
      continue;
    }
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw input_error(path + ":" + std::to_string(line_no) + ": want 2 fields");
    const std::string_view view(line);
    row(line_no, view.substr(0, comma), view.substr(comma + 1));
  }
  if (!saw_header) throw input_error(path + ": empty file, expected header '" + expected_header + "'");
}

AtomicWriter::AtomicWriter(std::string path) : path_(std::move(path)) {}

void AtomicWriter::appendf(const char* fmt, ...) {
  char stack_buf[256];
  va_list ap;
  va_start(ap, fmt);
  const int n = std::vsnprintf(stack_buf, sizeof(stack_buf), fmt, ap);
  va_end(ap);
  if (n < 0) throw internal_error("vsnprintf failed");
  if (size_t(n) < sizeof(stack_buf)) {
    buf_.append(stack_buf, size_t(n));
    return;
  }
  std::string big(size_t(n) + 1, '\0');
  va_start(ap, fmt);
  std::vsnprintf(big.data(), big.size(), fmt, ap);
  va_end(ap);
  big.resize(size_t(n));
  buf_.append(big);
}

void AtomicWriter::commit() {
  if (committed_) return;
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write " + tmp);
    out.write(buf_.data(), std::streamsize(buf_.size()));
    if (!out) throw input_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path_.c_str()) != 0)
    throw input_error("rename failed: " + tmp + " -> " + path_);
  committed_ = true;
}

}  // namespace cellscape
