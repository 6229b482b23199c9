#include "timegrid.hpp"

#include <charconv>
#include <cstdio>

#include "error.hpp"

namespace cellscape {

int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = unsigned(y - era * 400);
  const unsigned doy = (153u * unsigned(m + (m > 2 ? -3 : 9)) + 2u) / 5u + unsigned(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + int64_t(doe) - 719468;
}

void civil_from_days(int64_t z, int& year, int& month, int& day) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = unsigned(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = int64_t(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = int(doy - (153 * mp + 2) / 5 + 1);
  month = int(mp < 10 ? mp + 3 : mp - 9);
  year = int(y + (month <= 2));
}

int64_t minute_index(const CivilMinute& c) {
  return days_from_civil(c.year, c.month, c.day) * 1440 + c.hour * 60 + c.minute;
}

CivilMinute civil_from_minute_index(int64_t m) {
  int64_t days = m / 1440;
  int64_t rem = m % 1440;
  if (rem < 0) {
    rem += 1440;
    days -= 1;
  }
  CivilMinute c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = int(rem / 60);
  c.minute = int(rem % 60);
  return c;
}

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : d[m - 1];
}

int parse_int_field(const std::string& s, size_t pos, size_t len) {
  int v = 0;
  const char* b = s.data() + pos;
  auto [p, ec] = std::from_chars(b, b + len, v);
  if (ec != std::errc() || p != b + len) throw input_error("malformed timestamp: '" + s + "'");
  return v;
}

void validate_date(const CivilMinute& c, const std::string& s) {
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > days_in_month(c.year, c.month) ||
      c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59)
    throw input_error("timestamp out of range: '" + s + "'");
}

}  // namespace

CivilMinute parse_civil_minute(const std::string& s) {
  if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':')
    throw input_error("malformed timestamp (want YYYY-MM-DD hh:mm): '" + s + "'");
  CivilMinute c;
  c.year = parse_int_field(s, 0, 4);
  c.month = parse_int_field(s, 5, 2);
  c.day = parse_int_field(s, 8, 2);
  c.hour = parse_int_field(s, 11, 2);
  c.minute = parse_int_field(s, 14, 2);
  validate_date(c, s);
  return c;
}

CivilMinute parse_civil_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw input_error("malformed date (want YYYY-MM-DD): '" + s + "'");
  CivilMinute c;
  c.year = parse_int_field(s, 0, 4);
  c.month = parse_int_field(s, 5, 2);
  c.day = parse_int_field(s, 8, 2);
  validate_date(c, s);
  return c;
}

std::string format_civil_minute(const CivilMinute& c) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d", c.year, c.month, c.day, c.hour,
                c.minute);
  return buf;
}

int weekday(const CivilMinute& c) {
  // 1970-01-01 was a Thursday (index 3 with Monday = 0).
  const int64_t d = days_from_civil(c.year, c.month, c.day);
  return int(((d % 7) + 7 + 3) % 7);
}

bool is_weekend(int wd) { return wd >= 5; }

int64_t day_of_year(const CivilMinute& c, int ref_year) {
  return days_from_civil(c.year, c.month, c.day) - days_from_civil(ref_year, 1, 1) + 1;
}

}  // namespace cellscape
