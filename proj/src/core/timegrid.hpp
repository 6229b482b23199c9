#pragma once

#include <cstdint>
#include <string>

namespace cellscape {

// Local civil time on a uniform minute grid. No time zones, no DST: the
// source data is stamped in local time and the events of interest span no
// clock change.
struct CivilMinute {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
};

// Days since 1970-01-01 (proleptic Gregorian).
int64_t days_from_civil(int year, int month, int day);
void civil_from_days(int64_t days, int& year, int& month, int& day);

// Minutes since 1970-01-01 00:00.
int64_t minute_index(const CivilMinute& c);
CivilMinute civil_from_minute_index(int64_t m);

// "YYYY-MM-DD hh:mm"; throws input_error on malformed or out-of-range fields.
CivilMinute parse_civil_minute(const std::string& s);
std::string format_civil_minute(const CivilMinute& c);
// "YYYY-MM-DD"
CivilMinute parse_civil_date(const std::string& s);

int weekday(const CivilMinute& c);  // 0 = Monday .. 6 = Sunday
bool is_weekend(int weekday);

// Ordinal day within `ref_year`, continuing monotonically past Dec 31
// (Jan 1 of the following year is day 366/367). Used for jd-style labels.
int64_t day_of_year(const CivilMinute& c, int ref_year);

}  // namespace cellscape
