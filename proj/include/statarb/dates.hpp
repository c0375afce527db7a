#pragma once

#include <string>
#include <vector>

#include "statarb/common.hpp"

namespace statarb {

// Dates live as ISO-8601 strings (YYYY-MM-DD); lexicographic order is
// chronological order, which is all the pipeline needs. The helpers below
// exist for validation and for generating synthetic weekday calendars.

bool is_iso_date(const std::string& s);

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
long days_from_civil(int y, int m, int d);
void civil_from_days(long z, int& y, int& m, int& d);

long iso_to_days(const std::string& iso);
std::string days_to_iso(long days);

// `count` consecutive weekdays starting at `start_iso` (start moved forward
// to the next weekday if it falls on a weekend).
std::vector<std::string> weekday_calendar(const std::string& start_iso, int count);

// Index range of dates within [start, end), given an ascending date list.
IndexRange date_range_to_indices(const std::vector<std::string>& dates,
                                 const std::string& start, const std::string& end);

}  // namespace statarb
