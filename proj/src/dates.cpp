#include "statarb/dates.hpp"

#include <algorithm>
#include <cstdio>

namespace statarb {

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[static_cast<size_t>(i)] < '0' || s[static_cast<size_t>(i)] > '9') return false;
  }
  int m = (s[5] - '0') * 10 + (s[6] - '0');
  int d = (s[8] - '0') * 10 + (s[9] - '0');
  return m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

// Howard Hinnant's civil-days algorithms.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yy = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

long iso_to_days(const std::string& iso) {
  if (!is_iso_date(iso)) throw InputError("not an ISO-8601 date: '" + iso + "'");
  int y = std::stoi(iso.substr(0, 4));
  int m = std::stoi(iso.substr(5, 2));
  int d = std::stoi(iso.substr(8, 2));
  return days_from_civil(y, m, d);
}

std::string days_to_iso(long days) {
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return std::string(buf);
}

std::vector<std::string> weekday_calendar(const std::string& start_iso, int count) {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(std::max(count, 0)));
  long day = iso_to_days(start_iso);
  while (static_cast<int>(out.size()) < count) {
    // 1970-01-01 was a Thursday; weekday = (days + 4) mod 7, Sunday = 0.
    int wd = static_cast<int>(((day % 7) + 7 + 4) % 7);
    if (wd != 0 && wd != 6) out.push_back(days_to_iso(day));
    ++day;
  }
  return out;
}

IndexRange date_range_to_indices(const std::vector<std::string>& dates,
                                 const std::string& start, const std::string& end) {
  auto lo = std::lower_bound(dates.begin(), dates.end(), start);
  auto hi = std::lower_bound(dates.begin(), dates.end(), end);
  return IndexRange{static_cast<int>(lo - dates.begin()), static_cast<int>(hi - dates.begin())};
}

}  // namespace statarb
