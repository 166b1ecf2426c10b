#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace stcausal {

// Epoch seconds in dataset-local time. A dataset uses one fixed UTC offset,
// so civil-time arithmetic is plain integer arithmetic on the epoch value.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kSecondsPerDay = 86400;

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// Accepts "YYYY-MM-DDTHH:MM:SS" (also a space separator); nullopt on garbage.
std::optional<Timestamp> parse_iso(const std::string& s);
std::string format_iso(Timestamp t);

inline std::int64_t day_of(Timestamp t) {
  return t >= 0 ? t / kSecondsPerDay : -((-t + kSecondsPerDay - 1) / kSecondsPerDay);
}

inline int minutes_into_day(Timestamp t) {
  return static_cast<int>((t - day_of(t) * kSecondsPerDay) / 60);
}

int month_of_day(std::int64_t day);
int year_of_day(std::int64_t day);

}  // namespace stcausal
