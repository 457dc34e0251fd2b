#pragma once

// Locale-aware rendering of data values bound into slots.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gramtrans/data.hpp"
#include "gramtrans/grammar.hpp"

namespace gramtrans {

enum class SlotFormat { plain, integer, date_long, weekday, ordinal };

std::string_view to_string(SlotFormat f);
// Throws FormatError on an unknown name. "" maps to plain.
SlotFormat parse_slot_format(std::string_view name);

struct CalendarDate {
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;
};

// Parses "YYYY-MM-DD"; throws FormatError on anything else or on an
// impossible date.
CalendarDate parse_iso_date(std::string_view s);

std::string format_date_long(const CalendarDate& date, Locale locale);
std::string format_weekday(const CalendarDate& date, Locale locale);
std::string format_ordinal(std::int64_t n, Locale locale);
std::string format_cardinal(std::int64_t n);

// Formats `value` per `format`; throws FormatError when the value type
// does not fit the format (e.g. a boolean as a date).
std::string format_value(const Value& value, SlotFormat format, Locale locale);

}  // namespace gramtrans
