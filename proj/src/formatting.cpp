#include "gramtrans/formatting.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace gramtrans {

namespace {

using MonthNames = std::array<std::string_view, 12>;
using DayNames = std::array<std::string_view, 7>;  // Sunday first

constexpr MonthNames kMonthsEn = {"January", "February", "March",     "April",   "May",      "June",
                                  "July",    "August",   "September", "October", "November", "December"};
constexpr MonthNames kMonthsDe = {"Januar", "Februar", "März",      "April",   "Mai",      "Juni",
                                  "Juli",   "August",  "September", "Oktober", "November", "Dezember"};
constexpr MonthNames kMonthsEs = {"enero", "febrero", "marzo",      "abril",   "mayo",      "junio",
                                  "julio", "agosto",  "septiembre", "octubre", "noviembre", "diciembre"};
constexpr MonthNames kMonthsFr = {"janvier", "février", "mars",      "avril",   "mai",      "juin",
                                  "juillet", "août",    "septembre", "octobre", "novembre", "décembre"};
constexpr MonthNames kMonthsPt = {"janeiro", "fevereiro", "março",    "abril",   "maio",     "junho",
                                  "julho",   "agosto",    "setembro", "outubro", "novembro", "dezembro"};
// Genitive forms, as used after a day number.
constexpr MonthNames kMonthsPl = {"stycznia", "lutego",   "marca",     "kwietnia", "maja",      "czerwca",
                                  "lipca",    "sierpnia", "września", "października", "listopada", "grudnia"};
constexpr MonthNames kMonthsSl = {"januar", "februar", "marec",     "april",   "maj",      "junij",
                                  "julij",  "avgust",  "september", "oktober", "november", "december"};

constexpr DayNames kDaysEn = {"Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};
constexpr DayNames kDaysDe = {"Sonntag", "Montag", "Dienstag", "Mittwoch", "Donnerstag", "Freitag", "Samstag"};
constexpr DayNames kDaysEs = {"domingo", "lunes", "martes", "miércoles", "jueves", "viernes", "sábado"};
constexpr DayNames kDaysFr = {"dimanche", "lundi", "mardi", "mercredi", "jeudi", "vendredi", "samedi"};
constexpr DayNames kDaysPt = {"domingo", "segunda-feira", "terça-feira", "quarta-feira",
                              "quinta-feira", "sexta-feira", "sábado"};
constexpr DayNames kDaysPl = {"niedziela", "poniedziałek", "wtorek", "środa", "czwartek", "piątek", "sobota"};
constexpr DayNames kDaysSl = {"nedelja", "ponedeljek", "torek", "sreda", "četrtek", "petek", "sobota"};
constexpr DayNames kDaysZh = {"星期日", "星期一", "星期二", "星期三", "星期四", "星期五", "星期六"};

constexpr std::array<std::string_view, 5> kFormatNames = {"", "integer", "date-long", "weekday", "ordinal"};

std::string two_digits(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02u", v);
  return buf;
}

}  // namespace

std::string_view to_string(SlotFormat f) { return kFormatNames[static_cast<int>(f)]; }

SlotFormat parse_slot_format(std::string_view name) {
  for (std::size_t i = 0; i < kFormatNames.size(); ++i) {
    if (kFormatNames[i] == name) return static_cast<SlotFormat>(i);
  }
  throw FormatError("unknown slot format '" + std::string(name) + "'");
}

CalendarDate parse_iso_date(std::string_view s) {
  auto bad = [&] { return FormatError("invalid date '" + std::string(s) + "', expected YYYY-MM-DD"); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw bad();
  CalendarDate d;
  auto parse = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    if (ec != std::errc{} || ptr != s.data() + pos + len) throw bad();
  };
  parse(0, 4, d.year);
  parse(5, 2, d.month);
  parse(8, 2, d.day);
  std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month},
                                  std::chrono::day{d.day}};
  if (!ymd.ok()) throw bad();
  return d;
}

std::string format_date_long(const CalendarDate& d, Locale locale) {
  const auto m = d.month - 1;
  const std::string day = std::to_string(d.day);
  const std::string year = std::to_string(d.year);
  switch (locale) {
    case Locale::en_US: return std::string(kMonthsEn[m]) + " " + day + ", " + year;
    case Locale::de_DE: return two_digits(d.day) + ". " + std::string(kMonthsDe[m]) + " " + year;
    case Locale::es_ES: return day + " de " + std::string(kMonthsEs[m]) + " de " + year;
    case Locale::fr_FR: return (d.day == 1 ? "1er" : day) + " " + std::string(kMonthsFr[m]) + " " + year;
    case Locale::pt_BR: return day + " de " + std::string(kMonthsPt[m]) + " de " + year;
    case Locale::pl_PL: return day + " " + std::string(kMonthsPl[m]) + " " + year;
    case Locale::sl_SI: return day + ". " + std::string(kMonthsSl[m]) + " " + year;
    case Locale::zh_CN: return year + "年" + std::to_string(d.month) + "月" + day + "日";
  }
  return {};
}

std::string format_weekday(const CalendarDate& d, Locale locale) {
  using namespace std::chrono;
  const weekday wd{sys_days{year_month_day{year{d.year}, month{d.month}, day{d.day}}}};
  const auto i = wd.c_encoding();
  switch (locale) {
    case Locale::en_US: return std::string(kDaysEn[i]);
    case Locale::de_DE: return std::string(kDaysDe[i]);
    case Locale::es_ES: return std::string(kDaysEs[i]);
    case Locale::fr_FR: return std::string(kDaysFr[i]);
    case Locale::pt_BR: return std::string(kDaysPt[i]);
    case Locale::pl_PL: return std::string(kDaysPl[i]);
    case Locale::sl_SI: return std::string(kDaysSl[i]);
    case Locale::zh_CN: return std::string(kDaysZh[i]);
  }
  return {};
}

std::string format_cardinal(std::int64_t n) { return std::to_string(n); }

std::string format_ordinal(std::int64_t n, Locale locale) {
  const std::string digits = std::to_string(n);
  switch (locale) {
    case Locale::en_US: {
      const auto abs = n < 0 ? -n : n;
      const auto tens = abs % 100;
      const char* suffix = "th";
      if (tens < 11 || tens > 13) {
        switch (abs % 10) {
          case 1: suffix = "st"; break;
          case 2: suffix = "nd"; break;
          case 3: suffix = "rd"; break;
          default: break;
        }
      }
      return digits + suffix;
    }
    case Locale::de_DE:
    case Locale::pl_PL:
    case Locale::sl_SI: return digits + ".";
    case Locale::es_ES:
    case Locale::pt_BR: return digits + ".º";
    case Locale::fr_FR: return digits + (n == 1 ? "er" : "e");
    case Locale::zh_CN: return "第" + digits;
  }
  return digits;
}

std::string format_value(const Value& value, SlotFormat format, Locale locale) {
  auto need_int = [&](const char* what) {
    if (auto i = std::get_if<std::int64_t>(&value)) return *i;
    throw FormatError(std::string(what) + " format needs an integer, got '" + display(value) + "'");
  };
  auto need_date = [&] {
    if (auto s = std::get_if<std::string>(&value)) return parse_iso_date(*s);
    throw FormatError("date format needs a YYYY-MM-DD string, got '" + display(value) + "'");
  };
  switch (format) {
    case SlotFormat::plain: return display(value);
    case SlotFormat::integer: return format_cardinal(need_int("integer"));
    case SlotFormat::ordinal: return format_ordinal(need_int("ordinal"), locale);
    case SlotFormat::date_long: return format_date_long(need_date(), locale);
    case SlotFormat::weekday: return format_weekday(need_date(), locale);
  }
  return display(value);
}

}  // namespace gramtrans
