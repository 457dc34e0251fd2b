#pragma once

// Post-edit analytics: unit matching between automatic and edited
// statements, change classification, and per-language / per-participant
// aggregation.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace gramtrans {

// The 23 published change-table categories first, in table order, then
// the two structural ones.
enum class ChangeCategory {
  add_adjective,
  add_determiner,
  add_noun,
  add_number,
  add_preposition,
  add_pronoun,
  capitalize,
  change_pos,
  change_adjective_lemma,
  change_case,
  change_conjunction,
  change_determiner,
  change_noun_lemma,
  change_number,
  change_numeral_type,
  change_preposition,
  change_tense,
  change_verb_lemma,
  lowercase,
  mark_head,
  remove_adjective,
  remove_determiner,
  remove_preposition,
  add_unit,
  remove_unit,
};
inline constexpr std::size_t kTableCategoryCount = 23;
inline constexpr std::size_t kCategoryCount = 25;

std::string_view to_string(ChangeCategory c);
ChangeCategory parse_category(std::string_view label);
const std::array<ChangeCategory, kCategoryCount>& all_categories();

using CategorySet = std::set<ChangeCategory>;

// One category per differing dimension. Casing is judged on the lemma and
// on the rendered texts, when given. Person, gender and numeral values
// have no category. Throws PreconditionViolation when both units are absent.
CategorySet classify_change(const std::optional<GrammarUnit>& before, const std::optional<GrammarUnit>& after,
                            const std::optional<std::string>& before_text = std::nullopt,
                            const std::optional<std::string>& after_text = std::nullopt);

class ConflictingInput : public Error {
 public:
  using Error::Error;
};

struct ChangeRecord {
  std::string session_id;
  std::string participant_id;
  Locale locale = Locale::de_DE;
  std::string statement_id;
  std::string unit_id;
  CategorySet categories;
  std::optional<GrammarUnit> before;
  std::optional<GrammarUnit> after;
  std::optional<std::string> before_text;
  std::optional<std::string> after_text;
  std::string timestamp;
};

void to_json(json& j, const ChangeRecord& r);
void from_json(const json& j, ChangeRecord& r);

// Checks the record invariants: before absent iff "add unit", after absent
// iff "remove unit", except text-only records (no units, no categories,
// both texts). A record whose before and after agree in every
// dimension was logged for nothing: ConflictingInput.
void check_record(const ChangeRecord& record);

// Classifies and builds a record; nullopt when nothing changed.
std::optional<ChangeRecord> make_change_record(std::string session_id, std::string participant_id, Locale locale,
                                               std::string statement_id, std::string unit_id,
                                               std::optional<GrammarUnit> before, std::optional<GrammarUnit> after,
                                               std::optional<std::string> before_text,
                                               std::optional<std::string> after_text, std::string timestamp);

void append_record(const std::filesystem::path& log, const ChangeRecord& record);
// Throws FormatError naming the line for malformed or invalid lines.
std::vector<ChangeRecord> load_edit_log(const std::filesystem::path& log);

struct MatchedPair {
  std::size_t auto_index = 0;
  std::size_t edited_index = 0;
  // 1: same id, 2: same lemma and pos, 3: feature overlap.
  int pass = 1;
  bool low_confidence() const { return pass == 3; }
  bool operator==(const MatchedPair&) const = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> unmatched_auto;
  std::vector<std::size_t> unmatched_edited;
  double match_rate = 1.0;
};

inline constexpr double kOverlapThreshold = 0.5;

// Share of jointly set features (pos included) with equal values.
double feature_overlap(const GrammarUnit& a, const GrammarUnit& b);

MatchResult match_units(const std::vector<GrammarUnit>& auto_units, const std::vector<GrammarUnit>& edited_units);

struct ChangeTable {
  std::vector<Locale> locales;
  std::map<Locale, std::int64_t> unit_totals;
  std::map<Locale, std::map<ChangeCategory, std::int64_t>> incidences;

  std::int64_t count(Locale l, ChangeCategory c) const;
  double percent(Locale l, ChangeCategory c) const;
  // Half-up integer percent.
  std::int64_t display_percent(Locale l, ChangeCategory c) const;
};

// Columns are the locales of unit_totals. Throws UnknownLocale for records
// of any other locale and PreconditionViolation for non-positive totals.
ChangeTable aggregate_changes(const std::vector<ChangeRecord>& records,
                              const std::map<Locale, std::int64_t>& unit_totals);

std::map<std::string, std::int64_t> per_participant_counts(const std::vector<ChangeRecord>& records);

// Rows are the 23 table categories; cells blank iff zero.
std::string change_table_csv(const ChangeTable& table);
// Every category and locale with exact counts.
std::string change_table_exact_csv(const ChangeTable& table);
std::string participant_csv(const std::map<std::string, std::int64_t>& counts);

struct SessionSummary {
  std::string session_id;
  std::string participant_id;
  Locale locale = Locale::de_DE;
  std::int64_t unit_total = 0;
  bool completed = true;
};

struct StatementUnits {
  std::string session_id;
  std::string statement_id;
  std::vector<GrammarUnit> auto_units;
  std::vector<GrammarUnit> edited_units;
};

struct UnitsFile {
  std::map<Locale, std::int64_t> unit_totals;
  std::vector<SessionSummary> sessions;
  std::vector<StatementUnits> statements;
};

// {unit_totals?, sessions: [...], statements: [...]}. Without unit_totals,
// totals are summed from completed sessions.
UnitsFile units_file_from_json(const json& j);
UnitsFile load_units_file(const std::filesystem::path& path);

struct ChangedFraction {
  std::int64_t changed_units = 0;
  std::int64_t unit_total = 0;
  double fraction() const { return unit_total == 0 ? 0.0 : static_cast<double>(changed_units) / unit_total; }
};

// Distinct units with at least one categorized record, pooled over
// completed sessions.
ChangedFraction changed_fraction(const std::vector<ChangeRecord>& records, const std::vector<SessionSummary>& sessions);

// Records of sessions listed as incomplete are dropped.
std::vector<ChangeRecord> completed_only(const std::vector<ChangeRecord>& records,
                                         const std::vector<SessionSummary>& sessions);

// Two decimals, e.g. "19.00%".
std::string format_percent(double fraction);

}  // namespace gramtrans
