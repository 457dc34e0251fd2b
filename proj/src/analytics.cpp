#include "gramtrans/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gramtrans/io.hpp"
#include "gramtrans/text.hpp"

namespace gramtrans {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kLabels = {
    "add adjective",      "add determiner",        "add noun",          "add number",
    "add preposition",    "add pronoun",           "capitalize",        "change POS",
    "change adjective lemma", "change case",       "change conjunction", "change determiner",
    "change noun lemma",  "change number",         "change numeral type", "change preposition",
    "change tense",       "change verb lemma",     "lowercase",         "mark head",
    "remove adjective",   "remove determiner",     "remove preposition", "add unit",
    "remove unit"};

constexpr std::array<ChangeCategory, kCategoryCount> make_all() {
  std::array<ChangeCategory, kCategoryCount> out{};
  for (std::size_t i = 0; i < kCategoryCount; ++i) out[i] = static_cast<ChangeCategory>(i);
  return out;
}
constexpr auto kAll = make_all();

std::optional<Determiner> effective(std::optional<Determiner> d) {
  if (d == Determiner::none) return std::nullopt;
  return d;
}

// Byte length of the UTF-8 sequence starting with `lead`.
std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  return 4;
}

// For strings equal up to letter case: capitalize when the first
// differing letter became upper case.
ChangeCategory casing_direction(std::string_view before, std::string_view after) {
  std::size_t i = 0;
  while (i < before.size() && i < after.size()) {
    const std::size_t n = sequence_length(static_cast<unsigned char>(before[i]));
    if (before.substr(i, n) != after.substr(i, n)) {
      const std::string_view b = before.substr(i, n);
      const std::string_view a = after.substr(i, sequence_length(static_cast<unsigned char>(after[i])));
      return text::to_lower(a) == b ? ChangeCategory::capitalize : ChangeCategory::lowercase;
    }
    i += n;
  }
  return ChangeCategory::capitalize;
}

bool adds_segments(const std::string& before, const std::string& after) {
  auto b = split_compound(before);
  auto a = split_compound(after);
  if (a.size() <= b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::includes(a.begin(), a.end(), b.begin(), b.end());
}

bool feature_equal(const FeatureSet& a, const FeatureSet& b, Feature f) {
  switch (f) {
    case Feature::lemma: return a.lemma == b.lemma;
    case Feature::grammatical_case: return a.grammatical_case == b.grammatical_case;
    case Feature::number: return a.number == b.number;
    case Feature::tense: return a.tense == b.tense;
    case Feature::person: return a.person == b.person;
    case Feature::gender: return a.gender == b.gender;
    case Feature::preposition: return a.preposition == b.preposition;
    case Feature::adjectives: return a.adjectives == b.adjectives;
    case Feature::numerals: return a.numerals == b.numerals;
    case Feature::conjunctions: return a.conjunctions == b.conjunctions;
    case Feature::determiner: return a.determiner == b.determiner;
    case Feature::pronoun_type: return a.pronoun_type == b.pronoun_type;
  }
  return false;
}

void classify_adjectives(const std::vector<std::string>& before, const std::vector<std::string>& after,
                         CategorySet& out) {
  std::multiset<std::string> removed(before.begin(), before.end());
  std::multiset<std::string> added;
  for (const auto& a : after) {
    if (auto it = removed.find(a); it != removed.end()) {
      removed.erase(it);
    } else {
      added.insert(a);
    }
  }
  const auto swaps = std::min(removed.size(), added.size());
  if (swaps > 0) out.insert(ChangeCategory::change_adjective_lemma);
  if (added.size() > swaps) out.insert(ChangeCategory::add_adjective);
  if (removed.size() > swaps) out.insert(ChangeCategory::remove_adjective);
}

template <class T>
void classify_optional(const std::optional<T>& before, const std::optional<T>& after, ChangeCategory add,
                       ChangeCategory remove, ChangeCategory change, CategorySet& out) {
  if (!before && after) out.insert(add);
  if (before && !after) out.insert(remove);
  if (before && after && *before != *after) out.insert(change);
}

}  // namespace

std::string_view to_string(ChangeCategory c) { return kLabels[static_cast<std::size_t>(c)]; }

ChangeCategory parse_category(std::string_view label) {
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (kLabels[i] == label) return static_cast<ChangeCategory>(i);
  }
  throw FormatError("unknown change category '" + std::string(label) + "'");
}

const std::array<ChangeCategory, kCategoryCount>& all_categories() { return kAll; }

CategorySet classify_change(const std::optional<GrammarUnit>& before, const std::optional<GrammarUnit>& after,
                            const std::optional<std::string>& before_text,
                            const std::optional<std::string>& after_text) {
  if (!before && !after) throw PreconditionViolation("classify_change needs at least one unit");
  if (!before) return {ChangeCategory::add_unit};
  if (!after) return {ChangeCategory::remove_unit};

  CategorySet out;
  const FeatureSet& b = before->features;
  const FeatureSet& a = after->features;

  if (before->pos != after->pos) out.insert(ChangeCategory::change_pos);

  if (b.lemma != a.lemma) {
    if (text::equal_ignoring_case(b.lemma, a.lemma)) {
      out.insert(casing_direction(b.lemma, a.lemma));
    } else if (after->pos == PartOfSpeech::verb) {
      out.insert(ChangeCategory::change_verb_lemma);
    } else if (after->pos == PartOfSpeech::noun && adds_segments(b.lemma, a.lemma)) {
      out.insert(ChangeCategory::add_noun);
    } else {
      out.insert(ChangeCategory::change_noun_lemma);
    }
  }
  if (before_text && after_text && *before_text != *after_text &&
      text::equal_ignoring_case(*before_text, *after_text)) {
    out.insert(casing_direction(*before_text, *after_text));
  }

  if (b.grammatical_case != a.grammatical_case) out.insert(ChangeCategory::change_case);
  if (b.number != a.number) out.insert(ChangeCategory::change_number);
  if (b.tense != a.tense) out.insert(ChangeCategory::change_tense);

  classify_optional(b.preposition, a.preposition, ChangeCategory::add_preposition, ChangeCategory::remove_preposition,
                    ChangeCategory::change_preposition, out);
  classify_optional(effective(b.determiner), effective(a.determiner), ChangeCategory::add_determiner,
                    ChangeCategory::remove_determiner, ChangeCategory::change_determiner, out);
  classify_adjectives(b.adjectives, a.adjectives, out);

  if (!b.numerals && a.numerals) out.insert(ChangeCategory::add_number);
  if (b.numerals && a.numerals && b.numerals->type != a.numerals->type) {
    out.insert(ChangeCategory::change_numeral_type);
  }
  if (b.conjunctions != a.conjunctions) out.insert(ChangeCategory::change_conjunction);
  if (!b.pronoun_type && a.pronoun_type) out.insert(ChangeCategory::add_pronoun);
  if (a.head_index && a.head_index != b.head_index) out.insert(ChangeCategory::mark_head);
  return out;
}

void to_json(json& j, const ChangeRecord& r) {
  json cats = json::array();
  for (auto c : r.categories) cats.push_back(to_string(c));
  j = json{{"session_id", r.session_id},     {"participant_id", r.participant_id},
           {"locale", to_string(r.locale)},  {"statement_id", r.statement_id},
           {"unit_id", r.unit_id},           {"categories", cats},
           {"timestamp", r.timestamp}};
  j["before"] = r.before ? json(*r.before) : json(nullptr);
  j["after"] = r.after ? json(*r.after) : json(nullptr);
  if (r.before_text) j["before_text"] = *r.before_text;
  if (r.after_text) j["after_text"] = *r.after_text;
}

void from_json(const json& j, ChangeRecord& r) {
  r.session_id = j.at("session_id").get<std::string>();
  r.participant_id = j.at("participant_id").get<std::string>();
  r.locale = parse_locale(j.at("locale").get<std::string>());
  r.statement_id = j.value("statement_id", std::string());
  r.unit_id = j.at("unit_id").get<std::string>();
  r.categories.clear();
  for (const auto& c : j.at("categories")) r.categories.insert(parse_category(c.get<std::string>()));
  r.before.reset();
  r.after.reset();
  if (j.contains("before") && !j["before"].is_null()) r.before = j["before"].get<GrammarUnit>();
  if (j.contains("after") && !j["after"].is_null()) r.after = j["after"].get<GrammarUnit>();
  r.before_text.reset();
  r.after_text.reset();
  if (j.contains("before_text")) r.before_text = j["before_text"].get<std::string>();
  if (j.contains("after_text")) r.after_text = j["after_text"].get<std::string>();
  r.timestamp = j.value("timestamp", std::string());
}

void check_record(const ChangeRecord& r) {
  if (!r.before && !r.after) {
    // Literal text edit between units.
    if (!r.categories.empty() || !r.before_text || !r.after_text) {
      throw FormatError("record for '" + r.unit_id + "' has no units but is not a text edit");
    }
    if (*r.before_text == *r.after_text) {
      throw ConflictingInput("text record for '" + r.unit_id + "' logs a change but the texts are identical");
    }
    return;
  }
  const bool adds = r.categories.count(ChangeCategory::add_unit) > 0;
  const bool removes = r.categories.count(ChangeCategory::remove_unit) > 0;
  if (adds != !r.before) throw FormatError("record for '" + r.unit_id + "': before must be absent iff 'add unit'");
  if (removes != !r.after) throw FormatError("record for '" + r.unit_id + "': after must be absent iff 'remove unit'");
  if (r.before && r.after && *r.before == *r.after && r.before_text == r.after_text) {
    throw ConflictingInput("record for '" + r.unit_id + "' logs a change but before and after are identical");
  }
}

std::optional<ChangeRecord> make_change_record(std::string session_id, std::string participant_id, Locale locale,
                                               std::string statement_id, std::string unit_id,
                                               std::optional<GrammarUnit> before, std::optional<GrammarUnit> after,
                                               std::optional<std::string> before_text,
                                               std::optional<std::string> after_text, std::string timestamp) {
  if (before && after && *before == *after && before_text == after_text) return std::nullopt;
  ChangeRecord r;
  r.categories = classify_change(before, after, before_text, after_text);
  r.session_id = std::move(session_id);
  r.participant_id = std::move(participant_id);
  r.locale = locale;
  r.statement_id = std::move(statement_id);
  r.unit_id = std::move(unit_id);
  r.before = std::move(before);
  r.after = std::move(after);
  r.before_text = std::move(before_text);
  r.after_text = std::move(after_text);
  r.timestamp = std::move(timestamp);
  return r;
}

void append_record(const std::filesystem::path& log, const ChangeRecord& record) {
  std::ofstream out(log, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot open edit log " + log.string());
  out << json(record).dump() << '\n';
  out.flush();
  if (!out) throw Error("cannot append to edit log " + log.string());
}

std::vector<ChangeRecord> load_edit_log(const std::filesystem::path& log) {
  std::vector<ChangeRecord> out;
  for_each_json_line(log, [&](std::size_t line, const json& j) {
    try {
      auto r = j.get<ChangeRecord>();
      check_record(r);
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw FormatError(log.string() + ":" + std::to_string(line) + ": " + e.what());
    } catch (const ConflictingInput& e) {
      throw ConflictingInput(log.string() + ":" + std::to_string(line) + ": " + e.what());
    } catch (const Error& e) {
      throw FormatError(log.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

double feature_overlap(const GrammarUnit& a, const GrammarUnit& b) {
  int joint = 1;
  int agree = a.pos == b.pos ? 1 : 0;
  for (Feature f : kAllFeatures) {
    if (!is_set(a.features, f) || !is_set(b.features, f)) continue;
    ++joint;
    if (feature_equal(a.features, b.features, f)) ++agree;
  }
  if (a.features.head_index && b.features.head_index) {
    ++joint;
    if (a.features.head_index == b.features.head_index) ++agree;
  }
  return static_cast<double>(agree) / joint;
}

MatchResult match_units(const std::vector<GrammarUnit>& auto_units, const std::vector<GrammarUnit>& edited_units) {
  MatchResult out;
  std::vector<bool> used_a(auto_units.size()), used_e(edited_units.size());
  auto greedy_pass = [&](int pass, auto&& same) {
    for (std::size_t i = 0; i < auto_units.size(); ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < edited_units.size(); ++j) {
        if (used_e[j] || !same(auto_units[i], edited_units[j])) continue;
        used_a[i] = used_e[j] = true;
        out.pairs.push_back({i, j, pass});
        break;
      }
    }
  };
  greedy_pass(1, [](const GrammarUnit& a, const GrammarUnit& b) { return a.id == b.id; });
  greedy_pass(2, [](const GrammarUnit& a, const GrammarUnit& b) {
    return a.features.lemma == b.features.lemma && a.pos == b.pos;
  });

  struct Candidate {
    double score;
    std::size_t i, j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < auto_units.size(); ++i) {
    if (used_a[i]) continue;
    for (std::size_t j = 0; j < edited_units.size(); ++j) {
      if (used_e[j]) continue;
      const double score = feature_overlap(auto_units[i], edited_units[j]);
      if (score >= kOverlapThreshold) candidates.push_back({score, i, j});
    }
  }
  auto distance = [](const Candidate& c) { return c.i > c.j ? c.i - c.j : c.j - c.i; };
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    if (distance(x) != distance(y)) return distance(x) < distance(y);
    if (x.i + x.j != y.i + y.j) return x.i + x.j < y.i + y.j;
    return x.i < y.i;
  });
  for (const auto& c : candidates) {
    if (used_a[c.i] || used_e[c.j]) continue;
    used_a[c.i] = used_e[c.j] = true;
    out.pairs.push_back({c.i, c.j, 3});
  }

  for (std::size_t i = 0; i < auto_units.size(); ++i) {
    if (!used_a[i]) out.unmatched_auto.push_back(i);
  }
  for (std::size_t j = 0; j < edited_units.size(); ++j) {
    if (!used_e[j]) out.unmatched_edited.push_back(j);
  }
  const auto total = auto_units.size() + edited_units.size();
  out.match_rate = total == 0 ? 1.0 : 2.0 * static_cast<double>(out.pairs.size()) / static_cast<double>(total);
  return out;
}

std::int64_t ChangeTable::count(Locale l, ChangeCategory c) const {
  auto it = incidences.find(l);
  if (it == incidences.end()) return 0;
  auto jt = it->second.find(c);
  return jt == it->second.end() ? 0 : jt->second;
}

double ChangeTable::percent(Locale l, ChangeCategory c) const {
  return 100.0 * static_cast<double>(count(l, c)) / static_cast<double>(unit_totals.at(l));
}

std::int64_t ChangeTable::display_percent(Locale l, ChangeCategory c) const {
  // floor(100 n / t + 1/2) in integers.
  const std::int64_t t = unit_totals.at(l);
  return (200 * count(l, c) + t) / (2 * t);
}

ChangeTable aggregate_changes(const std::vector<ChangeRecord>& records,
                              const std::map<Locale, std::int64_t>& unit_totals) {
  ChangeTable table;
  for (const auto& [locale, total] : unit_totals) {
    if (total <= 0) {
      throw PreconditionViolation("unit total for " + std::string(to_string(locale)) + " must be positive");
    }
    table.locales.push_back(locale);
  }
  table.unit_totals = unit_totals;
  for (const auto& r : records) {
    if (!unit_totals.count(r.locale)) throw UnknownLocale(std::string(to_string(r.locale)));
    for (auto c : r.categories) ++table.incidences[r.locale][c];
  }
  return table;
}

std::map<std::string, std::int64_t> per_participant_counts(const std::vector<ChangeRecord>& records) {
  std::map<std::string, std::int64_t> out;
  for (const auto& r : records) ++out[r.participant_id];
  return out;
}

std::string change_table_csv(const ChangeTable& table) {
  std::ostringstream os;
  os << "category";
  for (auto l : table.locales) os << ',' << to_string(l);
  os << '\n';
  for (std::size_t i = 0; i < kTableCategoryCount; ++i) {
    const auto c = kAll[i];
    os << to_string(c);
    for (auto l : table.locales) {
      os << ',';
      if (table.count(l, c) != 0) os << table.display_percent(l, c);
    }
    os << '\n';
  }
  return os.str();
}

std::string change_table_exact_csv(const ChangeTable& table) {
  std::ostringstream os;
  os << "category,locale,incidences,unit_total,percent\n";
  for (auto c : kAll) {
    for (auto l : table.locales) {
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.6f", table.percent(l, c));
      os << to_string(c) << ',' << to_string(l) << ',' << table.count(l, c) << ',' << table.unit_totals.at(l) << ','
         << pct << '\n';
    }
  }
  return os.str();
}

std::string participant_csv(const std::map<std::string, std::int64_t>& counts) {
  std::ostringstream os;
  os << "participant,changes\n";
  for (const auto& [p, n] : counts) os << p << ',' << n << '\n';
  return os.str();
}

UnitsFile units_file_from_json(const json& j) {
  UnitsFile f;
  try {
    for (const auto& s : j.value("sessions", json::array())) {
      SessionSummary summary;
      summary.session_id = s.at("session_id").get<std::string>();
      summary.participant_id = s.value("participant_id", std::string());
      summary.locale = parse_locale(s.at("locale").get<std::string>());
      summary.unit_total = s.at("unit_total").get<std::int64_t>();
      summary.completed = s.value("completed", true);
      f.sessions.push_back(std::move(summary));
    }
    for (const auto& s : j.value("statements", json::array())) {
      StatementUnits st;
      st.session_id = s.value("session_id", std::string());
      st.statement_id = s.at("statement_id").get<std::string>();
      st.auto_units = s.at("auto").get<std::vector<GrammarUnit>>();
      st.edited_units = s.at("edited").get<std::vector<GrammarUnit>>();
      f.statements.push_back(std::move(st));
    }
    if (j.contains("unit_totals")) {
      for (const auto& [code, n] : j["unit_totals"].items()) f.unit_totals[parse_locale(code)] = n.get<std::int64_t>();
    } else {
      for (const auto& s : f.sessions) {
        if (s.completed) f.unit_totals[s.locale] += s.unit_total;
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed units file: ") + e.what());
  }
  return f;
}

UnitsFile load_units_file(const std::filesystem::path& path) {
  try {
    return units_file_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<ChangeRecord> completed_only(const std::vector<ChangeRecord>& records,
                                         const std::vector<SessionSummary>& sessions) {
  std::set<std::string> incomplete;
  for (const auto& s : sessions) {
    if (!s.completed) incomplete.insert(s.session_id);
  }
  std::vector<ChangeRecord> out;
  for (const auto& r : records) {
    if (!incomplete.count(r.session_id)) out.push_back(r);
  }
  return out;
}

ChangedFraction changed_fraction(const std::vector<ChangeRecord>& records,
                                 const std::vector<SessionSummary>& sessions) {
  ChangedFraction out;
  std::set<std::string> completed;
  for (const auto& s : sessions) {
    if (!s.completed) continue;
    completed.insert(s.session_id);
    out.unit_total += s.unit_total;
  }
  std::set<std::tuple<std::string, std::string, std::string>> changed;
  for (const auto& r : records) {
    if (!r.categories.empty() && completed.count(r.session_id)) {
      changed.emplace(r.session_id, r.statement_id, r.unit_id);
    }
  }
  out.changed_units = static_cast<std::int64_t>(changed.size());
  return out;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

}  // namespace gramtrans
