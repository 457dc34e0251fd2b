#include "gramtrans/grammar.hpp"

#include <algorithm>
#include <cstdlib>

namespace gramtrans {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw FormatError(std::string("invalid ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 8> kLocaleNames = {
    "en-US", "de-DE", "es-ES", "fr-FR", "pl-PL", "pt-BR", "sl-SI", "zh-CN"};
constexpr std::array<std::string_view, 3> kPosNames = {"noun", "pronoun", "verb"};
constexpr std::array<std::string_view, 7> kCaseNames = {
    "nominative", "genitive", "dative", "accusative", "locative", "instrumental", "vocative"};
constexpr std::array<std::string_view, 3> kNumberNames = {"singular", "dual", "plural"};
constexpr std::array<std::string_view, 3> kTenseNames = {"past", "present", "future"};
constexpr std::array<std::string_view, 3> kPersonNames = {"first", "second", "third"};
constexpr std::array<std::string_view, 4> kGenderNames = {"masculine", "feminine", "neuter", "common"};
constexpr std::array<std::string_view, 3> kDeterminerNames = {"definite", "indefinite", "none"};
constexpr std::array<std::string_view, 5> kPronounTypeNames = {
    "personal", "possessive", "demonstrative", "relative", "interrogative"};
constexpr std::array<std::string_view, 2> kNumeralTypeNames = {"cardinal", "ordinal"};
constexpr std::array<std::string_view, 12> kFeatureNames = {
    "lemma",      "case",      "number",     "tense",        "person",     "gender",
    "preposition", "adjectives", "numerals", "conjunctions", "determiner", "pronoun_type"};

constexpr Case kGermanCases[] = {Case::nominative, Case::genitive, Case::dative, Case::accusative};
constexpr Case kEnglishCases[] = {Case::nominative, Case::genitive, Case::dative, Case::accusative};
// Romance nouns are caseless; the clitic pronouns keep three forms.
constexpr Case kRomanceCases[] = {Case::nominative, Case::dative, Case::accusative};
constexpr Case kSlovenianCases[] = {Case::nominative, Case::genitive, Case::dative,
                                    Case::accusative, Case::locative, Case::instrumental};

// Table of legal (feature, pos) cells: noun, pronoun, verb.
constexpr bool kLegal[12][3] = {
    {true, true, true},     // lemma
    {true, true, false},    // case
    {true, true, true},     // number
    {false, false, true},   // tense
    {false, false, true},   // person
    {true, true, true},     // gender
    {true, true, false},    // preposition
    {true, false, false},   // adjectives
    {true, false, false},   // numerals
    {true, false, false},   // conjunctions
    {true, false, false},   // determiner
    {false, true, false},   // pronoun_type
};

bool is_delimiter(char c) { return c == '-' || c == ' '; }

}  // namespace

std::string_view to_string(Locale v) { return kLocaleNames[static_cast<int>(v)]; }
std::string_view to_string(PartOfSpeech v) { return kPosNames[static_cast<int>(v)]; }
std::string_view to_string(Case v) { return kCaseNames[static_cast<int>(v)]; }
std::string_view to_string(Number v) { return kNumberNames[static_cast<int>(v)]; }
std::string_view to_string(Tense v) { return kTenseNames[static_cast<int>(v)]; }
std::string_view to_string(Person v) { return kPersonNames[static_cast<int>(v)]; }
std::string_view to_string(Gender v) { return kGenderNames[static_cast<int>(v)]; }
std::string_view to_string(Determiner v) { return kDeterminerNames[static_cast<int>(v)]; }
std::string_view to_string(PronounType v) { return kPronounTypeNames[static_cast<int>(v)]; }
std::string_view to_string(NumeralType v) { return kNumeralTypeNames[static_cast<int>(v)]; }
std::string_view to_string(Feature v) { return kFeatureNames[static_cast<int>(v)]; }

Locale parse_locale(std::string_view code) {
  for (std::size_t i = 0; i < kLocaleNames.size(); ++i) {
    if (kLocaleNames[i] == code) return static_cast<Locale>(i);
  }
  throw UnknownLocale(std::string(code));
}

PartOfSpeech parse_pos(std::string_view s) { return parse_enum<PartOfSpeech>(s, kPosNames, "part of speech"); }
Case parse_case(std::string_view s) { return parse_enum<Case>(s, kCaseNames, "case"); }
Number parse_number(std::string_view s) { return parse_enum<Number>(s, kNumberNames, "number"); }
Tense parse_tense(std::string_view s) { return parse_enum<Tense>(s, kTenseNames, "tense"); }
Person parse_person(std::string_view s) { return parse_enum<Person>(s, kPersonNames, "person"); }
Gender parse_gender(std::string_view s) { return parse_enum<Gender>(s, kGenderNames, "gender"); }
Determiner parse_determiner(std::string_view s) {
  return parse_enum<Determiner>(s, kDeterminerNames, "determiner");
}
PronounType parse_pronoun_type(std::string_view s) {
  return parse_enum<PronounType>(s, kPronounTypeNames, "pronoun type");
}
NumeralType parse_numeral_type(std::string_view s) {
  return parse_enum<NumeralType>(s, kNumeralTypeNames, "numeral type");
}

bool has_capability(Locale locale, Capability capability) {
  if (capability == Capability::transfer_only) return true;
  return locale == Locale::en_US || locale == Locale::de_DE;
}

std::span<const Case> legal_cases(Locale locale) {
  switch (locale) {
    case Locale::en_US: return kEnglishCases;
    case Locale::de_DE: return kGermanCases;
    case Locale::es_ES:
    case Locale::fr_FR:
    case Locale::pt_BR: return kRomanceCases;
    case Locale::pl_PL: return kAllCases;
    case Locale::sl_SI: return kSlovenianCases;
    case Locale::zh_CN: return {};
  }
  return {};
}

bool has_dual(Locale locale) { return locale == Locale::sl_SI; }

bool is_legal(Feature feature, PartOfSpeech pos) {
  return kLegal[static_cast<int>(feature)][static_cast<int>(pos)];
}

bool is_set(const FeatureSet& f, Feature feature) {
  switch (feature) {
    case Feature::lemma: return !f.lemma.empty();
    case Feature::grammatical_case: return f.grammatical_case.has_value();
    case Feature::number: return f.number.has_value();
    case Feature::tense: return f.tense.has_value();
    case Feature::person: return f.person.has_value();
    case Feature::gender: return f.gender.has_value();
    case Feature::preposition: return f.preposition.has_value();
    case Feature::adjectives: return !f.adjectives.empty();
    case Feature::numerals: return f.numerals.has_value();
    case Feature::conjunctions: return !f.conjunctions.empty();
    case Feature::determiner: return f.determiner.has_value();
    case Feature::pronoun_type: return f.pronoun_type.has_value();
  }
  return false;
}

std::vector<std::string> split_compound(std::string_view lemma) {
  std::vector<std::string> segments;
  std::string current;
  for (char c : lemma) {
    if (is_delimiter(c)) {
      segments.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  segments.push_back(std::move(current));
  return segments;
}

std::string replace_segment(std::string_view lemma, std::size_t index, std::string_view replacement) {
  std::string out;
  std::size_t segment = 0;
  bool emitted = false;
  auto emit = [&] {
    if (segment == index && !emitted) {
      out += replacement;
      emitted = true;
    }
  };
  for (char c : lemma) {
    if (is_delimiter(c)) {
      emit();
      ++segment;
      out += c;
    } else if (segment == index) {
      emit();
    } else {
      out += c;
    }
  }
  emit();
  return out;
}

ValidationReport validate_unit(const GrammarUnit& unit) {
  ValidationReport report;
  const FeatureSet& f = unit.features;
  for (Feature feature : kAllFeatures) {
    if (feature == Feature::lemma || !is_set(f, feature)) continue;
    if (!is_legal(feature, unit.pos)) {
      report.push_back({feature, std::string(to_string(feature)) + " illegal on " +
                                     std::string(to_string(unit.pos))});
    }
  }
  if (f.grammatical_case && is_legal(Feature::grammatical_case, unit.pos)) {
    auto cases = legal_cases(unit.locale);
    if (std::find(cases.begin(), cases.end(), *f.grammatical_case) == cases.end()) {
      report.push_back({Feature::grammatical_case,
                        "case " + std::string(to_string(*f.grammatical_case)) + " not available in " +
                            std::string(to_string(unit.locale))});
    }
  }
  if (f.number == Number::dual && !has_dual(unit.locale)) {
    report.push_back({Feature::number, "dual not available in " + std::string(to_string(unit.locale))});
  }
  if (f.head_index) {
    auto segments = split_compound(f.lemma);
    if (*f.head_index >= segments.size() || segments[*f.head_index].empty()) {
      report.push_back({Feature::lemma, "head_index " + std::to_string(*f.head_index) +
                                            " does not address a segment of '" + f.lemma + "'"});
    }
  }
  return report;
}

namespace {
std::string describe(const std::string& unit_id, const ValidationReport& report) {
  std::string msg = "illegal unit '" + unit_id + "'";
  for (const auto& v : report) msg += "; " + v.message;
  return msg;
}
}  // namespace

IllegalUnit::IllegalUnit(std::string unit_id, ValidationReport report)
    : Error(describe(unit_id, report)), unit_id_(std::move(unit_id)), report_(std::move(report)) {}

CountForm count_form(std::int64_t count, Locale locale) {
  const std::int64_t n = count < 0 ? -count : count;
  switch (locale) {
    case Locale::sl_SI: {
      const auto tail = n % 100;
      if (tail == 1) return {Number::singular, false};
      if (tail == 2) return {Number::dual, false};
      if (tail == 3 || tail == 4) return {Number::plural, false};
      return {Number::plural, true};
    }
    case Locale::pl_PL: {
      if (n == 1) return {Number::singular, false};
      const auto last = n % 10;
      const auto tens = n % 100;
      if (last >= 2 && last <= 4 && !(tens >= 12 && tens <= 14)) return {Number::plural, false};
      return {Number::plural, true};
    }
    default:
      return {n == 1 ? Number::singular : Number::plural, false};
  }
}

Number resolve_agreement(const GrammarUnit& unit, std::int64_t data_value, Locale locale) {
  if (!unit.agreement_source) {
    throw PreconditionViolation("unit '" + unit.id + "' has no agreement source");
  }
  return count_form(data_value, locale).number;
}

bool FeatureOverrides::empty() const {
  return lemma.keeps() && grammatical_case.keeps() && number.keeps() && tense.keeps() &&
         person.keeps() && gender.keeps() && preposition.keeps() && adjectives.keeps() &&
         numerals.keeps() && conjunctions.keeps() && determiner.keeps() && pronoun_type.keeps() &&
         head_index.keeps();
}

GrammarUnit apply_overrides(const GrammarUnit& base, const FeatureOverrides& o) {
  GrammarUnit out = base;
  FeatureSet& f = out.features;
  if (o.lemma.clears()) throw PreconditionViolation("lemma cannot be cleared");
  if (o.lemma.sets()) f.lemma = o.lemma.value();
  o.grammatical_case.apply_to(f.grammatical_case);
  o.number.apply_to(f.number);
  o.tense.apply_to(f.tense);
  o.person.apply_to(f.person);
  o.gender.apply_to(f.gender);
  o.preposition.apply_to(f.preposition);
  if (o.adjectives.sets()) f.adjectives = o.adjectives.value();
  if (o.adjectives.clears()) f.adjectives.clear();
  o.numerals.apply_to(f.numerals);
  if (o.conjunctions.sets()) f.conjunctions = o.conjunctions.value();
  if (o.conjunctions.clears()) f.conjunctions.clear();
  o.determiner.apply_to(f.determiner);
  o.pronoun_type.apply_to(f.pronoun_type);
  o.head_index.apply_to(f.head_index);
  if (auto report = validate_unit(out); !report.empty()) {
    throw IllegalUnit(out.id, std::move(report));
  }
  return out;
}

// ---- JSON ----------------------------------------------------------------

void to_json(json& j, const Numeral& n) {
  j = json{{"value", n.value}, {"numeral_type", to_string(n.type)}};
}

void from_json(const json& j, Numeral& n) {
  n.value = j.at("value").get<std::int64_t>();
  n.type = j.contains("numeral_type") ? parse_numeral_type(j.at("numeral_type").get<std::string>())
                                      : NumeralType::cardinal;
}

void to_json(json& j, const FeatureSet& f) {
  j = json::object();
  j["lemma"] = f.lemma;
  if (f.grammatical_case) j["case"] = to_string(*f.grammatical_case);
  if (f.number) j["number"] = to_string(*f.number);
  if (f.tense) j["tense"] = to_string(*f.tense);
  if (f.person) j["person"] = to_string(*f.person);
  if (f.gender) j["gender"] = to_string(*f.gender);
  if (f.preposition) j["preposition"] = *f.preposition;
  if (!f.adjectives.empty()) j["adjectives"] = f.adjectives;
  if (f.numerals) j["numerals"] = *f.numerals;
  if (!f.conjunctions.empty()) j["conjunctions"] = f.conjunctions;
  if (f.determiner) j["determiner"] = to_string(*f.determiner);
  if (f.pronoun_type) j["pronoun_type"] = to_string(*f.pronoun_type);
  if (f.head_index) j["head_index"] = *f.head_index;
}

namespace {

void check_keys(const json& j, std::span<const std::string_view> allowed, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw FormatError(std::string("unknown ") + what + " field '" + key + "'");
    }
  }
}

constexpr std::array<std::string_view, 13> kFeatureKeys = {
    "lemma",      "case",     "number",       "tense",      "person",       "gender",    "preposition",
    "adjectives", "numerals", "conjunctions", "determiner", "pronoun_type", "head_index"};

}  // namespace

void from_json(const json& j, FeatureSet& f) {
  check_keys(j, kFeatureKeys, "feature");
  f = FeatureSet{};
  f.lemma = j.value("lemma", std::string{});
  if (j.contains("case")) f.grammatical_case = parse_case(j["case"].get<std::string>());
  if (j.contains("number")) f.number = parse_number(j["number"].get<std::string>());
  if (j.contains("tense")) f.tense = parse_tense(j["tense"].get<std::string>());
  if (j.contains("person")) f.person = parse_person(j["person"].get<std::string>());
  if (j.contains("gender")) f.gender = parse_gender(j["gender"].get<std::string>());
  if (j.contains("preposition")) f.preposition = j["preposition"].get<std::string>();
  if (j.contains("adjectives")) f.adjectives = j["adjectives"].get<std::vector<std::string>>();
  if (j.contains("numerals")) f.numerals = j["numerals"].get<Numeral>();
  if (j.contains("conjunctions")) f.conjunctions = j["conjunctions"].get<std::vector<std::string>>();
  if (j.contains("determiner")) f.determiner = parse_determiner(j["determiner"].get<std::string>());
  if (j.contains("pronoun_type")) f.pronoun_type = parse_pronoun_type(j["pronoun_type"].get<std::string>());
  if (j.contains("head_index")) f.head_index = j["head_index"].get<std::size_t>();
}

void to_json(json& j, const GrammarUnit& u) {
  j = json{{"id", u.id},
           {"locale", to_string(u.locale)},
           {"pos", to_string(u.pos)},
           {"features", u.features}};
  if (u.agreement_source) j["agreement_source"] = *u.agreement_source;
  if (u.span) j["span"] = json::array({u.span->start, u.span->end});
}

void from_json(const json& j, GrammarUnit& u) {
  static constexpr std::array<std::string_view, 6> kUnitKeys = {"id", "locale", "pos", "features", "agreement_source", "span"};
  check_keys(j, kUnitKeys, "grammar unit");
  u = GrammarUnit{};
  u.id = j.value("id", std::string{});
  u.locale = parse_locale(j.at("locale").get<std::string>());
  u.pos = parse_pos(j.at("pos").get<std::string>());
  if (j.contains("features")) u.features = j["features"].get<FeatureSet>();
  if (j.contains("agreement_source")) u.agreement_source = j["agreement_source"].get<std::string>();
  if (j.contains("span")) {
    const auto& s = j["span"];
    u.span = Span{s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()};
  }
}

void to_json(json& j, const Violation& v) {
  j = json{{"feature", to_string(v.feature)}, {"message", v.message}};
}

namespace {

template <class T, class Fn>
void write_override(json& j, const char* key, const Override<T>& o, Fn&& encode) {
  if (o.clears()) j[key] = nullptr;
  if (o.sets()) j[key] = encode(o.value());
}

template <class T, class Fn>
void read_override(const json& j, const char* key, Override<T>& o, Fn&& decode) {
  if (!j.contains(key)) return;
  if (j[key].is_null()) {
    o = Override<T>::clear();
  } else {
    o = Override<T>::set(decode(j[key]));
  }
}

}  // namespace

void to_json(json& j, const FeatureOverrides& o) {
  j = json::object();
  auto same = [](const auto& v) { return json(v); };
  auto name = [](const auto& v) { return json(to_string(v)); };
  write_override(j, "lemma", o.lemma, same);
  write_override(j, "case", o.grammatical_case, name);
  write_override(j, "number", o.number, name);
  write_override(j, "tense", o.tense, name);
  write_override(j, "person", o.person, name);
  write_override(j, "gender", o.gender, name);
  write_override(j, "preposition", o.preposition, same);
  write_override(j, "adjectives", o.adjectives, same);
  write_override(j, "numerals", o.numerals, same);
  write_override(j, "conjunctions", o.conjunctions, same);
  write_override(j, "determiner", o.determiner, name);
  write_override(j, "pronoun_type", o.pronoun_type, name);
  write_override(j, "head_index", o.head_index, same);
}

void from_json(const json& j, FeatureOverrides& o) {
  check_keys(j, kFeatureKeys, "feature override");
  o = FeatureOverrides{};
  auto str = [](const json& v) { return v.get<std::string>(); };
  auto strs = [](const json& v) { return v.get<std::vector<std::string>>(); };
  read_override(j, "lemma", o.lemma, str);
  read_override(j, "case", o.grammatical_case, [](const json& v) { return parse_case(v.get<std::string>()); });
  read_override(j, "number", o.number, [](const json& v) { return parse_number(v.get<std::string>()); });
  read_override(j, "tense", o.tense, [](const json& v) { return parse_tense(v.get<std::string>()); });
  read_override(j, "person", o.person, [](const json& v) { return parse_person(v.get<std::string>()); });
  read_override(j, "gender", o.gender, [](const json& v) { return parse_gender(v.get<std::string>()); });
  read_override(j, "preposition", o.preposition, str);
  read_override(j, "adjectives", o.adjectives, strs);
  read_override(j, "numerals", o.numerals, [](const json& v) { return v.get<Numeral>(); });
  read_override(j, "conjunctions", o.conjunctions, strs);
  read_override(j, "determiner", o.determiner,
                [](const json& v) { return parse_determiner(v.get<std::string>()); });
  read_override(j, "pronoun_type", o.pronoun_type,
                [](const json& v) { return parse_pronoun_type(v.get<std::string>()); });
  read_override(j, "head_index", o.head_index, [](const json& v) { return v.get<std::size_t>(); });
}

}  // namespace gramtrans
