#pragma once

// Grammar units: the per-variable containers of grammatical settings, the
// feature legality matrix per part of speech, count agreement, and
// field-wise overrides.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramtrans/errors.hpp"

namespace gramtrans {

using nlohmann::json;

enum class Locale { en_US, de_DE, es_ES, fr_FR, pl_PL, pt_BR, sl_SI, zh_CN };

inline constexpr std::array<Locale, 8> kAllLocales = {
    Locale::en_US, Locale::de_DE, Locale::es_ES, Locale::fr_FR,
    Locale::pl_PL, Locale::pt_BR, Locale::sl_SI, Locale::zh_CN};

enum class Capability { full_realization, transfer_only };

std::string_view to_string(Locale locale);
Locale parse_locale(std::string_view code);
bool has_capability(Locale locale, Capability capability);

enum class PartOfSpeech { noun, pronoun, verb };
enum class Case { nominative, genitive, dative, accusative, locative, instrumental, vocative };
enum class Number { singular, dual, plural };
enum class Tense { past, present, future };
enum class Person { first, second, third };
enum class Gender { masculine, feminine, neuter, common };
enum class Determiner { definite, indefinite, none };
enum class PronounType { personal, possessive, demonstrative, relative, interrogative };
enum class NumeralType { cardinal, ordinal };

inline constexpr std::array<PartOfSpeech, 3> kAllPartsOfSpeech = {
    PartOfSpeech::noun, PartOfSpeech::pronoun, PartOfSpeech::verb};
inline constexpr std::array<Case, 7> kAllCases = {
    Case::nominative, Case::genitive, Case::dative, Case::accusative,
    Case::locative, Case::instrumental, Case::vocative};

std::string_view to_string(PartOfSpeech v);
std::string_view to_string(Case v);
std::string_view to_string(Number v);
std::string_view to_string(Tense v);
std::string_view to_string(Person v);
std::string_view to_string(Gender v);
std::string_view to_string(Determiner v);
std::string_view to_string(PronounType v);
std::string_view to_string(NumeralType v);

// Parsers for the canonical lowercase names; throw FormatError.
PartOfSpeech parse_pos(std::string_view s);
Case parse_case(std::string_view s);
Number parse_number(std::string_view s);
Tense parse_tense(std::string_view s);
Person parse_person(std::string_view s);
Gender parse_gender(std::string_view s);
Determiner parse_determiner(std::string_view s);
PronounType parse_pronoun_type(std::string_view s);
NumeralType parse_numeral_type(std::string_view s);

// Cases a locale's grammar distinguishes. zh-CN has none.
std::span<const Case> legal_cases(Locale locale);
bool has_dual(Locale locale);

struct Numeral {
  std::int64_t value = 0;
  NumeralType type = NumeralType::cardinal;
  bool operator==(const Numeral&) const = default;
};

struct FeatureSet {
  std::string lemma;
  std::optional<Case> grammatical_case;
  std::optional<Number> number;
  std::optional<Tense> tense;
  std::optional<Person> person;
  std::optional<Gender> gender;
  std::optional<std::string> preposition;
  std::vector<std::string> adjectives;
  std::optional<Numeral> numerals;
  std::vector<std::string> conjunctions;
  std::optional<Determiner> determiner;
  std::optional<PronounType> pronoun_type;
  // Index into split_compound(lemma).
  std::optional<std::size_t> head_index;

  bool operator==(const FeatureSet&) const = default;
};

// Rows of the feature-per-part-of-speech matrix.
enum class Feature {
  lemma,
  grammatical_case,
  number,
  tense,
  person,
  gender,
  preposition,
  adjectives,
  numerals,
  conjunctions,
  determiner,
  pronoun_type,
};

inline constexpr std::array<Feature, 12> kAllFeatures = {
    Feature::lemma,      Feature::grammatical_case, Feature::number,
    Feature::tense,      Feature::person,           Feature::gender,
    Feature::preposition, Feature::adjectives,      Feature::numerals,
    Feature::conjunctions, Feature::determiner,     Feature::pronoun_type};

std::string_view to_string(Feature f);
bool is_legal(Feature feature, PartOfSpeech pos);
bool is_set(const FeatureSet& features, Feature feature);

// Segments of a compound lemma, split jointly on '-' and ' '.
std::vector<std::string> split_compound(std::string_view lemma);
// Rebuilds the lemma with segment `index` replaced, keeping the delimiters.
std::string replace_segment(std::string_view lemma, std::size_t index, std::string_view replacement);

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - start; }
  bool operator==(const Span&) const = default;
};

struct GrammarUnit {
  std::string id;
  Locale locale = Locale::en_US;
  PartOfSpeech pos = PartOfSpeech::noun;
  FeatureSet features;
  // Data field whose runtime value drives `number`.
  std::optional<std::string> agreement_source;
  std::optional<Span> span;

  bool operator==(const GrammarUnit&) const = default;
};

struct Violation {
  Feature feature;
  std::string message;
  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_unit(const GrammarUnit& unit);

class IllegalUnit : public Error {
 public:
  IllegalUnit(std::string unit_id, ValidationReport report);
  const std::string& unit_id() const { return unit_id_; }
  const ValidationReport& report() const { return report_; }

 private:
  std::string unit_id_;
  ValidationReport report_;
};

struct CountForm {
  Number number = Number::plural;
  // Set where the language governs a genitive plural after the numeral
  // (Slavic "5 and up"). Recorded, not realized.
  bool genitive_of_quantity = false;
  bool operator==(const CountForm&) const = default;
};

CountForm count_form(std::int64_t count, Locale locale);

// Grammatical number for a bound count. Throws PreconditionViolation when
// the unit has no agreement source.
Number resolve_agreement(const GrammarUnit& unit, std::int64_t data_value, Locale locale);

// Field-level edit: leave the field alone, clear it, or set a new value.
template <class T>
class Override {
 public:
  Override() = default;
  static Override set(T value) {
    Override o;
    o.action_ = Action::set;
    o.value_ = std::move(value);
    return o;
  }
  static Override clear() {
    Override o;
    o.action_ = Action::clear;
    return o;
  }

  bool keeps() const { return action_ == Action::keep; }
  bool clears() const { return action_ == Action::clear; }
  bool sets() const { return action_ == Action::set; }
  const T& value() const { return *value_; }

  void apply_to(std::optional<T>& field) const {
    if (action_ == Action::set) field = *value_;
    if (action_ == Action::clear) field.reset();
  }

  bool operator==(const Override&) const = default;

 private:
  enum class Action { keep, clear, set };
  Action action_ = Action::keep;
  std::optional<T> value_;
};

// A partial FeatureSet.
struct FeatureOverrides {
  Override<std::string> lemma;
  Override<Case> grammatical_case;
  Override<Number> number;
  Override<Tense> tense;
  Override<Person> person;
  Override<Gender> gender;
  Override<std::string> preposition;
  Override<std::vector<std::string>> adjectives;
  Override<Numeral> numerals;
  Override<std::vector<std::string>> conjunctions;
  Override<Determiner> determiner;
  Override<PronounType> pronoun_type;
  Override<std::size_t> head_index;

  bool empty() const;
  bool operator==(const FeatureOverrides&) const = default;
};

// Field-wise replacement. Throws IllegalUnit when the result breaks the
// legality matrix, and PreconditionViolation when the lemma is cleared.
GrammarUnit apply_overrides(const GrammarUnit& base, const FeatureOverrides& overrides);

// Canonical JSON. Absent optionals and empty lists are omitted.
void to_json(json& j, const Numeral& n);
void from_json(const json& j, Numeral& n);
void to_json(json& j, const FeatureSet& f);
void from_json(const json& j, FeatureSet& f);
void to_json(json& j, const GrammarUnit& u);
void from_json(const json& j, GrammarUnit& u);
void to_json(json& j, const Violation& v);
// Overrides use the FeatureSet field names; null clears a field.
void to_json(json& j, const FeatureOverrides& o);
void from_json(const json& j, FeatureOverrides& o);

}  // namespace gramtrans
