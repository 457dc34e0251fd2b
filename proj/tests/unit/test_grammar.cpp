#include <random>
#include <set>

#include "doctest.h"
#include "gramtrans/grammar.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gramtrans;

namespace {

GrammarUnit unit(PartOfSpeech pos, FeatureSet f, Locale locale = Locale::de_DE) {
  GrammarUnit u;
  u.id = "u";
  u.locale = locale;
  u.pos = pos;
  u.features = std::move(f);
  return u;
}

}  // namespace

TEST_CASE("legality matrix matches the transcribed table") {
  for (auto f : kAllFeatures) {
    for (auto pos : kAllPartsOfSpeech) {
      CHECK_MESSAGE(is_legal(f, pos) == oracles::legal(std::string(to_string(f)), pos),
                    to_string(f) << " on " << to_string(pos));
    }
  }
}

TEST_CASE("validate_unit examples") {
  FeatureSet samstag;
  samstag.lemma = "Samstag";
  samstag.grammatical_case = Case::dative;
  samstag.determiner = Determiner::definite;
  samstag.preposition = "an";
  CHECK(validate_unit(unit(PartOfSpeech::noun, samstag)).empty());

  FeatureSet verb;
  verb.lemma = "gewinnen";
  verb.grammatical_case = Case::genitive;
  auto report = validate_unit(unit(PartOfSpeech::verb, verb));
  REQUIRE(report.size() == 1);
  CHECK(report[0].feature == Feature::grammatical_case);
  CHECK(report[0].message == "case illegal on verb");

  for (auto pos : kAllPartsOfSpeech) {
    CHECK(validate_unit(unit(pos, FeatureSet{.lemma = "x"})).empty());
  }
}

TEST_CASE("one violation per illegal pair") {
  FeatureSet f;
  f.lemma = "x";
  f.tense = Tense::past;
  f.person = Person::first;
  f.pronoun_type = PronounType::personal;
  f.adjectives = {"big"};
  CHECK(validate_unit(unit(PartOfSpeech::noun, f)).size() == 3);
  CHECK(validate_unit(unit(PartOfSpeech::pronoun, f)).size() == 3);
  CHECK(validate_unit(unit(PartOfSpeech::verb, f)).size() == 2);
}

TEST_CASE("locale case inventories and dual") {
  FeatureSet f;
  f.lemma = "x";
  f.grammatical_case = Case::locative;
  CHECK_FALSE(validate_unit(unit(PartOfSpeech::noun, f, Locale::de_DE)).empty());
  CHECK(validate_unit(unit(PartOfSpeech::noun, f, Locale::sl_SI)).empty());
  CHECK(validate_unit(unit(PartOfSpeech::noun, f, Locale::pl_PL)).empty());
  f.grammatical_case = Case::vocative;
  CHECK_FALSE(validate_unit(unit(PartOfSpeech::noun, f, Locale::sl_SI)).empty());
  f.grammatical_case = Case::nominative;
  CHECK_FALSE(validate_unit(unit(PartOfSpeech::noun, f, Locale::zh_CN)).empty());

  FeatureSet d;
  d.lemma = "x";
  d.number = Number::dual;
  CHECK(validate_unit(unit(PartOfSpeech::noun, d, Locale::sl_SI)).empty());
  for (auto l : kAllLocales) {
    if (l != Locale::sl_SI) CHECK_FALSE(validate_unit(unit(PartOfSpeech::noun, d, l)).empty());
  }
}

TEST_CASE("head_index must address a segment") {
  FeatureSet f;
  f.lemma = "Double-Double-Ergebnis";
  f.head_index = 2;
  CHECK(validate_unit(unit(PartOfSpeech::noun, f)).empty());
  f.head_index = 3;
  CHECK_FALSE(validate_unit(unit(PartOfSpeech::noun, f)).empty());
  f.lemma = "home team";
  f.head_index = 1;
  CHECK(validate_unit(unit(PartOfSpeech::noun, f)).empty());
  f.lemma = "trailing-";
  f.head_index = 1;
  CHECK_FALSE(validate_unit(unit(PartOfSpeech::noun, f)).empty());
}

TEST_CASE("compound segments") {
  CHECK(split_compound("Double-Double-Ergebnis") == std::vector<std::string>{"Double", "Double", "Ergebnis"});
  CHECK(split_compound("home team") == std::vector<std::string>{"home", "team"});
  CHECK(replace_segment("Double-Double-Ergebnis", 2, "Ergebnissen") == "Double-Double-Ergebnissen");
  CHECK(replace_segment("home team", 1, "teams") == "home teams");
  CHECK(replace_segment("a b-c", 0, "X") == "X b-c");
}

// 10,000 random assignments over locale-legal values, so that the only
// possible violations are matrix violations.
TEST_CASE("property: validate_unit is empty iff every set feature is legal") {
  std::mt19937 rng(20240611);
  auto coin = [&] { return std::uniform_int_distribution<int>(0, 2)(rng) == 0; };
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  int accepted = 0, rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto pos = kAllPartsOfSpeech[pick(3)];
    FeatureSet f;
    f.lemma = "lemma";
    std::vector<std::string> set{"lemma"};
    if (coin()) f.grammatical_case = kAllCases[pick(4)], set.push_back("case");
    if (coin()) f.number = pick(2) ? Number::plural : Number::singular, set.push_back("number");
    if (coin()) f.tense = static_cast<Tense>(pick(3)), set.push_back("tense");
    if (coin()) f.person = static_cast<Person>(pick(3)), set.push_back("person");
    if (coin()) f.gender = static_cast<Gender>(pick(4)), set.push_back("gender");
    if (coin()) f.preposition = "an", set.push_back("preposition");
    if (coin()) f.adjectives = {"gross"}, set.push_back("adjectives");
    if (coin()) f.numerals = Numeral{pick(30), NumeralType::cardinal}, set.push_back("numerals");
    if (coin()) f.conjunctions = {"und"}, set.push_back("conjunctions");
    if (coin()) f.determiner = static_cast<Determiner>(pick(3)), set.push_back("determiner");
    if (coin()) f.pronoun_type = static_cast<PronounType>(pick(5)), set.push_back("pronoun_type");

    bool expected = true;
    for (const auto& name : set) expected = expected && oracles::legal(name, pos);
    const bool valid = validate_unit(unit(pos, f, pick(2) ? Locale::de_DE : Locale::en_US)).empty();
    REQUIRE(valid == expected);
    (valid ? accepted : rejected)++;
  }
  CHECK(accepted > 500);
  CHECK(rejected > 500);
}

TEST_CASE("resolve_agreement") {
  GrammarUnit u = unit(PartOfSpeech::noun, FeatureSet{.lemma = "goal"});
  CHECK_THROWS_AS(resolve_agreement(u, 1, Locale::en_US), PreconditionViolation);
  u.agreement_source = "goals";
  CHECK(resolve_agreement(u, 1, Locale::en_US) == Number::singular);
  CHECK(resolve_agreement(u, 8, Locale::de_DE) == Number::plural);
  CHECK(resolve_agreement(u, 0, Locale::de_DE) == Number::plural);
  CHECK(resolve_agreement(u, 2, Locale::sl_SI) == Number::dual);

  // Slovenian count forms for 1..5, written out by hand.
  const std::vector<std::pair<Number, bool>> sl = {
      {Number::singular, false}, {Number::dual, false}, {Number::plural, false},
      {Number::plural, false},   {Number::plural, true}};
  for (int n = 1; n <= 5; ++n) {
    const auto cf = count_form(n, Locale::sl_SI);
    CHECK(cf.number == sl[n - 1].first);
    CHECK(cf.genitive_of_quantity == sl[n - 1].second);
  }
}

TEST_CASE("property: dual only for sl-SI") {
  GrammarUnit u = unit(PartOfSpeech::noun, FeatureSet{.lemma = "x"});
  u.agreement_source = "n";
  for (auto l : kAllLocales) {
    for (std::int64_t n = -5; n <= 250; ++n) {
      if (l != Locale::sl_SI) REQUIRE(resolve_agreement(u, n, l) != Number::dual);
    }
  }
}

TEST_CASE("apply_overrides") {
  FeatureSet f;
  f.lemma = "Samstag";
  f.grammatical_case = Case::nominative;
  f.number = Number::singular;
  const GrammarUnit base = unit(PartOfSpeech::noun, f);

  FeatureOverrides o;
  o.grammatical_case = Override<Case>::set(Case::dative);
  const GrammarUnit out = apply_overrides(base, o);
  CHECK(out.features.grammatical_case == Case::dative);
  GrammarUnit expected = base;
  expected.features.grammatical_case = Case::dative;
  CHECK(out == expected);
  CHECK(base.features.grammatical_case == Case::nominative);

  CHECK(apply_overrides(base, FeatureOverrides{}) == base);
  CHECK(apply_overrides(out, o) == out);

  FeatureOverrides tense;
  tense.tense = Override<Tense>::set(Tense::past);
  CHECK_THROWS_AS(apply_overrides(base, tense), IllegalUnit);

  FeatureOverrides clear;
  clear.number = Override<Number>::clear();
  CHECK_FALSE(apply_overrides(base, clear).features.number.has_value());
  FeatureOverrides no_lemma;
  no_lemma.lemma = Override<std::string>::clear();
  CHECK_THROWS_AS(apply_overrides(base, no_lemma), PreconditionViolation);
}

TEST_CASE("property: apply_overrides is idempotent") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    FeatureSet f;
    f.lemma = "Punkt";
    GrammarUnit base = unit(PartOfSpeech::noun, f);
    FeatureOverrides o;
    if (rng() % 2) o.grammatical_case = Override<Case>::set(kAllCases[rng() % 4]);
    if (rng() % 2) o.number = Override<Number>::set(rng() % 2 ? Number::plural : Number::singular);
    if (rng() % 2) o.determiner = Override<Determiner>::set(static_cast<Determiner>(rng() % 3));
    if (rng() % 3 == 0) o.preposition = Override<std::string>::clear();
    const auto once = apply_overrides(base, o);
    REQUIRE(apply_overrides(once, o) == once);
  }
}

TEST_CASE("canonical JSON omits absent optionals") {
  FeatureSet f;
  f.lemma = "Rückpraller";
  f.numerals = Numeral{8, NumeralType::cardinal};
  f.adjectives = {"beeindruckend"};
  f.grammatical_case = Case::dative;
  GrammarUnit u = unit(PartOfSpeech::noun, f);
  u.agreement_source = "best_rebounds";
  const json j = u;
  CHECK(j.dump() ==
        R"({"agreement_source":"best_rebounds","features":{"adjectives":["beeindruckend"],"case":"dative",)"
        R"("lemma":"Rückpraller","numerals":{"numeral_type":"cardinal","value":8}},"id":"u","locale":"de-DE",)"
        R"("pos":"noun"})");
  CHECK(j.get<GrammarUnit>() == u);
  CHECK_FALSE(j["features"].contains("number"));
  CHECK_THROWS_AS(json::parse(R"({"locale":"de-DE","pos":"noun","colour":1})").get<GrammarUnit>(), FormatError);
  CHECK_THROWS_AS(json::parse(R"({"locale":"xx-XX","pos":"noun"})").get<GrammarUnit>(), UnknownLocale);
}

TEST_CASE("overrides JSON: null clears") {
  const auto o = json::parse(R"({"case":"dative","preposition":null})").get<FeatureOverrides>();
  CHECK(o.grammatical_case.sets());
  CHECK(o.preposition.clears());
  CHECK(o.number.keeps());
  CHECK(json(o).dump() == R"({"case":"dative","preposition":null})");
}

TEST_CASE("locale capabilities") {
  CHECK(has_capability(Locale::en_US, Capability::full_realization));
  CHECK(has_capability(Locale::de_DE, Capability::full_realization));
  for (auto l : kAllLocales) {
    CHECK(has_capability(l, Capability::transfer_only));
    CHECK(parse_locale(to_string(l)) == l);
  }
  CHECK_FALSE(has_capability(Locale::zh_CN, Capability::full_realization));
}
