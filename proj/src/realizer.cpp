#include "gramtrans/realizer.hpp"

#include <initializer_list>

#include "gramtrans/formatting.hpp"
#include "gramtrans/text.hpp"

namespace gramtrans {

namespace {

// English nouns do not mark case: a missing (case, number) cell falls back
// to the nominative of the same number. No other locale falls back.
std::string nominal_form(const LexiconEntry& entry, Case c, Number n) {
  if (entry.invariant()) return entry.lemma;
  const std::string key = noun_key(c, n);
  if (auto f = entry.form(key)) return *f;
  if (entry.locale == Locale::en_US) {
    if (auto f = entry.form(noun_key(Case::nominative, n))) return *f;
    if (n == Number::plural && entry.plural_stem) return *entry.plural_stem;
  }
  throw MissingInflection(entry.lemma, key);
}

// First hit among `keys`; en-US also tries the nominative variants.
std::string agreeing_form(const LexiconEntry& entry, std::initializer_list<std::string> keys,
                          std::initializer_list<std::string> english_fallbacks) {
  if (entry.invariant()) return entry.lemma;
  for (const auto& key : keys) {
    if (auto f = entry.form(key)) return *f;
  }
  if (entry.locale == Locale::en_US) {
    for (const auto& key : english_fallbacks) {
      if (auto f = entry.form(key)) return *f;
    }
  }
  throw MissingInflection(entry.lemma, *keys.begin());
}

std::optional<Declension> declension_for(Locale locale, std::optional<Determiner> det) {
  if (locale != Locale::de_DE) return std::nullopt;
  if (det == Determiner::definite) return Declension::weak;
  if (det == Determiner::indefinite) return Declension::mixed;
  return Declension::strong;
}

void require_valid(const GrammarUnit& unit, const RealizationContext& ctx) {
  if (auto report = validate_unit(unit); !report.empty()) throw IllegalUnit(unit.id, std::move(report));
  if (unit.locale != ctx.locale()) {
    throw PreconditionViolation("unit '" + unit.id + "' is " + std::string(to_string(unit.locale)) +
                                " but the context realizes " + std::string(to_string(ctx.locale())));
  }
}

Number effective_number(const FeatureSet& f, Locale locale, std::optional<std::int64_t> count) {
  if (count) return count_form(*count, locale).number;
  return f.number.value_or(Number::singular);
}

std::string join_words(const std::vector<std::string>& words, std::string_view separator) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out += separator;
    out += w;
  }
  return out;
}

}  // namespace

std::string inflect_noun(const LexiconEntry& entry, const FeatureSet& features) {
  if (entry.pos != WordClass::noun && entry.pos != WordClass::pronoun) {
    throw PreconditionViolation("inflect_noun needs a noun entry, got '" + entry.lemma + "'");
  }
  const std::string form = nominal_form(entry, features.grammatical_case.value_or(Case::nominative),
                                        features.number.value_or(Number::singular));
  if (features.head_index) return replace_segment(features.lemma, *features.head_index, form);
  return form;
}

std::string realize_np(const GrammarUnit& unit, const RealizationContext& ctx, std::optional<std::int64_t> count,
                       HeadSource head) {
  if (unit.pos == PartOfSpeech::verb) {
    throw PreconditionViolation("realize_np called on verb unit '" + unit.id + "'");
  }
  require_valid(unit, ctx);
  const FeatureSet& f = unit.features;
  const Locale locale = ctx.locale();
  const Lexicon& lex = ctx.lexicon();
  const Case c = f.grammatical_case.value_or(Case::nominative);
  const Number n = effective_number(f, locale, count);

  std::string numeral;
  if (f.numerals) {
    const std::int64_t value = count.value_or(f.numerals->value);
    numeral = f.numerals->type == NumeralType::ordinal ? format_ordinal(value, locale) : format_cardinal(value);
  }

  if (locale == Locale::zh_CN) {
    return f.preposition.value_or("") + numeral + f.lemma;
  }

  FeatureSet inflected = f;
  inflected.grammatical_case = c;
  inflected.number = n;

  if (unit.pos == PartOfSpeech::pronoun) {
    std::string form = f.lemma;
    if (head == HeadSource::lexicon) {
      const LexiconEntry* entry = lex.find(WordClass::pronoun, f.lemma);
      if (!entry) throw MissingInflection(f.lemma, noun_key(c, n));
      form = inflect_noun(*entry, inflected);
    }
    return join_words({f.preposition.value_or(""), form}, " ");
  }

  std::optional<Gender> gender = f.gender;
  std::string noun;
  if (head == HeadSource::verbatim) {
    noun = f.lemma;
  } else {
    std::string head_lemma = f.lemma;
    if (f.head_index) head_lemma = split_compound(f.lemma)[*f.head_index];
    const LexiconEntry* entry = lex.find(WordClass::noun, head_lemma);
    if (!entry) throw MissingInflection(f.lemma, noun_key(c, n));
    if (entry->gender) gender = entry->gender;
    noun = inflect_noun(*entry, inflected);
  }

  std::string determiner;
  if (f.determiner && *f.determiner != Determiner::none) {
    const std::string lemma(to_string(*f.determiner));
    const std::string key = determiner_key(c, n, gender);
    const LexiconEntry* entry = lex.find(WordClass::determiner, lemma);
    if (!entry) throw MissingInflection(lemma, key);
    determiner = agreeing_form(*entry, {key, determiner_key(c, n, std::nullopt)},
                               {determiner_key(Case::nominative, n, gender),
                                determiner_key(Case::nominative, n, std::nullopt)});
  }

  std::vector<std::string> adjectives;
  const auto decl = declension_for(locale, f.determiner);
  for (const auto& lemma : f.adjectives) {
    const std::string key = adjective_key(decl, c, n, gender);
    const LexiconEntry* entry = lex.find(WordClass::adjective, lemma);
    if (!entry) throw MissingInflection(lemma, key);
    adjectives.push_back(agreeing_form(*entry, {key, adjective_key(decl, c, n, std::nullopt)},
                                       {adjective_key(decl, Case::nominative, n, gender),
                                        adjective_key(decl, Case::nominative, n, std::nullopt)}));
  }

  std::string preposition = f.preposition.value_or("");
  if (!preposition.empty() && !determiner.empty()) {
    if (const auto* rule = ctx.contraction_for(preposition, determiner)) {
      preposition = rule->contracted;
      determiner.clear();
    }
  }

  std::vector<std::string> words{preposition, determiner, numeral};
  words.insert(words.end(), adjectives.begin(), adjectives.end());
  words.push_back(noun);
  return join_words(words, " ");
}

std::string realize_verb(const GrammarUnit& unit, const RealizationContext& ctx, std::optional<std::int64_t> count) {
  if (unit.pos != PartOfSpeech::verb) {
    throw PreconditionViolation("realize_verb called on non-verb unit '" + unit.id + "'");
  }
  require_valid(unit, ctx);
  const FeatureSet& f = unit.features;
  if (ctx.locale() == Locale::zh_CN) return f.lemma;
  const std::string key = verb_key(f.tense.value_or(Tense::present), f.person.value_or(Person::third),
                                   effective_number(f, ctx.locale(), count));
  const LexiconEntry* entry = ctx.lexicon().find(WordClass::verb, f.lemma);
  if (!entry) throw MissingInflection(f.lemma, key);
  if (entry->invariant()) return entry->lemma;
  if (auto form = entry->form(key)) return *form;
  throw MissingInflection(f.lemma, key);
}

std::string realize_unit(const GrammarUnit& unit, const RealizationContext& ctx, const RealizeOptions& options) {
  std::string out = unit.pos == PartOfSpeech::verb ? realize_verb(unit, ctx, options.count)
                                                   : realize_np(unit, ctx, options.count, options.head);
  return options.sentence_initial ? text::to_upper_first(out) : out;
}

}  // namespace gramtrans
