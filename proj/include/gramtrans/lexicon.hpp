#pragma once

// Explicit inflection tables. Every surface form the realizer can emit is
// enumerated in a lexicon file; nothing is derived by stemming rules.
//
// Inflection-table key grammar (dot separated, lowercase):
//
//   noun, pronoun   <case>.<number>                  "dat.pl"
//   verb            <tense>.<person>.<number>        "past.3.sg"
//   determiner      <case>.<number>[.<gender>]       "dat.sg.m"
//   adjective       [<declension>.]<case>.<number>[.<gender>]
//                                                    "strong.dat.pl", "weak.nom.sg.f"
//
//   case        nom gen dat acc loc ins voc
//   number      sg du pl
//   tense       past pres fut
//   person      1 2 3
//   gender      m f n c        (singular keys only)
//   declension  strong weak mixed  (de-DE adjectives only)
//
// An entry with an empty table is an invariant word: its only form is the
// lemma. Determiner entries use the lemmas "definite" and "indefinite".

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace gramtrans {

enum class WordClass { noun, pronoun, verb, adjective, determiner };

std::string_view to_string(WordClass c);
WordClass parse_word_class(std::string_view s);
WordClass word_class_of(PartOfSpeech pos);

enum class Declension { strong, weak, mixed };

std::string_view key_token(Case c);
std::string_view key_token(Number n);
std::string_view key_token(Tense t);
std::string_view key_token(Person p);
std::string_view key_token(Gender g);
std::string_view key_token(Declension d);

std::string noun_key(Case c, Number n);
std::string verb_key(Tense t, Person p, Number n);
std::string determiner_key(Case c, Number n, std::optional<Gender> g);
std::string adjective_key(std::optional<Declension> d, Case c, Number n, std::optional<Gender> g);

// True when `key` follows the key grammar for the word class.
bool is_valid_key(WordClass word_class, std::string_view key);

struct LexiconEntry {
  std::string lemma;
  WordClass pos = WordClass::noun;
  Locale locale = Locale::en_US;
  std::optional<Gender> gender;
  std::map<std::string, std::string> inflection_table;
  std::optional<std::string> plural_stem;

  bool invariant() const { return inflection_table.empty(); }
  const std::string* form(const std::string& key) const;
};

void to_json(json& j, const LexiconEntry& e);
void from_json(const json& j, LexiconEntry& e);

class Lexicon {
 public:
  Lexicon() = default;
  // Throws FormatError on an illegal key, a duplicate (pos, lemma) pair, a
  // locale mismatch, or a de-DE noun without gender.
  Lexicon(Locale locale, std::vector<LexiconEntry> entries);

  Locale locale() const { return locale_; }
  const LexiconEntry* find(WordClass pos, std::string_view lemma) const;
  const std::vector<LexiconEntry>& entries() const { return entries_; }

 private:
  Locale locale_ = Locale::en_US;
  std::vector<LexiconEntry> entries_;
  std::map<std::pair<WordClass, std::string>, std::size_t, std::less<>> index_;
};

// Reads a JSON array of LexiconEntry objects.
Lexicon load_lexicon(Locale locale, const std::filesystem::path& path);

struct ContractionRule {
  std::string preposition;
  std::string determiner;
  std::string contracted;
  bool operator==(const ContractionRule&) const = default;
};

void to_json(json& j, const ContractionRule& r);
void from_json(const json& j, ContractionRule& r);

class RealizationContext {
 public:
  RealizationContext(Lexicon lexicon, std::vector<ContractionRule> contractions = {});

  Locale locale() const { return lexicon_.locale(); }
  const Lexicon& lexicon() const { return lexicon_; }
  const std::vector<ContractionRule>& contractions() const { return contractions_; }
  const ContractionRule* contraction_for(std::string_view preposition, std::string_view determiner) const;

 private:
  Lexicon lexicon_;
  std::vector<ContractionRule> contractions_;
};

// Loads `lexicon.<locale>.json` and, if present, `contractions.<locale>.json`
// from `dir`.
RealizationContext load_context(const std::filesystem::path& dir, Locale locale);

}  // namespace gramtrans
