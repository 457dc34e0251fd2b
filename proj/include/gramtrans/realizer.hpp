#pragma once

// Surface realization of grammar units against explicit lexicon tables.
// en-US and de-DE are fully realized; zh-CN passes lemmas through; the
// other locales use whatever their lexicon tables provide.

#include <cstdint>
#include <optional>
#include <string>

#include "gramtrans/grammar.hpp"
#include "gramtrans/lexicon.hpp"

namespace gramtrans {

class MissingInflection : public Error {
 public:
  MissingInflection(std::string lemma, std::string key)
      : Error("no inflection for '" + lemma + "' at '" + key + "'"),
        lemma_(std::move(lemma)),
        key_(std::move(key)) {}
  const std::string& lemma() const { return lemma_; }
  const std::string& key() const { return key_; }

 private:
  std::string lemma_;
  std::string key_;
};

// Where the head noun's surface form comes from. Data-bound lemmas (team
// names, venues) are proper names and are emitted verbatim; the rest of
// the phrase still agrees with the unit's case, number and gender.
enum class HeadSource { lexicon, verbatim };

// Inflects `entry` for the (case, number) of `features`, defaulting to
// nominative singular. With head_index set, `entry` is the head segment's
// entry and the remaining segments of features.lemma pass through.
std::string inflect_noun(const LexiconEntry& entry, const FeatureSet& features);

// [preposition] [determiner] [numeral] [adjectives] head, with agreement
// and preposition+determiner contraction. `count`, when given, decides the
// grammatical number and the numeral's value.
std::string realize_np(const GrammarUnit& unit, const RealizationContext& ctx,
                       std::optional<std::int64_t> count = std::nullopt, HeadSource head = HeadSource::lexicon);

std::string realize_verb(const GrammarUnit& unit, const RealizationContext& ctx,
                         std::optional<std::int64_t> count = std::nullopt);

struct RealizeOptions {
  std::optional<std::int64_t> count;
  HeadSource head = HeadSource::lexicon;
  // Upper-cases the first letter, for units opening a sentence.
  bool sentence_initial = false;
};

// Dispatches on unit.pos.
std::string realize_unit(const GrammarUnit& unit, const RealizationContext& ctx, const RealizeOptions& options = {});

}  // namespace gramtrans
