#include "gramtrans/lexicon.hpp"

#include <array>
#include <fstream>

#include "gramtrans/io.hpp"

namespace gramtrans {

namespace {

constexpr std::array<std::string_view, 5> kWordClassNames = {"noun", "pronoun", "verb", "adjective",
                                                             "determiner"};
constexpr std::array<std::string_view, 7> kCaseTokens = {"nom", "gen", "dat", "acc", "loc", "ins", "voc"};
constexpr std::array<std::string_view, 3> kNumberTokens = {"sg", "du", "pl"};
constexpr std::array<std::string_view, 3> kTenseTokens = {"past", "pres", "fut"};
constexpr std::array<std::string_view, 3> kPersonTokens = {"1", "2", "3"};
constexpr std::array<std::string_view, 4> kGenderTokens = {"m", "f", "n", "c"};
constexpr std::array<std::string_view, 3> kDeclensionTokens = {"strong", "weak", "mixed"};

template <std::size_t N>
bool one_of(std::string_view s, const std::array<std::string_view, N>& tokens) {
  for (auto t : tokens) {
    if (t == s) return true;
  }
  return false;
}

std::vector<std::string_view> split_dots(std::string_view key) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

// <case>.<number>[.<gender>], gender only on singular/dual.
bool valid_nominal_tail(std::span<const std::string_view> parts, bool allow_gender) {
  if (parts.size() < 2 || parts.size() > 3) return false;
  if (!one_of(parts[0], kCaseTokens) || !one_of(parts[1], kNumberTokens)) return false;
  if (parts.size() == 3) return allow_gender && parts[1] != "pl" && one_of(parts[2], kGenderTokens);
  return true;
}

}  // namespace

std::string_view to_string(WordClass c) { return kWordClassNames[static_cast<int>(c)]; }

WordClass parse_word_class(std::string_view s) {
  for (std::size_t i = 0; i < kWordClassNames.size(); ++i) {
    if (kWordClassNames[i] == s) return static_cast<WordClass>(i);
  }
  throw FormatError("invalid lexicon pos '" + std::string(s) + "'");
}

WordClass word_class_of(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return WordClass::noun;
    case PartOfSpeech::pronoun: return WordClass::pronoun;
    case PartOfSpeech::verb: return WordClass::verb;
  }
  return WordClass::noun;
}

std::string_view key_token(Case c) { return kCaseTokens[static_cast<int>(c)]; }
std::string_view key_token(Number n) { return kNumberTokens[static_cast<int>(n)]; }
std::string_view key_token(Tense t) { return kTenseTokens[static_cast<int>(t)]; }
std::string_view key_token(Person p) { return kPersonTokens[static_cast<int>(p)]; }
std::string_view key_token(Gender g) { return kGenderTokens[static_cast<int>(g)]; }
std::string_view key_token(Declension d) { return kDeclensionTokens[static_cast<int>(d)]; }

std::string noun_key(Case c, Number n) {
  return std::string(key_token(c)) + "." + std::string(key_token(n));
}

std::string verb_key(Tense t, Person p, Number n) {
  return std::string(key_token(t)) + "." + std::string(key_token(p)) + "." + std::string(key_token(n));
}

std::string determiner_key(Case c, Number n, std::optional<Gender> g) {
  std::string key = noun_key(c, n);
  if (g && n != Number::plural) key += "." + std::string(key_token(*g));
  return key;
}

std::string adjective_key(std::optional<Declension> d, Case c, Number n, std::optional<Gender> g) {
  std::string key = d ? std::string(key_token(*d)) + "." : std::string{};
  return key + determiner_key(c, n, g);
}

bool is_valid_key(WordClass word_class, std::string_view key) {
  auto parts = split_dots(key);
  switch (word_class) {
    case WordClass::noun:
    case WordClass::pronoun:
      return valid_nominal_tail(parts, false);
    case WordClass::verb:
      return parts.size() == 3 && one_of(parts[0], kTenseTokens) && one_of(parts[1], kPersonTokens) &&
             one_of(parts[2], kNumberTokens);
    case WordClass::determiner:
      return valid_nominal_tail(parts, true);
    case WordClass::adjective:
      if (!parts.empty() && one_of(parts[0], kDeclensionTokens)) {
        return valid_nominal_tail(std::span(parts).subspan(1), true);
      }
      return valid_nominal_tail(parts, true);
  }
  return false;
}

const std::string* LexiconEntry::form(const std::string& key) const {
  auto it = inflection_table.find(key);
  return it == inflection_table.end() ? nullptr : &it->second;
}

void to_json(json& j, const LexiconEntry& e) {
  j = json{{"lemma", e.lemma}, {"pos", to_string(e.pos)}, {"locale", to_string(e.locale)}};
  if (e.gender) j["gender"] = to_string(*e.gender);
  if (!e.inflection_table.empty()) j["inflection_table"] = e.inflection_table;
  if (e.plural_stem) j["plural_stem"] = *e.plural_stem;
}

void from_json(const json& j, LexiconEntry& e) {
  e = LexiconEntry{};
  e.lemma = j.at("lemma").get<std::string>();
  e.pos = parse_word_class(j.at("pos").get<std::string>());
  e.locale = parse_locale(j.at("locale").get<std::string>());
  if (j.contains("gender")) e.gender = parse_gender(j["gender"].get<std::string>());
  if (j.contains("inflection_table")) {
    e.inflection_table = j["inflection_table"].get<std::map<std::string, std::string>>();
  }
  if (j.contains("plural_stem")) e.plural_stem = j["plural_stem"].get<std::string>();
}

Lexicon::Lexicon(Locale locale, std::vector<LexiconEntry> entries)
    : locale_(locale), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    const std::string where = "lexicon entry '" + e.lemma + "' (" + std::string(to_string(e.pos)) + ")";
    if (e.locale != locale_) {
      throw FormatError(where + " has locale " + std::string(to_string(e.locale)) + ", expected " +
                        std::string(to_string(locale_)));
    }
    if (locale_ == Locale::de_DE && e.pos == WordClass::noun && !e.gender) {
      throw FormatError(where + " needs a gender");
    }
    for (const auto& [key, _] : e.inflection_table) {
      if (!is_valid_key(e.pos, key)) throw FormatError(where + " has illegal key '" + key + "'");
    }
    if (!index_.emplace(std::pair{e.pos, e.lemma}, i).second) {
      throw FormatError("duplicate " + where);
    }
  }
}

const LexiconEntry* Lexicon::find(WordClass pos, std::string_view lemma) const {
  auto it = index_.find(std::pair{pos, std::string(lemma)});
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Lexicon load_lexicon(Locale locale, const std::filesystem::path& path) {
  json doc = read_json_file(path);
  if (!doc.is_array()) throw FormatError(path.string() + ": lexicon must be a JSON array");
  try {
    return Lexicon(locale, doc.get<std::vector<LexiconEntry>>());
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void to_json(json& j, const ContractionRule& r) {
  j = json{{"preposition", r.preposition}, {"determiner", r.determiner}, {"contracted", r.contracted}};
}

void from_json(const json& j, ContractionRule& r) {
  r.preposition = j.at("preposition").get<std::string>();
  r.determiner = j.at("determiner").get<std::string>();
  r.contracted = j.at("contracted").get<std::string>();
}

RealizationContext::RealizationContext(Lexicon lexicon, std::vector<ContractionRule> contractions)
    : lexicon_(std::move(lexicon)), contractions_(std::move(contractions)) {
  for (std::size_t i = 0; i < contractions_.size(); ++i) {
    for (std::size_t k = i + 1; k < contractions_.size(); ++k) {
      if (contractions_[i].preposition == contractions_[k].preposition &&
          contractions_[i].determiner == contractions_[k].determiner) {
        throw FormatError("contraction rules share the left side (" + contractions_[i].preposition + ", " +
                          contractions_[i].determiner + ")");
      }
    }
  }
}

const ContractionRule* RealizationContext::contraction_for(std::string_view preposition,
                                                           std::string_view determiner) const {
  for (const auto& rule : contractions_) {
    if (rule.preposition == preposition && rule.determiner == determiner) return &rule;
  }
  return nullptr;
}

RealizationContext load_context(const std::filesystem::path& dir, Locale locale) {
  const std::string code(to_string(locale));
  Lexicon lexicon = load_lexicon(locale, dir / ("lexicon." + code + ".json"));
  std::vector<ContractionRule> rules;
  auto contractions = dir / ("contractions." + code + ".json");
  if (std::filesystem::exists(contractions)) {
    rules = read_json_file(contractions).get<std::vector<ContractionRule>>();
  }
  return RealizationContext(std::move(lexicon), std::move(rules));
}

}  // namespace gramtrans
