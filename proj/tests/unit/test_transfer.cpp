#include <functional>
#include <random>

#include "doctest.h"
#include "gramtrans/transfer.hpp"
#include "support.hpp"

using namespace gramtrans;
using testsupport::context;
using testsupport::fixture;

namespace {

DependencyToken tok(std::size_t index, std::string form, std::string lemma, std::string upos, std::string feats,
                    std::size_t head, std::string deprel) {
  DependencyToken t;
  t.index = index;
  t.form = std::move(form);
  t.lemma = std::move(lemma);
  t.upos = std::move(upos);
  t.feats = parse_feats(feats);
  t.head = head;
  t.deprel = std::move(deprel);
  return t;
}

ParseFragment fragment(std::string id, Locale locale, std::vector<DependencyToken> tokens) {
  ParseFragment f;
  f.unit_id = std::move(id);
  f.locale = locale;
  f.tokens = std::move(tokens);
  return f;
}

ParseFragment am_samstag() {
  return fragment("T1.u1", Locale::de_DE,
                  {tok(1, "an", "an", "ADP", "_", 3, "case"),
                   tok(2, "dem", "der", "DET", "Case=Dat|Definite=Def|Gender=Masc|Number=Sing|PronType=Art", 3, "det"),
                   tok(3, "Samstag", "Samstag", "NOUN", "Case=Dat|Gender=Masc|Number=Sing", 0, "root")});
}

// Returns whatever the callback produces for the tagged source.
class StubBackend final : public TranslationBackend {
 public:
  explicit StubBackend(std::function<std::string(const std::string&)> fn) : fn_(std::move(fn)) {}
  TaggedText translate(const TranslationRequest& request) const override {
    return TaggedText{fn_(request.tagged_text().text)};
  }

 private:
  std::function<std::string(const std::string&)> fn_;
};

DataRecord record_97() { return load_records(fixture("bulls/data.jsonl")).front(); }

}  // namespace

TEST_CASE("aggregate: preposition, determiner and head features") {
  const GrammarUnit u = aggregate_fragment(am_samstag());
  CHECK(u.id == "T1.u1");
  CHECK(u.locale == Locale::de_DE);
  CHECK(u.pos == PartOfSpeech::noun);
  CHECK(u.features.lemma == "Samstag");
  CHECK(u.features.preposition == "an");
  CHECK(u.features.determiner == Determiner::definite);
  CHECK(u.features.grammatical_case == Case::dative);
  CHECK(u.features.number == Number::singular);
  CHECK(u.features.gender == Gender::masculine);
  CHECK(validate_unit(u).empty());
}

TEST_CASE("aggregate: single token and verbs") {
  const auto single = aggregate_fragment(
      fragment("x", Locale::de_DE, {tok(1, "Samstag", "Samstag", "NOUN", "Case=Nom|Number=Sing", 0, "root")}));
  CHECK(single.features.lemma == "Samstag");
  CHECK_FALSE(single.features.preposition);
  CHECK_FALSE(single.features.determiner);

  const auto verb = aggregate_fragment(fragment(
      "v", Locale::de_DE,
      {tok(1, "gewann", "gewinnen", "VERB", "Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin", 0, "root")}));
  CHECK(verb.pos == PartOfSpeech::verb);
  CHECK(verb.features.lemma == "gewinnen");
  CHECK(verb.features.tense == Tense::past);
  CHECK(verb.features.person == Person::third);
  CHECK(verb.features.number == Number::singular);
  CHECK(validate_unit(verb).empty());

  // Missing lemma column falls back to the form.
  const auto bare = aggregate_fragment(fragment("b", Locale::de_DE, {tok(1, "Fans", "_", "NOUN", "_", 0, "root")}));
  CHECK(bare.features.lemma == "Fans");
}

TEST_CASE("aggregate: names, numerals, adjectives, conjunctions, pronouns") {
  const auto name = aggregate_fragment(
      fragment("n", Locale::de_DE,
               {tok(1, "den", "der", "DET", "Definite=Def", 2, "det"),
                tok(2, "Chicago", "Chicago", "PROPN", "Case=Dat|Number=Plur", 0, "root"),
                tok(3, "Bulls", "Bulls", "PROPN", "Case=Dat|Number=Plur", 2, "flat")}));
  CHECK(name.features.lemma == "Chicago Bulls");
  CHECK(name.features.determiner == Determiner::definite);

  const auto counted = aggregate_fragment(
      fragment("c", Locale::de_DE,
               {tok(1, "8", "8", "NUM", "NumType=Card", 3, "nummod"),
                tok(2, "beeindruckenden", "beeindruckend", "ADJ", "Case=Dat|Number=Plur", 3, "amod"),
                tok(3, "Rückprallern", "Rückpraller", "NOUN", "Case=Dat|Gender=Masc|Number=Plur", 0, "root")}));
  REQUIRE(counted.features.numerals);
  CHECK(counted.features.numerals->value == 8);
  CHECK(counted.features.numerals->type == NumeralType::cardinal);
  CHECK(counted.features.adjectives == std::vector<std::string>{"beeindruckend"});

  const auto ordinal = aggregate_fragment(
      fragment("o", Locale::de_DE,
               {tok(1, "1.", "1.", "NUM", "NumType=Ord", 2, "amod"), tok(2, "Spieltag", "Spieltag", "NOUN", "_", 0, "root")}));
  REQUIRE(ordinal.features.numerals);
  CHECK(ordinal.features.numerals->value == 1);
  CHECK(ordinal.features.numerals->type == NumeralType::ordinal);

  const auto conj = aggregate_fragment(
      fragment("k", Locale::de_DE,
               {tok(1, "und", "und", "CCONJ", "_", 2, "cc"), tok(2, "Fans", "Fan", "NOUN", "_", 0, "root")}));
  CHECK(conj.features.conjunctions == std::vector<std::string>{"und"});

  const auto poss = aggregate_fragment(
      fragment("p", Locale::de_DE, {tok(1, "ihres", "ihr", "PRON", "Case=Gen|Poss=Yes|PronType=Prs", 0, "root")}));
  CHECK(poss.pos == PartOfSpeech::pronoun);
  CHECK(poss.features.pronoun_type == PronounType::possessive);

  const auto compound = aggregate_fragment(fragment(
      "h", Locale::de_DE, {tok(1, "Double-Double-Ergebnissen", "Double-Double-Ergebnis", "NOUN", "_", 0, "root")}));
  CHECK(compound.features.head_index == 2u);
}

TEST_CASE("aggregate: illegal features are dropped") {
  // Case on a verb, locative in German, dual outside Slovenian.
  const auto verb = aggregate_fragment(
      fragment("v", Locale::de_DE, {tok(1, "gewann", "gewinnen", "VERB", "Case=Nom|Tense=Past", 0, "root")}));
  CHECK_FALSE(verb.features.grammatical_case);
  CHECK(verb.features.tense == Tense::past);
  const auto loc = aggregate_fragment(
      fragment("l", Locale::de_DE, {tok(1, "Haus", "Haus", "NOUN", "Case=Loc|Number=Dual", 0, "root")}));
  CHECK_FALSE(loc.features.grammatical_case);
  CHECK_FALSE(loc.features.number);
  const auto sl = aggregate_fragment(
      fragment("s", Locale::sl_SI, {tok(1, "hiši", "hiša", "NOUN", "Case=Loc|Number=Dual", 0, "root")}));
  CHECK(sl.features.grammatical_case == Case::locative);
  CHECK(sl.features.number == Number::dual);
}

TEST_CASE("aggregate: unsupported heads and malformed parses") {
  CHECK_THROWS_AS(aggregate_fragment(fragment("a", Locale::de_DE, {tok(1, "schnell", "schnell", "ADJ", "_", 0, "root")})),
                  UnsupportedHead);
  try {
    aggregate_fragment(fragment("a", Locale::de_DE, {tok(1, "am", "an", "ADP", "_", 0, "root")}));
    FAIL("expected UnsupportedHead");
  } catch (const UnsupportedHead& e) {
    CHECK(e.upos() == "ADP");
  }
  CHECK_THROWS_AS(aggregate_fragment(fragment("m", Locale::de_DE, {tok(1, "x", "x", "NOUN", "_", 2, "dep")})),
                  MalformedParse);
}

TEST_CASE("property: aggregated units always validate") {
  std::mt19937 rng(77);
  const std::vector<std::string> upos = {"NOUN", "PROPN", "PRON", "VERB", "AUX", "ADJ", "ADP", "DET", "NUM", "CCONJ"};
  const std::vector<std::string> feats = {"Case=Nom", "Case=Gen", "Case=Dat", "Case=Acc", "Case=Loc", "Case=Ins",
                                          "Case=Voc", "Number=Sing", "Number=Dual", "Number=Plur", "Gender=Masc",
                                          "Gender=Com", "Tense=Past", "Tense=Fut", "Person=1", "PronType=Dem",
                                          "Poss=Yes", "Definite=Def", "Definite=Ind", "NumType=Ord"};
  const std::vector<std::string> deprels = {"det", "case", "amod", "nummod", "flat", "compound", "cc", "nmod"};
  auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
  int aggregated = 0;
  for (int iter = 0; iter < 5000; ++iter) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    // order[0] is the root; every later token hangs off an earlier one.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<DependencyToken> tokens(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = order[k];
      std::string f;
      for (int m = std::uniform_int_distribution<int>(0, 3)(rng); m > 0; --m) f += (f.empty() ? "" : "|") + pick(feats);
      const std::size_t head = k == 0 ? 0 : order[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
      tokens[idx - 1] = tok(idx, "w" + std::to_string(idx) + (rng() % 4 == 0 ? "-x" : ""), "_", pick(upos),
                            f.empty() ? "_" : f, head, k == 0 ? "root" : pick(deprels));
    }
    const auto frag = fragment("p" + std::to_string(iter), pick(kAllLocales), tokens);
    const std::string& root_upos = tokens[order[0] - 1].upos;
    const bool supported = root_upos == "NOUN" || root_upos == "PROPN" || root_upos == "PRON" || root_upos == "VERB" ||
                           root_upos == "AUX";
    if (!supported) {
      CHECK_THROWS_AS(aggregate_fragment(frag), UnsupportedHead);
      continue;
    }
    const GrammarUnit u = aggregate_fragment(frag);
    ++aggregated;
    if (!validate_unit(u).empty()) {
      FAIL_CHECK("illegal unit from fragment " << frag.unit_id << ": " << json(u).dump());
    }
  }
  CHECK(aggregated > 1000);
}

TEST_CASE("transfer_unit keeps id, agreement source and numeral value") {
  GrammarUnit source;
  source.id = "u_reb";
  source.features.lemma = "rebound";
  source.features.numerals = Numeral{8, NumeralType::cardinal};
  source.agreement_source = "best_rebounds";
  auto parse = fragment("S5.u_reb", Locale::de_DE,
                        {tok(1, "acht", "acht", "NUM", "NumType=Card", 2, "nummod"),
                         tok(2, "Rückprallern", "Rückpraller", "NOUN", "Case=Dat|Number=Plur", 0, "root")});
  const GrammarUnit target = transfer_unit(source, parse);
  CHECK(target.id == "u_reb");
  CHECK(target.agreement_source == "best_rebounds");
  REQUIRE(target.features.numerals);
  CHECK(target.features.numerals->value == 8);
  CHECK(target.features.lemma == "Rückpraller");
  CHECK(target.features.grammatical_case == Case::dative);
  CHECK(target.locale == Locale::de_DE);
}

TEST_CASE("gazetteer restores case and number from the source") {
  const Gazetteer gaz = load_gazetteer(fixture("bulls/gazetteer.json"));
  CHECK(gaz.contains("Denver Nuggets"));
  const auto frags = load_conllu(fixture("bulls/parses.de-DE.conllu"), Locale::de_DE);
  GrammarUnit target = aggregate_fragment(frags.at("S6.u_loser"));
  CHECK(target.features.lemma == "Denver Nuggets");
  CHECK(target.features.grammatical_case == Case::genitive);
  CHECK(target.features.number == Number::singular);

  GrammarUnit source;
  source.id = "u_loser";
  source.features.lemma = "Denver Nuggets";
  source.features.grammatical_case = Case::nominative;
  source.features.number = Number::plural;
  CHECK(apply_gazetteer(target, source, gaz));
  CHECK(target.features.grammatical_case == Case::nominative);
  CHECK(target.features.number == Number::plural);
  CHECK_FALSE(apply_gazetteer(target, source, gaz));

  GrammarUnit other = aggregate_fragment(am_samstag());
  CHECK_FALSE(apply_gazetteer(other, source, gaz));
  CHECK(other.features.grammatical_case == Case::dative);

  testsupport::TempDir dir;
  write_text_file(dir / "bad.json", "{\"a\": 1}");
  CHECK_THROWS_AS(load_gazetteer(dir / "bad.json"), FormatError);
}

TEST_CASE("on Saturday becomes am Samstag") {
  const Project project = load_project(fixture("saturday/project.json"));
  const auto tm = load_translation_memory(fixture("saturday/tm.de-DE.json"));
  const FixtureParses parses(load_conllu(fixture("saturday/parses.de-DE.conllu"), Locale::de_DE));
  const DataRecord data = load_records(fixture("saturday/data.jsonl")).front();
  const auto result = transfer_statement(project.statements.front(), data, context(Locale::en_US), tm, parses, {});
  CHECK(result.report.clean());
  const GrammarUnit& u = result.target.units.at("u1");
  CHECK(u.locale == Locale::de_DE);
  CHECK(u.features.lemma == "Samstag");
  CHECK(u.features.preposition == "an");
  CHECK(u.features.determiner == Determiner::definite);
  CHECK(u.features.grammatical_case == Case::dative);
  CHECK(u.features.number == Number::singular);
  CHECK(u.features.gender == Gender::masculine);
  CHECK(serialize_template(result.target.segments) == "Das Spiel fand [u1] statt.");
  CHECK(render_statement(result.target, data, context(Locale::de_DE)).text == "Das Spiel fand am Samstag statt.");
}

TEST_CASE("statements without units translate as literals") {
  StatementTemplate stmt;
  stmt.id = "S1";
  stmt.segments = canonicalize(parse_template("Hello."));
  const StubBackend backend([](const std::string& s) {
    CHECK(s == "Hello.");
    return std::string("Hallo.");
  });
  const FixtureParses none({});
  const auto out = transfer_statement(stmt, DataRecord{}, context(Locale::en_US), backend, none, {});
  CHECK(out.report.clean());
  CHECK(out.target.units.empty());
  CHECK(serialize_template(out.target.segments) == "Hallo.");
}

TEST_CASE("dropped markers and missing parses are reported") {
  const Project project = load_project(fixture("saturday/project.json"));
  const DataRecord data = load_records(fixture("saturday/data.jsonl")).front();
  const FixtureParses parses(load_conllu(fixture("saturday/parses.de-DE.conllu"), Locale::de_DE));

  const StubBackend dropped([](const std::string&) { return std::string("Das Spiel fand am Samstag statt."); });
  const auto lost = transfer_statement(project.statements.front(), data, context(Locale::en_US), dropped, parses, {});
  CHECK(lost.report.lost == std::vector<std::string>{"u1"});
  CHECK_FALSE(lost.report.clean());
  CHECK(lost.target.units.empty());
  CHECK(serialize_template(lost.target.segments) == "Das Spiel fand am Samstag statt.");

  const FixtureParses none({});
  const auto tm = load_translation_memory(fixture("saturday/tm.de-DE.json"));
  const auto unparsed = transfer_statement(project.statements.front(), data, context(Locale::en_US), tm, none, {});
  REQUIRE(unparsed.report.failures.size() == 1);
  CHECK(unparsed.report.failures[0].unit_id == "u1");
  CHECK(serialize_template(unparsed.target.segments) == "Das Spiel fand am Samstag statt.");

  const json j = to_json_value(unparsed.report);
  CHECK(j["statement_id"] == "T1");
  CHECK(j["failures"][0]["unit_id"] == "u1");
}

TEST_CASE("backend errors name the statement and nest the cause") {
  const Project project = load_project(fixture("saturday/project.json"));
  const TranslationMemory empty({});
  const FixtureParses none({});
  const DataRecord data = load_records(fixture("saturday/data.jsonl")).front();
  try {
    transfer_statement(project.statements.front(), data, context(Locale::en_US), empty, none, {});
    FAIL("expected StatementBackendError");
  } catch (const StatementBackendError& e) {
    CHECK(e.statement_id() == "T1");
    CHECK_THROWS_AS(std::rethrow_if_nested(e), MissingEntry);
  }
  CHECK_THROWS_AS(transfer_project(project, data, context(Locale::en_US), empty, none, {}), StatementBackendError);
}

TEST_CASE("bulls project transfers to German") {
  const Project project = load_project(fixture("bulls/project.json"));
  const auto tm = load_translation_memory(fixture("bulls/tm.de-DE.json"));
  const FixtureParses parses(load_conllu(fixture("bulls/parses.de-DE.conllu"), Locale::de_DE));
  const Gazetteer gaz = load_gazetteer(fixture("bulls/gazetteer.json"));
  TransferSettings settings;
  settings.gazetteer = &gaz;
  const DataRecord data = record_97();
  const auto result = transfer_project(project, data, context(Locale::en_US), tm, parses, settings);
  validate_project(result.target);
  CHECK(result.target.source_locale == Locale::de_DE);
  REQUIRE(result.reports.size() == project.statements.size());
  for (const auto& r : result.reports) CHECK_MESSAGE(r.clean(), r.statement_id);
  CHECK(result.reports.back().gazetteer_overrides == std::vector<std::string>{"u_loser"});

  std::string german;
  for (const auto* stmt : select_statements(result.target, data)) {
    german += render_statement(*stmt, data, context(Locale::de_DE)).text + "\n";
  }
  for (const char* phrase : {"Die Heimmannschaft gewann mit 106 - 101 gegen die Gastmannschaft aus Denver.",
                             "8 beeindruckenden Rückprallern", "1 spektakulärem Block", "die Denver Nuggets konnten",
                             "mit 26 Punkten", "den Chicago Bulls und den Denver Nuggets"}) {
    CHECK_MESSAGE(german.find(phrase) != std::string::npos, phrase);
  }

  // Matches the checked-in translation.
  CHECK(project_to_json(result.target)["statements"] ==
        read_json_file(fixture("bulls/project.de-DE.json"))["statements"]);
}

TEST_CASE("parser command") {
  testsupport::TempDir dir;
  // Echoes a fixed parse for whatever key comes first.
  const auto script = dir / "parse.sh";
  write_text_file(script,
                  "#!/bin/sh\n"
                  "key=$(cut -f1 \"$1\" | head -n1)\n"
                  "printf '# unit_id = %s\\n1\\tam\\tan\\tADP\\t_\\t_\\t2\\tcase\\t_\\t_\\n"
                  "2\\tSamstag\\tSamstag\\tNOUN\\t_\\tCase=Dat|Number=Sing\\t0\\troot\\t_\\t_\\n\\n' \"$key\" > \"$2\"\n");
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  const ParserCommand parser(testsupport::quote(script));
  const auto out = parser.parse({{"T1.u1", Locale::de_DE, "am Samstag"}});
  REQUIRE(out.count("T1.u1"));
  CHECK(aggregate_fragment(out.at("T1.u1")).features.preposition == "an");
  CHECK(parser.parse({}).empty());
  CHECK_THROWS_AS(parser.parse({{"k", Locale::de_DE, "a\tb"}}), PreconditionViolation);

  const ParserCommand failing("false");
  CHECK_THROWS_AS(failing.parse({{"k", Locale::de_DE, "x"}}), Error);
}
