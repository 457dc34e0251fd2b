#include "gramtrans/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <future>
#include <sstream>
#include <unistd.h>

#include "gramtrans/io.hpp"

namespace gramtrans {

namespace {

std::optional<PartOfSpeech> pos_for(std::string_view upos) {
  if (upos == "NOUN" || upos == "PROPN") return PartOfSpeech::noun;
  if (upos == "PRON") return PartOfSpeech::pronoun;
  if (upos == "VERB" || upos == "AUX") return PartOfSpeech::verb;
  return std::nullopt;
}

template <class T>
std::optional<T> lookup(const std::map<std::string_view, T>& table, const std::string* value) {
  if (!value) return std::nullopt;
  auto it = table.find(*value);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const std::map<std::string_view, Case> kUdCase = {
    {"Nom", Case::nominative}, {"Gen", Case::genitive},      {"Dat", Case::dative},  {"Acc", Case::accusative},
    {"Loc", Case::locative},   {"Ins", Case::instrumental}, {"Voc", Case::vocative}};
const std::map<std::string_view, Number> kUdNumber = {
    {"Sing", Number::singular}, {"Dual", Number::dual}, {"Plur", Number::plural}};
const std::map<std::string_view, Gender> kUdGender = {
    {"Masc", Gender::masculine}, {"Fem", Gender::feminine}, {"Neut", Gender::neuter}, {"Com", Gender::common}};
const std::map<std::string_view, Tense> kUdTense = {
    {"Past", Tense::past}, {"Pres", Tense::present}, {"Fut", Tense::future}};
const std::map<std::string_view, Person> kUdPerson = {
    {"1", Person::first}, {"2", Person::second}, {"3", Person::third}};
const std::map<std::string_view, PronounType> kUdPronType = {
    {"Prs", PronounType::personal},   {"Dem", PronounType::demonstrative}, {"Rel", PronounType::relative},
    {"Int", PronounType::interrogative}};

std::string lemma_of(const DependencyToken& t) { return t.lemma.empty() || t.lemma == "_" ? t.form : t.lemma; }

bool name_part(const DependencyToken& t) {
  return t.upos == "PROPN" && (t.deprel.rfind("flat", 0) == 0 || t.deprel.rfind("compound", 0) == 0);
}

// Drops whatever validate_unit would reject.
void make_legal(GrammarUnit& unit) {
  auto& f = unit.features;
  for (Feature feature : kAllFeatures) {
    if (is_legal(feature, unit.pos) || !is_set(f, feature)) continue;
    switch (feature) {
      case Feature::grammatical_case: f.grammatical_case.reset(); break;
      case Feature::number: f.number.reset(); break;
      case Feature::tense: f.tense.reset(); break;
      case Feature::person: f.person.reset(); break;
      case Feature::gender: f.gender.reset(); break;
      case Feature::preposition: f.preposition.reset(); break;
      case Feature::adjectives: f.adjectives.clear(); break;
      case Feature::numerals: f.numerals.reset(); break;
      case Feature::conjunctions: f.conjunctions.clear(); break;
      case Feature::determiner: f.determiner.reset(); break;
      case Feature::pronoun_type: f.pronoun_type.reset(); break;
      case Feature::lemma: break;
    }
  }
  if (f.grammatical_case) {
    auto legal = legal_cases(unit.locale);
    if (std::find(legal.begin(), legal.end(), *f.grammatical_case) == legal.end()) f.grammatical_case.reset();
  }
  if (f.number == Number::dual && !has_dual(unit.locale)) f.number.reset();
}

}  // namespace

GrammarUnit aggregate_fragment(const ParseFragment& frag) {
  validate_fragment(frag);
  const DependencyToken& head = frag.tokens[frag.root()];
  const auto pos = pos_for(head.upos);
  if (!pos) throw UnsupportedHead(frag.unit_id, head.upos);

  GrammarUnit unit;
  unit.id = frag.unit_id;
  unit.locale = frag.locale;
  unit.pos = *pos;
  FeatureSet& f = unit.features;

  if (head.upos == "PROPN") {
    // Multi-token names ("Chicago Bulls") become one lemma, by surface form.
    std::vector<const DependencyToken*> parts{&head};
    for (const auto* c : frag.children(head.index)) {
      if (name_part(*c)) parts.push_back(c);
    }
    std::sort(parts.begin(), parts.end(), [](auto* a, auto* b) { return a->index < b->index; });
    for (const auto* p : parts) f.lemma += (f.lemma.empty() ? "" : " ") + p->form;
  } else {
    f.lemma = lemma_of(head);
  }

  f.grammatical_case = lookup(kUdCase, head.feat("Case"));
  f.number = lookup(kUdNumber, head.feat("Number"));
  f.gender = lookup(kUdGender, head.feat("Gender"));
  f.tense = lookup(kUdTense, head.feat("Tense"));
  f.person = lookup(kUdPerson, head.feat("Person"));
  f.pronoun_type = lookup(kUdPronType, head.feat("PronType"));
  if (const auto* poss = head.feat("Poss"); poss && *poss == "Yes") f.pronoun_type = PronounType::possessive;

  // German compounds are head-final.
  if (head.form.find('-') != std::string::npos) {
    const auto segments = split_compound(f.lemma);
    if (segments.size() > 1) f.head_index = segments.size() - 1;
  }

  for (const auto* c : frag.children(head.index)) {
    if (c->upos == "ADP" && !f.preposition) {
      f.preposition = lemma_of(*c);
    } else if (c->upos == "DET") {
      const auto* def = c->feat("Definite");
      if (def && *def == "Def") f.determiner = Determiner::definite;
      if (def && *def == "Ind") f.determiner = Determiner::indefinite;
    } else if (c->upos == "ADJ") {
      f.adjectives.push_back(lemma_of(*c));
    } else if (c->upos == "NUM" && !f.numerals) {
      Numeral n;
      const auto* type = c->feat("NumType");
      n.type = type && *type == "Ord" ? NumeralType::ordinal : NumeralType::cardinal;
      std::string digits;
      for (char ch : c->form) {
        if (ch >= '0' && ch <= '9') digits += ch;
      }
      if (!digits.empty()) std::from_chars(digits.data(), digits.data() + digits.size(), n.value);
      f.numerals = n;
    } else if (c->upos == "CCONJ") {
      f.conjunctions.push_back(lemma_of(*c));
    }
  }
  make_legal(unit);
  return unit;
}

GrammarUnit transfer_unit(const GrammarUnit& source, const ParseFragment& target_parse) {
  GrammarUnit out = aggregate_fragment(target_parse);
  out.id = source.id;
  out.agreement_source = source.agreement_source;
  if (out.features.numerals && source.features.numerals) out.features.numerals->value = source.features.numerals->value;
  return out;
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  if (!j.is_array()) throw FormatError(path.string() + ": gazetteer must be a JSON array of names");
  std::set<std::string> names;
  for (const auto& n : j) {
    if (!n.is_string()) throw FormatError(path.string() + ": gazetteer entries must be strings");
    names.insert(n.get<std::string>());
  }
  return Gazetteer(std::move(names));
}

bool apply_gazetteer(GrammarUnit& target, const GrammarUnit& source, const Gazetteer& gazetteer) {
  if (!gazetteer.contains(target.features.lemma)) return false;
  auto& f = target.features;
  const auto before = std::make_pair(f.grammatical_case, f.number);
  f.grammatical_case = source.features.grammatical_case;
  f.number = source.features.number;
  make_legal(target);
  return std::make_pair(f.grammatical_case, f.number) != before;
}

std::map<std::string, ParseFragment> FixtureParses::parse(const std::vector<SnippetRequest>& snippets) const {
  std::map<std::string, ParseFragment> out;
  for (const auto& s : snippets) {
    if (auto it = fragments_.find(s.key); it != fragments_.end()) out.emplace(s.key, it->second);
  }
  return out;
}

std::map<std::string, ParseFragment> ParserCommand::parse(const std::vector<SnippetRequest>& snippets) const {
  if (snippets.empty()) return {};
  static std::atomic<unsigned> counter{0};
  const auto stem = std::filesystem::temp_directory_path() /
                    ("gramtrans-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  const auto input = stem.string() + ".in.txt";
  const auto output = stem.string() + ".conllu";
  std::string lines;
  for (const auto& s : snippets) {
    if (s.text.find_first_of("\t\n") != std::string::npos) {
      throw PreconditionViolation("snippet '" + s.key + "' contains a tab or newline");
    }
    lines += s.key + "\t" + std::string(to_string(s.locale)) + "\t" + s.text + "\n";
  }
  write_text_file(input, lines);
  const std::string cmd = command_ + " '" + input + "' '" + output + "'";
  const int status = std::system(cmd.c_str());
  std::filesystem::remove(input);
  if (status != 0) {
    std::filesystem::remove(output);
    throw Error("parser command failed (status " + std::to_string(status) + "): " + command_);
  }
  auto fragments = load_conllu(output, snippets.front().locale);
  std::filesystem::remove(output);
  return fragments;
}

json to_json_value(const TransferReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"unit_id", f.unit_id}, {"reason", f.reason}});
  return json{{"statement_id", r.statement_id},
              {"lost", r.lost},
              {"lost_slots", r.lost_slots},
              {"failures", failures},
              {"gazetteer_overrides", r.gazetteer_overrides}};
}

StatementTransfer transfer_statement(const StatementTemplate& stmt, const DataRecord& data,
                                     const RealizationContext& source_ctx, const TranslationBackend& backend,
                                     const ParserInput& parser, const TransferSettings& settings) {
  const RenderedStatement rendered = render_statement(stmt, data, source_ctx);
  const TaggedText tagged = mark_units(rendered.text, rendered.spans, rendered.slot_spans);

  TaggedText translated;
  try {
    translated = backend.translate(TranslationRequest(stmt.locale, settings.target_locale, tagged));
  } catch (const BackendError& e) {
    std::throw_with_nested(StatementBackendError(stmt.id, e.what()));
  }

  std::vector<const DataSlot*> slots;
  for (const auto& s : stmt.segments) {
    if (auto* slot = std::get_if<DataSlot>(&s)) slots.push_back(slot);
  }
  const auto refs = stmt.unit_refs();
  std::vector<std::string> unit_ids;
  for (const auto* ref : refs) unit_ids.push_back(ref->unit_id);
  const Alignment alignment = align_translation(translated, unit_ids, slots.size());

  StatementTransfer out;
  out.report.statement_id = stmt.id;
  out.report.lost = alignment.lost;
  out.report.lost_slots = alignment.lost_slots;
  out.target.id = stmt.id;
  out.target.locale = settings.target_locale;
  out.target.condition = stmt.condition;

  std::vector<SnippetRequest> requests;
  for (const auto& [id, snippet] : alignment.snippets) {
    requests.push_back({stmt.id + "." + id, settings.target_locale, snippet});
  }
  const auto fragments = requests.empty() ? std::map<std::string, ParseFragment>{} : parser.parse(requests);

  for (const auto& piece : alignment.pieces) {
    if (auto* lit = std::get_if<std::string>(&piece)) {
      out.target.segments.push_back(Literal{*lit});
    } else if (auto* slot = std::get_if<AlignedSlot>(&piece)) {
      out.target.segments.push_back(*slots[slot->index]);
    } else {
      const auto& aligned = std::get<AlignedUnit>(piece);
      const UnitRef& ref =
          **std::find_if(refs.begin(), refs.end(), [&](const UnitRef* r) { return r->unit_id == aligned.unit_id; });
      auto fail = [&](std::string reason) {
        out.report.failures.push_back({aligned.unit_id, std::move(reason)});
        out.target.segments.push_back(Literal{aligned.snippet});
      };
      auto frag = fragments.find(stmt.id + "." + aligned.unit_id);
      if (frag == fragments.end()) {
        fail("no parse for snippet '" + aligned.snippet + "'");
        continue;
      }
      try {
        const GrammarUnit source = bind_unit(stmt, ref, data).unit;
        ParseFragment parse = frag->second;
        parse.locale = settings.target_locale;
        GrammarUnit target = transfer_unit(source, parse);
        if (settings.gazetteer && apply_gazetteer(target, source, *settings.gazetteer)) {
          out.report.gazetteer_overrides.push_back(aligned.unit_id);
        }
        out.target.units.emplace(target.id, target);
        UnitRef target_ref;
        target_ref.unit_id = target.id;
        target_ref.agreement_binding = ref.agreement_binding;
        target_ref.lemma_binding = ref.lemma_binding;
        out.target.segments.push_back(std::move(target_ref));
      } catch (const Error& e) {
        fail(e.what());
      }
    }
  }
  out.target.segments = canonicalize(std::move(out.target.segments));
  return out;
}

ProjectTransfer transfer_project(const Project& project, const DataRecord& data, const RealizationContext& source_ctx,
                                 const TranslationBackend& backend, const ParserInput& parser,
                                 const TransferSettings& settings) {
  std::vector<std::future<StatementTransfer>> jobs;
  for (const auto& stmt : project.statements) {
    jobs.push_back(std::async(std::launch::async, [&, s = &stmt] {
      return transfer_statement(*s, data, source_ctx, backend, parser, settings);
    }));
  }
  ProjectTransfer out;
  out.target.id = project.id;
  out.target.source_locale = settings.target_locale;
  out.target.schema = project.schema;
  std::exception_ptr first_error;
  for (auto& job : jobs) {
    try {
      auto result = job.get();
      out.target.statements.push_back(std::move(result.target));
      out.reports.push_back(std::move(result.report));
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace gramtrans
