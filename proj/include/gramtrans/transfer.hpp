#pragma once

// Grammar transfer: render, mark unit spans, translate, re-locate the
// marked snippets, and rebuild target-language units from their parses.

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "gramtrans/backend.hpp"
#include "gramtrans/conllu.hpp"
#include "gramtrans/project.hpp"

namespace gramtrans {

class UnsupportedHead : public Error {
 public:
  UnsupportedHead(std::string unit_id, std::string upos)
      : Error("fragment '" + unit_id + "': head POS '" + upos + "' maps to no unit type"),
        upos_(std::move(upos)) {}
  const std::string& upos() const { return upos_; }

 private:
  std::string upos_;
};

// Root token -> unit; dependents fill the remaining features (see the
// .cpp for the mapping). Features illegal for the resulting pos or locale
// are dropped, so the result always validates. Throws UnsupportedHead.
GrammarUnit aggregate_fragment(const ParseFragment& frag);

// aggregate_fragment plus the source's id, agreement_source and numeral
// value. Target morphology wins for everything else.
GrammarUnit transfer_unit(const GrammarUnit& source, const ParseFragment& target_parse);

class Gazetteer {
 public:
  Gazetteer() = default;
  explicit Gazetteer(std::set<std::string> names) : names_(std::move(names)) {}
  bool contains(std::string_view name) const { return names_.count(std::string(name)) > 0; }
  const std::set<std::string>& names() const { return names_; }

 private:
  std::set<std::string> names_;
};

// JSON array of names.
Gazetteer load_gazetteer(const std::filesystem::path& path);

// Team names ending in "s" get parsed as genitive plurals and the like:
// when the target lemma is a known name, case and number are taken from
// the source unit. Returns true when anything changed.
bool apply_gazetteer(GrammarUnit& target, const GrammarUnit& source, const Gazetteer& gazetteer);

struct SnippetRequest {
  // "<statement id>.<unit id>"
  std::string key;
  Locale locale = Locale::en_US;
  std::string text;
};

// Supplies dependency parses for translated snippets. Fragments missing
// from the result are reported as aggregation failures.
class ParserInput {
 public:
  virtual ~ParserInput() = default;
  virtual std::map<std::string, ParseFragment> parse(const std::vector<SnippetRequest>& snippets) const = 0;
};

// Pre-computed fragments, looked up by key.
class FixtureParses final : public ParserInput {
 public:
  explicit FixtureParses(std::map<std::string, ParseFragment> fragments) : fragments_(std::move(fragments)) {}
  std::map<std::string, ParseFragment> parse(const std::vector<SnippetRequest>& snippets) const override;

 private:
  std::map<std::string, ParseFragment> fragments_;
};

// Runs `<command> <input> <output>`. The input file has one snippet per
// line, "key<TAB>locale<TAB>text"; the command writes CoNLL-U with
// "# unit_id = key" comments to <output>.
class ParserCommand final : public ParserInput {
 public:
  explicit ParserCommand(std::string command) : command_(std::move(command)) {}
  std::map<std::string, ParseFragment> parse(const std::vector<SnippetRequest>& snippets) const override;

 private:
  std::string command_;
};

struct AggregationFailure {
  std::string unit_id;
  std::string reason;
  bool operator==(const AggregationFailure&) const = default;
};

struct TransferReport {
  std::string statement_id;
  std::vector<std::string> lost;
  std::vector<std::size_t> lost_slots;
  std::vector<AggregationFailure> failures;
  std::vector<std::string> gazetteer_overrides;

  bool clean() const { return lost.empty() && lost_slots.empty() && failures.empty(); }
};
json to_json_value(const TransferReport& r);

struct TransferSettings {
  Locale target_locale = Locale::de_DE;
  const Gazetteer* gazetteer = nullptr;
};

struct StatementTransfer {
  StatementTemplate target;
  TransferReport report;
};

// A BackendError raised while translating a statement. The original is
// nested (std::rethrow_if_nested recovers it).
class StatementBackendError : public BackendError {
 public:
  StatementBackendError(std::string statement_id, const std::string& cause)
      : BackendError("statement '" + statement_id + "': " + cause), statement_id_(std::move(statement_id)) {}
  const std::string& statement_id() const { return statement_id_; }

 private:
  std::string statement_id_;
};

// Units that are lost or fail to aggregate keep their translated text as
// literal text in the target template.
StatementTransfer transfer_statement(const StatementTemplate& stmt, const DataRecord& data,
                                     const RealizationContext& source_ctx, const TranslationBackend& backend,
                                     const ParserInput& parser, const TransferSettings& settings);

struct ProjectTransfer {
  Project target;
  std::vector<TransferReport> reports;
};

// Transfers every statement (conditions are not evaluated), concurrently.
// The first failing statement's exception is rethrown and nothing is
// returned.
ProjectTransfer transfer_project(const Project& project, const DataRecord& data, const RealizationContext& source_ctx,
                                 const TranslationBackend& backend, const ParserInput& parser,
                                 const TransferSettings& settings);

}  // namespace gramtrans
