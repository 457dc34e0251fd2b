#pragma once

// Document planning and rendering: projects of conditional statement
// templates, statement selection against a data record, and rendering with
// per-unit span maps.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gramtrans/condition.hpp"
#include "gramtrans/data.hpp"
#include "gramtrans/grammar.hpp"
#include "gramtrans/lexicon.hpp"
#include "gramtrans/realizer.hpp"
#include "gramtrans/template.hpp"

namespace gramtrans {

struct StatementTemplate {
  std::string id;
  Locale locale = Locale::en_US;
  Segments segments;
  std::optional<Condition> condition;
  std::map<std::string, GrammarUnit> units;

  // UnitRefs in template order.
  std::vector<const UnitRef*> unit_refs() const;
};

struct Project {
  std::string id;
  Locale source_locale = Locale::en_US;
  std::vector<Locale> target_locales;
  std::vector<StatementTemplate> statements;
  std::set<std::string> schema;

  const StatementTemplate* find_statement(std::string_view statement_id) const;
};

class ProjectError : public Error {
 public:
  using Error::Error;
};

// Checks the project invariants: unique statement ids, one locale, every
// UnitRef resolving (each unit referenced at most once per statement),
// fields referenced by slots, bindings and conditions present in the
// schema, and every unit legal. Throws ProjectError.
void validate_project(const Project& project);

// Units default their id to the map key and their locale to `locale`.
StatementTemplate statement_from_json(const json& j, Locale locale);
json statement_to_json(const StatementTemplate& stmt);

Project project_from_json(const json& j);
json project_to_json(const Project& project);
Project load_project(const std::filesystem::path& path);

class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string record, std::string field)
      : Error("record '" + record + "': field '" + field + "' is not in the project schema"),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Every field of `data` must be in the schema ("id" is always allowed).
void check_schema(const Project& project, const DataRecord& data);

// Statements whose condition is absent or true, in project order.
std::vector<const StatementTemplate*> select_statements(const Project& project, const DataRecord& data);

struct RenderedStatement {
  std::string statement_id;
  std::string text;
  // Byte offsets into `text`. Each span holds exactly the realize_unit
  // output for that unit, sentence-initial capitalization included.
  std::map<std::string, Span> spans;
  // Data slot output, in slot order.
  std::vector<Span> slot_spans;
};

json to_json_value(const RenderedStatement& r);

// Rendering failure with the statement (and unit, if any) attached.
class RenderError : public Error {
 public:
  RenderError(std::string statement_id, std::string unit_id, const std::string& cause);
  const std::string& statement_id() const { return statement_id_; }
  const std::string& unit_id() const { return unit_id_; }

 private:
  std::string statement_id_;
  std::string unit_id_;
};

// Resolves a UnitRef against its statement and the data: applies the
// overrides and bindings. The options carry the agreement count, if any.
struct BoundUnit {
  GrammarUnit unit;
  RealizeOptions options;
};
BoundUnit bind_unit(const StatementTemplate& stmt, const UnitRef& ref, const DataRecord& data);

// Throws MissingData for unbound slots and RenderError (wrapping realizer
// errors) for units.
RenderedStatement render_statement(const StatementTemplate& stmt, const DataRecord& data,
                                   const RealizationContext& ctx);

}  // namespace gramtrans
