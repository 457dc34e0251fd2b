#include "gramtrans/project.hpp"

#include <algorithm>

#include "gramtrans/io.hpp"

namespace gramtrans {

std::vector<const UnitRef*> StatementTemplate::unit_refs() const {
  std::vector<const UnitRef*> refs;
  for (const auto& s : segments) {
    if (auto* r = std::get_if<UnitRef>(&s)) refs.push_back(r);
  }
  return refs;
}

const StatementTemplate* Project::find_statement(std::string_view statement_id) const {
  for (const auto& s : statements) {
    if (s.id == statement_id) return &s;
  }
  return nullptr;
}

void validate_project(const Project& project) {
  std::set<std::string> ids;
  for (const auto& stmt : project.statements) {
    const std::string where = "statement '" + stmt.id + "'";
    if (!ids.insert(stmt.id).second) throw ProjectError("duplicate " + where);
    if (stmt.locale != project.source_locale) {
      throw ProjectError(where + " is " + std::string(to_string(stmt.locale)) + ", project source is " +
                         std::string(to_string(project.source_locale)));
    }
    auto need_field = [&](const std::string& field, const char* what) {
      if (!project.schema.count(field)) {
        throw ProjectError(where + ": " + what + " field '" + field + "' is not in the schema");
      }
    };
    std::set<std::string> referenced;
    for (const auto& segment : stmt.segments) {
      if (auto* slot = std::get_if<DataSlot>(&segment)) need_field(slot->field, "slot");
      if (auto* ref = std::get_if<UnitRef>(&segment)) {
        if (!stmt.units.count(ref->unit_id)) {
          throw ProjectError(where + ": unit reference '" + ref->unit_id + "' does not resolve");
        }
        if (!referenced.insert(ref->unit_id).second) {
          throw ProjectError(where + ": unit '" + ref->unit_id + "' is referenced more than once");
        }
        if (ref->agreement_binding) need_field(*ref->agreement_binding, "agreement");
        if (ref->lemma_binding) need_field(*ref->lemma_binding, "lemma");
      }
    }
    if (stmt.condition) {
      for (const auto& field : stmt.condition->fields()) need_field(field, "condition");
    }
    for (const auto& [key, unit] : stmt.units) {
      if (unit.id != key) throw ProjectError(where + ": unit keyed '" + key + "' has id '" + unit.id + "'");
      if (unit.locale != stmt.locale) {
        throw ProjectError(where + ": unit '" + key + "' is " + std::string(to_string(unit.locale)));
      }
      if (auto report = validate_unit(unit); !report.empty()) throw IllegalUnit(unit.id, std::move(report));
      if (unit.agreement_source) need_field(*unit.agreement_source, "agreement");
    }
  }
}

StatementTemplate statement_from_json(const json& js, Locale locale) {
  StatementTemplate stmt;
  stmt.id = js.at("id").get<std::string>();
  stmt.locale = locale;
  try {
    stmt.segments = canonicalize(parse_template(js.at("template").get<std::string>()));
    if (js.contains("condition") && !js["condition"].is_null()) {
      stmt.condition = Condition::parse(js["condition"].get<std::string>());
    }
  } catch (const ParseError& e) {
    throw ProjectError("statement '" + stmt.id + "': " + e.what());
  }
  const json units = js.value("units", json::object());
  for (const auto& [key, ju] : units.items()) {
    json unit_json = ju;
    if (!unit_json.contains("id")) unit_json["id"] = key;
    if (!unit_json.contains("locale")) unit_json["locale"] = to_string(locale);
    stmt.units.emplace(key, unit_json.get<GrammarUnit>());
  }
  return stmt;
}

json statement_to_json(const StatementTemplate& stmt) {
  json js;
  js["id"] = stmt.id;
  js["template"] = serialize_template(stmt.segments);
  if (stmt.condition) js["condition"] = stmt.condition->source();
  js["units"] = json::object();
  for (const auto& [key, unit] : stmt.units) js["units"][key] = unit;
  return js;
}

Project project_from_json(const json& j) {
  Project p;
  try {
    p.id = j.at("id").get<std::string>();
    p.source_locale = parse_locale(j.at("source_locale").get<std::string>());
    for (const auto& code : j.value("target_locales", json::array())) {
      p.target_locales.push_back(parse_locale(code.get<std::string>()));
    }
    for (const auto& field : j.value("schema", json::array())) p.schema.insert(field.get<std::string>());
    for (const auto& js : j.value("statements", json::array())) {
      p.statements.push_back(statement_from_json(js, p.source_locale));
    }
  } catch (const json::exception& e) {
    throw ProjectError(std::string("malformed project: ") + e.what());
  } catch (const FormatError& e) {
    throw ProjectError(std::string("malformed project: ") + e.what());
  }
  validate_project(p);
  return p;
}

json project_to_json(const Project& p) {
  json j;
  j["id"] = p.id;
  j["source_locale"] = to_string(p.source_locale);
  j["target_locales"] = json::array();
  for (auto l : p.target_locales) j["target_locales"].push_back(to_string(l));
  j["schema"] = p.schema;
  j["statements"] = json::array();
  for (const auto& stmt : p.statements) j["statements"].push_back(statement_to_json(stmt));
  return j;
}

Project load_project(const std::filesystem::path& path) {
  try {
    return project_from_json(read_json_file(path));
  } catch (const ProjectError& e) {
    throw ProjectError(path.string() + ": " + e.what());
  }
}

void check_schema(const Project& project, const DataRecord& data) {
  for (const auto& [field, _] : data.fields) {
    if (field != "id" && !project.schema.count(field)) throw SchemaViolation(data.provenance, field);
  }
}

std::vector<const StatementTemplate*> select_statements(const Project& project, const DataRecord& data) {
  std::vector<const StatementTemplate*> out;
  for (const auto& stmt : project.statements) {
    if (!stmt.condition || stmt.condition->evaluate(data)) out.push_back(&stmt);
  }
  return out;
}

json to_json_value(const RenderedStatement& r) {
  json spans = json::object();
  for (const auto& [id, span] : r.spans) spans[id] = json::array({span.start, span.end});
  return json{{"statement_id", r.statement_id}, {"text", r.text}, {"spans", spans}};
}

RenderError::RenderError(std::string statement_id, std::string unit_id, const std::string& cause)
    : Error("statement '" + statement_id + "'" + (unit_id.empty() ? "" : ", unit '" + unit_id + "'") + ": " + cause),
      statement_id_(std::move(statement_id)),
      unit_id_(std::move(unit_id)) {}

BoundUnit bind_unit(const StatementTemplate& stmt, const UnitRef& ref, const DataRecord& data) {
  auto it = stmt.units.find(ref.unit_id);
  if (it == stmt.units.end()) throw RenderError(stmt.id, ref.unit_id, "unit is not defined");
  BoundUnit bound;
  try {
    bound.unit = apply_overrides(it->second, ref.overrides);
  } catch (const Error& e) {
    throw RenderError(stmt.id, ref.unit_id, e.what());
  }
  if (ref.agreement_binding) bound.unit.agreement_source = ref.agreement_binding;
  if (bound.unit.agreement_source) {
    const Value* v = data.find(*bound.unit.agreement_source);
    if (!v) throw MissingData(*bound.unit.agreement_source);
    const auto* count = std::get_if<std::int64_t>(v);
    if (!count) {
      throw RenderError(stmt.id, ref.unit_id,
                        "agreement field '" + *bound.unit.agreement_source + "' is not an integer");
    }
    bound.options.count = *count;
  }
  if (ref.lemma_binding) {
    const Value* v = data.find(*ref.lemma_binding);
    if (!v) throw MissingData(*ref.lemma_binding);
    bound.unit.features.lemma = display(*v);
    bound.unit.features.head_index.reset();
    bound.options.head = HeadSource::verbatim;
  }
  return bound;
}

namespace {

// True when text appended at the end of `so_far` starts a sentence.
bool sentence_initial(const std::string& so_far) {
  auto end = so_far.find_last_not_of(" \t\n");
  if (end == std::string::npos) return true;
  const char c = so_far[end];
  if (c == '!' || c == '?') return true;
  // "1. Spieltag" is an ordinal, not a sentence end.
  return c == '.' && end > 0 && !(so_far[end - 1] >= '0' && so_far[end - 1] <= '9');
}

}  // namespace

RenderedStatement render_statement(const StatementTemplate& stmt, const DataRecord& data,
                                   const RealizationContext& ctx) {
  RenderedStatement out;
  out.statement_id = stmt.id;
  for (const auto& segment : stmt.segments) {
    if (auto* lit = std::get_if<Literal>(&segment)) {
      out.text += lit->text;
    } else if (auto* slot = std::get_if<DataSlot>(&segment)) {
      const Value* v = data.find(slot->field);
      if (!v) throw MissingData(slot->field);
      try {
        const std::size_t start = out.text.size();
        out.text += format_value(*v, slot->format, stmt.locale);
        out.slot_spans.push_back(Span{start, out.text.size()});
      } catch (const FormatError& e) {
        throw RenderError(stmt.id, "", "slot '" + slot->field + "': " + e.what());
      }
    } else {
      const auto& ref = std::get<UnitRef>(segment);
      BoundUnit bound = bind_unit(stmt, ref, data);
      bound.options.sentence_initial = sentence_initial(out.text);
      std::string surface;
      try {
        surface = realize_unit(bound.unit, ctx, bound.options);
      } catch (const Error& e) {
        throw RenderError(stmt.id, ref.unit_id, e.what());
      }
      const std::size_t start = out.text.size();
      out.text += surface;
      out.spans[ref.unit_id] = Span{start, out.text.size()};
    }
  }
  return out;
}

}  // namespace gramtrans
