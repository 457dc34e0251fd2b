#include "gramtrans/session.hpp"

#include <ctime>

#include "gramtrans/io.hpp"

namespace gramtrans {

namespace {

ServiceError not_found(const std::string& what) { return ServiceError(404, what + " not found"); }

struct Rendered {
  std::optional<std::string> text;
  std::optional<std::string> error;
  std::map<std::string, Span> spans;
};

Rendered try_render(const StatementTemplate& stmt, const DataRecord& data, const RealizationContext& ctx) {
  Rendered out;
  try {
    auto r = render_statement(stmt, data, ctx);
    out.text = std::move(r.text);
    out.spans = std::move(r.spans);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

std::optional<std::string> unit_text(const Rendered& r, const std::string& unit_id) {
  if (!r.text) return std::nullopt;
  auto it = r.spans.find(unit_id);
  if (it == r.spans.end()) return std::nullopt;
  return r.text->substr(it->second.start, it->second.size());
}

json optional_json(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::vector<GrammarUnit> units_of(const StatementTemplate& stmt) {
  std::vector<GrammarUnit> out;
  for (const auto& [_, u] : stmt.units) out.push_back(u);
  return out;
}

std::string require_string(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw ServiceError(400, std::string("'") + key + "' must be a string");
  }
  return body[key].get<std::string>();
}

bool non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::uint64_t require_version(const json& body) {
  if (!body.contains("version") || !non_negative_integer(body["version"])) {
    throw ServiceError(400, "'version' must be a non-negative integer");
  }
  return body["version"].get<std::uint64_t>();
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::int64_t ReviewSession::unit_total() const {
  std::int64_t n = 0;
  for (const auto& st : statements) n += static_cast<std::int64_t>(st.auto_template.units.size());
  return n;
}

json session_to_json(const ReviewSession& s) {
  json j{{"session_id", s.session_id},
         {"project_id", s.project_id},
         {"participant_id", s.participant_id},
         {"target_locale", to_string(s.target_locale)},
         {"completed", s.completed}};
  j["variants"] = json::array();
  for (const auto& r : s.variants) j["variants"].push_back(record_to_json(r));
  j["statements"] = json::array();
  for (const auto& st : s.statements) {
    j["statements"].push_back({{"statement_id", st.statement_id},
                               {"auto", statement_to_json(st.auto_template)},
                               {"current", statement_to_json(st.current_template)},
                               {"unit_versions", st.unit_versions},
                               {"text_version", st.text_version}});
  }
  return j;
}

ReviewSession session_from_json(const json& j) {
  ReviewSession s;
  s.session_id = j.at("session_id").get<std::string>();
  s.project_id = j.at("project_id").get<std::string>();
  s.participant_id = j.at("participant_id").get<std::string>();
  s.target_locale = parse_locale(j.at("target_locale").get<std::string>());
  s.completed = j.value("completed", false);
  for (const auto& r : j.at("variants")) s.variants.push_back(record_from_json(r, "variant"));
  for (const auto& js : j.at("statements")) {
    StatementState st;
    st.statement_id = js.at("statement_id").get<std::string>();
    st.auto_template = statement_from_json(js.at("auto"), s.target_locale);
    st.current_template = statement_from_json(js.at("current"), s.target_locale);
    st.unit_versions = js.at("unit_versions").get<std::map<std::string, std::uint64_t>>();
    st.text_version = js.value("text_version", std::uint64_t{0});
    s.statements.push_back(std::move(st));
  }
  return s;
}

ReviewService::ReviewService(std::filesystem::path sessions_dir, std::map<std::string, ProjectAssets> projects,
                             std::map<Locale, RealizationContext> contexts, Clock clock)
    : dir_(std::move(sessions_dir)),
      projects_(std::move(projects)),
      contexts_(std::move(contexts)),
      clock_(clock ? std::move(clock) : Clock(utc_timestamp)) {
  for (const auto& [id, assets] : projects_) {
    if (assets.records.size() < kVariantCount) {
      throw PreconditionViolation("project '" + id + "' needs " + std::to_string(kVariantCount) + " data records");
    }
    if (!contexts_.count(assets.source.source_locale)) {
      throw PreconditionViolation("no lexicon for " + std::string(to_string(assets.source.source_locale)));
    }
    for (const auto& [locale, _] : assets.targets) {
      if (!contexts_.count(locale)) throw PreconditionViolation("no lexicon for " + std::string(to_string(locale)));
    }
  }
  std::filesystem::create_directories(dir_);
  for (const auto& file : std::filesystem::directory_iterator(dir_)) {
    if (file.path().extension() != ".json") continue;
    auto s = session_from_json(read_json_file(file.path()));
    if (s.session_id.size() > 1) {
      try {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(s.session_id.substr(1)) + 1);
      } catch (const std::exception&) {
      }
    }
    auto entry = std::make_shared<Entry>();
    entry->state = std::make_shared<const ReviewSession>(std::move(s));
    sessions_[entry->state->session_id] = entry;
  }
}

std::filesystem::path ReviewService::edit_log_path(const std::string& session_id) const {
  return dir_ / (session_id + ".edits.jsonl");
}

const RealizationContext& ReviewService::context(Locale locale) const { return contexts_.at(locale); }

std::shared_ptr<ReviewService::Entry> ReviewService::find(const std::string& session_id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw not_found("session '" + session_id + "'");
  return it->second;
}

std::shared_ptr<const ReviewSession> ReviewService::snapshot(const std::string& session_id) const {
  return std::atomic_load(&find(session_id)->state);
}

void ReviewService::persist(const ReviewSession& s) const {
  write_text_file(dir_ / (s.session_id + ".json"), dump_json(session_to_json(s)));
}

json ReviewService::create_session(const json& body) {
  if (!body.is_object()) throw ServiceError(400, "body must be a JSON object");
  std::string project_id;
  if (body.contains("project_id")) {
    project_id = require_string(body, "project_id");
  } else if (projects_.size() == 1) {
    project_id = projects_.begin()->first;
  } else {
    throw ServiceError(400, "'project_id' is required");
  }
  auto pit = projects_.find(project_id);
  if (pit == projects_.end()) throw not_found("project '" + project_id + "'");
  const std::string participant = require_string(body, "participant_id");
  Locale locale;
  try {
    locale = parse_locale(require_string(body, "target_locale"));
  } catch (const UnknownLocale& e) {
    throw ServiceError(422, e.what());
  }
  auto tit = pit->second.targets.find(locale);
  if (tit == pit->second.targets.end()) {
    throw ServiceError(422, "project '" + project_id + "' has no " + std::string(to_string(locale)) + " translation");
  }

  ReviewSession s;
  s.project_id = project_id;
  s.participant_id = participant;
  s.target_locale = locale;
  s.variants.assign(pit->second.records.begin(), pit->second.records.begin() + kVariantCount);
  for (const auto& stmt : tit->second.statements) {
    StatementState st;
    st.statement_id = stmt.id;
    st.auto_template = stmt;
    st.current_template = stmt;
    for (const auto& [uid, _] : stmt.units) st.unit_versions[uid] = 0;
    s.statements.push_back(std::move(st));
  }
  auto entry = std::make_shared<Entry>();
  {
    std::lock_guard lock(sessions_mutex_);
    char id[16];
    std::snprintf(id, sizeof id, "s%04llu", static_cast<unsigned long long>(next_id_++));
    s.session_id = id;
    persist(s);
    entry->state = std::make_shared<const ReviewSession>(std::move(s));
    sessions_[entry->state->session_id] = entry;
  }
  return session_summary(entry->state->session_id);
}

json ReviewService::session_summary(const std::string& session_id) const {
  auto s = snapshot(session_id);
  return json{{"session_id", s->session_id},         {"project_id", s->project_id},
              {"participant_id", s->participant_id}, {"target_locale", to_string(s->target_locale)},
              {"completed", s->completed},           {"statement_count", s->statements.size()},
              {"unit_total", s->unit_total()}};
}

json ReviewService::view(const ReviewSession& s, const StatementState& st) const {
  const auto& assets = projects_.at(s.project_id);
  const auto& target_ctx = context(s.target_locale);
  json j{{"statement_id", st.statement_id}};
  json errors = json::array();
  if (const auto* source = assets.source.find_statement(st.statement_id)) {
    auto r = try_render(*source, s.variants[0], context(assets.source.source_locale));
    j["source_text"] = optional_json(r.text);
    if (r.error) errors.push_back(*r.error);
  } else {
    j["source_text"] = nullptr;
  }
  std::vector<Rendered> variants;
  j["variants"] = json::array();
  for (const auto& data : s.variants) {
    variants.push_back(try_render(st.current_template, data, target_ctx));
    j["variants"].push_back(optional_json(variants.back().text));
    if (variants.back().error) errors.push_back(*variants.back().error);
  }
  j["target_text"] = j["variants"][0];
  j["units"] = json::object();
  for (const auto& [uid, unit] : st.current_template.units) {
    j["units"][uid] = {{"unit", unit}, {"version", st.unit_versions.at(uid)}, {"text", optional_json(unit_text(variants[0], uid))}};
  }
  j["template"] = serialize_template(st.current_template.segments);
  j["text_version"] = st.text_version;
  if (!errors.empty()) j["render_errors"] = errors;
  return j;
}

json ReviewService::statements(const std::string& session_id) const {
  auto s = snapshot(session_id);
  json out = json::array();
  for (const auto& st : s->statements) out.push_back(view(*s, st));
  return out;
}

json ReviewService::statement_view(const std::string& session_id, const std::string& statement_id) const {
  auto s = snapshot(session_id);
  for (const auto& st : s->statements) {
    if (st.statement_id == statement_id) return view(*s, st);
  }
  throw not_found("statement '" + statement_id + "'");
}

json ReviewService::patch_unit(const std::string& session_id, const std::string& unit_id, const json& body) {
  if (!body.is_object()) throw ServiceError(400, "body must be a JSON object");
  auto entry = find(session_id);
  std::lock_guard write_lock(entry->writer);
  ReviewSession s = *std::atomic_load(&entry->state);

  std::optional<std::string> statement_filter;
  if (body.contains("statement_id")) statement_filter = require_string(body, "statement_id");
  StatementState* target = nullptr;
  for (auto& st : s.statements) {
    if (statement_filter && st.statement_id != *statement_filter) continue;
    if (!st.current_template.units.count(unit_id)) continue;
    if (target) throw ServiceError(400, "unit '" + unit_id + "' is ambiguous; give 'statement_id'");
    target = &st;
  }
  if (!target) throw not_found("unit '" + unit_id + "'");
  const std::uint64_t version = require_version(body);
  if (version != target->unit_versions.at(unit_id)) {
    throw ServiceError(409, "unit '" + unit_id + "' is at version " + std::to_string(target->unit_versions.at(unit_id)) +
                                ", edit was based on " + std::to_string(version));
  }

  const GrammarUnit before = target->current_template.units.at(unit_id);
  GrammarUnit after = before;
  json features = before.features;
  for (const auto& [key, value] : body.items()) {
    if (key == "version" || key == "statement_id" || key == "pos") continue;
    if (value.is_null()) {
      if (key == "lemma") throw ServiceError(422, "lemma cannot be cleared");
      features.erase(key);
    } else {
      features[key] = value;
    }
  }
  try {
    after.features = features.get<FeatureSet>();
    if (body.contains("pos")) after.pos = parse_pos(body["pos"].get<std::string>());
  } catch (const json::exception& e) {
    throw ServiceError(422, e.what());
  } catch (const FormatError& e) {
    throw ServiceError(422, e.what());
  }
  if (auto report = validate_unit(after); !report.empty()) {
    throw ServiceError(422, IllegalUnit(unit_id, report).what());
  }

  json response{{"records", json::array()}};
  if (after != before) {
    const auto& ctx = context(s.target_locale);
    const auto before_text = unit_text(try_render(target->current_template, s.variants[0], ctx), unit_id);
    target->current_template.units[unit_id] = after;
    const auto after_text = unit_text(try_render(target->current_template, s.variants[0], ctx), unit_id);
    auto record = make_change_record(s.session_id, s.participant_id, s.target_locale, target->statement_id, unit_id,
                                     before, after, before_text, after_text, clock_());
    ++target->unit_versions[unit_id];
    append_record(edit_log_path(s.session_id), *record);
    response["records"].push_back(*record);
    persist(s);
  }
  response["unit"] = target->current_template.units.at(unit_id);
  response["version"] = target->unit_versions.at(unit_id);
  response["statement"] = view(s, *target);
  std::atomic_store(&entry->state, std::make_shared<const ReviewSession>(std::move(s)));
  return response;
}

json ReviewService::patch_text(const std::string& session_id, const std::string& statement_id, const json& body) {
  if (!body.is_object()) throw ServiceError(400, "body must be a JSON object");
  auto entry = find(session_id);
  std::lock_guard write_lock(entry->writer);
  ReviewSession s = *std::atomic_load(&entry->state);
  StatementState* target = nullptr;
  for (auto& st : s.statements) {
    if (st.statement_id == statement_id) target = &st;
  }
  if (!target) throw not_found("statement '" + statement_id + "'");
  if (!body.contains("segment") || !non_negative_integer(body["segment"])) {
    throw ServiceError(400, "'segment' must be a non-negative integer");
  }
  const std::string text = require_string(body, "text");
  const std::uint64_t version = require_version(body);
  if (version != target->text_version) {
    throw ServiceError(409, "statement '" + statement_id + "' text is at version " +
                                std::to_string(target->text_version));
  }
  const auto index = body["segment"].get<std::size_t>();
  auto& segments = target->current_template.segments;
  if (index >= segments.size() || !std::holds_alternative<Literal>(segments[index])) {
    throw ServiceError(422, "segment " + std::to_string(index) + " is not literal text");
  }
  if (text.empty()) throw ServiceError(422, "literal text cannot be empty");
  auto& literal = std::get<Literal>(segments[index]);

  json response{{"records", json::array()}};
  if (literal.text != text) {
    ChangeRecord r;
    r.session_id = s.session_id;
    r.participant_id = s.participant_id;
    r.locale = s.target_locale;
    r.statement_id = statement_id;
    r.unit_id = "literal:" + std::to_string(index);
    r.before_text = literal.text;
    r.after_text = text;
    r.timestamp = clock_();
    literal.text = text;
    ++target->text_version;
    append_record(edit_log_path(s.session_id), r);
    response["records"].push_back(r);
    persist(s);
  }
  response["statement"] = view(s, *target);
  std::atomic_store(&entry->state, std::make_shared<const ReviewSession>(std::move(s)));
  return response;
}

json ReviewService::complete(const std::string& session_id) {
  auto entry = find(session_id);
  {
    std::lock_guard write_lock(entry->writer);
    ReviewSession s = *std::atomic_load(&entry->state);
    if (!s.completed) {
      s.completed = true;
      persist(s);
    }
    std::atomic_store(&entry->state, std::make_shared<const ReviewSession>(std::move(s)));
  }
  return session_summary(session_id);
}

json ReviewService::report(const std::string& session_id) const {
  auto s = snapshot(session_id);
  std::vector<ChangeRecord> records;
  if (std::filesystem::exists(edit_log_path(session_id))) records = load_edit_log(edit_log_path(session_id));

  json out = session_summary(session_id);
  const auto total = s->unit_total();
  json table = json::object();
  if (total > 0) {
    const auto t = aggregate_changes(records, {{s->target_locale, total}});
    for (auto c : all_categories()) {
      if (const auto n = t.count(s->target_locale, c)) {
        table[std::string(to_string(c))] = {{"count", n}, {"percent", t.percent(s->target_locale, c)}};
      }
    }
  }
  out["changes"] = table;
  out["record_count"] = records.size();
  out["participants"] = per_participant_counts(records);
  const auto changed = changed_fraction(records, {SessionSummary{s->session_id, s->participant_id, s->target_locale,
                                                                 total, true}});
  out["changed_units"] = changed.changed_units;
  out["changed_fraction"] = changed.fraction();

  std::size_t pairs = 0, units = 0;
  json per_statement = json::array();
  for (const auto& st : s->statements) {
    const auto a = units_of(st.auto_template);
    const auto e = units_of(st.current_template);
    const auto m = match_units(a, e);
    pairs += m.pairs.size();
    units += a.size() + e.size();
    per_statement.push_back({{"statement_id", st.statement_id}, {"match_rate", m.match_rate}});
  }
  out["match_rate"] = units == 0 ? 1.0 : 2.0 * static_cast<double>(pairs) / static_cast<double>(units);
  out["statements"] = per_statement;
  return out;
}

}  // namespace gramtrans
