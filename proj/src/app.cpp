#include "gramtrans/app.hpp"

#include <cstdlib>

#include "gramtrans/io.hpp"

namespace gramtrans {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}


}  // namespace

AppConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  AppConfig c;
  try {
    if (j.contains("backend")) {
      const auto& b = j["backend"];
      c.backend.type = b.value("type", std::string("tm"));
      if (b.contains("tm_path")) c.backend.tm_path = resolve(base_dir, b["tm_path"].get<std::string>());
      c.backend.url = b.value("url", std::string());
      c.backend.timeout_ms = b.value("timeout_ms", 5000);
      c.backend.retries = b.value("retries", 2);
    }
    if (j.contains("gazetteer")) c.gazetteer = resolve(base_dir, j["gazetteer"].get<std::string>());
    c.lexicon_dir = resolve(base_dir, j.value("lexicon_dir", std::string(".")));
    if (j.contains("parser_command")) c.parser_command = j["parser_command"].get<std::string>();
    if (j.contains("service")) {
      const auto& s = j["service"];
      c.sessions_dir = resolve(base_dir, s.value("sessions_dir", std::string("sessions")));
      c.host = s.value("host", c.host);
      c.port = s.value("port", c.port);
      for (const auto& p : s.value("projects", json::array())) {
        ServiceProjectConfig pc;
        pc.source = resolve(base_dir, p.at("source").get<std::string>());
        pc.data = resolve(base_dir, p.at("data").get<std::string>());
        for (const auto& [code, path] : p.at("targets").items()) {
          pc.targets[parse_locale(code)] = resolve(base_dir, path.get<std::string>());
        }
        c.projects.push_back(std::move(pc));
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  }
  if (c.backend.type != "tm" && c.backend.type != "http") {
    throw FormatError("backend.type must be \"tm\" or \"http\", got \"" + c.backend.type + "\"");
  }
  if (const char* url = std::getenv(kBackendUrlEnv); url && *url) c.backend.url = url;
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(read_json_file(path), path.parent_path());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::unique_ptr<TranslationBackend> make_backend(const BackendConfig& config) {
  if (config.type == "http") {
    return std::make_unique<HttpBackend>(
        HttpBackendConfig{config.url, std::chrono::milliseconds(config.timeout_ms), config.retries});
  }
  if (config.tm_path.empty()) throw FormatError("backend.tm_path is required for a tm backend");
  return std::make_unique<TranslationMemory>(load_translation_memory(config.tm_path));
}

std::string generate_jsonl(const Project& project, const std::vector<DataRecord>& records,
                           const RealizationContext& ctx) {
  std::string out;
  for (const auto& record : records) {
    check_schema(project, record);
    json line{{"record", record.provenance}, {"statements", json::array()}};
    std::string text;
    for (const auto* stmt : select_statements(project, record)) {
      RenderedStatement r;
      try {
        r = render_statement(*stmt, record, ctx);
      } catch (const Error& e) {
        throw Error("record '" + record.provenance + "': " + e.what());
      }
      text += (text.empty() ? "" : " ") + r.text;
      line["statements"].push_back(to_json_value(r));
    }
    line["text"] = text;
    out += line.dump() + "\n";
  }
  return out;
}

void run_generate(const std::filesystem::path& project_path, const std::filesystem::path& data_path, Locale locale,
                  const std::filesystem::path& lexicon_dir, const std::filesystem::path& out_path) {
  const Project project = load_project(project_path);
  if (project.source_locale != locale) {
    throw PreconditionViolation("project '" + project.id + "' is " + std::string(to_string(project.source_locale)) +
                                ", not " + std::string(to_string(locale)));
  }
  const auto records = load_records(data_path);
  const auto ctx = load_context(lexicon_dir, locale);
  write_text_file(out_path, generate_jsonl(project, records, ctx));
}

json transfer_report_json(const ProjectTransfer& transfer) {
  json reports = json::array();
  for (const auto& r : transfer.reports) reports.push_back(to_json_value(r));
  return json{{"project_id", transfer.target.id},
              {"target_locale", to_string(transfer.target.source_locale)},
              {"statements", reports}};
}

ProjectTransfer run_translate(const TranslateOptions& o) {
  const Project project = load_project(o.project_path);
  if (o.locale == project.source_locale) {
    throw PreconditionViolation("target locale equals the project's source locale");
  }
  const auto records = load_records(o.data_path);
  if (records.empty() && !project.statements.empty()) {
    throw PreconditionViolation(o.data_path.string() + " has no records to render the source statements");
  }
  const DataRecord data = records.empty() ? DataRecord{} : records.front();
  if (!records.empty()) check_schema(project, data);
  const auto source_ctx = load_context(o.config.lexicon_dir, project.source_locale);
  const auto backend = make_backend(o.config.backend);
  std::unique_ptr<ParserInput> parser;
  if (o.parses_path) {
    parser = std::make_unique<FixtureParses>(load_conllu(*o.parses_path, o.locale));
  } else if (o.config.parser_command) {
    parser = std::make_unique<ParserCommand>(*o.config.parser_command);
  } else {
    throw PreconditionViolation("no parses file and no parser_command configured");
  }
  std::optional<Gazetteer> gazetteer;
  if (o.config.gazetteer) gazetteer = load_gazetteer(*o.config.gazetteer);

  TransferSettings settings;
  settings.target_locale = o.locale;
  settings.gazetteer = gazetteer ? &*gazetteer : nullptr;
  ProjectTransfer result = transfer_project(project, data, source_ctx, *backend, *parser, settings);
  validate_project(result.target);

  const auto report_path = o.report_path ? *o.report_path : std::filesystem::path(o.out_path.string() + ".report.json");
  write_text_file(o.out_path, dump_json(project_to_json(result.target)));
  write_text_file(report_path, dump_json(transfer_report_json(result)));
  return result;
}

AnalysisSummary run_analyze(const std::filesystem::path& edit_log, const std::filesystem::path& units_path,
                            const std::filesystem::path& out_dir) {
  const auto records = load_edit_log(edit_log);
  const UnitsFile units = load_units_file(units_path);
  const auto used = completed_only(records, units.sessions);

  AnalysisSummary summary;
  summary.records = records.size();
  summary.excluded_records = records.size() - used.size();
  summary.changed = changed_fraction(records, units.sessions);

  std::size_t matched_units = 0, all_units = 0;
  json statements = json::array();
  for (const auto& st : units.statements) {
    const auto m = match_units(st.auto_units, st.edited_units);
    summary.pairs += m.pairs.size();
    for (const auto& p : m.pairs) summary.low_confidence_pairs += p.low_confidence() ? 1 : 0;
    matched_units += 2 * m.pairs.size();
    all_units += st.auto_units.size() + st.edited_units.size();
    statements.push_back({{"session_id", st.session_id},
                          {"statement_id", st.statement_id},
                          {"pairs", m.pairs.size()},
                          {"unmatched_auto", m.unmatched_auto.size()},
                          {"unmatched_edited", m.unmatched_edited.size()},
                          {"match_rate", m.match_rate}});
  }
  summary.match_rate = all_units == 0 ? 1.0 : static_cast<double>(matched_units) / static_cast<double>(all_units);

  const ChangeTable table = aggregate_changes(used, units.unit_totals);
  std::filesystem::create_directories(out_dir);
  if (records.empty()) {
    // Header-only outputs for an empty log.
    std::string header = "category";
    for (auto l : table.locales) header += "," + std::string(to_string(l));
    write_text_file(out_dir / "changes.csv", header + "\n");
    write_text_file(out_dir / "changes_exact.csv", "category,locale,incidences,unit_total,percent\n");
  } else {
    write_text_file(out_dir / "changes.csv", change_table_csv(table));
    write_text_file(out_dir / "changes_exact.csv", change_table_exact_csv(table));
  }
  write_text_file(out_dir / "participants.csv", participant_csv(per_participant_counts(records)));

  json j{{"records", summary.records},
         {"excluded_records", summary.excluded_records},
         {"changed_units", summary.changed.changed_units},
         {"unit_total", summary.changed.unit_total},
         {"mean_changed_fraction", summary.changed.fraction()},
         {"mean_changed_percent", format_percent(summary.changed.fraction())},
         {"match_rate", summary.match_rate},
         {"pairs", summary.pairs},
         {"low_confidence_pairs", summary.low_confidence_pairs},
         {"statements", statements}};
  write_text_file(out_dir / "summary.json", dump_json(j));
  return summary;
}

std::unique_ptr<ReviewService> make_review_service(const AppConfig& config, ReviewService::Clock clock) {
  std::map<std::string, ProjectAssets> projects;
  std::set<Locale> locales;
  for (const auto& pc : config.projects) {
    ProjectAssets assets;
    assets.source = load_project(pc.source);
    assets.records = load_records(pc.data);
    locales.insert(assets.source.source_locale);
    for (const auto& [locale, path] : pc.targets) {
      assets.targets.emplace(locale, load_project(path));
      locales.insert(locale);
    }
    const auto id = assets.source.id;
    projects.emplace(id, std::move(assets));
  }
  std::map<Locale, RealizationContext> contexts;
  for (auto l : locales) contexts.emplace(l, load_context(config.lexicon_dir, l));
  return std::make_unique<ReviewService>(config.sessions_dir, std::move(projects), std::move(contexts),
                                         std::move(clock));
}

}  // namespace gramtrans
