// gramtrans: generate | translate | analyze | serve

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "gramtrans/app.hpp"
#include "gramtrans/service.hpp"

namespace {

gramtrans::HttpService* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-unit generation, transfer and post-edit analytics"};
  app.require_subcommand(1);

  std::string project, data, locale, lexicon_dir = ".", out;
  auto* generate = app.add_subcommand("generate", "Render a project against every data record (JSON lines)");
  generate->add_option("--project", project, "Project JSON")->required()->check(CLI::ExistingFile);
  generate->add_option("--data", data, "Data records, JSON lines")->required()->check(CLI::ExistingFile);
  generate->add_option("--locale", locale, "Locale of the project")->required();
  generate->add_option("--lexicon-dir", lexicon_dir, "Directory with lexicon.<locale>.json");
  generate->add_option("--out", out, "Output file")->required();

  std::string config_path, parses, report;
  auto* translate = app.add_subcommand("translate", "Transfer a project into a target locale");
  translate->add_option("--project", project, "Source project JSON")->required()->check(CLI::ExistingFile);
  translate->add_option("--locale", locale, "Target locale")->required();
  translate->add_option("--config", config_path, "Config JSON (backend, gazetteer, lexicon_dir)")
      ->required()
      ->check(CLI::ExistingFile);
  translate->add_option("--parses", parses, "CoNLL-U parses of the translated snippets")->check(CLI::ExistingFile);
  translate->add_option("--data", data, "Data records; the first one is rendered")->required()->check(CLI::ExistingFile);
  translate->add_option("--out", out, "Target project JSON")->required();
  translate->add_option("--report", report, "Transfer report (default <out>.report.json)");

  std::string edit_log, units, out_dir;
  auto* analyze = app.add_subcommand("analyze", "Change tables, participant counts and match rates");
  analyze->add_option("--log", edit_log, "Edit log, JSON lines")->required()->check(CLI::ExistingFile);
  analyze->add_option("--units", units, "Units file (sessions, statements, totals)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", out_dir, "Output directory")->required();

  int port = -1;
  auto* serve = app.add_subcommand("serve", "Run the review service");
  serve->add_option("--config", config_path, "Config JSON with a service section")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Port (overrides the config; 0 picks one)");

  CLI11_PARSE(app, argc, argv);

  using namespace gramtrans;
  try {
    if (*generate) {
      run_generate(project, data, parse_locale(locale), lexicon_dir, out);
    } else if (*translate) {
      TranslateOptions o;
      o.project_path = project;
      o.locale = parse_locale(locale);
      o.config = load_config(config_path);
      if (!parses.empty()) o.parses_path = parses;
      o.data_path = data;
      o.out_path = out;
      if (!report.empty()) o.report_path = report;
      const auto result = run_translate(o);
      for (const auto& r : result.reports) {
        for (const auto& id : r.lost) std::cerr << "warning: " << r.statement_id << ": unit '" << id << "' lost\n";
        for (const auto& f : r.failures) {
          std::cerr << "warning: " << r.statement_id << ": unit '" << f.unit_id << "': " << f.reason << "\n";
        }
      }
    } else if (*analyze) {
      const auto summary = run_analyze(edit_log, units, out_dir);
      std::cout << "mean changed fraction: " << format_percent(summary.changed.fraction()) << "\n"
                << "match rate: " << format_percent(summary.match_rate) << "\n";
    } else if (*serve) {
      const AppConfig config = load_config(config_path);
      auto service = make_review_service(config);
      HttpService server(*service);
      const int bound = server.bind(config.host, port >= 0 ? port : config.port);
      std::cout << "listening on " << config.host << ":" << bound << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
