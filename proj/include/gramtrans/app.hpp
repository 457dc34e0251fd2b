#pragma once

// Application entry points shared by the CLI and the Python module.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gramtrans/analytics.hpp"
#include "gramtrans/backend.hpp"
#include "gramtrans/session.hpp"
#include "gramtrans/transfer.hpp"

namespace gramtrans {

struct BackendConfig {
  std::string type = "tm";  // "tm" or "http"
  std::filesystem::path tm_path;
  std::string url;
  int timeout_ms = 5000;
  int retries = 2;
};

struct ServiceProjectConfig {
  std::filesystem::path source;
  std::map<Locale, std::filesystem::path> targets;
  std::filesystem::path data;
};

struct AppConfig {
  BackendConfig backend;
  std::optional<std::filesystem::path> gazetteer;
  std::filesystem::path lexicon_dir;
  // Used when no parses file is given to translate.
  std::optional<std::string> parser_command;
  std::filesystem::path sessions_dir = "sessions";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<ServiceProjectConfig> projects;
};

inline constexpr const char* kBackendUrlEnv = "GRAMTRANS_BACKEND_URL";

// JSON config. Relative paths resolve against the config file's directory.
// GRAMTRANS_BACKEND_URL, when set, replaces backend.url.
AppConfig config_from_json(const json& j, const std::filesystem::path& base_dir);
AppConfig load_config(const std::filesystem::path& path);

std::unique_ptr<TranslationBackend> make_backend(const BackendConfig& config);

// One JSON line per record: {record, text, statements: [{statement_id,
// text, spans}]}. Schema violations and render errors abort before
// anything is written.
std::string generate_jsonl(const Project& project, const std::vector<DataRecord>& records,
                           const RealizationContext& ctx);
void run_generate(const std::filesystem::path& project_path, const std::filesystem::path& data_path, Locale locale,
                  const std::filesystem::path& lexicon_dir, const std::filesystem::path& out_path);

struct TranslateOptions {
  std::filesystem::path project_path;
  Locale locale = Locale::de_DE;
  AppConfig config;
  // CoNLL-U fixture; without it config.parser_command is used.
  std::optional<std::filesystem::path> parses_path;
  std::filesystem::path data_path;
  std::filesystem::path out_path;
  // Defaults to <out_path>.report.json.
  std::optional<std::filesystem::path> report_path;
};

// Writes the target project and the transfer report, or nothing.
ProjectTransfer run_translate(const TranslateOptions& options);
json transfer_report_json(const ProjectTransfer& transfer);

struct AnalysisSummary {
  ChangedFraction changed;
  double match_rate = 1.0;
  std::size_t pairs = 0;
  std::size_t low_confidence_pairs = 0;
  std::size_t records = 0;
  std::size_t excluded_records = 0;
};

// Writes changes.csv, changes_exact.csv, participants.csv and summary.json
// into out_dir.
AnalysisSummary run_analyze(const std::filesystem::path& edit_log, const std::filesystem::path& units_path,
                            const std::filesystem::path& out_dir);

// Builds a ReviewService from the config's projects and lexicons.
std::unique_ptr<ReviewService> make_review_service(const AppConfig& config, ReviewService::Clock clock = {});

}  // namespace gramtrans
