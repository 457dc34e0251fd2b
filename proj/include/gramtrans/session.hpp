#pragma once

// Review sessions: one participant post-editing one translated project.
// State lives in <sessions_dir>/<id>.json, edits in <id>.edits.jsonl.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gramtrans/analytics.hpp"
#include "gramtrans/project.hpp"

namespace gramtrans {

inline constexpr std::size_t kVariantCount = 4;

struct StatementState {
  std::string statement_id;
  StatementTemplate auto_template;
  StatementTemplate current_template;
  std::map<std::string, std::uint64_t> unit_versions;
  std::uint64_t text_version = 0;
};

struct ReviewSession {
  std::string session_id;
  std::string project_id;
  std::string participant_id;
  Locale target_locale = Locale::de_DE;
  bool completed = false;
  std::vector<DataRecord> variants;
  std::vector<StatementState> statements;

  std::int64_t unit_total() const;
};

json session_to_json(const ReviewSession& s);
ReviewSession session_from_json(const json& j);

// Everything a session needs from its project: source templates, the
// translated project per target locale, and the data variants (first
// four records are used).
struct ProjectAssets {
  Project source;
  std::map<Locale, Project> targets;
  std::vector<DataRecord> records;
};

class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& message) : Error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class ReviewService {
 public:
  using Clock = std::function<std::string()>;

  // Loads existing sessions from `sessions_dir`.
  ReviewService(std::filesystem::path sessions_dir, std::map<std::string, ProjectAssets> projects,
                std::map<Locale, RealizationContext> contexts, Clock clock = {});

  // {project_id, participant_id, target_locale} -> session summary.
  json create_session(const json& body);
  json session_summary(const std::string& session_id) const;
  // [{statement_id, source_text, target_text, variants, units}]
  json statements(const std::string& session_id) const;
  json statement_view(const std::string& session_id, const std::string& statement_id) const;
  // Body: partial feature set (null clears), optional "pos", required
  // "version", optional "statement_id" (needed when the unit id is not
  // unique in the session).
  json patch_unit(const std::string& session_id, const std::string& unit_id, const json& body);
  // Body: {segment, text, version}; segment indexes a literal segment.
  json patch_text(const std::string& session_id, const std::string& statement_id, const json& body);
  json complete(const std::string& session_id);
  json report(const std::string& session_id) const;

  std::filesystem::path edit_log_path(const std::string& session_id) const;

 private:
  struct Entry {
    std::mutex writer;
    std::shared_ptr<const ReviewSession> state;
  };

  std::shared_ptr<Entry> find(const std::string& session_id) const;
  std::shared_ptr<const ReviewSession> snapshot(const std::string& session_id) const;
  void persist(const ReviewSession& s) const;
  json view(const ReviewSession& s, const StatementState& st) const;
  const RealizationContext& context(Locale locale) const;

  std::filesystem::path dir_;
  std::map<std::string, ProjectAssets> projects_;
  std::map<Locale, RealizationContext> contexts_;
  Clock clock_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

// UTC, second resolution, e.g. "2026-01-31T12:00:00Z".
std::string utc_timestamp();

}  // namespace gramtrans
