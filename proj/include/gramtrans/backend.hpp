#pragma once

// Translation backends. Marker preservation is not part of the contract;
// align_translation handles whatever comes back.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "gramtrans/grammar.hpp"
#include "gramtrans/markers.hpp"

namespace gramtrans {

class TranslationRequest {
 public:
  // Throws PreconditionViolation for identical locales or unbalanced markers.
  TranslationRequest(Locale source, Locale target, TaggedText text);
  Locale source_locale() const { return source_; }
  Locale target_locale() const { return target_; }
  const TaggedText& tagged_text() const { return text_; }

 private:
  Locale source_;
  Locale target_;
  TaggedText text_;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

class MissingEntry : public BackendError {
 public:
  explicit MissingEntry(std::string source)
      : BackendError("no translation memory entry for '" + source + "'"), source_(std::move(source)) {}
  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

class Unavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

class BadResponse : public BackendError {
 public:
  BadResponse(int status, const std::string& detail)
      : BackendError("bad response (status " + std::to_string(status) + "): " + detail), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Implementations must be safe to call concurrently.
class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;
  virtual TaggedText translate(const TranslationRequest& request) const = 0;
};

// Collapses whitespace runs, trims, and drops spaces before . , ; : ! ? )
std::string normalize_tm_key(std::string_view s);

struct TmEntry {
  Locale source_locale = Locale::en_US;
  Locale target_locale = Locale::de_DE;
  std::string source;
  std::string target;
};

class TranslationMemory final : public TranslationBackend {
 public:
  // Throws FormatError on duplicate normalized keys or unbalanced entries.
  explicit TranslationMemory(const std::vector<TmEntry>& entries);
  TaggedText translate(const TranslationRequest& request) const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::tuple<Locale, Locale, std::string>, std::string> table_;
};

// JSON array of {source_locale, target_locale, source, target}.
TranslationMemory load_translation_memory(const std::filesystem::path& path);

struct HttpBackendConfig {
  std::string url;  // scheme://host[:port], no path
  std::chrono::milliseconds timeout{5000};
  int retries = 2;
};

// POST /translate {"source","target","text"} -> {"text"}. Connection
// errors and 5xx are retried, at most 1 + retries attempts in total; any
// other non-200 status is a BadResponse.
class HttpBackend final : public TranslationBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  TaggedText translate(const TranslationRequest& request) const override;
  const HttpBackendConfig& config() const { return config_; }

 private:
  HttpBackendConfig config_;
};

}  // namespace gramtrans
