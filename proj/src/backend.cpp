#include "gramtrans/backend.hpp"

#include <httplib.h>

#include "gramtrans/io.hpp"
#include "gramtrans/text.hpp"

namespace gramtrans {

TranslationRequest::TranslationRequest(Locale source, Locale target, TaggedText text)
    : source_(source), target_(target), text_(std::move(text)) {
  if (source == target) {
    throw PreconditionViolation("translation request from " + std::string(to_string(source)) + " to itself");
  }
  if (!markers_balanced(text_.text)) throw PreconditionViolation("translation request has unbalanced markers");
}

std::string normalize_tm_key(std::string_view s) {
  const std::string collapsed = text::collapse_whitespace(s);
  std::string out;
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    if (collapsed[i] == ' ' && i + 1 < collapsed.size() &&
        std::string_view(".,;:!?)").find(collapsed[i + 1]) != std::string_view::npos) {
      continue;
    }
    out += collapsed[i];
  }
  return out;
}

TranslationMemory::TranslationMemory(const std::vector<TmEntry>& entries) {
  for (const auto& e : entries) {
    if (!markers_balanced(e.source) || !markers_balanced(e.target)) {
      throw FormatError("translation memory entry has unbalanced markers: '" + e.source + "'");
    }
    auto key = std::make_tuple(e.source_locale, e.target_locale, normalize_tm_key(e.source));
    if (!table_.emplace(std::move(key), e.target).second) {
      throw FormatError("duplicate translation memory entry: '" + e.source + "'");
    }
  }
}

TaggedText TranslationMemory::translate(const TranslationRequest& request) const {
  const std::string key = normalize_tm_key(request.tagged_text().text);
  auto it = table_.find(std::make_tuple(request.source_locale(), request.target_locale(), key));
  if (it == table_.end()) throw MissingEntry(key);
  return TaggedText{it->second};
}

TranslationMemory load_translation_memory(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  if (!j.is_array()) throw FormatError(path.string() + ": translation memory must be a JSON array");
  std::vector<TmEntry> entries;
  try {
    for (const auto& e : j) {
      entries.push_back(TmEntry{parse_locale(e.at("source_locale").get<std::string>()),
                                parse_locale(e.at("target_locale").get<std::string>()),
                                e.at("source").get<std::string>(), e.at("target").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return TranslationMemory(entries);
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (config_.url.empty()) throw PreconditionViolation("HTTP backend needs a URL");
  if (config_.retries < 0) throw PreconditionViolation("retries must be non-negative");
}

TaggedText HttpBackend::translate(const TranslationRequest& request) const {
  // One client per call: no state shared between in-flight requests.
  httplib::Client client(config_.url);
  const auto secs = config_.timeout.count() / 1000;
  const auto usecs = (config_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const std::string body = json{{"source", to_string(request.source_locale())},
                                {"target", to_string(request.target_locale())},
                                {"text", request.tagged_text().text}}
                               .dump();
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    auto res = client.Post("/translate", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw BadResponse(res->status, res->body);
    try {
      const json j = json::parse(res->body);
      return TaggedText{j.at("text").get<std::string>()};
    } catch (const json::exception& e) {
      throw BadResponse(res->status, std::string("malformed body: ") + e.what());
    }
  }
  throw Unavailable(config_.url + " unavailable after " + std::to_string(config_.retries + 1) +
                    " attempts: " + last_error);
}

}  // namespace gramtrans
