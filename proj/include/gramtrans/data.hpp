#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramtrans/errors.hpp"

namespace gramtrans {

using Value = std::variant<std::int64_t, std::string, bool>;

std::string display(const Value& v);

// One flat input instance.
struct DataRecord {
  std::map<std::string, Value, std::less<>> fields;
  std::string provenance;

  const Value* find(std::string_view field) const;
};

// Records are read from JSON objects with scalar values. The "id" key, when
// present and not part of the schema, becomes the provenance.
DataRecord record_from_json(const nlohmann::json& j, std::string default_provenance);
nlohmann::json record_to_json(const DataRecord& r);

// One record per line. Line N without an "id" gets provenance "line-N".
std::vector<DataRecord> load_records(const std::filesystem::path& path);

class MissingData : public Error {
 public:
  explicit MissingData(std::string field)
      : Error("no value bound for data field '" + field + "'"), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace gramtrans
