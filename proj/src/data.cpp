#include "gramtrans/data.hpp"

#include "gramtrans/io.hpp"

namespace gramtrans {

std::string display(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<std::string>(v);
}

const Value* DataRecord::find(std::string_view field) const {
  auto it = fields.find(field);
  return it == fields.end() ? nullptr : &it->second;
}

DataRecord record_from_json(const nlohmann::json& j, std::string default_provenance) {
  if (!j.is_object()) throw FormatError("data record must be a JSON object");
  DataRecord r;
  r.provenance = std::move(default_provenance);
  for (const auto& [key, value] : j.items()) {
    if (value.is_boolean()) {
      r.fields.emplace(key, value.get<bool>());
    } else if (value.is_number_integer()) {
      r.fields.emplace(key, value.get<std::int64_t>());
    } else if (value.is_string()) {
      r.fields.emplace(key, value.get<std::string>());
    } else {
      throw FormatError("data field '" + key + "' must be an integer, string or boolean");
    }
  }
  if (auto id = r.find("id")) r.provenance = display(*id);
  return r;
}

nlohmann::json record_to_json(const DataRecord& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : r.fields) {
    std::visit([&](const auto& v) { j[key] = v; }, value);
  }
  return j;
}

std::vector<DataRecord> load_records(const std::filesystem::path& path) {
  std::vector<DataRecord> records;
  for_each_json_line(path, [&](std::size_t line, const nlohmann::json& j) {
    try {
      records.push_back(record_from_json(j, "line-" + std::to_string(line)));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return records;
}

}  // namespace gramtrans
