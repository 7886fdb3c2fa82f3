#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace vbench {

using json = nlohmann::ordered_json;

// All manifests are UTF-8 line-delimited JSON. Objects are serialized with the
// field order they were built in, so emitting the same data twice is
// byte-identical.
std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);
void append_jsonl(const std::filesystem::path& path, const json& record);

}  // namespace vbench
