#include "vbench/jsonl.hpp"

#include <fstream>
#include <stdexcept>

namespace vbench {

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    std::vector<json> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": invalid JSON record: " + e.what());
        }
    }
    return records;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    for (const json& r : records) out << r.dump() << '\n';
}

void append_jsonl(const std::filesystem::path& path, const json& record) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to manifest: " + path.string());
    out << record.dump() << '\n';
}

}  // namespace vbench
