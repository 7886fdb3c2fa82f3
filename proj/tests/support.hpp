#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vbench/catalog.hpp"
#include "vbench/instance.hpp"
#include "vbench/jsonl.hpp"

namespace vbtest {

using vbench::json;

// n_categories spread over n_groups groups of group_size (first group flagged
// excluded when mark_excluded), remainder ungrouped; clips_per_category
// validation clips each.
inline std::vector<json> catalog_records(int n_categories, int n_groups, int group_size,
                                         int clips_per_category, bool mark_excluded = false) {
    std::vector<json> recs;
    recs.push_back({{"kind", "meta"},
                    {"schema", "vector-catalog/1"},
                    {"source", "fixture"},
                    {"version", "test-1"}});
    auto cat_id = [](int i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "c%03d", i);
        return std::string(buf);
    };
    for (int i = 1; i <= n_categories; ++i) {
        json rec = {{"kind", "category"},
                    {"category_id", cat_id(i)},
                    {"label", "action " + std::to_string(i)}};
        const int g = (i - 1) / group_size;
        if (g < n_groups) rec["group_id"] = "g" + std::to_string(g + 1);
        recs.push_back(std::move(rec));
    }
    for (int g = 1; g <= n_groups; ++g) {
        std::vector<std::string> members;
        for (int i = (g - 1) * group_size + 1; i <= g * group_size && i <= n_categories; ++i)
            members.push_back(cat_id(i));
        json rec = {{"kind", "group"},
                    {"group_id", "g" + std::to_string(g)},
                    {"name", "group " + std::to_string(g)},
                    {"members", members}};
        if (mark_excluded && g == 1) rec["excluded"] = true;
        recs.push_back(std::move(rec));
    }
    int clip = 0;
    for (int i = 1; i <= n_categories; ++i) {
        for (int c = 0; c < clips_per_category; ++c) {
            ++clip;
            char buf[16];
            std::snprintf(buf, sizeof buf, "k%04d", clip);
            recs.push_back({{"kind", "clip"},
                            {"clip_id", std::string(buf)},
                            {"category_id", cat_id(i)},
                            {"uri", "clips/" + std::string(buf) + ".mp4"},
                            {"duration_s", 4.0 + (clip % 7)},
                            {"split", "validation"}});
        }
    }
    return recs;
}

inline vbench::ClipCatalog make_catalog(int n_categories = 24, int n_groups = 2,
                                        int group_size = 8, int clips_per_category = 2) {
    return vbench::ClipCatalog::from_records(
        catalog_records(n_categories, n_groups, group_size, clips_per_category), "<fixture>");
}

// unique scratch directory under the build tree
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("vbench-" + tag + "-" + std::to_string(counter()++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::filesystem::path path_;
};

}  // namespace vbtest
