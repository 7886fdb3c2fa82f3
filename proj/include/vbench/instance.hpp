#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vbench/jsonl.hpp"

namespace vbench {

enum class TaskKind {
    t0_single_event,
    t1_sequencing,
    t2_relative,
    t3_position,
    t4_semantic_outlier,
    t5_pattern_outlier,
};

enum class Level { l1, l2 };

std::string task_name(TaskKind t);
std::string task_short_name(TaskKind t);  // "t0".."t5"
TaskKind task_from_name(const std::string& name);
std::string level_name(Level l);
Level level_from_name(const std::string& name);
int events_for_level(Level l);  // 4 for L1, 8 for L2

struct Segment {
    std::string clip_id;
    std::string category_id;
    std::string label;
    std::string uri;  // clip locator, relative to the campaign's clips root
    double duration_s = 0.0;
};

struct MultiEventVideo {
    std::string id;
    std::vector<Segment> segments;  // order is the ground-truth chronology
};

struct TaskQuery {
    enum class Kind { none, relative_pair, position_probe };
    Kind kind = Kind::none;
    int qi = 0;  // 1-based, qi < qj
    int qj = 0;
    std::vector<std::string> probe_labels;
};

enum class KeyKind { full_sequence, sub_sequence, positions, outlier_position, single_label };

std::string key_kind_name(KeyKind k);
KeyKind key_kind_from_name(const std::string& name);

struct AnswerKey {
    KeyKind kind = KeyKind::full_sequence;
    std::vector<std::string> labels;  // full_sequence / sub_sequence
    std::vector<int> positions;       // positions (1-based)
    int position = 0;                 // outlier_position (1-based)
    std::string label;                // single_label

    bool operator==(const AnswerKey&) const = default;
};

struct PatternSpec {
    int m = 0;  // pattern length, 2 or 3
    int k = 0;  // repetitions
    std::vector<std::string> pattern;
    std::string outlier;
    int insert_index = 0;  // 1-based position of the outlier
};

struct SeedInfo {
    std::uint64_t root = 0;
    std::uint64_t index = 0;
    std::string row;  // stream tag, e.g. "t3-l2-nq2"
};

struct TaskInstance {
    std::string id;
    TaskKind task = TaskKind::t1_sequencing;
    std::optional<Level> level;
    MultiEventVideo video;
    std::vector<std::string> candidates;  // 20 labels, seed-shuffled
    TaskQuery query;
    AnswerKey key;
    std::optional<PatternSpec> pattern;
    SeedInfo seed;

    std::vector<std::string> chronology() const;  // segment labels in order
};

struct ShufflePair {
    std::string pair_id;
    TaskInstance original;
    TaskInstance shuffled;
    std::vector<int> permutation;  // 1-based: shuffled.segment[i] = original.segment[perm[i]]
};

json to_json(const AnswerKey& key);
AnswerKey key_from_json(const json& j);
json to_json(const TaskInstance& inst);
TaskInstance instance_from_json(const json& j);
json to_json(const ShufflePair& pair);
ShufflePair pair_from_json(const json& j);

// Reads an instance manifest, skipping meta lines; `metas` collects them when
// non-null.
std::vector<TaskInstance> load_instances(const std::filesystem::path& path,
                                         std::vector<json>* metas = nullptr);
std::vector<ShufflePair> load_pairs(const std::filesystem::path& path,
                                    std::vector<json>* metas = nullptr);

}  // namespace vbench
