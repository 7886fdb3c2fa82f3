#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbench/jsonl.hpp"
#include "vbench/rng.hpp"

namespace vbench {

inline constexpr int kCandidateSetSize = 20;

struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Split { train, validation };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

struct EventCategory {
    std::string id;
    std::string label;
    std::string group_id;  // empty = ungrouped; usable for tasks 1-3 and 5 only
};

struct SemanticGroup {
    std::string id;
    std::string name;
    std::vector<std::string> members;  // category ids, >= 2
    bool excluded = false;             // never sampled by task-4 generation
};

struct ClipRecord {
    std::string id;
    std::string category_id;
    std::string uri;
    double duration_s = 0.0;
    Split split = Split::validation;
};

struct CatalogMeta {
    std::string schema;
    std::string source;
    std::string version;
};

// Immutable after load; safe to share across threads.
class ClipCatalog {
public:
    static ClipCatalog load(const std::filesystem::path& path);
    static ClipCatalog from_records(const std::vector<json>& records, const std::string& origin);

    const CatalogMeta& meta() const { return meta_; }
    const std::vector<EventCategory>& categories() const { return categories_; }
    const std::vector<SemanticGroup>& groups() const { return groups_; }
    const std::vector<ClipRecord>& clips() const { return clips_; }

    const EventCategory& category(const std::string& id) const;
    const EventCategory* find_category(const std::string& id) const;
    const EventCategory* find_category_by_label(const std::string& label) const;
    const SemanticGroup* find_group(const std::string& id) const;

    // Clips from the validation split, the pool every generator samples from.
    const std::vector<const ClipRecord*>& validation_clips(const std::string& category_id) const;

    // Categories with at least one validation clip.
    const std::vector<std::string>& usable_category_ids() const { return usable_; }

    std::vector<std::string> all_labels() const;

private:
    CatalogMeta meta_;
    std::vector<EventCategory> categories_;
    std::vector<SemanticGroup> groups_;
    std::vector<ClipRecord> clips_;
    std::map<std::string, std::size_t> category_index_;
    std::map<std::string, std::size_t> label_index_;
    std::map<std::string, std::size_t> group_index_;
    std::map<std::string, std::vector<const ClipRecord*>> validation_by_category_;
    std::vector<std::string> usable_;

    void validate(const std::string& origin);
};

// `size` distinct labels containing all of `must_include`, order shuffled by
// rng. Distractors are drawn from the whole category vocabulary.
std::vector<std::string> sample_candidate_set(const ClipCatalog& catalog,
                                              const std::vector<std::string>& must_include,
                                              std::size_t size, Rng& rng);

}  // namespace vbench
