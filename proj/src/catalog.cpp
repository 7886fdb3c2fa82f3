#include "vbench/catalog.hpp"

#include <algorithm>
#include <set>

namespace vbench {

namespace {

constexpr const char* kCatalogSchema = "vector-catalog/1";

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw CatalogError(origin + ": " + msg);
}

std::string require_string(const json& rec, const char* field, const std::string& origin) {
    if (!rec.contains(field) || !rec[field].is_string())
        fail(origin, "record kind '" + rec.value("kind", "?") + "' missing string field '" + field + "': " + rec.dump());
    return rec[field].get<std::string>();
}

}  // namespace

std::string split_name(Split s) { return s == Split::train ? "train" : "validation"; }

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "validation") return Split::validation;
    throw CatalogError("unknown split '" + name + "' (expected train|validation)");
}

ClipCatalog ClipCatalog::load(const std::filesystem::path& path) {
    return from_records(read_jsonl(path), path.string());
}

ClipCatalog ClipCatalog::from_records(const std::vector<json>& records, const std::string& origin) {
    ClipCatalog cat;
    if (records.empty()) fail(origin, "empty catalog manifest");
    const json& head = records.front();
    if (!head.is_object() || head.value("kind", "") != "meta")
        fail(origin, "first record must be the meta header carrying the schema version");
    if (head.value("schema", "") != kCatalogSchema)
        fail(origin, "unsupported schema '" + head.value("schema", "") + "' (expected " +
                         kCatalogSchema + ")");
    cat.meta_.schema = head["schema"].get<std::string>();
    cat.meta_.source = head.value("source", "");
    cat.meta_.version = head.value("version", "");

    for (std::size_t i = 1; i < records.size(); ++i) {
        const json& rec = records[i];
        if (!rec.is_object() || !rec.contains("kind") || !rec["kind"].is_string())
            fail(origin, "record " + std::to_string(i + 1) + " has no 'kind' field");
        const std::string kind = rec["kind"].get<std::string>();
        if (kind == "category") {
            EventCategory c;
            c.id = require_string(rec, "category_id", origin);
            c.label = require_string(rec, "label", origin);
            if (rec.contains("group_id") && !rec["group_id"].is_null())
                c.group_id = rec["group_id"].get<std::string>();
            cat.categories_.push_back(std::move(c));
        } else if (kind == "group") {
            SemanticGroup g;
            g.id = require_string(rec, "group_id", origin);
            g.name = require_string(rec, "name", origin);
            if (!rec.contains("members") || !rec["members"].is_array())
                fail(origin, "group '" + g.id + "' missing member list");
            for (const json& m : rec["members"]) g.members.push_back(m.get<std::string>());
            g.excluded = rec.value("excluded", false);
            cat.groups_.push_back(std::move(g));
        } else if (kind == "clip") {
            ClipRecord c;
            c.id = require_string(rec, "clip_id", origin);
            c.category_id = require_string(rec, "category_id", origin);
            c.uri = require_string(rec, "uri", origin);
            if (!rec.contains("duration_s") || !rec["duration_s"].is_number())
                fail(origin, "clip '" + c.id + "' missing numeric duration_s");
            c.duration_s = rec["duration_s"].get<double>();
            c.split = split_from_name(require_string(rec, "split", origin));
            cat.clips_.push_back(std::move(c));
        } else if (kind == "meta") {
            fail(origin, "duplicate meta record at line " + std::to_string(i + 1));
        } else {
            fail(origin, "unknown record kind '" + kind + "'");
        }
    }

    cat.validate(origin);
    return cat;
}

void ClipCatalog::validate(const std::string& origin) {
    for (std::size_t i = 0; i < categories_.size(); ++i) {
        const EventCategory& c = categories_[i];
        if (!category_index_.emplace(c.id, i).second)
            fail(origin, "duplicate category_id '" + c.id + "'");
        if (!label_index_.emplace(c.label, i).second)
            fail(origin, "duplicate category label '" + c.label + "'");
    }
    std::map<std::string, std::string> member_owner;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        const SemanticGroup& g = groups_[i];
        if (!group_index_.emplace(g.id, i).second)
            fail(origin, "duplicate group_id '" + g.id + "'");
        if (g.members.size() < 2)
            fail(origin, "group '" + g.id + "' has fewer than 2 members");
        std::set<std::string> seen;
        for (const std::string& m : g.members) {
            if (!category_index_.count(m))
                fail(origin, "group '" + g.id + "' references unknown category '" + m + "'");
            if (!seen.insert(m).second)
                fail(origin, "group '" + g.id + "' lists category '" + m + "' twice");
            auto [it, fresh] = member_owner.emplace(m, g.id);
            if (!fresh)
                fail(origin, "category '" + m + "' belongs to both group '" + it->second +
                                 "' and group '" + g.id + "'");
        }
    }
    // the category's declared group must agree with the group's member list
    for (const EventCategory& c : categories_) {
        auto owner = member_owner.find(c.id);
        const std::string declared = c.group_id;
        const std::string actual = owner == member_owner.end() ? "" : owner->second;
        if (declared != actual)
            fail(origin, "category '" + c.id + "' declares group '" + declared +
                             "' but group membership says '" + actual + "'");
    }
    std::set<std::string> clip_ids;
    for (const ClipRecord& c : clips_) {
        if (!clip_ids.insert(c.id).second) fail(origin, "duplicate clip_id '" + c.id + "'");
        if (!category_index_.count(c.category_id))
            fail(origin, "clip '" + c.id + "' references unknown category '" + c.category_id + "'");
        if (!(c.duration_s > 0.0))
            fail(origin, "clip '" + c.id + "' has non-positive duration");
        if (c.split == Split::validation)
            validation_by_category_[c.category_id].push_back(&c);
    }
    for (const EventCategory& c : categories_)
        if (validation_by_category_.count(c.id)) usable_.push_back(c.id);
    if (usable_.size() < static_cast<std::size_t>(kCandidateSetSize))
        fail(origin, "insufficient categories: " + std::to_string(usable_.size()) +
                         " categories have validation clips; candidate-set construction requires "
                         "at least " + std::to_string(kCandidateSetSize));
}

const EventCategory& ClipCatalog::category(const std::string& id) const {
    const EventCategory* c = find_category(id);
    if (!c) throw CatalogError("unknown category_id '" + id + "'");
    return *c;
}

const EventCategory* ClipCatalog::find_category(const std::string& id) const {
    auto it = category_index_.find(id);
    return it == category_index_.end() ? nullptr : &categories_[it->second];
}

const EventCategory* ClipCatalog::find_category_by_label(const std::string& label) const {
    auto it = label_index_.find(label);
    return it == label_index_.end() ? nullptr : &categories_[it->second];
}

const SemanticGroup* ClipCatalog::find_group(const std::string& id) const {
    auto it = group_index_.find(id);
    return it == group_index_.end() ? nullptr : &groups_[it->second];
}

const std::vector<const ClipRecord*>& ClipCatalog::validation_clips(
    const std::string& category_id) const {
    static const std::vector<const ClipRecord*> empty;
    auto it = validation_by_category_.find(category_id);
    return it == validation_by_category_.end() ? empty : it->second;
}

std::vector<std::string> ClipCatalog::all_labels() const {
    std::vector<std::string> labels;
    labels.reserve(categories_.size());
    for (const EventCategory& c : categories_) labels.push_back(c.label);
    return labels;
}

std::vector<std::string> sample_candidate_set(const ClipCatalog& catalog,
                                              const std::vector<std::string>& must_include,
                                              std::size_t size, Rng& rng) {
    if (must_include.size() > size)
        throw CatalogError("candidate set of size " + std::to_string(size) + " cannot hold " +
                           std::to_string(must_include.size()) + " required labels");
    std::set<std::string> required(must_include.begin(), must_include.end());
    if (required.size() != must_include.size())
        throw CatalogError("must_include labels are not distinct");
    for (const std::string& label : must_include)
        if (!catalog.find_category_by_label(label))
            throw CatalogError("must_include label '" + label + "' not in catalog");
    if (catalog.categories().size() < size)
        throw CatalogError("catalog has " + std::to_string(catalog.categories().size()) +
                           " categories, cannot fill a candidate set of " + std::to_string(size));

    std::vector<std::string> candidates = must_include;
    std::vector<std::string> pool;
    for (const EventCategory& c : catalog.categories())
        if (!required.count(c.label)) pool.push_back(c.label);
    for (std::string& label : rng.sample(std::move(pool), size - must_include.size()))
        candidates.push_back(std::move(label));
    rng.shuffle(candidates);
    return candidates;
}

}  // namespace vbench
