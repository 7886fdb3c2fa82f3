#include "vbench/instance.hpp"

#include <stdexcept>

namespace vbench {

namespace {
constexpr const char* kInstanceSchema = "vector-instance/1";
constexpr const char* kPairSchema = "vector-shufflepair/1";
}  // namespace

std::string task_name(TaskKind t) {
    switch (t) {
        case TaskKind::t0_single_event: return "t0_single_event";
        case TaskKind::t1_sequencing: return "t1_sequencing";
        case TaskKind::t2_relative: return "t2_relative";
        case TaskKind::t3_position: return "t3_position";
        case TaskKind::t4_semantic_outlier: return "t4_semantic_outlier";
        case TaskKind::t5_pattern_outlier: return "t5_pattern_outlier";
    }
    throw std::logic_error("bad TaskKind");
}

std::string task_short_name(TaskKind t) { return task_name(t).substr(0, 2); }

TaskKind task_from_name(const std::string& name) {
    for (TaskKind t : {TaskKind::t0_single_event, TaskKind::t1_sequencing, TaskKind::t2_relative,
                       TaskKind::t3_position, TaskKind::t4_semantic_outlier,
                       TaskKind::t5_pattern_outlier}) {
        if (name == task_name(t) || name == task_short_name(t)) return t;
    }
    throw std::invalid_argument("unknown task '" + name + "' (expected t0..t5)");
}

std::string level_name(Level l) { return l == Level::l1 ? "l1" : "l2"; }

Level level_from_name(const std::string& name) {
    if (name == "l1" || name == "L1") return Level::l1;
    if (name == "l2" || name == "L2") return Level::l2;
    throw std::invalid_argument("unknown level '" + name + "' (expected l1|l2)");
}

int events_for_level(Level l) { return l == Level::l1 ? 4 : 8; }

std::string key_kind_name(KeyKind k) {
    switch (k) {
        case KeyKind::full_sequence: return "full_sequence";
        case KeyKind::sub_sequence: return "sub_sequence";
        case KeyKind::positions: return "positions";
        case KeyKind::outlier_position: return "outlier_position";
        case KeyKind::single_label: return "single_label";
    }
    throw std::logic_error("bad KeyKind");
}

KeyKind key_kind_from_name(const std::string& name) {
    for (KeyKind k : {KeyKind::full_sequence, KeyKind::sub_sequence, KeyKind::positions,
                      KeyKind::outlier_position, KeyKind::single_label})
        if (name == key_kind_name(k)) return k;
    throw std::invalid_argument("unknown key kind '" + name + "'");
}

std::vector<std::string> TaskInstance::chronology() const {
    std::vector<std::string> labels;
    labels.reserve(video.segments.size());
    for (const Segment& s : video.segments) labels.push_back(s.label);
    return labels;
}

json to_json(const AnswerKey& key) {
    json j;
    j["type"] = key_kind_name(key.kind);
    switch (key.kind) {
        case KeyKind::full_sequence:
        case KeyKind::sub_sequence: j["labels"] = key.labels; break;
        case KeyKind::positions: j["positions"] = key.positions; break;
        case KeyKind::outlier_position: j["position"] = key.position; break;
        case KeyKind::single_label: j["label"] = key.label; break;
    }
    return j;
}

AnswerKey key_from_json(const json& j) {
    AnswerKey key;
    key.kind = key_kind_from_name(j.at("type").get<std::string>());
    switch (key.kind) {
        case KeyKind::full_sequence:
        case KeyKind::sub_sequence:
            key.labels = j.at("labels").get<std::vector<std::string>>();
            break;
        case KeyKind::positions:
            key.positions = j.at("positions").get<std::vector<int>>();
            break;
        case KeyKind::outlier_position: key.position = j.at("position").get<int>(); break;
        case KeyKind::single_label: key.label = j.at("label").get<std::string>(); break;
    }
    return key;
}

json to_json(const TaskInstance& inst) {
    json j;
    j["schema"] = kInstanceSchema;
    j["id"] = inst.id;
    j["task"] = task_name(inst.task);
    if (inst.level) j["level"] = level_name(*inst.level);
    json video;
    video["id"] = inst.video.id;
    video["segments"] = json::array();
    for (const Segment& s : inst.video.segments) {
        json seg;
        seg["clip_id"] = s.clip_id;
        seg["category_id"] = s.category_id;
        seg["label"] = s.label;
        seg["uri"] = s.uri;
        seg["duration_s"] = s.duration_s;
        video["segments"].push_back(std::move(seg));
    }
    j["video"] = std::move(video);
    j["candidates"] = inst.candidates;
    switch (inst.query.kind) {
        case TaskQuery::Kind::none: j["query"] = {{"type", "none"}}; break;
        case TaskQuery::Kind::relative_pair:
            j["query"] = {{"type", "relative_pair"}, {"qi", inst.query.qi}, {"qj", inst.query.qj}};
            break;
        case TaskQuery::Kind::position_probe:
            j["query"] = {{"type", "position_probe"}, {"labels", inst.query.probe_labels}};
            break;
    }
    j["key"] = to_json(inst.key);
    if (inst.pattern) {
        json p;
        p["m"] = inst.pattern->m;
        p["k"] = inst.pattern->k;
        p["pattern"] = inst.pattern->pattern;
        p["outlier"] = inst.pattern->outlier;
        p["insert_index"] = inst.pattern->insert_index;
        j["pattern"] = std::move(p);
    }
    j["seed"] = {{"root", inst.seed.root}, {"index", inst.seed.index}, {"row", inst.seed.row}};
    return j;
}

TaskInstance instance_from_json(const json& j) {
    if (j.value("schema", "") != kInstanceSchema)
        throw std::runtime_error("unsupported instance schema: " + j.value("schema", "<missing>"));
    TaskInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.task = task_from_name(j.at("task").get<std::string>());
    if (j.contains("level")) inst.level = level_from_name(j["level"].get<std::string>());
    inst.video.id = j.at("video").at("id").get<std::string>();
    for (const json& seg : j.at("video").at("segments")) {
        Segment s;
        s.clip_id = seg.at("clip_id").get<std::string>();
        s.category_id = seg.at("category_id").get<std::string>();
        s.label = seg.at("label").get<std::string>();
        s.uri = seg.value("uri", "");
        s.duration_s = seg.at("duration_s").get<double>();
        inst.video.segments.push_back(std::move(s));
    }
    inst.candidates = j.at("candidates").get<std::vector<std::string>>();
    const json& q = j.at("query");
    const std::string qtype = q.at("type").get<std::string>();
    if (qtype == "none") {
        inst.query.kind = TaskQuery::Kind::none;
    } else if (qtype == "relative_pair") {
        inst.query.kind = TaskQuery::Kind::relative_pair;
        inst.query.qi = q.at("qi").get<int>();
        inst.query.qj = q.at("qj").get<int>();
    } else if (qtype == "position_probe") {
        inst.query.kind = TaskQuery::Kind::position_probe;
        inst.query.probe_labels = q.at("labels").get<std::vector<std::string>>();
    } else {
        throw std::runtime_error("unknown query type '" + qtype + "'");
    }
    inst.key = key_from_json(j.at("key"));
    if (j.contains("pattern")) {
        PatternSpec p;
        p.m = j["pattern"].at("m").get<int>();
        p.k = j["pattern"].at("k").get<int>();
        p.pattern = j["pattern"].at("pattern").get<std::vector<std::string>>();
        p.outlier = j["pattern"].at("outlier").get<std::string>();
        p.insert_index = j["pattern"].at("insert_index").get<int>();
        inst.pattern = std::move(p);
    }
    if (j.contains("seed")) {
        inst.seed.root = j["seed"].value("root", 0ULL);
        inst.seed.index = j["seed"].value("index", 0ULL);
        inst.seed.row = j["seed"].value("row", "");
    }
    return inst;
}

json to_json(const ShufflePair& pair) {
    json j;
    j["schema"] = kPairSchema;
    j["pair_id"] = pair.pair_id;
    j["original"] = to_json(pair.original);
    j["shuffled"] = to_json(pair.shuffled);
    j["permutation"] = pair.permutation;
    return j;
}

ShufflePair pair_from_json(const json& j) {
    if (j.value("schema", "") != kPairSchema)
        throw std::runtime_error("unsupported pair schema: " + j.value("schema", "<missing>"));
    ShufflePair pair;
    pair.pair_id = j.at("pair_id").get<std::string>();
    pair.original = instance_from_json(j.at("original"));
    pair.shuffled = instance_from_json(j.at("shuffled"));
    pair.permutation = j.at("permutation").get<std::vector<int>>();
    return pair;
}

std::vector<TaskInstance> load_instances(const std::filesystem::path& path,
                                         std::vector<json>* metas) {
    std::vector<TaskInstance> out;
    for (const json& rec : read_jsonl(path)) {
        if (rec.value("kind", "") == "meta") {
            if (metas) metas->push_back(rec);
            continue;
        }
        out.push_back(instance_from_json(rec));
    }
    return out;
}

std::vector<ShufflePair> load_pairs(const std::filesystem::path& path, std::vector<json>* metas) {
    std::vector<ShufflePair> out;
    for (const json& rec : read_jsonl(path)) {
        if (rec.value("kind", "") == "meta") {
            if (metas) metas->push_back(rec);
            continue;
        }
        out.push_back(pair_from_json(rec));
    }
    return out;
}

}  // namespace vbench
