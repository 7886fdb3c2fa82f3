#include "vbench/synth.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "vbench/util.hpp"

namespace vbench::synth {

namespace {

// N_e distinct usable categories, one validation clip each.
std::vector<Segment> sample_distinct_events(const ClipCatalog& cat, int n_e, Rng& rng) {
    const std::vector<std::string>& usable = cat.usable_category_ids();
    if (usable.size() < static_cast<std::size_t>(n_e))
        throw GenError("insufficient catalog: " + std::to_string(usable.size()) +
                       " categories with validation clips, need " + std::to_string(n_e));
    std::vector<Segment> segments;
    for (const std::string& cid : rng.sample(usable, static_cast<std::size_t>(n_e))) {
        const auto& clips = cat.validation_clips(cid);
        const ClipRecord* clip = clips[rng.index(clips.size())];
        segments.push_back({clip->id, cid, cat.category(cid).label, clip->uri, clip->duration_s});
    }
    return segments;
}

Segment sample_event_of(const ClipCatalog& cat, const std::string& category_id, Rng& rng) {
    const auto& clips = cat.validation_clips(category_id);
    if (clips.empty()) throw GenError("category '" + category_id + "' has no validation clips");
    const ClipRecord* clip = clips[rng.index(clips.size())];
    return {clip->id, category_id, cat.category(category_id).label, clip->uri, clip->duration_s};
}

std::vector<std::string> distinct_labels(const std::vector<Segment>& segments) {
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const Segment& s : segments)
        if (seen.insert(s.label).second) labels.push_back(s.label);
    return labels;
}

// Content-hash id; the hash covers everything but the id itself.
void finalize_instance(TaskInstance& inst, const std::string& prefix) {
    inst.id.clear();
    inst.video.id.clear();
    json j = to_json(inst);
    j.erase("id");
    const std::string h = hex8(fnv1a64(j.dump()));
    inst.id = prefix + "-" + h;
    inst.video.id = "v-" + inst.id;
}

std::string instance_prefix(TaskKind task, std::optional<Level> level, std::uint64_t index) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%06llu", static_cast<unsigned long long>(index));
    std::string p = task_short_name(task);
    if (level) p += "-" + level_name(*level);
    return p + "-" + idx;
}

TaskInstance base_sequencing_instance(const ClipCatalog& cat, int n_e, Rng& rng) {
    TaskInstance inst;
    inst.task = TaskKind::t1_sequencing;
    inst.video.segments = sample_distinct_events(cat, n_e, rng);
    inst.candidates = sample_candidate_set(cat, inst.chronology(), kCandidateSetSize, rng);
    inst.key.kind = KeyKind::full_sequence;
    inst.key.labels = inst.chronology();
    return inst;
}

}  // namespace

TaskInstance gen_event_sequencing(const ClipCatalog& cat, Level level, Rng& rng) {
    TaskInstance inst = base_sequencing_instance(cat, events_for_level(level), rng);
    inst.level = level;
    return inst;
}

TaskInstance gen_relative_sequencing(const ClipCatalog& cat, Level level, Rng& rng) {
    const int n_e = events_for_level(level);
    TaskInstance inst = base_sequencing_instance(cat, n_e, rng);
    inst.task = TaskKind::t2_relative;
    inst.level = level;
    // uniform over pairs with at least one event strictly between
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n_e; ++i)
        for (int j = i + 2; j <= n_e; ++j) pairs.emplace_back(i, j);
    auto [qi, qj] = pairs[rng.index(pairs.size())];
    inst.query.kind = TaskQuery::Kind::relative_pair;
    inst.query.qi = qi;
    inst.query.qj = qj;
    inst.key.kind = KeyKind::sub_sequence;
    inst.key.labels.clear();
    for (int k = qi + 1; k < qj; ++k) inst.key.labels.push_back(inst.video.segments[k - 1].label);
    return inst;
}

TaskInstance gen_position_identification(const ClipCatalog& cat, Level level, int n_q, Rng& rng) {
    const int n_e = events_for_level(level);
    if (n_q < 1 || n_q > 3) throw GenError("n_q must be in 1..3");
    if (n_q > n_e) throw GenError("n_q exceeds event count");
    TaskInstance inst = base_sequencing_instance(cat, n_e, rng);
    inst.task = TaskKind::t3_position;
    inst.level = level;
    std::vector<int> all(n_e);
    for (int i = 0; i < n_e; ++i) all[i] = i + 1;
    std::vector<int> probe = rng.sample(all, static_cast<std::size_t>(n_q));
    inst.query.kind = TaskQuery::Kind::position_probe;
    for (int p : probe) inst.query.probe_labels.push_back(inst.video.segments[p - 1].label);
    inst.key.kind = KeyKind::positions;
    inst.key.labels.clear();
    inst.key.positions = probe;
    return inst;
}

TaskInstance gen_semantic_outlier(const ClipCatalog& cat, Level level, Rng& rng) {
    const int n_e = events_for_level(level);

    // groups that can supply the dominant side: non-excluded, >= N_e-1 usable members
    auto usable_members = [&](const SemanticGroup& g) {
        std::vector<std::string> out;
        for (const std::string& cid : g.members)
            if (!cat.validation_clips(cid).empty()) out.push_back(cid);
        return out;
    };
    std::vector<const SemanticGroup*> dominant_pool;
    std::vector<const SemanticGroup*> eligible;
    for (const SemanticGroup& g : cat.groups()) {
        if (g.excluded) continue;
        std::vector<std::string> members = usable_members(g);
        if (members.empty()) continue;
        eligible.push_back(&g);
        if (members.size() >= static_cast<std::size_t>(n_e - 1)) dominant_pool.push_back(&g);
    }
    if (eligible.size() < 2)
        throw GenError("semantic outlier generation needs at least 2 non-excluded groups with "
                       "usable clips, found " + std::to_string(eligible.size()));
    if (dominant_pool.empty())
        throw GenError("no group has " + std::to_string(n_e - 1) +
                       " categories with validation clips");

    const SemanticGroup* dominant = dominant_pool[rng.index(dominant_pool.size())];
    std::vector<const SemanticGroup*> others;
    for (const SemanticGroup* g : eligible)
        if (g != dominant) others.push_back(g);
    if (others.empty()) throw GenError("only one eligible group; need a discordant group");
    const SemanticGroup* discordant = others[rng.index(others.size())];

    std::vector<std::string> dom_members = usable_members(*dominant);
    std::vector<std::string> chosen =
        rng.sample(dom_members, static_cast<std::size_t>(n_e - 1));
    std::vector<std::string> dis_members = usable_members(*discordant);
    const std::string outlier_cid = dis_members[rng.index(dis_members.size())];
    const int outlier_pos = rng.position(n_e);

    TaskInstance inst;
    inst.task = TaskKind::t4_semantic_outlier;
    inst.level = level;
    std::size_t next = 0;
    for (int pos = 1; pos <= n_e; ++pos) {
        const std::string& cid = (pos == outlier_pos) ? outlier_cid : chosen[next++];
        inst.video.segments.push_back(sample_event_of(cat, cid, rng));
    }
    inst.candidates = sample_candidate_set(cat, distinct_labels(inst.video.segments),
                                           kCandidateSetSize, rng);
    inst.key.kind = KeyKind::outlier_position;
    inst.key.position = outlier_pos;

    // re-derive the dominant group from the emitted sequence (argmax of group counts)
    std::map<std::string, int> counts;
    for (const Segment& s : inst.video.segments) counts[cat.category(s.category_id).group_id]++;
    std::string argmax;
    int best = -1;
    for (const auto& [gid, n] : counts)
        if (n > best) { best = n; argmax = gid; }
    if (argmax != dominant->id)
        throw std::logic_error("dominant-group recomputation disagrees with construction");
    return inst;
}

int pattern_repetitions(int m, Level level) {
    if (m != 2 && m != 3) throw GenError("pattern length m must be 2 or 3");
    if (level == Level::l1) return m == 2 ? 3 : 2;  // lengths 7, 7
    return m == 2 ? 4 : 3;                          // lengths 9, 10
}

TaskInstance gen_pattern_outlier(const ClipCatalog& cat, int m, Level level, Rng& rng) {
    const int k = pattern_repetitions(m, level);
    const std::vector<std::string>& usable = cat.usable_category_ids();
    if (usable.size() < static_cast<std::size_t>(m + 1))
        throw GenError("insufficient categories: pattern of length " + std::to_string(m) +
                       " plus outlier needs " + std::to_string(m + 1));

    std::vector<std::string> cids = rng.sample(usable, static_cast<std::size_t>(m + 1));
    std::vector<std::string> pattern(cids.begin(), cids.begin() + m);
    const std::string outlier_cid = cids[static_cast<std::size_t>(m)];
    const int total = m * k + 1;
    const int insert_index = rng.position(total);

    std::vector<std::string> order;  // category ids, chronological
    for (int r = 0; r < k; ++r)
        for (int i = 0; i < m; ++i) order.push_back(pattern[static_cast<std::size_t>(i)]);
    order.insert(order.begin() + (insert_index - 1), outlier_cid);

    // brute-force deletion scan: exactly one deletion restores the k-fold pattern
    int restoring = 0;
    for (std::size_t d = 0; d < order.size(); ++d) {
        bool ok = true;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < order.size() && ok; ++i) {
            if (i == d) continue;
            if (order[i] != pattern[pos % static_cast<std::size_t>(m)]) ok = false;
            ++pos;
        }
        if (ok) ++restoring;
    }
    if (restoring != 1) throw std::logic_error("pattern outlier is not uniquely restorable");

    TaskInstance inst;
    inst.task = TaskKind::t5_pattern_outlier;
    inst.level = level;
    for (const std::string& cid : order)
        inst.video.segments.push_back(sample_event_of(cat, cid, rng));
    inst.candidates = sample_candidate_set(cat, distinct_labels(inst.video.segments),
                                           kCandidateSetSize, rng);
    inst.key.kind = KeyKind::outlier_position;
    inst.key.position = insert_index;
    PatternSpec spec;
    spec.m = m;
    spec.k = k;
    for (const std::string& cid : pattern) spec.pattern.push_back(cat.category(cid).label);
    spec.outlier = cat.category(outlier_cid).label;
    spec.insert_index = insert_index;
    inst.pattern = std::move(spec);
    return inst;
}

TaskInstance gen_single_event(const ClipCatalog& cat, Rng& rng) {
    TaskInstance inst;
    inst.task = TaskKind::t0_single_event;
    inst.video.segments = sample_distinct_events(cat, 1, rng);
    inst.candidates = sample_candidate_set(cat, inst.chronology(), kCandidateSetSize, rng);
    inst.key.kind = KeyKind::single_label;
    inst.key.label = inst.video.segments.front().label;
    return inst;
}

ShufflePair make_shuffle_pair(const TaskInstance& original, Rng& rng) {
    const std::size_t n = original.video.segments.size();
    if (n < 2) throw GenError("make_shuffle_pair: need at least 2 events");
    std::vector<int> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i) + 1;
    const std::vector<int> identity = perm;
    do {
        rng.shuffle(perm);
    } while (perm == identity);

    ShufflePair pair;
    pair.pair_id = original.id;
    pair.permutation = perm;
    pair.original = original;
    pair.original.id = original.id + "-org";
    pair.shuffled = original;
    pair.shuffled.id = original.id + "-shf";
    pair.shuffled.video.id = original.video.id + "-shf";
    for (std::size_t i = 0; i < n; ++i)
        pair.shuffled.video.segments[i] =
            original.video.segments[static_cast<std::size_t>(perm[i] - 1)];
    pair.shuffled.key.kind = KeyKind::full_sequence;
    pair.shuffled.key.labels = pair.shuffled.chronology();
    return pair;
}

std::string row_tag(const BatchSpec& spec) {
    std::string tag = task_short_name(spec.task);
    if (spec.level) tag += "-" + level_name(*spec.level);
    if (spec.task == TaskKind::t3_position) tag += "-nq" + std::to_string(spec.n_q);
    if (spec.task == TaskKind::t5_pattern_outlier) tag += "-m" + std::to_string(spec.m);
    return tag;
}

std::vector<TaskInstance> generate_batch(const ClipCatalog& cat, const BatchSpec& spec) {
    if (spec.task != TaskKind::t0_single_event && !spec.level)
        throw GenError("task " + task_short_name(spec.task) + " requires a difficulty level");
    const std::string tag = row_tag(spec);
    std::vector<TaskInstance> batch;
    batch.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        Rng rng(derive_stream(spec.seed, tag, i));
        TaskInstance inst;
        switch (spec.task) {
            case TaskKind::t0_single_event: inst = gen_single_event(cat, rng); break;
            case TaskKind::t1_sequencing: inst = gen_event_sequencing(cat, *spec.level, rng); break;
            case TaskKind::t2_relative:
                inst = gen_relative_sequencing(cat, *spec.level, rng);
                break;
            case TaskKind::t3_position:
                inst = gen_position_identification(cat, *spec.level, spec.n_q, rng);
                break;
            case TaskKind::t4_semantic_outlier:
                inst = gen_semantic_outlier(cat, *spec.level, rng);
                break;
            case TaskKind::t5_pattern_outlier:
                inst = gen_pattern_outlier(cat, spec.m, *spec.level, rng);
                break;
        }
        inst.seed = {spec.seed, i, tag};
        std::string prefix = instance_prefix(spec.task, spec.level, i);
        if (spec.task == TaskKind::t3_position) prefix += "-nq" + std::to_string(spec.n_q);
        if (spec.task == TaskKind::t5_pattern_outlier) prefix += "-m" + std::to_string(spec.m);
        finalize_instance(inst, prefix);
        batch.push_back(std::move(inst));
    }
    return batch;
}

std::vector<ShufflePair> generate_pair_batch(const ClipCatalog& cat, const PairBatchSpec& spec) {
    if (spec.min_events < 2 || spec.max_events < spec.min_events)
        throw GenError("invalid event range for shuffle pairs");
    std::vector<ShufflePair> batch;
    batch.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        Rng rng(derive_stream(spec.seed, "shuffle-pairs", i));
        const int n_e = spec.min_events +
                        static_cast<int>(rng.below(static_cast<std::uint64_t>(
                            spec.max_events - spec.min_events + 1)));
        TaskInstance original;
        original.task = TaskKind::t1_sequencing;
        original.video.segments = sample_distinct_events(cat, n_e, rng);
        original.candidates =
            sample_candidate_set(cat, original.chronology(), kCandidateSetSize, rng);
        original.key.kind = KeyKind::full_sequence;
        original.key.labels = original.chronology();
        original.seed = {spec.seed, i, "shuffle-pairs"};
        char idx[16];
        std::snprintf(idx, sizeof idx, "%06llu", static_cast<unsigned long long>(i));
        original.id.clear();
        original.video.id.clear();
        json j = to_json(original);
        j.erase("id");
        original.id = std::string("pair-") + idx + "-" + hex8(fnv1a64(j.dump()));
        original.video.id = "v-" + original.id;
        batch.push_back(make_shuffle_pair(original, rng));
    }
    return batch;
}

std::vector<ReleaseRow> release_plan(std::uint64_t seed) {
    std::vector<ReleaseRow> rows;
    auto add = [&](TaskKind task, std::optional<Level> level, int n_q, int m, std::size_t count,
                   const std::string& file) {
        BatchSpec spec;
        spec.task = task;
        spec.level = level;
        spec.n_q = n_q;
        spec.m = m;
        spec.count = count;
        spec.seed = seed;
        rows.push_back({spec, file});
    };
    // published release shape: 0.6k/0.6k/1.8k/0.6k/1.2k questions for tasks
    // 1-5 (4.8k total) plus the 2.4k single-event pretest
    for (Level level : {Level::l1, Level::l2}) {
        add(TaskKind::t1_sequencing, level, 1, 2, 300, "t1.jsonl");
        add(TaskKind::t2_relative, level, 1, 2, 300, "t2.jsonl");
        for (int n_q = 1; n_q <= 3; ++n_q) add(TaskKind::t3_position, level, n_q, 2, 300, "t3.jsonl");
        add(TaskKind::t4_semantic_outlier, level, 1, 2, 300, "t4.jsonl");
        for (int m : {2, 3}) add(TaskKind::t5_pattern_outlier, level, 1, m, 300, "t5.jsonl");
    }
    add(TaskKind::t0_single_event, std::nullopt, 1, 2, 2400, "t0.jsonl");
    return rows;
}

}  // namespace vbench::synth
