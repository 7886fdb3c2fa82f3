#include "vbench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "vbench/chance.hpp"
#include "vbench/parse.hpp"
#include "vbench/prompts.hpp"
#include "vbench/synth.hpp"
#include "vbench/util.hpp"

namespace vbench::harness {

namespace {

constexpr const char* kEvalSchema = "vector-evals/1";
// fixed so reports render the same chance column on every run
constexpr std::uint64_t kReportChanceTrials = 200000;
constexpr std::uint64_t kReportChanceSeed = 20240;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

json campaign_meta(const CampaignConfig& cfg) {
    json meta;
    meta["kind"] = "meta";
    meta["schema"] = kEvalSchema;
    meta["instances"] = cfg.instances.string();
    meta["backend"] = clients::to_json(cfg.backend);
    meta["cot"] = cfg.cot;
    meta["frames"] = cfg.frames;
    meta["config_hash"] = hex16(config_hash(cfg));
    return meta;
}

EvalRecord evaluate_one(clients::ModelBackend& backend, const TaskInstance& inst,
                        std::uint64_t index, const CampaignConfig& cfg,
                        const AnswerKey* canonical_key,
                        const clients::VisualPayload* payload_override) {
    EvalRecord rec;
    rec.instance_id = inst.id;
    rec.backend_id = cfg.backend.id;
    rec.index = index;
    rec.key_access = backend.needs_answer_key();
    const bool timed = cfg.backend.kind == clients::BackendKind::remote_http;

    clients::VisualPayload payload;
    if (payload_override) {
        payload = *payload_override;
    } else {
        payload = clients::build_payload(inst, cfg.frames, cfg.backend.per_segment_frames,
                                         cfg.frames_dir);
    }
    if (timed)
        rec.started_at_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();
    const double t0 = now_ms();
    try {
        if (cfg.cot) {
            clients::CotTrace trace =
                clients::cot_infer(backend, inst, payload, prompts::default_cot(), canonical_key);
            rec.raw = trace.answer;
            rec.cot = std::move(trace);
        } else {
            clients::CompletionRequest req;
            req.instance = &inst;
            req.prompt = prompts::render_prompt(inst);
            req.payload = &payload;
            req.canonical_key = canonical_key;
            req.step = "answer";
            req.tag = inst.id;
            rec.raw = backend.complete(req);
        }
        rec.status = "ok";
    } catch (const clients::CotStepError& e) {
        rec.status = "failed";
        rec.error = e.what();
        rec.cot = e.partial;  // persist the partial trace
    } catch (const clients::CompletionError& e) {
        rec.status = "failed";
        rec.error = e.what();
    }
    if (timed) rec.t_ms = now_ms() - t0;

    if (rec.status == "ok") {
        rec.parsed = parse_answer(rec.raw, inst);
    } else {
        rec.parsed.kind = ParsedAnswer::Kind::unparseable;
        rec.parsed.reason = "backend failure";
    }
    rec.scores = metrics::score_answer(rec.parsed, inst);
    return rec;
}

std::string variant_of(const TaskInstance& inst) {
    if (inst.task == TaskKind::t3_position) {
        static const char* names[] = {"single", "double", "triple"};
        const std::size_t n = inst.key.positions.size();
        return n >= 1 && n <= 3 ? names[n - 1] : "nq" + std::to_string(n);
    }
    if (inst.task == TaskKind::t5_pattern_outlier && inst.pattern && inst.level)
        return chance::pattern_row_label(inst.pattern->m, *inst.level);
    return "";
}

struct RowKey {
    int task_order;
    std::string variant;
    int level_order;
    bool operator<(const RowKey& o) const {
        return std::tie(task_order, variant, level_order) <
               std::tie(o.task_order, o.variant, o.level_order);
    }
};

}  // namespace

json to_json(const EvalRecord& r) {
    json j;
    j["schema"] = kEvalSchema;
    j["instance_id"] = r.instance_id;
    j["backend_id"] = r.backend_id;
    j["index"] = r.index;
    j["status"] = r.status;
    if (!r.error.empty()) j["error"] = r.error;
    j["raw"] = r.raw;
    j["parsed"] = to_json(r.parsed);
    json s;
    s["em"] = r.scores.em;
    s["pm"] = r.scores.pm;
    s["lm"] = r.scores.lm;
    s["om"] = r.scores.om;
    s["sequence_metrics"] = r.scores.sequence_metrics;
    j["scores"] = std::move(s);
    if (r.cot) j["cot"] = clients::to_json(*r.cot);
    j["key_access"] = r.key_access;
    j["t_ms"] = r.t_ms;
    j["started_at_ms"] = r.started_at_ms;
    return j;
}

EvalRecord record_from_json(const json& j) {
    EvalRecord r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.backend_id = j.at("backend_id").get<std::string>();
    r.index = j.value("index", 0ULL);
    r.status = j.value("status", "ok");
    r.error = j.value("error", "");
    r.raw = j.value("raw", "");
    r.parsed = parsed_from_json(j.at("parsed"));
    const json& s = j.at("scores");
    r.scores.em = s.at("em").get<double>();
    r.scores.pm = s.at("pm").get<double>();
    r.scores.lm = s.at("lm").get<double>();
    r.scores.om = s.at("om").get<double>();
    r.scores.sequence_metrics = s.value("sequence_metrics", false);
    if (j.contains("cot")) r.cot = clients::cot_trace_from_json(j["cot"]);
    r.key_access = j.value("key_access", false);
    r.t_ms = j.value("t_ms", 0.0);
    r.started_at_ms = j.value("started_at_ms", 0.0);
    return r;
}

std::uint64_t config_hash(const CampaignConfig& cfg) {
    json j;
    j["instances"] = cfg.instances.string();
    j["backend"] = clients::to_json(cfg.backend);
    j["cot"] = cfg.cot;
    j["frames"] = cfg.frames;
    return fnv1a64(j.dump());
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
    const std::vector<TaskInstance> instances = load_instances(cfg.instances);
    if (instances.empty()) throw HarnessError("instance manifest is empty: " + cfg.instances.string());

    const json meta = campaign_meta(cfg);
    std::map<std::string, EvalRecord> done;
    if (std::filesystem::exists(cfg.records)) {
        const std::vector<json> existing = read_jsonl(cfg.records);
        if (existing.empty() || existing.front().value("kind", "") != "meta")
            throw HarnessError("record log lacks a meta header: " + cfg.records.string());
        if (existing.front().value("config_hash", "") != meta["config_hash"].get<std::string>())
            throw HarnessError("record log was produced by a different campaign config; "
                               "refusing to resume: " + cfg.records.string());
        for (std::size_t i = 1; i < existing.size(); ++i) {
            EvalRecord r = record_from_json(existing[i]);
            done.emplace(r.instance_id, std::move(r));
        }
    } else {
        if (cfg.records.has_parent_path())
            std::filesystem::create_directories(cfg.records.parent_path());
        append_jsonl(cfg.records, meta);
    }

    auto backend = clients::make_backend(cfg.backend);
    CampaignResult result;
    result.resumed = done.size();

    const int workers = std::max(1, cfg.concurrency);
    std::uint64_t next = 0;
    std::vector<EvalRecord> ordered(instances.size());
    std::vector<bool> fresh(instances.size(), false);
    while (next < instances.size()) {
        const std::uint64_t chunk_end =
            std::min<std::uint64_t>(next + static_cast<std::uint64_t>(workers), instances.size());
        std::vector<std::thread> threads;
        for (std::uint64_t i = next; i < chunk_end; ++i) {
            const TaskInstance& inst = instances[i];
            if (auto it = done.find(inst.id); it != done.end()) {
                ordered[i] = it->second;
                continue;
            }
            fresh[i] = true;
            threads.emplace_back([&, i] {
                ordered[i] = evaluate_one(*backend, instances[i], i, cfg, nullptr, nullptr);
            });
        }
        for (std::thread& t : threads) t.join();
        // append in manifest order regardless of completion order
        for (std::uint64_t i = next; i < chunk_end; ++i) {
            if (!fresh[i]) continue;
            append_jsonl(cfg.records, to_json(ordered[i]));
            ++result.evaluated;
            if (ordered[i].status == "failed") ++result.failed;
        }
        next = chunk_end;
    }
    result.records = std::move(ordered);
    result.backend_calls = backend->calls();
    return result;
}

ShuffleDiagnosis diagnose_event_shuffle(const std::filesystem::path& pairs_path,
                                        const clients::BackendConfig& backend_cfg,
                                        const std::filesystem::path& records, bool cot,
                                        int frames) {
    const std::vector<ShufflePair> pairs = load_pairs(pairs_path);
    if (pairs.empty()) throw HarnessError("pair manifest is empty: " + pairs_path.string());
    auto backend = clients::make_backend(backend_cfg);

    CampaignConfig cfg;
    cfg.instances = pairs_path;
    cfg.records = records;
    cfg.backend = backend_cfg;
    cfg.cot = cot;
    cfg.frames = frames;
    if (records.has_parent_path()) std::filesystem::create_directories(records.parent_path());
    json meta = campaign_meta(cfg);
    meta["mode"] = "event-shuffle";
    write_jsonl(records, {meta});

    ShuffleDiagnosis diag;
    std::size_t correct_o = 0, correct_s = 0;
    std::uint64_t index = 0;
    for (const ShufflePair& pair : pairs) {
        // the canonical chronology is the original's key, for both members
        EvalRecord ro = evaluate_one(*backend, pair.original, index++, cfg, &pair.original.key,
                                     nullptr);
        EvalRecord rs = evaluate_one(*backend, pair.shuffled, index++, cfg, &pair.original.key,
                                     nullptr);
        append_jsonl(records, to_json(ro));
        append_jsonl(records, to_json(rs));
        metrics::PairOutcome outcome;
        outcome.pair_id = pair.pair_id;
        outcome.pred_original = ro.parsed;
        outcome.pred_shuffled = rs.parsed;
        outcome.correct_original = ro.scores.em == 100.0;
        outcome.correct_shuffled = rs.scores.em == 100.0;
        correct_o += outcome.correct_original;
        correct_s += outcome.correct_shuffled;
        diag.pair_records.push_back(std::move(outcome));
    }
    diag.outcome = metrics::biased_ratio(diag.pair_records);
    diag.accuracy_original = 100.0 * static_cast<double>(correct_o) / pairs.size();
    diag.accuracy_shuffled = 100.0 * static_cast<double>(correct_s) / pairs.size();

    json summary;
    summary["kind"] = "summary";
    summary["pairs"] = diag.outcome.pairs;
    summary["eligible"] = diag.outcome.eligible;
    summary["biased"] = diag.outcome.biased;
    if (diag.outcome.eta)
        summary["eta"] = *diag.outcome.eta;
    else
        summary["eta"] = nullptr;
    summary["low_confidence"] = diag.outcome.low_confidence;
    summary["accuracy_original"] = diag.accuracy_original;
    summary["accuracy_shuffled"] = diag.accuracy_shuffled;
    append_jsonl(records, summary);
    return diag;
}

FrameShuffleDiagnosis diagnose_frame_shuffle(const std::filesystem::path& instances_path,
                                             const clients::BackendConfig& backend_cfg,
                                             const std::filesystem::path& records,
                                             std::uint64_t shuffle_seed, int frames) {
    const std::vector<TaskInstance> instances = load_instances(instances_path);
    if (instances.empty())
        throw HarnessError("instance manifest is empty: " + instances_path.string());
    auto backend = clients::make_backend(backend_cfg);

    CampaignConfig cfg;
    cfg.instances = instances_path;
    cfg.records = records;
    cfg.backend = backend_cfg;
    cfg.frames = frames;
    if (records.has_parent_path()) std::filesystem::create_directories(records.parent_path());
    json meta = campaign_meta(cfg);
    meta["mode"] = "frame-shuffle";
    meta["shuffle_seed"] = shuffle_seed;
    write_jsonl(records, {meta});

    std::size_t correct_o = 0, correct_s = 0;
    std::uint64_t index = 0;
    for (const TaskInstance& inst : instances) {
        clients::VisualPayload original =
            clients::build_payload(inst, frames, backend_cfg.per_segment_frames, "");
        clients::VisualPayload shuffled = original;
        Rng rng(derive_stream(shuffle_seed, "frame-shuffle", fnv1a64(inst.id)));
        synth::frame_shuffle(shuffled.frames, rng);

        EvalRecord ro = evaluate_one(*backend, inst, index++, cfg, nullptr, &original);
        EvalRecord rs = evaluate_one(*backend, inst, index++, cfg, nullptr, &shuffled);
        append_jsonl(records, to_json(ro));
        append_jsonl(records, to_json(rs));
        correct_o += ro.scores.em == 100.0;
        correct_s += rs.scores.em == 100.0;
    }
    FrameShuffleDiagnosis diag;
    diag.instances = instances.size();
    diag.outcome = metrics::robustness_ratio(
        100.0 * static_cast<double>(correct_o) / instances.size(),
        100.0 * static_cast<double>(correct_s) / instances.size());

    json summary;
    summary["kind"] = "summary";
    summary["instances"] = diag.instances;
    summary["accuracy_original"] = diag.outcome.accuracy_original;
    summary["accuracy_shuffled"] = diag.outcome.accuracy_shuffled;
    if (diag.outcome.rho)
        summary["rho"] = *diag.outcome.rho;
    else
        summary["rho"] = nullptr;
    append_jsonl(records, summary);
    return diag;
}

std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records,
                                    const std::vector<TaskInstance>& instances) {
    std::map<std::string, const TaskInstance*> by_id;
    for (const TaskInstance& inst : instances) by_id.emplace(inst.id, &inst);

    struct Acc {
        TaskKind task;
        std::optional<Level> level;
        std::string variant;
        std::size_t n = 0;
        double em = 0, pm = 0, lm = 0, om = 0;
        bool seq = false;
    };
    std::map<RowKey, Acc> acc;
    for (const EvalRecord& r : records) {
        auto it = by_id.find(r.instance_id);
        if (it == by_id.end())
            throw HarnessError("record references unknown instance '" + r.instance_id + "'");
        const TaskInstance& inst = *it->second;
        RowKey key{static_cast<int>(inst.task), variant_of(inst),
                   inst.level ? static_cast<int>(*inst.level) : -1};
        Acc& a = acc[key];
        a.task = inst.task;
        a.level = inst.level;
        a.variant = key.variant;
        a.n += 1;
        a.em += r.scores.em;
        a.pm += r.scores.pm;
        a.lm += r.scores.lm;
        a.om += r.scores.om;
        a.seq = a.seq || r.scores.sequence_metrics;
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, a] : acc) {
        AggregateRow row;
        row.task = a.task;
        row.level = a.level;
        row.variant = a.variant;
        row.n = a.n;
        row.mean.em = a.em / static_cast<double>(a.n);
        row.mean.pm = a.pm / static_cast<double>(a.n);
        row.mean.lm = a.lm / static_cast<double>(a.n);
        row.mean.om = a.om / static_cast<double>(a.n);
        row.mean.sequence_metrics = a.seq;
        rows.push_back(std::move(row));
    }
    return rows;
}

ReportInputs load_report_inputs(const std::filesystem::path& records_path) {
    ReportInputs in;
    const std::vector<json> lines = read_jsonl(records_path);
    if (lines.empty()) throw HarnessError("record log is empty: " + records_path.string());
    if (lines.front().value("kind", "") != "meta")
        throw HarnessError("record log lacks a meta header: " + records_path.string());
    in.meta = lines.front();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].value("kind", "") == "summary") continue;
        in.records.push_back(record_from_json(lines[i]));
    }
    const std::string mode = in.meta.value("mode", "");
    const std::filesystem::path instances = in.meta.at("instances").get<std::string>();
    if (mode == "event-shuffle") {
        for (const ShufflePair& p : load_pairs(instances, &in.instance_metas)) {
            in.instances.push_back(p.original);
            in.instances.push_back(p.shuffled);
        }
        std::map<std::string, const EvalRecord*> by_id;
        for (const EvalRecord& r : in.records) by_id.emplace(r.instance_id, &r);
        ShuffleDiagnosis diag;
        std::size_t co = 0, cs = 0, n = 0;
        for (std::size_t i = 0; i + 1 < in.instances.size(); i += 2) {
            const auto o = by_id.find(in.instances[i].id);
            const auto s = by_id.find(in.instances[i + 1].id);
            if (o == by_id.end() || s == by_id.end()) continue;
            metrics::PairOutcome p;
            p.pair_id = in.instances[i].id;
            p.pred_original = o->second->parsed;
            p.pred_shuffled = s->second->parsed;
            p.correct_original = o->second->scores.em == 100.0;
            p.correct_shuffled = s->second->scores.em == 100.0;
            co += p.correct_original;
            cs += p.correct_shuffled;
            ++n;
            diag.pair_records.push_back(std::move(p));
        }
        diag.outcome = metrics::biased_ratio(diag.pair_records);
        if (n > 0) {
            diag.accuracy_original = 100.0 * static_cast<double>(co) / static_cast<double>(n);
            diag.accuracy_shuffled = 100.0 * static_cast<double>(cs) / static_cast<double>(n);
        }
        in.shuffle = std::move(diag);
    } else if (mode == "frame-shuffle") {
        in.instances = load_instances(instances, &in.instance_metas);
        // records alternate original/shuffled payload per instance
        std::vector<EvalRecord> originals;
        std::size_t co = 0, cs = 0, n = 0;
        for (std::size_t i = 0; i + 1 < in.records.size(); i += 2) {
            originals.push_back(in.records[i]);
            co += in.records[i].scores.em == 100.0;
            cs += in.records[i + 1].scores.em == 100.0;
            ++n;
        }
        if (n > 0) {
            FrameShuffleDiagnosis diag;
            diag.instances = n;
            diag.outcome = metrics::robustness_ratio(
                100.0 * static_cast<double>(co) / static_cast<double>(n),
                100.0 * static_cast<double>(cs) / static_cast<double>(n));
            in.frame_shuffle = diag;
        }
        in.records = std::move(originals);
    } else {
        in.instances = load_instances(instances, &in.instance_metas);
    }
    return in;
}

Report emit_report(const ReportInputs& inputs) {
    if (inputs.records.empty()) throw HarnessError("empty campaign: nothing to report");
    const std::vector<AggregateRow> rows = aggregate(inputs.records, inputs.instances);
    const std::vector<chance::ChanceRow> chance_rows =
        chance::chance_table(kReportChanceTrials, kReportChanceSeed);

    std::set<std::string> recorded;
    for (const EvalRecord& r : inputs.records) recorded.insert(r.instance_id);
    std::size_t missing = 0;
    for (const TaskInstance& inst : inputs.instances)
        if (!recorded.count(inst.id)) ++missing;

    Report report;
    report.partial = missing > 0;

    auto chance_em = [&](TaskKind task, std::optional<Level> level, const std::string& variant)
        -> std::string {
        for (const chance::ChanceRow& c : chance_rows) {
            if (c.query.task != task || c.query.metric != chance::Metric::em) continue;
            if (level && (!c.query.level || *c.query.level != *level)) continue;
            if (!level && c.query.level) continue;
            if (task == TaskKind::t3_position) {
                static const std::map<std::string, int> nq{{"single", 1}, {"double", 2},
                                                           {"triple", 3}};
                auto it = nq.find(variant);
                if (it == nq.end() || c.query.n_q != it->second) continue;
            }
            if (task == TaskKind::t5_pattern_outlier && level &&
                chance::pattern_row_label(c.query.m, *level) != variant)
                continue;
            return c.display;
        }
        return "-";
    };
    auto chance_metric = [&](TaskKind task, Level level, chance::Metric metric) -> std::string {
        for (const chance::ChanceRow& c : chance_rows)
            if (c.query.task == task && c.query.level && *c.query.level == level &&
                c.query.metric == metric)
                return c.display;
        return "-";
    };

    std::string md;
    md += "# VECTOR campaign report\n\n";
    if (report.partial)
        md += "> **PARTIAL REPORT**: " + std::to_string(missing) +
              " instance(s) in the manifest have no evaluation record.\n\n";
    const json backend = inputs.meta.value("backend", json::object());
    md += "- backend: `" + backend.value("backend_id", "?") + "` (kind: " +
          backend.value("kind", "?") + ")\n";
    md += "- instances: `" + inputs.meta.value("instances", "?") + "` (" +
          std::to_string(inputs.instances.size()) + " instances, " +
          std::to_string(inputs.records.size()) + " records)\n";
    bool key_access = false;
    std::size_t failed = 0;
    for (const EvalRecord& r : inputs.records) {
        key_access = key_access || r.key_access;
        failed += r.status == "failed";
    }
    md += "- failed records: " + std::to_string(failed) + "\n";
    if (key_access)
        md += "- answer-key access: **yes** (scripted oracle-family backend; test-only results)\n";
    md += "- cot: " + std::string(inputs.meta.value("cot", false) ? "on" : "off") +
          ", frames: " + std::to_string(inputs.meta.value("frames", 32)) + "\n";
    md += "- config hash: `" + inputs.meta.value("config_hash", "?") + "`\n";
    for (const json& gm : inputs.instance_metas) {
        md += "- generated: " + gm.value("row", gm.value("task", "?")) + " count " +
              std::to_string(gm.value("count", 0)) + " seed " +
              std::to_string(gm.value("seed", 0ULL)) + "\n";
    }
    md += "- chance column: analytic where closed-form, otherwise Monte Carlo (" +
          std::to_string(kReportChanceTrials) + " trials, seed " +
          std::to_string(kReportChanceSeed) + ")\n\n";

    static const std::map<TaskKind, std::string> titles = {
        {TaskKind::t0_single_event, "Task 0 - single-event recognition pretest"},
        {TaskKind::t1_sequencing, "Task 1 - event sequencing"},
        {TaskKind::t2_relative, "Task 2 - relative event sequencing"},
        {TaskKind::t3_position, "Task 3 - event position identification"},
        {TaskKind::t4_semantic_outlier, "Task 4 - discordant semantic-group position"},
        {TaskKind::t5_pattern_outlier, "Task 5 - discordant event position"},
    };

    for (const auto& [task, title] : titles) {
        std::vector<const AggregateRow*> task_rows;
        for (const AggregateRow& row : rows)
            if (row.task == task) task_rows.push_back(&row);
        if (task_rows.empty()) continue;
        md += "## " + title + "\n\n";
        const bool seq = task == TaskKind::t1_sequencing || task == TaskKind::t2_relative;
        if (seq) {
            md += "| Row | n | EM | PM | LM | OM |\n|---|---|---|---|---|---|\n";
            for (Level level : {Level::l1, Level::l2}) {
                bool have = false;
                for (const AggregateRow* row : task_rows)
                    have = have || (row->level && *row->level == level);
                if (!have) continue;
                md += "| Chance (" + std::string(level == Level::l1 ? "L1" : "L2") + ") | - | " +
                      chance_metric(task, level, chance::Metric::em) + " | " +
                      chance_metric(task, level, chance::Metric::pm) + " | " +
                      chance_metric(task, level, chance::Metric::lm) + " | " +
                      chance_metric(task, level, chance::Metric::om) + " |\n";
            }
            for (const AggregateRow* row : task_rows) {
                const std::string lvl = row->level ? (*row->level == Level::l1 ? "L1" : "L2") : "-";
                md += "| " + lvl + " | " + std::to_string(row->n) + " | " +
                      format_fixed2(row->mean.em) + " | " + format_fixed2(row->mean.pm) + " | " +
                      format_fixed2(row->mean.lm) + " | " + format_fixed2(row->mean.om) + " |\n";
            }
        } else {
            md += "| Row | Chance | n | EM |\n|---|---|---|---|\n";
            for (const AggregateRow* row : task_rows) {
                std::string label = row->level ? (*row->level == Level::l1 ? "L1" : "L2") : "all";
                if (!row->variant.empty()) label = row->variant + " (" + label + ")";
                md += "| " + label + " | " + chance_em(task, row->level, row->variant) + " | " +
                      std::to_string(row->n) + " | " + format_fixed2(row->mean.em) + " |\n";
            }
        }
        md += "\n";
    }

    if (inputs.shuffle) {
        const metrics::ShuffleOutcome& o = inputs.shuffle->outcome;
        md += "## Event-shuffle diagnostic (biased ratio)\n\n";
        md += "| Pairs | Org EM | Shuf EM | Eligible | Biased | eta |\n|---|---|---|---|---|---|\n";
        md += "| " + std::to_string(o.pairs) + " | " +
              format_fixed2(inputs.shuffle->accuracy_original) + " | " +
              format_fixed2(inputs.shuffle->accuracy_shuffled) + " | " +
              std::to_string(o.eligible) + " | " + std::to_string(o.biased) + " | " +
              (o.eta ? format_fixed2(*o.eta) : std::string("undefined")) + " |\n\n";
        if (o.low_confidence)
            md += "> low confidence: fewer than 20 eligible pairs.\n\n";
    }
    if (inputs.frame_shuffle) {
        const metrics::RobustnessOutcome& o = inputs.frame_shuffle->outcome;
        md += "## Frame-shuffle robustness (rho)\n\n";
        md += "| Instances | Acc original | Acc shuffled | rho |\n|---|---|---|---|\n";
        md += "| " + std::to_string(inputs.frame_shuffle->instances) + " | " +
              format_fixed2(o.accuracy_original) + " | " + format_fixed2(o.accuracy_shuffled) +
              " | " + (o.rho ? format_fixed2(*o.rho) : std::string("undefined")) + " |\n\n";
    }

    report.markdown = std::move(md);

    for (const AggregateRow& row : rows) {
        json r;
        r["kind"] = "aggregate";
        r["task"] = task_name(row.task);
        if (row.level) r["level"] = level_name(*row.level);
        if (!row.variant.empty()) r["variant"] = row.variant;
        r["n"] = row.n;
        r["em"] = row.mean.em;
        if (row.mean.sequence_metrics) {
            r["pm"] = row.mean.pm;
            r["lm"] = row.mean.lm;
            r["om"] = row.mean.om;
        }
        r["chance_em"] = chance_em(row.task, row.level, row.variant);
        report.rows.push_back(std::move(r));
    }
    json meta_row;
    meta_row["kind"] = "meta";
    meta_row["config_hash"] = inputs.meta.value("config_hash", "");
    meta_row["backend"] = inputs.meta.value("backend", json::object());
    meta_row["partial"] = report.partial;
    report.rows.insert(report.rows.begin(), std::move(meta_row));
    return report;
}

}  // namespace vbench::harness
