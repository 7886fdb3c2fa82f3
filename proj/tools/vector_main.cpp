// vector - synthesis and evaluation CLI for multi-event temporal-order
// benchmarks. Exit codes: 0 success, 2 partial results, 1 fatal.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vbench/catalog.hpp"
#include "vbench/chance.hpp"
#include "vbench/clients.hpp"
#include "vbench/harness.hpp"
#include "vbench/materialize.hpp"
#include "vbench/metrics.hpp"
#include "vbench/parse.hpp"
#include "vbench/prompts.hpp"
#include "vbench/synth.hpp"
#include "vbench/util.hpp"

namespace fs = std::filesystem;
using namespace vbench;

namespace {

struct ExitPartial {};

json batch_meta(const synth::BatchSpec& spec, const std::string& catalog_path) {
    json meta;
    meta["kind"] = "meta";
    meta["schema"] = "vector-instances/1";
    meta["catalog"] = catalog_path;
    meta["task"] = task_name(spec.task);
    if (spec.level) meta["level"] = level_name(*spec.level);
    if (spec.task == TaskKind::t3_position) meta["n_q"] = spec.n_q;
    if (spec.task == TaskKind::t5_pattern_outlier) meta["m"] = spec.m;
    meta["count"] = spec.count;
    meta["seed"] = spec.seed;
    meta["row"] = synth::row_tag(spec);
    return meta;
}

int cmd_catalog_validate(const std::string& path) {
    ClipCatalog cat = ClipCatalog::load(path);
    std::cout << "ok: " << cat.categories().size() << " categories, " << cat.groups().size()
              << " groups, " << cat.clips().size() << " clips, "
              << cat.usable_category_ids().size() << " categories with validation clips\n";
    return 0;
}

int cmd_catalog_stats(const std::string& path) {
    ClipCatalog cat = ClipCatalog::load(path);
    std::cout << "source: " << cat.meta().source << " (" << cat.meta().version << ")\n";
    std::cout << "categories: " << cat.categories().size() << "\n";
    std::cout << "groups:\n";
    for (const SemanticGroup& g : cat.groups()) {
        std::size_t usable = 0;
        for (const std::string& m : g.members) usable += !cat.validation_clips(m).empty();
        std::cout << "  " << g.id << " '" << g.name << "': " << g.members.size() << " members, "
                  << usable << " with validation clips" << (g.excluded ? " [excluded]" : "")
                  << "\n";
    }
    std::size_t validation = 0;
    for (const ClipRecord& c : cat.clips()) validation += c.split == Split::validation;
    std::cout << "clips: " << cat.clips().size() << " (" << validation << " validation)\n";
    std::cout << "usable categories (>=1 validation clip): " << cat.usable_category_ids().size()
              << "\n";
    return 0;
}

int cmd_gen(const synth::BatchSpec& spec, const std::string& catalog_path,
            const std::string& out) {
    ClipCatalog cat = ClipCatalog::load(catalog_path);
    std::vector<json> lines;
    lines.push_back(batch_meta(spec, catalog_path));
    for (const TaskInstance& inst : synth::generate_batch(cat, spec))
        lines.push_back(to_json(inst));
    write_jsonl(out, lines);
    std::cout << "wrote " << spec.count << " instances to " << out << "\n";
    return 0;
}

int cmd_gen_pairs(const synth::PairBatchSpec& spec, const std::string& catalog_path,
                  const std::string& out) {
    ClipCatalog cat = ClipCatalog::load(catalog_path);
    std::vector<json> lines;
    json meta;
    meta["kind"] = "meta";
    meta["schema"] = "vector-shufflepairs/1";
    meta["catalog"] = catalog_path;
    meta["count"] = spec.count;
    meta["seed"] = spec.seed;
    meta["min_events"] = spec.min_events;
    meta["max_events"] = spec.max_events;
    lines.push_back(std::move(meta));
    for (const ShufflePair& pair : synth::generate_pair_batch(cat, spec))
        lines.push_back(to_json(pair));
    write_jsonl(out, lines);
    std::cout << "wrote " << spec.count << " shuffle pairs to " << out << "\n";
    return 0;
}

int cmd_gen_release(const std::string& catalog_path, std::uint64_t seed,
                    const std::string& out_dir) {
    ClipCatalog cat = ClipCatalog::load(catalog_path);
    fs::create_directories(out_dir);
    std::map<std::string, std::vector<json>> files;
    std::map<std::string, std::size_t> counts;
    for (const synth::ReleaseRow& row : synth::release_plan(seed)) {
        auto& lines = files[row.file];
        lines.push_back(batch_meta(row.spec, catalog_path));
        for (const TaskInstance& inst : synth::generate_batch(cat, row.spec))
            lines.push_back(to_json(inst));
        counts[row.file] += row.spec.count;
    }
    for (const auto& [file, lines] : files)
        write_jsonl(fs::path(out_dir) / file, lines);
    for (const auto& [file, n] : counts) std::cout << file << ": " << n << " instances\n";
    return 0;
}

int cmd_prompts_preview(const std::string& task, const std::string& level_str, int n_q, int m,
                        std::uint64_t seed, const std::string& catalog_path) {
    ClipCatalog cat = ClipCatalog::load(catalog_path);
    synth::BatchSpec spec;
    spec.task = task_from_name(task);
    if (spec.task != TaskKind::t0_single_event) spec.level = level_from_name(level_str);
    spec.n_q = n_q;
    spec.m = m;
    spec.count = 1;
    spec.seed = seed;
    const TaskInstance inst = synth::generate_batch(cat, spec).front();
    std::cout << "--- instance " << inst.id << " ---\n";
    std::cout << prompts::render_prompt(inst);
    std::cout << "--- canonical answer ---\n" << prompts::render_answer(inst.key) << "\n";
    return 0;
}

// fixture lines: {"raw": ..., "instance": {...}, "expect": {...parsed answer...}}
int cmd_parse_fixture(const std::string& path) {
    std::size_t ok = 0, total = 0;
    for (const json& rec : read_jsonl(path)) {
        if (rec.value("kind", "") == "meta") continue;
        ++total;
        const TaskInstance inst = instance_from_json(rec.at("instance"));
        const ParsedAnswer got = parse_answer(rec.at("raw").get<std::string>(), inst);
        const ParsedAnswer expect = parsed_from_json(rec.at("expect"));
        const bool pass = got.same_prediction(expect) ||
                          (got.is_unparseable() && expect.is_unparseable());
        ok += pass;
        std::cout << (pass ? "ok   " : "FAIL ") << rec.value("name", "case-" + std::to_string(total))
                  << "\n";
        if (!pass)
            std::cout << "  got:    " << to_json(got).dump() << "\n  expect: "
                      << to_json(expect).dump() << "\n";
    }
    std::cout << ok << "/" << total << " fixture cases parsed as intended\n";
    return ok == total ? 0 : 2;
}

int cmd_run(const std::string& instances, const std::string& backend, const std::string& records,
            bool cot, int frames, int concurrency, const std::string& frames_dir) {
    harness::CampaignConfig cfg;
    cfg.instances = instances;
    cfg.records = records;
    cfg.backend = clients::resolve_backend(backend);
    cfg.cot = cot;
    cfg.frames = frames;
    cfg.concurrency = concurrency;
    cfg.frames_dir = frames_dir;
    const harness::CampaignResult result = harness::run_campaign(cfg);
    std::cout << "evaluated " << result.evaluated << " instances (" << result.resumed
              << " resumed, " << result.failed << " failed) -> " << records << "\n";
    return result.failed == 0 ? 0 : 2;
}

int cmd_score(const std::string& in, const std::string& out, const std::string& instances_path) {
    const std::vector<json> lines = read_jsonl(in);
    if (lines.empty() || lines.front().value("kind", "") != "meta")
        throw harness::HarnessError("record log lacks a meta header: " + in);
    const std::string manifest =
        instances_path.empty() ? lines.front().at("instances").get<std::string>() : instances_path;
    std::map<std::string, TaskInstance> by_id;
    const json& meta = lines.front();
    if (meta.value("mode", "") == "event-shuffle") {
        for (const ShufflePair& p : load_pairs(manifest)) {
            by_id.emplace(p.original.id, p.original);
            by_id.emplace(p.shuffled.id, p.shuffled);
        }
    } else {
        for (const TaskInstance& inst : load_instances(manifest)) by_id.emplace(inst.id, inst);
    }
    std::vector<json> out_lines;
    out_lines.push_back(lines.front());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].value("kind", "") == "summary") {
            out_lines.push_back(lines[i]);
            continue;
        }
        harness::EvalRecord rec = harness::record_from_json(lines[i]);
        auto it = by_id.find(rec.instance_id);
        if (it == by_id.end())
            throw harness::HarnessError("record references unknown instance '" + rec.instance_id +
                                        "'");
        if (rec.status == "ok") rec.parsed = parse_answer(rec.raw, it->second);
        rec.scores = metrics::score_answer(rec.parsed, it->second);
        out_lines.push_back(harness::to_json(rec));
    }
    write_jsonl(out, out_lines);
    std::cout << "re-scored " << out_lines.size() - 1 << " records -> " << out << "\n";
    return 0;
}

int cmd_chance(const std::string& task, const std::string& level_str, const std::string& metric,
               int n_q, int m, std::uint64_t trials, std::uint64_t seed, bool table) {
    if (table) {
        std::cout << "row | metric | chance | model\n";
        for (const chance::ChanceRow& row : chance::chance_table(trials, seed)) {
            std::cout << row.row << " | " << chance::metric_name(row.query.metric) << " | "
                      << row.display;
            if (row.estimate.exact_ratio)
                std::cout << " (= " << row.estimate.exact_ratio->first << "/"
                          << row.estimate.exact_ratio->second << ")";
            if (!row.estimate.analytic)
                std::cout << " +/- " << format_fixed2(row.estimate.ci95) << " (mc "
                          << row.estimate.trials << ")";
            std::cout << " | " << row.estimate.model_note << "\n";
        }
        return 0;
    }
    chance::ChanceQuery q;
    q.task = task_from_name(task);
    if (q.task != TaskKind::t0_single_event) q.level = level_from_name(level_str);
    q.n_q = n_q;
    q.m = m;
    q.metric = chance::metric_from_name(metric);
    const chance::ChanceEstimate e = chance::chance_baseline(q, trials, seed);
    std::cout << (q.metric == chance::Metric::em ? chance::display_chance(q.task, e.value)
                                                 : format_fixed2(e.value));
    if (e.exact_ratio)
        std::cout << " (= " << e.exact_ratio->first << "/" << e.exact_ratio->second << ")";
    if (!e.analytic) std::cout << " +/- " << format_fixed2(e.ci95) << " (mc " << e.trials << ")";
    std::cout << "\n" << (e.analytic ? "analytic" : "monte carlo") << ": " << e.model_note << "\n";
    return 0;
}

int cmd_diagnose_shuffle(const std::string& mode, const std::string& manifest,
                         const std::string& backend, const std::string& records, bool cot,
                         int frames, std::uint64_t shuffle_seed) {
    const clients::BackendConfig cfg = clients::resolve_backend(backend);
    if (mode == "events") {
        const harness::ShuffleDiagnosis diag =
            harness::diagnose_event_shuffle(manifest, cfg, records, cot, frames);
        std::cout << "pairs: " << diag.outcome.pairs << "\n";
        std::cout << "org EM: " << format_fixed2(diag.accuracy_original)
                  << "  shuf EM: " << format_fixed2(diag.accuracy_shuffled) << "\n";
        std::cout << "eligible (C_o and not C_s): " << diag.outcome.eligible
                  << ", biased: " << diag.outcome.biased << "\n";
        if (diag.outcome.eta)
            std::cout << "eta: " << format_fixed2(*diag.outcome.eta)
                      << (diag.outcome.low_confidence ? "  [low confidence: <20 eligible pairs]"
                                                      : "")
                      << "\n";
        else
            std::cout << "eta: undefined (no pair solved on original and missed on shuffled)\n";
        return 0;
    }
    if (mode == "frames") {
        const harness::FrameShuffleDiagnosis diag =
            harness::diagnose_frame_shuffle(manifest, cfg, records, shuffle_seed, frames);
        std::cout << "instances: " << diag.instances << "\n";
        std::cout << "acc original: " << format_fixed2(diag.outcome.accuracy_original)
                  << "  acc shuffled: " << format_fixed2(diag.outcome.accuracy_shuffled) << "\n";
        if (diag.outcome.rho)
            std::cout << "rho: " << format_fixed2(*diag.outcome.rho) << "\n";
        else
            std::cout << "rho: undefined (original accuracy is 0)\n";
        return 0;
    }
    throw std::invalid_argument("mode must be events|frames");
}

int cmd_report(const std::string& records, const std::string& format, const std::string& out) {
    const harness::ReportInputs inputs = harness::load_report_inputs(records);
    const harness::Report report = harness::emit_report(inputs);
    if (format == "md") {
        if (out.empty())
            std::cout << report.markdown;
        else
            write_text_file(out, report.markdown);
    } else if (format == "jsonl") {
        if (out.empty()) {
            for (const json& row : report.rows) std::cout << row.dump() << "\n";
        } else {
            write_jsonl(out, report.rows);
        }
    } else {
        throw std::invalid_argument("format must be md|jsonl");
    }
    if (!out.empty()) std::cout << "wrote report to " << out << "\n";
    if (report.partial) throw ExitPartial{};
    return 0;
}

int cmd_materialize(const std::string& instances, const std::string& out_dir, int frames,
                    bool per_segment, const std::string& muxer, const std::string& clips_root,
                    int width, int height, double fps) {
    materialize::RenderConfig cfg;
    cfg.muxer = muxer;
    cfg.clips_root = clips_root;
    cfg.width = width;
    cfg.height = height;
    cfg.fps = fps;
    fs::create_directories(out_dir);
    const fs::path sidecar = fs::path(out_dir) / "materialized.jsonl";
    std::vector<json> sidecar_lines;
    json meta;
    meta["kind"] = "meta";
    meta["schema"] = "vector-media/1";
    meta["instances"] = instances;
    meta["frames"] = frames;
    meta["per_segment"] = per_segment;
    sidecar_lines.push_back(std::move(meta));
    std::size_t done = 0, failed = 0;
    for (const TaskInstance& inst : load_instances(instances)) {
        try {
            const materialize::RenderPlan plan = materialize::plan_for(inst, cfg, out_dir);
            const materialize::MaterializeResult media = materialize::materialize_video(plan, cfg);
            materialize::FramePolicy policy;
            policy.count = frames;
            policy.per_segment = per_segment;
            std::vector<double> durations;
            for (const Segment& s : inst.video.segments) durations.push_back(s.duration_s);
            const std::vector<std::string> frame_files = materialize::extract_frames(
                media.media_path, policy, durations, cfg, fs::path(out_dir) / inst.id);
            json line;
            line["instance_id"] = inst.id;
            line["media"] = media.media_path;
            line["checksum"] = media.checksum;
            line["duration_s"] = media.duration_s;
            line["frames"] = frame_files;
            sidecar_lines.push_back(std::move(line));
            ++done;
        } catch (const materialize::MaterializeError& e) {
            json line;
            line["instance_id"] = inst.id;
            line["error"] = e.what();
            sidecar_lines.push_back(std::move(line));
            ++failed;
            std::cerr << "materialize failed for " << inst.id << ": " << e.what() << "\n";
        }
    }
    write_jsonl(sidecar, sidecar_lines);
    std::cout << "materialized " << done << " videos (" << failed << " failed) -> " << out_dir
              << "\n";
    return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vector - multi-event temporal-order benchmark synthesis and evaluation"};
    app.require_subcommand(1);

    // catalog
    auto* catalog = app.add_subcommand("catalog", "catalog validation and statistics");
    catalog->require_subcommand(1);
    std::string cat_path;
    auto* cat_validate = catalog->add_subcommand("validate", "validate a catalog manifest");
    cat_validate->add_option("path", cat_path, "catalog manifest")->required();
    auto* cat_stats = catalog->add_subcommand("stats", "print catalog statistics");
    cat_stats->add_option("path", cat_path, "catalog manifest")->required();

    // gen
    auto* gen = app.add_subcommand("gen", "generate task instances");
    std::string gen_task = "t1", gen_level = "l1", gen_catalog, gen_out;
    int gen_nq = 1, gen_m = 2;
    std::uint64_t gen_seed = 0;
    std::size_t gen_count = 100;
    gen->add_option("--task", gen_task, "t0..t5")->capture_default_str();
    gen->add_option("--level", gen_level, "l1|l2")->capture_default_str();
    gen->add_option("--nq", gen_nq, "queried events for t3 (1..3)")->capture_default_str();
    gen->add_option("--m", gen_m, "pattern length for t5 (2|3)")->capture_default_str();
    gen->add_option("--count", gen_count, "instances to generate")->capture_default_str();
    gen->add_option("--seed", gen_seed, "root seed")->capture_default_str();
    gen->add_option("--catalog", gen_catalog, "catalog manifest");
    gen->add_option("--out", gen_out, "output manifest");

    auto* gen_pairs = gen->add_subcommand("shuffle-pairs", "generate original/shuffled pairs");
    std::string gp_catalog, gp_out;
    std::uint64_t gp_seed = 0;
    std::size_t gp_count = 100;
    int gp_min = 3, gp_max = 6;
    gen_pairs->add_option("--count", gp_count, "pairs to generate")->capture_default_str();
    gen_pairs->add_option("--seed", gp_seed, "root seed")->capture_default_str();
    gen_pairs->add_option("--min-events", gp_min, "minimum events per video")->capture_default_str();
    gen_pairs->add_option("--max-events", gp_max, "maximum events per video")->capture_default_str();
    gen_pairs->add_option("--catalog", gp_catalog, "catalog manifest")->required();
    gen_pairs->add_option("--out", gp_out, "output manifest")->required();

    auto* gen_release = gen->add_subcommand("release", "generate the full release shape");
    std::string gr_catalog, gr_out_dir;
    std::uint64_t gr_seed = 0;
    gen_release->add_option("--seed", gr_seed, "root seed")->capture_default_str();
    gen_release->add_option("--catalog", gr_catalog, "catalog manifest")->required();
    gen_release->add_option("--out-dir", gr_out_dir, "output directory")->required();

    // prompts
    auto* prompts_cmd = app.add_subcommand("prompts", "prompt tooling");
    auto* preview = prompts_cmd->add_subcommand("preview", "render a sample prompt");
    std::string pv_task = "t1", pv_level = "l1", pv_catalog;
    int pv_nq = 1, pv_m = 2;
    std::uint64_t pv_seed = 1;
    preview->add_option("--task", pv_task, "t0..t5")->capture_default_str();
    preview->add_option("--level", pv_level, "l1|l2")->capture_default_str();
    preview->add_option("--nq", pv_nq)->capture_default_str();
    preview->add_option("--m", pv_m)->capture_default_str();
    preview->add_option("--seed", pv_seed)->capture_default_str();
    preview->add_option("--catalog", pv_catalog, "catalog manifest")->required();

    // parse
    auto* parse_cmd = app.add_subcommand("parse", "run parser regression fixtures");
    std::string parse_fixture;
    parse_cmd->add_option("--fixture", parse_fixture, "fixture JSONL")->required();

    // run
    auto* run = app.add_subcommand("run", "evaluate a backend over an instance manifest");
    std::string run_instances, run_backend, run_records, run_cot = "off", run_frames_dir;
    int run_frames = 32, run_concurrency = 1;
    run->add_option("--instances", run_instances, "instance manifest")->required();
    run->add_option("--backend", run_backend, "builtin kind or backend config JSON")->required();
    run->add_option("--records", run_records, "append-only record log")->required();
    run->add_option("--cot", run_cot, "on|off")->capture_default_str();
    run->add_option("--frames", run_frames, "frame budget")->capture_default_str();
    run->add_option("--concurrency", run_concurrency, "bounded in-flight requests")
        ->capture_default_str();
    run->add_option("--frames-dir", run_frames_dir, "materialized frames directory");

    // score
    auto* score = app.add_subcommand("score", "re-parse and re-score a record log");
    std::string score_in, score_out, score_instances;
    score->add_option("--in", score_in, "record log")->required();
    score->add_option("--out", score_out, "output record log")->required();
    score->add_option("--instances", score_instances, "instance manifest override");

    // chance
    auto* chance_cmd = app.add_subcommand("chance", "chance baselines");
    std::string ch_task = "t1", ch_level = "l1", ch_metric = "em";
    int ch_nq = 1, ch_m = 2;
    std::uint64_t ch_trials = 100000, ch_seed = 2024;
    bool ch_table = false;
    chance_cmd->add_flag("--table", ch_table, "print the full chance table");
    chance_cmd->add_option("--task", ch_task)->capture_default_str();
    chance_cmd->add_option("--level", ch_level)->capture_default_str();
    chance_cmd->add_option("--metric", ch_metric, "em|pm|lm|om")->capture_default_str();
    chance_cmd->add_option("--nq", ch_nq)->capture_default_str();
    chance_cmd->add_option("--m", ch_m)->capture_default_str();
    chance_cmd->add_option("--trials", ch_trials)->capture_default_str();
    chance_cmd->add_option("--seed", ch_seed)->capture_default_str();

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "bias and robustness diagnostics");
    auto* shuffle = diagnose->add_subcommand("shuffle", "event- or frame-shuffle experiment");
    std::string sh_mode = "events", sh_manifest, sh_backend, sh_records, sh_cot = "off";
    int sh_frames = 32;
    std::uint64_t sh_seed = 7;
    shuffle->add_option("--mode", sh_mode, "events|frames")->capture_default_str();
    shuffle->add_option("--pairs", sh_manifest, "pair manifest (events mode)");
    shuffle->add_option("--instances", sh_manifest, "instance manifest (frames mode)");
    shuffle->add_option("--backend", sh_backend, "builtin kind or config JSON")->required();
    shuffle->add_option("--records", sh_records, "record log")->required();
    shuffle->add_option("--cot", sh_cot, "on|off")->capture_default_str();
    shuffle->add_option("--frames", sh_frames)->capture_default_str();
    shuffle->add_option("--shuffle-seed", sh_seed)->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "render a campaign report");
    std::string rp_records, rp_format = "md", rp_out;
    report->add_option("--records", rp_records, "record log")->required();
    report->add_option("--format", rp_format, "md|jsonl")->capture_default_str();
    report->add_option("--out", rp_out, "output file (stdout when omitted)");

    // materialize
    auto* mat = app.add_subcommand("materialize", "render instance manifests to media + frames");
    std::string mt_instances, mt_out_dir, mt_muxer = "ffmpeg", mt_clips_root;
    int mt_frames = 32, mt_width = 224, mt_height = 224;
    double mt_fps = 8.0;
    bool mt_per_segment = false;
    mat->add_option("--instances", mt_instances, "instance manifest")->required();
    mat->add_option("--out-dir", mt_out_dir, "output directory")->required();
    mat->add_option("--frames", mt_frames)->capture_default_str();
    mat->add_flag("--per-segment", mt_per_segment, "per-segment frame sampling");
    mat->add_option("--muxer", mt_muxer, "ffmpeg-compatible muxer binary")->capture_default_str();
    mat->add_option("--clips-root", mt_clips_root, "prefix for relative clip uris");
    mat->add_option("--width", mt_width)->capture_default_str();
    mat->add_option("--height", mt_height)->capture_default_str();
    mat->add_option("--fps", mt_fps)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cat_validate->parsed()) return cmd_catalog_validate(cat_path);
        if (cat_stats->parsed()) return cmd_catalog_stats(cat_path);
        if (gen_pairs->parsed()) {
            synth::PairBatchSpec spec;
            spec.count = gp_count;
            spec.seed = gp_seed;
            spec.min_events = gp_min;
            spec.max_events = gp_max;
            return cmd_gen_pairs(spec, gp_catalog, gp_out);
        }
        if (gen_release->parsed()) return cmd_gen_release(gr_catalog, gr_seed, gr_out_dir);
        if (gen->parsed()) {
            if (gen_catalog.empty() || gen_out.empty())
                throw std::invalid_argument("gen requires --catalog and --out");
            synth::BatchSpec spec;
            spec.task = task_from_name(gen_task);
            if (spec.task != TaskKind::t0_single_event) spec.level = level_from_name(gen_level);
            spec.n_q = gen_nq;
            spec.m = gen_m;
            spec.count = gen_count;
            spec.seed = gen_seed;
            return cmd_gen(spec, gen_catalog, gen_out);
        }
        if (preview->parsed())
            return cmd_prompts_preview(pv_task, pv_level, pv_nq, pv_m, pv_seed, pv_catalog);
        if (parse_cmd->parsed()) return cmd_parse_fixture(parse_fixture);
        if (run->parsed())
            return cmd_run(run_instances, run_backend, run_records, run_cot == "on", run_frames,
                           run_concurrency, run_frames_dir);
        if (score->parsed()) return cmd_score(score_in, score_out, score_instances);
        if (chance_cmd->parsed())
            return cmd_chance(ch_task, ch_level, ch_metric, ch_nq, ch_m, ch_trials, ch_seed,
                              ch_table);
        if (shuffle->parsed())
            return cmd_diagnose_shuffle(sh_mode, sh_manifest, sh_backend, sh_records,
                                        sh_cot == "on", sh_frames, sh_seed);
        if (report->parsed()) return cmd_report(rp_records, rp_format, rp_out);
        if (mat->parsed())
            return cmd_materialize(mt_instances, mt_out_dir, mt_frames, mt_per_segment, mt_muxer,
                                   mt_clips_root, mt_width, mt_height, mt_fps);
    } catch (const ExitPartial&) {
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
