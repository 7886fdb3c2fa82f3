#include <doctest.h>

#include <fstream>

#include "support.hpp"
#include "vbench/harness.hpp"
#include "vbench/synth.hpp"
#include "vbench/util.hpp"

using namespace vbench;
using namespace vbench::harness;

namespace {

const ClipCatalog& demo() {
    static ClipCatalog cat = vbtest::make_catalog(30, 3, 8, 2);
    return cat;
}

// a small mixed manifest covering every task kind
void write_mixed_manifest(const std::filesystem::path& path, std::size_t per_row = 4,
                          std::uint64_t seed = 11) {
    std::vector<json> lines;
    auto emit = [&](TaskKind task, std::optional<Level> level, int nq, int m) {
        synth::BatchSpec spec;
        spec.task = task;
        spec.level = level;
        spec.n_q = nq;
        spec.m = m;
        spec.count = per_row;
        spec.seed = seed;
        for (const TaskInstance& inst : synth::generate_batch(demo(), spec))
            lines.push_back(to_json(inst));
    };
    emit(TaskKind::t0_single_event, std::nullopt, 1, 2);
    for (Level level : {Level::l1, Level::l2}) {
        emit(TaskKind::t1_sequencing, level, 1, 2);
        emit(TaskKind::t2_relative, level, 1, 2);
        for (int nq = 1; nq <= 3; ++nq) emit(TaskKind::t3_position, level, nq, 2);
        emit(TaskKind::t4_semantic_outlier, level, 1, 2);
        for (int m : {2, 3}) emit(TaskKind::t5_pattern_outlier, level, 1, m);
    }
    write_jsonl(path, lines);
}

CampaignConfig campaign(const std::filesystem::path& instances,
                        const std::filesystem::path& records, const std::string& backend) {
    CampaignConfig cfg;
    cfg.instances = instances;
    cfg.records = records;
    cfg.backend = clients::resolve_backend(backend);
    return cfg;
}

}  // namespace

TEST_CASE("oracle campaign scores EM 100 everywhere and resumes with zero calls") {
    vbtest::TempDir tmp("campaign");
    write_mixed_manifest(tmp.file("mixed.jsonl"));
    CampaignConfig cfg = campaign(tmp.file("mixed.jsonl"), tmp.file("recs.jsonl"), "oracle");

    const CampaignResult first = run_campaign(cfg);
    CHECK(first.evaluated == first.records.size());
    CHECK(first.failed == 0);
    for (const EvalRecord& r : first.records) {
        CHECK(r.scores.em == 100.0);
        CHECK(r.status == "ok");
        CHECK(r.key_access);
        CHECK(r.t_ms == 0.0);  // scripted backends keep logs time-free
    }
    // re-running a completed campaign performs zero new model calls
    const CampaignResult second = run_campaign(cfg);
    CHECK(second.evaluated == 0);
    CHECK(second.backend_calls == 0);
    CHECK(second.resumed == first.records.size());
}

TEST_CASE("interrupted campaign resumes to a byte-identical log") {
    vbtest::TempDir tmp("resume");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 3);
    CampaignConfig cfg = campaign(tmp.file("mixed.jsonl"), tmp.file("full.jsonl"), "oracle");
    run_campaign(cfg);
    const std::string full = read_text_file(tmp.file("full.jsonl").string());

    // simulate a crash after the meta line and the first five records
    const auto lines = split_lines(full);
    std::string partial;
    for (std::size_t i = 0; i < 6 && i < lines.size(); ++i) partial += lines[i] + "\n";
    write_text_file(tmp.file("partial.jsonl").string(), partial);
    cfg.records = tmp.file("partial.jsonl");
    const CampaignResult resumed = run_campaign(cfg);
    CHECK(resumed.resumed == 5);
    CHECK(read_text_file(tmp.file("partial.jsonl").string()) == full);
}

TEST_CASE("campaign refuses to resume under a different config") {
    vbtest::TempDir tmp("confmix");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 2);
    CampaignConfig cfg = campaign(tmp.file("mixed.jsonl"), tmp.file("recs.jsonl"), "oracle");
    run_campaign(cfg);
    cfg.backend = clients::resolve_backend("uniform_random");
    CHECK_THROWS_WITH_AS(run_campaign(cfg), doctest::Contains("refusing to resume"),
                         HarnessError);
}

TEST_CASE("failed backends leave flagged records and the campaign continues") {
    vbtest::TempDir tmp("failure");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 1);
    // a fixture with no recorded responses fails every instance
    write_jsonl(tmp.file("fixture.jsonl"),
                {json{{"instance_id", "none"}, {"step", "answer"}, {"raw", ""}}});
    clients::BackendConfig backend;
    backend.kind = clients::BackendKind::fixture_replay;
    backend.id = "replay";
    backend.fixture_path = tmp.file("fixture.jsonl").string();
    CampaignConfig cfg;
    cfg.instances = tmp.file("mixed.jsonl");
    cfg.records = tmp.file("recs.jsonl");
    cfg.backend = backend;
    const CampaignResult result = run_campaign(cfg);
    CHECK(result.failed == result.records.size());
    for (const EvalRecord& r : result.records) {
        CHECK(r.status == "failed");
        CHECK(r.scores.em == 0.0);
    }
    // the report still renders, with rows at zero
    const Report report = emit_report(load_report_inputs(cfg.records));
    CHECK(report.markdown.find("failed records: 17") != std::string::npos);
}

TEST_CASE("failed cot campaigns persist the partial trace") {
    vbtest::TempDir tmp("cotpartial");
    synth::BatchSpec spec;
    spec.task = TaskKind::t1_sequencing;
    spec.level = Level::l1;
    spec.count = 1;
    spec.seed = 21;
    const TaskInstance inst = synth::generate_batch(demo(), spec).front();
    write_jsonl(tmp.file("one.jsonl"), {to_json(inst)});
    write_jsonl(tmp.file("fixture.jsonl"),
                {json{{"instance_id", inst.id}, {"step", "cot_gen"}, {"raw", "half a trace"}}});
    clients::BackendConfig backend;
    backend.kind = clients::BackendKind::fixture_replay;
    backend.id = "replay";
    backend.fixture_path = tmp.file("fixture.jsonl").string();
    CampaignConfig cfg;
    cfg.instances = tmp.file("one.jsonl");
    cfg.records = tmp.file("recs.jsonl");
    cfg.backend = backend;
    cfg.cot = true;
    const CampaignResult result = run_campaign(cfg);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].status == "failed");
    REQUIRE(result.records[0].cot.has_value());
    CHECK(result.records[0].cot->context == "half a trace");
    CHECK(result.records[0].cot->answer.empty());
}

TEST_CASE("concurrent campaign equals the sequential record log") {
    vbtest::TempDir tmp("conc");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 3);
    CampaignConfig seq = campaign(tmp.file("mixed.jsonl"), tmp.file("seq.jsonl"), "oracle");
    run_campaign(seq);
    CampaignConfig par = campaign(tmp.file("mixed.jsonl"), tmp.file("par.jsonl"), "oracle");
    par.concurrency = 8;
    run_campaign(par);
    CHECK(read_text_file(tmp.file("seq.jsonl").string()) ==
          read_text_file(tmp.file("par.jsonl").string()));
}

TEST_CASE("fixture replay re-scores a campaign bit-identically") {
    vbtest::TempDir tmp("replay");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 2);
    CampaignConfig cfg = campaign(tmp.file("mixed.jsonl"), tmp.file("orig.jsonl"), "oracle");
    const CampaignResult original = run_campaign(cfg);

    std::vector<json> fixture;
    for (const EvalRecord& r : original.records)
        fixture.push_back(json{{"instance_id", r.instance_id}, {"step", "answer"}, {"raw", r.raw}});
    write_jsonl(tmp.file("fixture.jsonl"), fixture);

    clients::BackendConfig backend;
    backend.kind = clients::BackendKind::fixture_replay;
    backend.id = "oracle";  // same id so records align
    backend.fixture_path = tmp.file("fixture.jsonl").string();
    CampaignConfig replay_cfg;
    replay_cfg.instances = tmp.file("mixed.jsonl");
    replay_cfg.records = tmp.file("replay.jsonl");
    replay_cfg.backend = backend;
    const CampaignResult replayed = run_campaign(replay_cfg);
    REQUIRE(replayed.records.size() == original.records.size());
    for (std::size_t i = 0; i < original.records.size(); ++i) {
        CHECK(replayed.records[i].raw == original.records[i].raw);
        CHECK(replayed.records[i].scores == original.records[i].scores);
        CHECK(to_json(replayed.records[i].parsed).dump() ==
              to_json(original.records[i].parsed).dump());
    }
}

TEST_CASE("event-shuffle diagnosis: canonical bias 100, oracle undefined") {
    vbtest::TempDir tmp("eta");
    ClipCatalog cat = demo();
    synth::PairBatchSpec spec;
    spec.count = 25;
    spec.seed = 17;
    std::vector<json> lines;
    for (const ShufflePair& pair : synth::generate_pair_batch(cat, spec))
        lines.push_back(to_json(pair));
    write_jsonl(tmp.file("pairs.jsonl"), lines);

    const ShuffleDiagnosis biased = diagnose_event_shuffle(
        tmp.file("pairs.jsonl"), clients::resolve_backend("canonical_bias"),
        tmp.file("bias-recs.jsonl"));
    REQUIRE(biased.outcome.eta.has_value());
    CHECK(*biased.outcome.eta == 100.0);
    CHECK(biased.outcome.eligible == 25);  // every pair: right on org, wrong on shuffled
    CHECK(biased.accuracy_original == 100.0);
    CHECK(biased.accuracy_shuffled == 0.0);

    const ShuffleDiagnosis oracle = diagnose_event_shuffle(
        tmp.file("pairs.jsonl"), clients::resolve_backend("oracle"), tmp.file("orc-recs.jsonl"));
    CHECK(!oracle.outcome.eta.has_value());  // undefined, not zero
    CHECK(oracle.outcome.eligible == 0);
    CHECK(oracle.accuracy_shuffled == 100.0);
}

TEST_CASE("frame-shuffle diagnosis: order-insensitive backend holds rho at 100") {
    vbtest::TempDir tmp("rho");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 2);
    const FrameShuffleDiagnosis diag =
        diagnose_frame_shuffle(tmp.file("mixed.jsonl"), clients::resolve_backend("oracle"),
                               tmp.file("recs.jsonl"), 7);
    REQUIRE(diag.outcome.rho.has_value());
    CHECK(*diag.outcome.rho == 100.0);
}

TEST_CASE("reports: determinism, partial banner, empty error") {
    vbtest::TempDir tmp("report");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 2);
    CampaignConfig cfg = campaign(tmp.file("mixed.jsonl"), tmp.file("recs.jsonl"), "oracle");
    run_campaign(cfg);
    const ReportInputs inputs = load_report_inputs(tmp.file("recs.jsonl"));
    const Report a = emit_report(inputs);
    const Report b = emit_report(inputs);
    CHECK(a.markdown == b.markdown);  // same records -> byte-identical report
    CHECK(!a.partial);
    CHECK(a.markdown.find("| Chance (L1) | - | 0.00 | 5.00 |") != std::string::npos);
    CHECK(a.markdown.find("s1s2s1s2s1s2 + x (L1) | 14.28") != std::string::npos);

    // drop the last record -> partial banner
    ReportInputs partial = inputs;
    partial.records.pop_back();
    const Report p = emit_report(partial);
    CHECK(p.partial);
    CHECK(p.markdown.find("PARTIAL REPORT") != std::string::npos);

    ReportInputs empty = inputs;
    empty.records.clear();
    CHECK_THROWS_WITH_AS(emit_report(empty), doctest::Contains("empty campaign"), HarnessError);
}

TEST_CASE("aggregates are recomputable from the record log exactly") {
    vbtest::TempDir tmp("agg");
    write_mixed_manifest(tmp.file("mixed.jsonl"), 3);
    CampaignConfig cfg = campaign(tmp.file("mixed.jsonl"), tmp.file("recs.jsonl"), "uniform_random");
    const CampaignResult result = run_campaign(cfg);
    const ReportInputs inputs = load_report_inputs(tmp.file("recs.jsonl"));
    const auto rows_a = aggregate(result.records, inputs.instances);
    const auto rows_b = aggregate(inputs.records, inputs.instances);
    REQUIRE(rows_a.size() == rows_b.size());
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
        CHECK(rows_a[i].mean == rows_b[i].mean);
        CHECK(rows_a[i].n == rows_b[i].n);
    }
}
