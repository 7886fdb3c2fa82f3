#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vbench/clients.hpp"
#include "vbench/instance.hpp"
#include "vbench/metrics.hpp"

namespace vbench::harness {

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalRecord {
    std::string instance_id;
    std::string backend_id;
    std::uint64_t index = 0;  // position in the instance manifest
    std::string status = "ok";  // "ok" | "failed"
    std::string error;
    std::string raw;
    ParsedAnswer parsed;
    metrics::ScoreSet scores;
    std::optional<clients::CotTrace> cot;
    bool key_access = false;     // oracle-family backend
    double t_ms = 0.0;           // 0 under scripted backends to keep logs reproducible
    double started_at_ms = 0.0;  // wall clock, remote backends only
};

json to_json(const EvalRecord& r);
EvalRecord record_from_json(const json& j);

struct CampaignConfig {
    std::filesystem::path instances;
    std::filesystem::path records;  // append-only JSONL log
    clients::BackendConfig backend;
    bool cot = false;
    int frames = 32;
    int concurrency = 1;
    std::string frames_dir;  // materialized frames, optional
};

std::uint64_t config_hash(const CampaignConfig& cfg);

struct CampaignResult {
    std::vector<EvalRecord> records;  // full set, resumed + new, ordered by index
    std::size_t evaluated = 0;        // new model-call evaluations this run
    std::size_t resumed = 0;
    std::size_t failed = 0;
    std::uint64_t backend_calls = 0;
};

// Evaluates every instance not already in the record log. Append-only and
// resumable; a completed campaign re-run performs zero model calls.
CampaignResult run_campaign(const CampaignConfig& cfg);

struct ShuffleDiagnosis {
    metrics::ShuffleOutcome outcome;
    std::vector<metrics::PairOutcome> pair_records;
    double accuracy_original = 0.0;
    double accuracy_shuffled = 0.0;
};

// Event-wise shuffle experiment over a pair manifest (biased ratio).
ShuffleDiagnosis diagnose_event_shuffle(const std::filesystem::path& pairs,
                                        const clients::BackendConfig& backend,
                                        const std::filesystem::path& records, bool cot = false,
                                        int frames = 32);

struct FrameShuffleDiagnosis {
    metrics::RobustnessOutcome outcome;
    std::size_t instances = 0;
};

// Frame-shuffle robustness: each instance evaluated on the original payload
// and on a seeded frame permutation of it.
FrameShuffleDiagnosis diagnose_frame_shuffle(const std::filesystem::path& instances,
                                             const clients::BackendConfig& backend,
                                             const std::filesystem::path& records,
                                             std::uint64_t shuffle_seed, int frames = 32);

struct AggregateRow {
    TaskKind task;
    std::optional<Level> level;
    std::string variant;  // "", "nq1".."nq3", pattern label
    std::size_t n = 0;
    metrics::ScoreSet mean;  // em/pm/lm/om means
};

std::vector<AggregateRow> aggregate(const std::vector<EvalRecord>& records,
                                    const std::vector<TaskInstance>& instances);

struct ReportInputs {
    std::vector<EvalRecord> records;
    std::vector<TaskInstance> instances;
    json meta;                        // record-log meta line
    std::vector<json> instance_metas; // generation lineage from the manifest
    std::optional<ShuffleDiagnosis> shuffle;
    std::optional<FrameShuffleDiagnosis> frame_shuffle;
};

struct Report {
    std::string markdown;
    std::vector<json> rows;  // machine-readable aggregate lines
    bool partial = false;    // some manifest instances lack records
};

// Deterministic: same records, byte-identical report. Throws on an empty
// campaign.
Report emit_report(const ReportInputs& inputs);

// Loads records plus their instance manifest; shuffle-mode logs re-derive
// their eta/rho sections from the records.
ReportInputs load_report_inputs(const std::filesystem::path& records_path);

}  // namespace vbench::harness
