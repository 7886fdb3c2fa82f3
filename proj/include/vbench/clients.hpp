#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vbench/instance.hpp"
#include "vbench/prompts.hpp"
#include "vbench/rng.hpp"

namespace vbench::clients {

enum class BackendKind {
    remote_http,
    oracle,
    noisy_oracle,
    canonical_bias,
    uniform_random,
    fixture_replay,
};

std::string backend_kind_name(BackendKind k);
BackendKind backend_kind_from_name(const std::string& name);

struct BackendConfig {
    std::string id;
    BackendKind kind = BackendKind::oracle;
    // remote_http
    std::string endpoint;    // e.g. http://host:port/v1/chat/completions
    std::string model;
    std::string api_key_env = "VECTOR_API_KEY";  // secrets come from the environment only
    double temperature = 0.0;
    int max_retries = 4;
    double backoff_base_s = 0.25;
    double rate_per_s = 0.0;  // 0 = unlimited
    // scripted
    double noise_rate = 0.0;       // noisy_oracle
    std::uint64_t seed = 0;        // uniform_random / noisy_oracle
    std::string fixture_path;      // fixture_replay
    // payload
    int frame_budget = 32;
    bool per_segment_frames = false;
};

json to_json(const BackendConfig& cfg);
BackendConfig backend_from_json(const json& j);
// Accepts a builtin kind name ("oracle", "uniform_random", ...) or a JSON
// config file path.
BackendConfig resolve_backend(const std::string& name_or_path);

struct FrameRef {
    int segment_index = 0;  // 0-based
    double t = 0.0;         // seconds on the concatenated timeline
    std::string path;       // empty when symbolic (no materialized media)
};

struct VisualPayload {
    std::vector<FrameRef> frames;
    std::string media_uri;
};

// Uniform midpoint timestamps: duration 64 with 32 frames -> 1, 3, ..., 63.
std::vector<double> uniform_frame_times(double duration_s, int count);
VisualPayload build_payload(const TaskInstance& inst, int frame_count, bool per_segment,
                            const std::string& frames_dir = "");

struct CompletionError : std::runtime_error {
    enum class Kind { auth, rate_limit, payload_too_large, transport, protocol, fixture_miss };
    Kind error_kind;
    CompletionError(Kind k, const std::string& msg) : std::runtime_error(msg), error_kind(k) {}
};

struct CompletionRequest {
    const TaskInstance* instance = nullptr;
    std::string prompt;
    const VisualPayload* payload = nullptr;
    // canonical chronology for shuffle-pair runs; scripted bias answers this
    const AnswerKey* canonical_key = nullptr;
    std::string segment_label;  // set for describe steps
    std::string step = "answer";  // "answer" | "cot_gen" | "cot_query" | "describe" | "merge"
    std::string tag;              // instance id for logging / fixtures
};

class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    virtual std::string complete(const CompletionRequest& req) = 0;
    const BackendConfig& config() const { return cfg_; }
    // Oracle-family backends read the answer key; their records are flagged.
    virtual bool needs_answer_key() const { return false; }
    std::uint64_t calls() const { return calls_; }

protected:
    explicit ModelBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {}
    BackendConfig cfg_;
    std::atomic<std::uint64_t> calls_{0};
};

std::unique_ptr<ModelBackend> make_backend(const BackendConfig& cfg);

// With probability noise_rate, one random adjacent transposition of the key
// list before rendering; scalar keys render unchanged.
std::string noisy_oracle_policy(const AnswerKey& key, double noise_rate, Rng& rng);

struct CotTrace {
    std::string context;  // generated chronological narrative d
    std::string answer;
    double gen_ms = 0.0;
    double query_ms = 0.0;
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
};

json to_json(const CotTrace& t);
CotTrace cot_trace_from_json(const json& j);

// Raised when a CoT step fails; carries whatever was produced first so the
// partial trace can be persisted.
struct CotStepError : CompletionError {
    CotTrace partial;
    CotStepError(const CompletionError& cause, CotTrace partial_trace)
        : CompletionError(cause.error_kind, cause.what()), partial(std::move(partial_trace)) {}
};

// Two sequential calls sharing the payload: d = M(p_gen, V), then
// y = M(p_query || d, V). The context is embedded verbatim in step two.
CotTrace cot_infer(ModelBackend& backend, const TaskInstance& inst, const VisualPayload& payload,
                   const prompts::CotPromptPair& cot, const AnswerKey* canonical_key = nullptr);

// Per-segment descriptions (independent calls) merged into one chronological
// narrative by a second backend.
std::string describe_and_merge(ModelBackend& segment_backend, ModelBackend& merge_backend,
                               const MultiEventVideo& video, const VisualPayload* payload = nullptr);

}  // namespace vbench::clients
