#include "vbench/clients.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "vbench/parse.hpp"
#include "vbench/util.hpp"

namespace vbench::clients {

namespace {

std::uint64_t word_count(const std::string& text) {
    std::uint64_t n = 0;
    bool in_word = false;
    for (char c : text) {
        const bool ws = std::isspace(static_cast<unsigned char>(c));
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// the evaluated instance's own ground truth
const AnswerKey& true_key(const CompletionRequest& req) {
    if (!req.instance)
        throw CompletionError(CompletionError::Kind::protocol,
                              "scripted backend needs an instance");
    return req.instance->key;
}

// the canonical (pre-shuffle) chronology when running pair experiments
const AnswerKey& canonical_or_true_key(const CompletionRequest& req) {
    if (req.canonical_key) return *req.canonical_key;
    return true_key(req);
}

// scripted merge: keep the numbered description lines, drop the instruction
std::string scripted_merge(const std::string& prompt) {
    std::vector<std::string> kept;
    for (const std::string& line : split_lines(prompt)) {
        std::size_t d = 0;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
        if (d > 0 && d + 1 < line.size() && line[d] == '.' && line[d + 1] == ' ')
            kept.push_back(line);
    }
    return join(kept, "\n");
}

std::string scripted_context(const CompletionRequest& req, const std::vector<std::string>& labels) {
    if (req.step == "cot_gen") return prompts::narrative_for(labels);
    if (req.step == "describe") return "The person is " + req.segment_label + ".";
    if (req.step == "merge") return scripted_merge(req.prompt);
    return "";
}

class OracleBackend : public ModelBackend {
public:
    explicit OracleBackend(BackendConfig cfg) : ModelBackend(std::move(cfg)) {}
    bool needs_answer_key() const override { return true; }
    std::string complete(const CompletionRequest& req) override {
        ++calls_;
        if (req.step == "cot_gen" || req.step == "describe" || req.step == "merge") {
            std::vector<std::string> labels =
                req.instance ? req.instance->chronology() : std::vector<std::string>{};
            return scripted_context(req, labels);
        }
        return prompts::render_answer(true_key(req));
    }
};

class NoisyOracleBackend : public ModelBackend {
public:
    explicit NoisyOracleBackend(BackendConfig cfg) : ModelBackend(std::move(cfg)) {}
    bool needs_answer_key() const override { return true; }
    std::string complete(const CompletionRequest& req) override {
        ++calls_;
        if (req.step == "cot_gen" || req.step == "describe" || req.step == "merge") {
            std::vector<std::string> labels =
                req.instance ? req.instance->chronology() : std::vector<std::string>{};
            return scripted_context(req, labels);
        }
        Rng rng(derive_stream(cfg_.seed, "noisy_oracle", fnv1a64(req.tag)));
        return noisy_oracle_policy(true_key(req), cfg_.noise_rate, rng);
    }
};

// Always answers the canonical (pre-shuffle) chronology; on plain instances it
// behaves like the oracle.
class CanonicalBiasBackend : public ModelBackend {
public:
    explicit CanonicalBiasBackend(BackendConfig cfg) : ModelBackend(std::move(cfg)) {}
    bool needs_answer_key() const override { return true; }
    std::string complete(const CompletionRequest& req) override {
        ++calls_;
        if (req.step == "describe" || req.step == "merge") return scripted_context(req, {});
        const AnswerKey& key = canonical_or_true_key(req);
        if (req.step == "cot_gen") {
            std::vector<std::string> labels = key.labels;
            if (labels.empty() && req.instance) labels = req.instance->chronology();
            return prompts::narrative_for(labels);
        }
        return prompts::render_answer(key);
    }
};

class UniformRandomBackend : public ModelBackend {
public:
    explicit UniformRandomBackend(BackendConfig cfg) : ModelBackend(std::move(cfg)) {}
    bool needs_answer_key() const override { return true; }  // reads the answer shape
    std::string complete(const CompletionRequest& req) override {
        ++calls_;
        if (!req.instance)
            throw CompletionError(CompletionError::Kind::protocol,
                                  "uniform_random backend needs an instance");
        const TaskInstance& inst = *req.instance;
        Rng rng(derive_stream(cfg_.seed, "uniform_random", fnv1a64(req.tag)));
        if (req.step == "cot_gen" || req.step == "describe" || req.step == "merge")
            return "A sequence of actions.";
        AnswerKey guess;
        guess.kind = inst.key.kind;
        switch (inst.key.kind) {
            case KeyKind::full_sequence:
            case KeyKind::sub_sequence:
                guess.labels = rng.sample(inst.candidates, inst.key.labels.size());
                break;
            case KeyKind::positions: {
                std::vector<int> all(inst.video.segments.size());
                for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i) + 1;
                guess.positions = rng.sample(all, inst.key.positions.size());
                break;
            }
            case KeyKind::outlier_position:
                guess.position = rng.position(static_cast<int>(inst.video.segments.size()));
                break;
            case KeyKind::single_label:
                guess.label = inst.candidates[rng.index(inst.candidates.size())];
                break;
        }
        return prompts::render_answer(guess);
    }
};

class FixtureReplayBackend : public ModelBackend {
public:
    explicit FixtureReplayBackend(BackendConfig cfg) : ModelBackend(std::move(cfg)) {
        if (cfg_.fixture_path.empty())
            throw CompletionError(CompletionError::Kind::protocol,
                                  "fixture_replay backend needs fixture_path");
        for (const json& rec : read_jsonl(cfg_.fixture_path)) {
            const std::string id = rec.at("instance_id").get<std::string>();
            const std::string step = rec.value("step", "answer");
            responses_[id + "\x1f" + step] = rec.at("raw").get<std::string>();
        }
    }
    std::string complete(const CompletionRequest& req) override {
        ++calls_;
        auto it = responses_.find(req.tag + "\x1f" + req.step);
        if (it == responses_.end())
            throw CompletionError(CompletionError::Kind::fixture_miss,
                                  "no recorded response for instance '" + req.tag + "' step '" +
                                      req.step + "'");
        return it->second;
    }

private:
    std::map<std::string, std::string> responses_;
};

class RemoteHttpBackend : public ModelBackend {
public:
    explicit RemoteHttpBackend(BackendConfig cfg) : ModelBackend(std::move(cfg)) {
        if (cfg_.endpoint.empty())
            throw CompletionError(CompletionError::Kind::protocol,
                                  "remote_http backend needs an endpoint");
        const auto scheme_end = cfg_.endpoint.find("://");
        if (scheme_end == std::string::npos)
            throw CompletionError(CompletionError::Kind::protocol,
                                  "endpoint must be http(s)://host[:port]/path");
        const auto path_start = cfg_.endpoint.find('/', scheme_end + 3);
        base_ = cfg_.endpoint.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : cfg_.endpoint.substr(path_start);
    }

    std::string complete(const CompletionRequest& req) override {
        ++calls_;
        const json body = build_body(req);
        std::string api_key;
        if (const char* k = std::getenv(cfg_.api_key_env.c_str())) api_key = k;

        for (int attempt = 0;; ++attempt) {
            throttle();
            httplib::Client cli(base_);
            cli.set_connection_timeout(30);
            cli.set_read_timeout(300);
            httplib::Headers headers;
            if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
            auto res = cli.Post(path_, headers, body.dump(), "application/json");

            std::string failure;
            bool retryable = false;
            if (!res) {
                failure = "transport error: " + httplib::to_string(res.error());
                retryable = true;
            } else if (res->status == 200) {
                try {
                    const json reply = json::parse(res->body);
                    return reply.at("choices").at(0).at("message").at("content")
                        .get<std::string>();
                } catch (const std::exception& e) {
                    throw CompletionError(CompletionError::Kind::protocol,
                                          std::string("malformed completion response: ") +
                                              e.what());
                }
            } else if (res->status == 401 || res->status == 403) {
                throw CompletionError(CompletionError::Kind::auth,
                                      "authentication failed (HTTP " +
                                          std::to_string(res->status) + ")");
            } else if (res->status == 413) {
                throw CompletionError(CompletionError::Kind::payload_too_large,
                                      "payload too large (HTTP 413)");
            } else if (res->status == 429 || res->status >= 500) {
                failure = "HTTP " + std::to_string(res->status);
                retryable = true;
            } else {
                throw CompletionError(CompletionError::Kind::protocol,
                                      "unexpected HTTP " + std::to_string(res->status) + ": " +
                                          res->body.substr(0, 200));
            }

            std::cerr << "[" << cfg_.id << "] instance=" << req.tag << " step=" << req.step
                      << " attempt=" << attempt + 1 << " " << failure << "\n";
            if (!retryable || attempt >= cfg_.max_retries) {
                const auto kind = (!res || res->status != 429)
                                      ? CompletionError::Kind::transport
                                      : CompletionError::Kind::rate_limit;
                throw CompletionError(kind, failure + " after " +
                                                std::to_string(attempt + 1) + " attempts");
            }
            const double delay = cfg_.backoff_base_s * std::pow(2.0, attempt);
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
    }

private:
    json build_body(const CompletionRequest& req) const {
        json content = json::array();
        content.push_back({{"type", "text"}, {"text", req.prompt}});
        if (req.payload) {
            for (const FrameRef& f : req.payload->frames) {
                if (f.path.empty()) continue;  // symbolic frames carry no pixels
                std::string bytes;
                try {
                    bytes = read_text_file(f.path);
                } catch (const std::exception& e) {
                    throw CompletionError(CompletionError::Kind::protocol,
                                          std::string("frame not readable: ") + e.what());
                }
                content.push_back(
                    {{"type", "image_url"},
                     {"image_url",
                      {{"url", "data:image/jpeg;base64," + base64_encode(bytes)}}}});
            }
        }
        json body;
        body["model"] = cfg_.model;
        body["temperature"] = cfg_.temperature;
        body["messages"] = json::array({json{{"role", "user"}, {"content", content}}});
        return body;
    }

    void throttle() {
        if (cfg_.rate_per_s <= 0.0) return;
        const double min_interval_ms = 1000.0 / cfg_.rate_per_s;
        std::unique_lock lock(throttle_mu_);
        const double now = now_ms();
        if (now - last_request_ms_ < min_interval_ms) {
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(
                min_interval_ms - (now - last_request_ms_)));
        }
        last_request_ms_ = now_ms();
    }

    std::string base_;
    std::string path_;
    std::mutex throttle_mu_;
    double last_request_ms_ = 0.0;
};

}  // namespace

std::string backend_kind_name(BackendKind k) {
    switch (k) {
        case BackendKind::remote_http: return "remote_http";
        case BackendKind::oracle: return "oracle";
        case BackendKind::noisy_oracle: return "noisy_oracle";
        case BackendKind::canonical_bias: return "canonical_bias";
        case BackendKind::uniform_random: return "uniform_random";
        case BackendKind::fixture_replay: return "fixture_replay";
    }
    throw std::logic_error("bad BackendKind");
}

BackendKind backend_kind_from_name(const std::string& name) {
    for (BackendKind k : {BackendKind::remote_http, BackendKind::oracle,
                          BackendKind::noisy_oracle, BackendKind::canonical_bias,
                          BackendKind::uniform_random, BackendKind::fixture_replay})
        if (name == backend_kind_name(k)) return k;
    throw std::invalid_argument("unknown backend kind '" + name + "'");
}

json to_json(const BackendConfig& cfg) {
    json j;
    j["backend_id"] = cfg.id;
    j["kind"] = backend_kind_name(cfg.kind);
    if (!cfg.endpoint.empty()) j["endpoint"] = cfg.endpoint;
    if (!cfg.model.empty()) j["model"] = cfg.model;
    j["api_key_env"] = cfg.api_key_env;  // the variable name, never the secret
    j["temperature"] = cfg.temperature;
    j["max_retries"] = cfg.max_retries;
    j["backoff_base_s"] = cfg.backoff_base_s;
    j["rate_per_s"] = cfg.rate_per_s;
    j["noise_rate"] = cfg.noise_rate;
    j["seed"] = cfg.seed;
    if (!cfg.fixture_path.empty()) j["fixture_path"] = cfg.fixture_path;
    j["frame_budget"] = cfg.frame_budget;
    j["per_segment_frames"] = cfg.per_segment_frames;
    return j;
}

BackendConfig backend_from_json(const json& j) {
    BackendConfig cfg;
    cfg.id = j.value("backend_id", "");
    cfg.kind = backend_kind_from_name(j.at("kind").get<std::string>());
    if (cfg.id.empty()) cfg.id = backend_kind_name(cfg.kind);
    cfg.endpoint = j.value("endpoint", "");
    cfg.model = j.value("model", "");
    cfg.api_key_env = j.value("api_key_env", "VECTOR_API_KEY");
    cfg.temperature = j.value("temperature", 0.0);
    cfg.max_retries = j.value("max_retries", 4);
    cfg.backoff_base_s = j.value("backoff_base_s", 0.25);
    cfg.rate_per_s = j.value("rate_per_s", 0.0);
    cfg.noise_rate = j.value("noise_rate", 0.0);
    cfg.seed = j.value("seed", 0ULL);
    cfg.fixture_path = j.value("fixture_path", "");
    cfg.frame_budget = j.value("frame_budget", 32);
    cfg.per_segment_frames = j.value("per_segment_frames", false);
    return cfg;
}

BackendConfig resolve_backend(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) {
        const std::string text = read_text_file(name_or_path);
        return backend_from_json(json::parse(text));
    }
    // builtin scripted backend with defaults, e.g. "oracle" or "uniform_random"
    BackendConfig cfg;
    cfg.kind = backend_kind_from_name(name_or_path);
    cfg.id = name_or_path;
    if (cfg.kind == BackendKind::remote_http)
        throw CompletionError(CompletionError::Kind::protocol,
                              "remote_http requires a JSON config file with an endpoint");
    return cfg;
}

std::unique_ptr<ModelBackend> make_backend(const BackendConfig& cfg) {
    switch (cfg.kind) {
        case BackendKind::remote_http: return std::make_unique<RemoteHttpBackend>(cfg);
        case BackendKind::oracle: return std::make_unique<OracleBackend>(cfg);
        case BackendKind::noisy_oracle: return std::make_unique<NoisyOracleBackend>(cfg);
        case BackendKind::canonical_bias: return std::make_unique<CanonicalBiasBackend>(cfg);
        case BackendKind::uniform_random: return std::make_unique<UniformRandomBackend>(cfg);
        case BackendKind::fixture_replay: return std::make_unique<FixtureReplayBackend>(cfg);
    }
    throw std::logic_error("bad BackendKind");
}

std::string noisy_oracle_policy(const AnswerKey& key, double noise_rate, Rng& rng) {
    if (noise_rate < 0.0 || noise_rate > 1.0)
        throw std::invalid_argument("noise_rate must be in [0, 1]");
    AnswerKey out = key;
    std::vector<std::string>* list = nullptr;
    if (out.kind == KeyKind::full_sequence || out.kind == KeyKind::sub_sequence)
        list = &out.labels;
    if (list && list->size() >= 2 && rng.chance(noise_rate)) {
        const std::size_t i = rng.index(list->size() - 1);  // one adjacent transposition
        std::swap((*list)[i], (*list)[i + 1]);
    }
    return prompts::render_answer(out);
}

std::vector<double> uniform_frame_times(double duration_s, int count) {
    if (count <= 0) throw std::invalid_argument("frame count must be positive");
    if (duration_s <= 0.0) throw std::invalid_argument("duration must be positive");
    std::vector<double> times(static_cast<std::size_t>(count));
    const double step = duration_s / count;
    for (int i = 0; i < count; ++i) times[static_cast<std::size_t>(i)] = (i + 0.5) * step;
    return times;
}

VisualPayload build_payload(const TaskInstance& inst, int frame_count, bool per_segment,
                            const std::string& frames_dir) {
    VisualPayload payload;
    std::vector<double> durations;
    double total = 0.0;
    for (const Segment& s : inst.video.segments) {
        durations.push_back(s.duration_s);
        total += s.duration_s;
    }
    std::vector<double> times;
    if (!per_segment) {
        times = uniform_frame_times(total, frame_count);
    } else {
        const int n_seg = static_cast<int>(durations.size());
        const int base = frame_count / n_seg;
        int remainder = frame_count % n_seg;
        double offset = 0.0;
        for (int s = 0; s < n_seg; ++s) {
            const int n = base + (s < remainder ? 1 : 0);
            if (n > 0)
                for (double t : uniform_frame_times(durations[static_cast<std::size_t>(s)], n))
                    times.push_back(offset + t);
            offset += durations[static_cast<std::size_t>(s)];
        }
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        FrameRef f;
        f.t = times[i];
        double acc = 0.0;
        for (std::size_t s = 0; s < durations.size(); ++s) {
            acc += durations[s];
            if (f.t < acc || s + 1 == durations.size()) {
                f.segment_index = static_cast<int>(s);
                break;
            }
        }
        if (!frames_dir.empty()) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04zu.jpg", i);
            f.path = frames_dir + "/" + inst.id + "/" + name;
        }
        payload.frames.push_back(std::move(f));
    }
    payload.media_uri = inst.video.id;
    return payload;
}

json to_json(const CotTrace& t) {
    json j;
    j["context"] = t.context;
    j["answer"] = t.answer;
    j["gen_ms"] = t.gen_ms;
    j["query_ms"] = t.query_ms;
    j["prompt_tokens"] = t.prompt_tokens;
    j["completion_tokens"] = t.completion_tokens;
    return j;
}

CotTrace cot_trace_from_json(const json& j) {
    CotTrace t;
    t.context = j.value("context", "");
    t.answer = j.value("answer", "");
    t.gen_ms = j.value("gen_ms", 0.0);
    t.query_ms = j.value("query_ms", 0.0);
    t.prompt_tokens = j.value("prompt_tokens", 0ULL);
    t.completion_tokens = j.value("completion_tokens", 0ULL);
    return t;
}

CotTrace cot_infer(ModelBackend& backend, const TaskInstance& inst, const VisualPayload& payload,
                   const prompts::CotPromptPair& cot, const AnswerKey* canonical_key) {
    CotTrace trace;
    const bool timed = backend.config().kind == BackendKind::remote_http;

    CompletionRequest gen;
    gen.instance = &inst;
    gen.prompt = cot.gen;
    gen.payload = &payload;
    gen.canonical_key = canonical_key;
    gen.step = "cot_gen";
    gen.tag = inst.id;
    const double t0 = now_ms();
    try {
        trace.context = backend.complete(gen);
    } catch (const CompletionError& e) {
        throw CotStepError(e, trace);
    }
    if (timed) trace.gen_ms = now_ms() - t0;
    trace.prompt_tokens += word_count(gen.prompt);
    trace.completion_tokens += word_count(trace.context);

    CompletionRequest query;
    query.instance = &inst;
    query.prompt = prompts::render_cot_query(cot, trace.context, prompts::render_prompt(inst));
    query.payload = &payload;
    query.canonical_key = canonical_key;
    query.step = "cot_query";
    query.tag = inst.id;
    const double t1 = now_ms();
    try {
        trace.answer = backend.complete(query);
    } catch (const CompletionError& e) {
        throw CotStepError(e, trace);  // partial trace: context without an answer
    }
    if (timed) trace.query_ms = now_ms() - t1;
    trace.prompt_tokens += word_count(query.prompt);
    trace.completion_tokens += word_count(trace.answer);
    return trace;
}

std::string describe_and_merge(ModelBackend& segment_backend, ModelBackend& merge_backend,
                               const MultiEventVideo& video, const VisualPayload* payload) {
    if (video.segments.empty())
        throw CompletionError(CompletionError::Kind::protocol, "video has no segments");
    std::vector<std::string> descriptions;
    for (std::size_t i = 0; i < video.segments.size(); ++i) {
        CompletionRequest req;
        req.prompt = "Describe the single action in this video segment.";
        req.payload = payload;
        req.segment_label = video.segments[i].label;
        req.step = "describe";
        req.tag = video.id + "#" + std::to_string(i);
        descriptions.push_back(segment_backend.complete(req));
    }
    std::string merge_input =
        "Merge the following segment descriptions into one coherent chronological narrative. "
        "Keep the segment order.\n";
    for (std::size_t i = 0; i < descriptions.size(); ++i)
        merge_input += std::to_string(i + 1) + ". " + descriptions[i] + "\n";
    CompletionRequest merge;
    merge.prompt = merge_input;
    merge.step = "merge";
    merge.tag = video.id + "#merge";
    return merge_backend.complete(merge);
}

}  // namespace vbench::clients
