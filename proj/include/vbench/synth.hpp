#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vbench/catalog.hpp"
#include "vbench/instance.hpp"
#include "vbench/rng.hpp"

namespace vbench::synth {

struct GenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TaskInstance gen_event_sequencing(const ClipCatalog& cat, Level level, Rng& rng);
TaskInstance gen_relative_sequencing(const ClipCatalog& cat, Level level, Rng& rng);
TaskInstance gen_position_identification(const ClipCatalog& cat, Level level, int n_q, Rng& rng);
TaskInstance gen_semantic_outlier(const ClipCatalog& cat, Level level, Rng& rng);
TaskInstance gen_pattern_outlier(const ClipCatalog& cat, int m, Level level, Rng& rng);
TaskInstance gen_single_event(const ClipCatalog& cat, Rng& rng);

// Event-wise shuffled copy under a seeded non-identity permutation.
ShufflePair make_shuffle_pair(const TaskInstance& original, Rng& rng);

// Repetition count for a task-5 row; lengths are 7/9 (m=2) and 7/10 (m=3).
int pattern_repetitions(int m, Level level);

// Seeded permutation of any frame sequence; requires >= 2 frames.
template <typename T>
void frame_shuffle(std::vector<T>& frames, Rng& rng) {
    if (frames.size() < 2) throw GenError("frame_shuffle: need at least 2 frames");
    rng.shuffle(frames);
}

struct BatchSpec {
    TaskKind task = TaskKind::t1_sequencing;
    std::optional<Level> level;  // unset for t0
    int n_q = 1;                 // t3
    int m = 2;                   // t5
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

std::string row_tag(const BatchSpec& spec);

// One instance per derived per-index stream; ids carry a content hash.
std::vector<TaskInstance> generate_batch(const ClipCatalog& cat, const BatchSpec& spec);

struct PairBatchSpec {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    int min_events = 3;
    int max_events = 6;
};

std::vector<ShufflePair> generate_pair_batch(const ClipCatalog& cat, const PairBatchSpec& spec);

// The reference release shape: tasks 1-5 at the published per-row counts
// (600/600/1800/600/1200 questions) plus the 2400-item single-event pretest.
struct ReleaseRow {
    BatchSpec spec;
    std::string file;  // e.g. "t1.jsonl"
};
std::vector<ReleaseRow> release_plan(std::uint64_t seed);

}  // namespace vbench::synth
