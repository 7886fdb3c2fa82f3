#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vbench/instance.hpp"

namespace vbench::chance {

enum class Metric { em, pm, lm, om };

std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

struct ChanceQuery {
    TaskKind task = TaskKind::t1_sequencing;
    std::optional<Level> level;  // unset for t0
    int n_q = 1;                 // t3
    int m = 2;                   // t5
    Metric metric = Metric::em;
};

struct ChanceEstimate {
    double value = 0.0;   // percent
    double ci95 = 0.0;    // half-width; 0 for analytic values
    bool analytic = false;
    std::uint64_t trials = 0;
    std::string model_note;
    std::optional<std::pair<long long, long long>> exact_ratio;  // e.g. 1/116280
};

// Uniform random guesser over the task's answer space: ordered distinct label
// draws from the full candidate set for label tasks, ordered distinct
// positions for task 3, a uniform position otherwise. Analytic where a closed
// form exists, Monte Carlo (95% CI) otherwise.
ChanceEstimate chance_baseline(const ChanceQuery& query, std::uint64_t trials = 100000,
                               std::uint64_t seed = 2024);

struct ChanceRow {
    std::string row;     // e.g. "t3 double  L2" or "t5 s1s2s1s2s1s2 + x  L1"
    ChanceQuery query;
    ChanceEstimate estimate;
    std::string display; // two-decimal string as published
};

// The full chance column: EM for every task row plus PM/LM/OM for tasks 1-2.
std::vector<ChanceRow> chance_table(std::uint64_t trials = 100000, std::uint64_t seed = 2024);

// Display convention of the published table: task-5 rows truncate to two
// decimals (1/7 -> 14.28) while everything else rounds (1/56 -> 1.79).
std::string display_chance(TaskKind task, double value);

std::string pattern_row_label(int m, Level level);  // "s1s2s1s2s1s2 + x"

}  // namespace vbench::chance
