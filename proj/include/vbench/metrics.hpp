#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vbench/instance.hpp"
#include "vbench/parse.hpp"

namespace vbench::metrics {

// Sequence scores on label lists; all return percentages.
double exact_match_lists(const std::vector<std::string>& pred, const std::vector<std::string>& key);
double partial_match(const std::vector<std::string>& pred, const std::vector<std::string>& key);
double lcs_match(const std::vector<std::string>& pred, const std::vector<std::string>& key);
double orderless_match(const std::vector<std::string>& pred, const std::vector<std::string>& key);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// 0/100 over any answer variant. Variant mismatch (other than Unparseable) is
// a programming error and throws.
double exact_match(const ParsedAnswer& pred, const AnswerKey& key);

struct ScoreSet {
    double em = 0.0;
    double pm = 0.0;
    double lm = 0.0;
    double om = 0.0;
    bool sequence_metrics = false;  // PM/LM/OM apply to tasks 1-2 only

    bool operator==(const ScoreSet&) const = default;
};

ScoreSet score_answer(const ParsedAnswer& pred, const TaskInstance& inst);

struct PairOutcome {
    std::string pair_id;
    ParsedAnswer pred_original;
    ParsedAnswer pred_shuffled;
    bool correct_original = false;
    bool correct_shuffled = false;
};

struct ShuffleOutcome {
    std::size_t pairs = 0;
    std::size_t eligible = 0;  // correct on original, wrong on shuffled
    std::size_t biased = 0;    // eligible with identical predictions
    std::optional<double> eta; // empty when no eligible pairs
    bool low_confidence = false;  // eligible < 20
};

ShuffleOutcome biased_ratio(const std::vector<PairOutcome>& pairs);

struct RobustnessOutcome {
    double accuracy_original = 0.0;
    double accuracy_shuffled = 0.0;
    std::optional<double> rho;  // 100 * shuffled / original; empty when original is 0
};

RobustnessOutcome robustness_ratio(double accuracy_original, double accuracy_shuffled);

}  // namespace vbench::metrics
