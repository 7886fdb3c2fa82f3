#include "vbench/metrics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vbench::metrics {

double exact_match_lists(const std::vector<std::string>& pred,
                         const std::vector<std::string>& key) {
    return pred == key ? 100.0 : 0.0;
}

double partial_match(const std::vector<std::string>& pred, const std::vector<std::string>& key) {
    if (key.empty()) throw std::invalid_argument("partial_match: empty ground truth");
    std::size_t matches = 0;
    for (std::size_t j = 0; j < key.size(); ++j)
        if (j < pred.size() && pred[j] == key[j]) ++matches;
    return 100.0 * static_cast<double>(matches) / static_cast<double>(key.size());
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double lcs_match(const std::vector<std::string>& pred, const std::vector<std::string>& key) {
    if (key.empty()) throw std::invalid_argument("lcs_match: empty ground truth");
    return 100.0 * static_cast<double>(lcs_length(pred, key)) /
           static_cast<double>(key.size());
}

double orderless_match(const std::vector<std::string>& pred,
                       const std::vector<std::string>& key) {
    if (key.empty()) throw std::invalid_argument("orderless_match: empty ground truth");
    std::set<std::string> p(pred.begin(), pred.end());
    std::set<std::string> k(key.begin(), key.end());
    std::size_t common = 0;
    for (const std::string& s : k)
        if (p.count(s)) ++common;
    return 100.0 * static_cast<double>(common) / static_cast<double>(k.size());
}

double exact_match(const ParsedAnswer& pred, const AnswerKey& key) {
    if (pred.is_unparseable()) return 0.0;
    switch (key.kind) {
        case KeyKind::full_sequence:
            if (pred.kind != ParsedAnswer::Kind::full_sequence)
                throw std::invalid_argument("exact_match: variant mismatch");
            return exact_match_lists(pred.labels, key.labels);
        case KeyKind::sub_sequence:
            if (pred.kind != ParsedAnswer::Kind::sub_sequence)
                throw std::invalid_argument("exact_match: variant mismatch");
            return exact_match_lists(pred.labels, key.labels);
        case KeyKind::positions:
            if (pred.kind != ParsedAnswer::Kind::positions)
                throw std::invalid_argument("exact_match: variant mismatch");
            return pred.positions == key.positions ? 100.0 : 0.0;
        case KeyKind::outlier_position:
            if (pred.kind != ParsedAnswer::Kind::outlier_position)
                throw std::invalid_argument("exact_match: variant mismatch");
            return pred.position == key.position ? 100.0 : 0.0;
        case KeyKind::single_label:
            if (pred.kind != ParsedAnswer::Kind::single_label)
                throw std::invalid_argument("exact_match: variant mismatch");
            return pred.label == key.label ? 100.0 : 0.0;
    }
    throw std::logic_error("bad KeyKind");
}

ScoreSet score_answer(const ParsedAnswer& pred, const TaskInstance& inst) {
    ScoreSet s;
    s.sequence_metrics =
        inst.key.kind == KeyKind::full_sequence || inst.key.kind == KeyKind::sub_sequence;
    s.em = exact_match(pred, inst.key);
    if (s.sequence_metrics) {
        if (pred.is_unparseable()) {
            s.pm = s.lm = s.om = 0.0;
        } else {
            s.pm = partial_match(pred.labels, inst.key.labels);
            s.lm = lcs_match(pred.labels, inst.key.labels);
            s.om = orderless_match(pred.labels, inst.key.labels);
        }
    }
    return s;
}

ShuffleOutcome biased_ratio(const std::vector<PairOutcome>& pairs) {
    ShuffleOutcome out;
    out.pairs = pairs.size();
    for (const PairOutcome& p : pairs) {
        if (!(p.correct_original && !p.correct_shuffled)) continue;
        ++out.eligible;
        if (p.pred_original.same_prediction(p.pred_shuffled)) ++out.biased;
    }
    if (out.eligible > 0)
        out.eta = 100.0 * static_cast<double>(out.biased) / static_cast<double>(out.eligible);
    out.low_confidence = out.eligible < 20;
    return out;
}

RobustnessOutcome robustness_ratio(double accuracy_original, double accuracy_shuffled) {
    if (accuracy_original < 0.0 || accuracy_shuffled < 0.0)
        throw std::invalid_argument("robustness_ratio: negative accuracy");
    RobustnessOutcome out;
    out.accuracy_original = accuracy_original;
    out.accuracy_shuffled = accuracy_shuffled;
    // values above 100 are legal and preserved
    if (accuracy_original > 0.0) out.rho = 100.0 * accuracy_shuffled / accuracy_original;
    return out;
}

}  // namespace vbench::metrics
