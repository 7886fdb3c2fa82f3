#include "vbench/chance.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vbench/metrics.hpp"
#include "vbench/synth.hpp"
#include "vbench/rng.hpp"
#include "vbench/util.hpp"

namespace vbench::chance {

namespace {

constexpr int kPool = 20;  // candidate-set size

long long falling_factorial(int n, int k) {
    long long v = 1;
    for (int i = 0; i < k; ++i) v *= (n - i);
    return v;
}

// query pairs with at least one event strictly between, as generated
std::vector<int> between_lengths(int n_e) {
    std::vector<int> lengths;
    for (int i = 1; i <= n_e; ++i)
        for (int j = i + 2; j <= n_e; ++j) lengths.push_back(j - i - 1);
    return lengths;
}

std::size_t lcs_ints(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// guess model for label tasks: ordered distinct draws from the full candidate
// set, answer length known; keys are symmetric so [0..len) stands in
double lm_sample(int len, Rng& rng) {
    std::vector<int> pool(kPool);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> guess = rng.sample(pool, static_cast<std::size_t>(len));
    std::vector<int> key(static_cast<std::size_t>(len));
    std::iota(key.begin(), key.end(), 0);
    return 100.0 * static_cast<double>(lcs_ints(guess, key)) / static_cast<double>(len);
}

ChanceEstimate analytic(double value, const std::string& note,
                        std::optional<std::pair<long long, long long>> ratio = std::nullopt) {
    ChanceEstimate e;
    e.value = value;
    e.analytic = true;
    e.model_note = note;
    e.exact_ratio = ratio;
    return e;
}

ChanceEstimate monte_carlo(const std::vector<double>& samples, const std::string& note) {
    ChanceEstimate e;
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (n - 1.0);
    e.value = mean;
    e.ci95 = 1.96 * std::sqrt(var / n);
    e.analytic = false;
    e.trials = samples.size();
    e.model_note = note;
    return e;
}

// exact LM chance for 4-of-20 by full enumeration of the 116280 ordered draws
double lm_t1_l1_exact() {
    static double cached = -1.0;
    if (cached >= 0.0) return cached;
    const std::vector<int> key = {0, 1, 2, 3};
    long long total = 0, count = 0;
    for (int a = 0; a < kPool; ++a)
        for (int b = 0; b < kPool; ++b)
            for (int c = 0; c < kPool; ++c)
                for (int d = 0; d < kPool; ++d) {
                    if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
                    total += static_cast<long long>(lcs_ints({a, b, c, d}, key));
                    ++count;
                }
    cached = 100.0 * static_cast<double>(total) / (4.0 * static_cast<double>(count));
    return cached;
}

const char* kLabelModel =
    "uniform ordered distinct draws from the 20 candidates, answer length known";
const char* kPositionModel = "uniform ordered distinct positions";

}  // namespace

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::em: return "em";
        case Metric::pm: return "pm";
        case Metric::lm: return "lm";
        case Metric::om: return "om";
    }
    throw std::logic_error("bad Metric");
}

Metric metric_from_name(const std::string& name) {
    for (Metric m : {Metric::em, Metric::pm, Metric::lm, Metric::om})
        if (name == metric_name(m)) return m;
    throw std::invalid_argument("unknown metric '" + name + "' (expected em|pm|lm|om)");
}

ChanceEstimate chance_baseline(const ChanceQuery& query, std::uint64_t trials,
                               std::uint64_t seed) {
    const bool sequence_task =
        query.task == TaskKind::t1_sequencing || query.task == TaskKind::t2_relative;
    if (query.metric != Metric::em && !sequence_task)
        throw std::invalid_argument("PM/LM/OM chance applies to tasks 1-2 only");
    if (query.task != TaskKind::t0_single_event && !query.level)
        throw std::invalid_argument("chance_baseline: task requires a level");
    Rng rng(seed);

    switch (query.task) {
        case TaskKind::t0_single_event:
            return analytic(100.0 / kPool, "uniform label from the 20 candidates", {{1, kPool}});
        case TaskKind::t1_sequencing: {
            const int n_e = events_for_level(*query.level);
            switch (query.metric) {
                case Metric::em: {
                    const long long denom = falling_factorial(kPool, n_e);
                    return analytic(100.0 / static_cast<double>(denom), kLabelModel, {{1, denom}});
                }
                case Metric::pm: return analytic(100.0 / kPool, kLabelModel, {{1, kPool}});
                case Metric::om:
                    return analytic(100.0 * n_e / kPool, kLabelModel, {{n_e, kPool}});
                case Metric::lm: {
                    if (*query.level == Level::l1) {
                        ChanceEstimate e = analytic(lm_t1_l1_exact(), kLabelModel);
                        e.model_note += "; exact by enumeration of all 116280 draws";
                        return e;
                    }
                    if (trials == 0) throw std::invalid_argument("Monte Carlo needs trials > 0");
                    std::vector<double> samples;
                    samples.reserve(trials);
                    for (std::uint64_t t = 0; t < trials; ++t)
                        samples.push_back(lm_sample(n_e, rng));
                    return monte_carlo(samples, kLabelModel);
                }
            }
            break;
        }
        case TaskKind::t2_relative: {
            const int n_e = events_for_level(*query.level);
            const std::vector<int> lengths = between_lengths(n_e);
            switch (query.metric) {
                case Metric::em: {
                    double p = 0.0;
                    for (int len : lengths)
                        p += 1.0 / static_cast<double>(falling_factorial(kPool, len));
                    return analytic(100.0 * p / static_cast<double>(lengths.size()),
                                    std::string(kLabelModel) +
                                        "; query pair uniform over pairs with a gap of 2+");
                }
                case Metric::pm: return analytic(100.0 / kPool, kLabelModel, {{1, kPool}});
                case Metric::om: {
                    double mean_len = 0.0;
                    for (int len : lengths) mean_len += len;
                    mean_len /= static_cast<double>(lengths.size());
                    return analytic(100.0 * mean_len / kPool, kLabelModel);
                }
                case Metric::lm: {
                    if (trials == 0) throw std::invalid_argument("Monte Carlo needs trials > 0");
                    std::vector<double> samples;
                    samples.reserve(trials);
                    for (std::uint64_t t = 0; t < trials; ++t) {
                        const int len = lengths[rng.index(lengths.size())];
                        samples.push_back(lm_sample(len, rng));
                    }
                    return monte_carlo(samples, kLabelModel);
                }
            }
            break;
        }
        case TaskKind::t3_position: {
            if (query.n_q < 1 || query.n_q > 3)
                throw std::invalid_argument("t3 chance: n_q must be 1..3");
            const int n_e = events_for_level(*query.level);
            const long long denom = falling_factorial(n_e, query.n_q);
            return analytic(100.0 / static_cast<double>(denom), kPositionModel, {{1, denom}});
        }
        case TaskKind::t4_semantic_outlier: {
            const int n_e = events_for_level(*query.level);
            return analytic(100.0 / n_e, "uniform position", {{1, n_e}});
        }
        case TaskKind::t5_pattern_outlier: {
            const int k = synth::pattern_repetitions(query.m, *query.level);
            const int len = query.m * k + 1;
            return analytic(100.0 / len, "uniform position", {{1, len}});
        }
    }
    throw std::logic_error("unhandled chance query");
}

std::string display_chance(TaskKind task, double value) {
    // published convention: task-5 rows truncate (1/7 -> 14.28), others round
    return task == TaskKind::t5_pattern_outlier ? format_fixed2_floor(value)
                                                : format_fixed2(value);
}

std::string pattern_row_label(int m, Level level) {
    const int k = synth::pattern_repetitions(m, level);
    std::string row;
    for (int r = 0; r < k; ++r)
        for (int i = 1; i <= m; ++i) row += "s" + std::to_string(i);
    return row + " + x";
}

std::vector<ChanceRow> chance_table(std::uint64_t trials, std::uint64_t seed) {
    std::vector<ChanceRow> rows;
    auto add = [&](const std::string& label, TaskKind task, std::optional<Level> level, int n_q,
                   int m, Metric metric) {
        ChanceQuery q;
        q.task = task;
        q.level = level;
        q.n_q = n_q;
        q.m = m;
        q.metric = metric;
        ChanceRow row;
        row.row = label;
        row.query = q;
        row.estimate = chance_baseline(q, trials, seed);
        row.display = metric == Metric::em ? display_chance(task, row.estimate.value)
                                           : format_fixed2(row.estimate.value);
        rows.push_back(std::move(row));
    };

    add("t0 single-event", TaskKind::t0_single_event, std::nullopt, 1, 2, Metric::em);
    for (Level level : {Level::l1, Level::l2}) {
        const std::string lvl = level == Level::l1 ? "L1" : "L2";
        for (Metric metric : {Metric::em, Metric::pm, Metric::lm, Metric::om})
            add("t1 " + lvl, TaskKind::t1_sequencing, level, 1, 2, metric);
    }
    for (Level level : {Level::l1, Level::l2}) {
        const std::string lvl = level == Level::l1 ? "L1" : "L2";
        for (Metric metric : {Metric::em, Metric::pm, Metric::lm, Metric::om})
            add("t2 " + lvl, TaskKind::t2_relative, level, 1, 2, metric);
    }
    const char* probe_names[] = {"single", "double", "triple"};
    for (int n_q = 1; n_q <= 3; ++n_q)
        for (Level level : {Level::l1, Level::l2})
            add(std::string("t3 ") + probe_names[n_q - 1] + (level == Level::l1 ? " L1" : " L2"),
                TaskKind::t3_position, level, n_q, 2, Metric::em);
    for (Level level : {Level::l1, Level::l2})
        add(std::string("t4 ") + (level == Level::l1 ? "L1" : "L2"),
            TaskKind::t4_semantic_outlier, level, 1, 2, Metric::em);
    for (int m : {2, 3})
        for (Level level : {Level::l1, Level::l2})
            add("t5 " + pattern_row_label(m, level) + (level == Level::l1 ? " L1" : " L2"),
                TaskKind::t5_pattern_outlier, level, 1, m, Metric::em);
    return rows;
}

}  // namespace vbench::chance
