#include "vbench/parse.hpp"

#include <algorithm>
#include <cctype>

#include "vbench/util.hpp"

namespace vbench {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// strip list bullets, per-line enumeration markers ("1.", "2)") and markdown
// emphasis; keeps label-internal punctuation
std::string preprocess(const std::string& raw) {
    std::string out;
    for (std::string line : split_lines(raw)) {
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        while (i < line.size() && (line[i] == '-' || line[i] == '*' || line[i] == '>' ||
                                   line[i] == '#'))
            ++i;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        // enumeration marker: digits followed by '.' or ')' and whitespace,
        // only when something follows on the line
        std::size_t d = i;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
        if (d > i && d < line.size() && (line[d] == '.' || line[d] == ')')) {
            std::size_t rest = d + 1;
            while (rest < line.size() && std::isspace(static_cast<unsigned char>(line[rest]))) ++rest;
            if (rest < line.size()) i = rest;
        }
        std::string cleaned;
        for (std::size_t p = i; p < line.size(); ++p) {
            char c = line[p];
            if (c == '*' || c == '_' || c == '`' || c == '"' || c == '\'') continue;
            cleaned += c;
        }
        out += cleaned;
        out += '\n';
    }
    return out;
}

struct Token {
    enum class Kind { label, number } kind;
    std::size_t candidate_index = 0;  // label
    long value = 0;                   // number
};

// Scans for candidate-label mentions (case-insensitive, longest-first at each
// position) and standalone integers, in reading order.
// the same emphasis characters preprocess() removes from the text; labels
// must be normalized identically or quoted/apostrophed labels never match
std::string strip_emphasis(const std::string& s) {
    std::string out;
    for (char c : s)
        if (c != '*' && c != '_' && c != '`' && c != '"' && c != '\'') out += c;
    return out;
}

std::vector<Token> scan(const std::string& text, const std::vector<std::string>& candidates,
                        bool number_aliases) {
    const std::string lower = to_lower(text);
    // longest-first resolves substring collisions between candidate labels
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::string> lc;
    lc.reserve(candidates.size());
    for (const std::string& c : candidates) lc.push_back(strip_emphasis(to_lower(c)));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (lc[a].size() != lc[b].size()) return lc[a].size() > lc[b].size();
        return lc[a] < lc[b];
    });

    auto match_label_at = [&](std::size_t pos) -> std::optional<std::pair<std::size_t, std::size_t>> {
        for (std::size_t idx : order) {
            const std::string& cand = lc[idx];
            if (cand.empty() || pos + cand.size() > lower.size()) continue;
            if (lower.compare(pos, cand.size(), cand) != 0) continue;
            const bool left_ok = pos == 0 || !is_word_char(lower[pos - 1]);
            const std::size_t end = pos + cand.size();
            const bool right_ok = end == lower.size() || !is_word_char(lower[end]);
            if (left_ok && right_ok) return std::make_pair(idx, end);
        }
        return std::nullopt;
    };

    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < lower.size()) {
        if (auto m = match_label_at(i)) {
            tokens.push_back({Token::Kind::label, m->first, 0});
            i = m->second;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(lower[i])) &&
            (i == 0 || !is_word_char(lower[i - 1]))) {
            std::size_t end = i;
            long value = 0;
            while (end < lower.size() && std::isdigit(static_cast<unsigned char>(lower[end]))) {
                value = value * 10 + (lower[end] - '0');
                ++end;
            }
            if (end == lower.size() || !is_word_char(lower[end])) {
                // an integer that merely numbers the following label is an
                // enumeration marker, not an alias
                bool enumerates_label = false;
                if (number_aliases) {
                    std::size_t after = end;
                    while (after < lower.size() &&
                           (lower[after] == '.' || lower[after] == ')' || lower[after] == ':' ||
                            std::isspace(static_cast<unsigned char>(lower[after]))))
                        ++after;
                    enumerates_label = after < lower.size() && match_label_at(after).has_value();
                }
                if (!enumerates_label) tokens.push_back({Token::Kind::number, 0, value});
            }
            i = end;
            continue;
        }
        ++i;
    }
    return tokens;
}

ParsedAnswer unparseable(const std::string& reason) {
    ParsedAnswer a;
    a.kind = ParsedAnswer::Kind::unparseable;
    a.reason = reason;
    return a;
}

ParsedAnswer parse_label_list(const std::string& text, const TaskInstance& inst,
                              ParsedAnswer::Kind kind) {
    ParsedAnswer out;
    out.kind = kind;
    std::vector<bool> seen(inst.candidates.size(), false);
    for (const Token& t : scan(text, inst.candidates, true)) {
        std::size_t idx;
        if (t.kind == Token::Kind::label) {
            idx = t.candidate_index;
        } else {
            // numeric alias for the numbered candidate list
            if (t.value < 1 || t.value > static_cast<long>(inst.candidates.size())) continue;
            idx = static_cast<std::size_t>(t.value - 1);
        }
        if (seen[idx]) continue;  // duplicates keep the first occurrence
        seen[idx] = true;
        out.labels.push_back(inst.candidates[idx]);
    }
    if (out.labels.empty()) return unparseable("no candidate label found");
    return out;
}

ParsedAnswer parse_positions(const std::string& text, std::size_t expected, int n_e) {
    std::vector<int> values;
    for (const Token& t : scan(text, {}, false)) {
        if (t.kind != Token::Kind::number) continue;
        values.push_back(static_cast<int>(t.value));
        if (values.size() == expected) break;
    }
    if (values.empty()) return unparseable("no index found");
    if (values.size() < expected)
        return unparseable("expected " + std::to_string(expected) + " indices, found " +
                           std::to_string(values.size()));
    for (int v : values)
        if (v < 1 || v > n_e) return unparseable("index " + std::to_string(v) + " out of range");
    ParsedAnswer out;
    out.kind = ParsedAnswer::Kind::positions;
    out.positions = std::move(values);
    return out;
}

ParsedAnswer parse_single_index(const std::string& text, int length) {
    for (const Token& t : scan(text, {}, false)) {
        if (t.kind != Token::Kind::number) continue;
        const int v = static_cast<int>(t.value);
        if (v < 1 || v > length)
            return unparseable("index " + std::to_string(v) + " out of range");
        ParsedAnswer out;
        out.kind = ParsedAnswer::Kind::outlier_position;
        out.position = v;
        return out;
    }
    return unparseable("no index found");
}

ParsedAnswer parse_single_label(const std::string& text, const TaskInstance& inst) {
    for (const Token& t : scan(text, inst.candidates, true)) {
        std::size_t idx;
        if (t.kind == Token::Kind::label) {
            idx = t.candidate_index;
        } else {
            if (t.value < 1 || t.value > static_cast<long>(inst.candidates.size())) continue;
            idx = static_cast<std::size_t>(t.value - 1);
        }
        ParsedAnswer out;
        out.kind = ParsedAnswer::Kind::single_label;
        out.label = inst.candidates[idx];
        return out;
    }
    return unparseable("no candidate label found");
}

}  // namespace

bool ParsedAnswer::same_prediction(const ParsedAnswer& other) const {
    return kind == other.kind && labels == other.labels && positions == other.positions &&
           position == other.position && label == other.label;
}

std::string parsed_kind_name(ParsedAnswer::Kind k) {
    switch (k) {
        case ParsedAnswer::Kind::full_sequence: return "full_sequence";
        case ParsedAnswer::Kind::sub_sequence: return "sub_sequence";
        case ParsedAnswer::Kind::positions: return "positions";
        case ParsedAnswer::Kind::outlier_position: return "outlier_position";
        case ParsedAnswer::Kind::single_label: return "single_label";
        case ParsedAnswer::Kind::unparseable: return "unparseable";
    }
    throw std::logic_error("bad ParsedAnswer::Kind");
}

json to_json(const ParsedAnswer& a) {
    json j;
    j["type"] = parsed_kind_name(a.kind);
    switch (a.kind) {
        case ParsedAnswer::Kind::full_sequence:
        case ParsedAnswer::Kind::sub_sequence: j["labels"] = a.labels; break;
        case ParsedAnswer::Kind::positions: j["positions"] = a.positions; break;
        case ParsedAnswer::Kind::outlier_position: j["position"] = a.position; break;
        case ParsedAnswer::Kind::single_label: j["label"] = a.label; break;
        case ParsedAnswer::Kind::unparseable: j["reason"] = a.reason; break;
    }
    return j;
}

ParsedAnswer parsed_from_json(const json& j) {
    ParsedAnswer a;
    const std::string type = j.at("type").get<std::string>();
    if (type == "unparseable") {
        a.kind = ParsedAnswer::Kind::unparseable;
        a.reason = j.value("reason", "");
        return a;
    }
    for (ParsedAnswer::Kind k :
         {ParsedAnswer::Kind::full_sequence, ParsedAnswer::Kind::sub_sequence,
          ParsedAnswer::Kind::positions, ParsedAnswer::Kind::outlier_position,
          ParsedAnswer::Kind::single_label}) {
        if (type == parsed_kind_name(k)) {
            a.kind = k;
            break;
        }
    }
    if (j.contains("labels")) a.labels = j["labels"].get<std::vector<std::string>>();
    if (j.contains("positions")) a.positions = j["positions"].get<std::vector<int>>();
    if (j.contains("position")) a.position = j["position"].get<int>();
    if (j.contains("label")) a.label = j["label"].get<std::string>();
    return a;
}

ParsedAnswer parse_answer(const std::string& raw, const TaskInstance& inst) {
    const std::string text = preprocess(raw);
    const int n_e = static_cast<int>(inst.video.segments.size());
    switch (inst.key.kind) {
        case KeyKind::full_sequence:
            return parse_label_list(text, inst, ParsedAnswer::Kind::full_sequence);
        case KeyKind::sub_sequence:
            return parse_label_list(text, inst, ParsedAnswer::Kind::sub_sequence);
        case KeyKind::positions:
            return parse_positions(text, inst.key.positions.size(), n_e);
        case KeyKind::outlier_position: return parse_single_index(text, n_e);
        case KeyKind::single_label: return parse_single_label(text, inst);
    }
    return unparseable("unknown answer variant");
}

}  // namespace vbench
