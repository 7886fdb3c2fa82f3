#pragma once

#include <string>
#include <vector>

#include "vbench/instance.hpp"

namespace vbench {

struct ParsedAnswer {
    enum class Kind {
        full_sequence,
        sub_sequence,
        positions,
        outlier_position,
        single_label,
        unparseable,
    };
    Kind kind = Kind::unparseable;
    std::vector<std::string> labels;
    std::vector<int> positions;
    int position = 0;
    std::string label;
    std::string reason;  // unparseable only; ignored by equality

    bool is_unparseable() const { return kind == Kind::unparseable; }
    bool same_prediction(const ParsedAnswer& other) const;
};

std::string parsed_kind_name(ParsedAnswer::Kind k);
json to_json(const ParsedAnswer& a);
ParsedAnswer parsed_from_json(const json& j);

// Deterministic lenient extraction. Never throws on model text; a failed
// extraction is an Unparseable value that scores zero downstream.
ParsedAnswer parse_answer(const std::string& raw, const TaskInstance& inst);

}  // namespace vbench
