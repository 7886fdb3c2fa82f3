#include "vbench/prompts.hpp"

#include <map>
#include <stdexcept>

#include "prompt_assets.hpp"
#include "vbench/util.hpp"

namespace vbench::prompts {

namespace {

std::string substitute(std::string body, const std::map<std::string, std::string>& values) {
    for (const auto& [name, value] : values) {
        const std::string placeholder = "{" + name + "}";
        std::size_t pos = 0;
        while ((pos = body.find(placeholder, pos)) != std::string::npos) {
            body.replace(pos, placeholder.size(), value);
            pos += value.size();
        }
    }
    return body;
}

std::string numbered_block(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += std::to_string(i + 1) + ". " + items[i];
        if (i + 1 < items.size()) out += '\n';
    }
    return out;
}

std::string answer_instruction(AnswerFormat fmt) {
    switch (fmt) {
        case AnswerFormat::list_of_labels:
            return "Answer with a comma-separated list of action names copied exactly from the "
                   "candidate list, in chronological order. Output only the list.";
        case AnswerFormat::index_list:
            return "Answer with a comma-separated list of positions, one for each queried action, "
                   "in the same order as the queried actions. Output only the numbers.";
        case AnswerFormat::single_index:
            return "Answer with a single position number. Output only the number.";
        case AnswerFormat::single_label:
            return "Answer with exactly one action name copied exactly from the candidate list. "
                   "Output only the name.";
    }
    throw std::logic_error("bad AnswerFormat");
}

PromptTemplate make_template(const char* id, TaskKind task, const char* body, AnswerFormat fmt) {
    return PromptTemplate{id, task, trim(body) + "\n", fmt};
}

const std::map<TaskKind, PromptTemplate>& registry() {
    static const std::map<TaskKind, PromptTemplate> reg = {
        {TaskKind::t0_single_event,
         make_template("t0/1", TaskKind::t0_single_event, assets::kT0, AnswerFormat::single_label)},
        {TaskKind::t1_sequencing,
         make_template("t1/1", TaskKind::t1_sequencing, assets::kT1, AnswerFormat::list_of_labels)},
        {TaskKind::t2_relative,
         make_template("t2/1", TaskKind::t2_relative, assets::kT2, AnswerFormat::list_of_labels)},
        {TaskKind::t3_position,
         make_template("t3/1", TaskKind::t3_position, assets::kT3, AnswerFormat::index_list)},
        {TaskKind::t4_semantic_outlier,
         make_template("t4/1", TaskKind::t4_semantic_outlier, assets::kT4,
                       AnswerFormat::single_index)},
        {TaskKind::t5_pattern_outlier,
         make_template("t5/1", TaskKind::t5_pattern_outlier, assets::kT5,
                       AnswerFormat::single_index)},
    };
    return reg;
}

}  // namespace

const PromptTemplate& template_for(TaskKind task) {
    auto it = registry().find(task);
    if (it == registry().end()) throw std::invalid_argument("no template for task");
    return it->second;
}

AnswerFormat answer_format_for(TaskKind task) { return template_for(task).format; }

std::string render_prompt(const TaskInstance& inst) {
    const PromptTemplate& tmpl = template_for(inst.task);
    std::map<std::string, std::string> values;
    values["candidates"] = numbered_block(inst.candidates);
    values["answer_format"] = answer_instruction(tmpl.format);
    if (inst.task == TaskKind::t2_relative) {
        if (inst.query.kind != TaskQuery::Kind::relative_pair)
            throw std::invalid_argument("t2 instance without a relative_pair query");
        values["first"] = inst.video.segments[static_cast<std::size_t>(inst.query.qi - 1)].label;
        values["second"] = inst.video.segments[static_cast<std::size_t>(inst.query.qj - 1)].label;
    }
    if (inst.task == TaskKind::t3_position) {
        if (inst.query.kind != TaskQuery::Kind::position_probe)
            throw std::invalid_argument("t3 instance without a position_probe query");
        values["probes"] = numbered_block(inst.query.probe_labels);
    }
    return substitute(tmpl.body, values);
}

std::string render_answer(const AnswerKey& key) {
    switch (key.kind) {
        case KeyKind::full_sequence:
        case KeyKind::sub_sequence: return join(key.labels, ", ");
        case KeyKind::positions: {
            std::vector<std::string> parts;
            for (int p : key.positions) parts.push_back(std::to_string(p));
            return join(parts, ", ");
        }
        case KeyKind::outlier_position: return std::to_string(key.position);
        case KeyKind::single_label: return key.label;
    }
    throw std::logic_error("bad KeyKind");
}

std::string narrative_for(const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out += std::to_string(i + 1) + ". The person is " + labels[i] + ".";
        if (i + 1 < labels.size()) out += '\n';
    }
    return out;
}

const CotPromptPair& default_cot() {
    static const CotPromptPair pair{trim(assets::kCotGen) + "\n", trim(assets::kCotQuery) + "\n"};
    return pair;
}

std::string render_cot_query(const CotPromptPair& cot, const std::string& context,
                             const std::string& question) {
    return substitute(cot.query, {{"context", context}, {"question", question}});
}

}  // namespace vbench::prompts
