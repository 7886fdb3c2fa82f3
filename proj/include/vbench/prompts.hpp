#pragma once

#include <string>

#include "vbench/instance.hpp"

namespace vbench::prompts {

enum class AnswerFormat { list_of_labels, index_list, single_index, single_label };

struct PromptTemplate {
    std::string id;       // versioned, e.g. "t1/1"
    TaskKind task;
    std::string body;     // placeholders: {candidates}, {query}, {answer_format}
    AnswerFormat format;
};

const PromptTemplate& template_for(TaskKind task);
AnswerFormat answer_format_for(TaskKind task);

// Deterministic model-facing prompt: numbered candidates, the query, and the
// exact answer-format instruction for the task kind.
std::string render_prompt(const TaskInstance& inst);

// The canonical string a perfectly compliant model would emit.
std::string render_answer(const AnswerKey& key);

// Chronological narrative used by scripted describers and oracle CoT contexts.
std::string narrative_for(const std::vector<std::string>& labels);

struct CotPromptPair {
    std::string gen;    // task-agnostic context-generation prompt
    std::string query;  // placeholders: {context}, {question}
};

const CotPromptPair& default_cot();
std::string render_cot_query(const CotPromptPair& cot, const std::string& context,
                             const std::string& question);

}  // namespace vbench::prompts
