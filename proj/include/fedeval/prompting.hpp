#pragma once

#include "fedeval/protocol.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fedeval {

enum class TemplateRole { Answer, Judge };

std::string_view role_name(TemplateRole role);
std::optional<TemplateRole> role_from_name(std::string_view name);

// Body text with literal {instruction} / {input} / {answer 1} / {answer 2}
// placeholders. task "*" matches any task kind.
struct PromptTemplate {
    std::string name;
    std::string task;
    TemplateRole role = TemplateRole::Answer;
    std::string body;
};

struct RenderOptions {
    // Drop the whole Input line instead of rendering it empty.
    bool omit_empty_input = false;
};

std::string render_answer_prompt(const Question& question,
                                 const PromptTemplate& tpl,
                                 const RenderOptions& opts = {});

// Answer order in the prompt equals the argument order; the caller owns the
// presentation-order decision.
std::string render_judge_prompt(const Question& question,
                                std::string_view answer_1,
                                std::string_view answer_2,
                                const PromptTemplate& tpl,
                                const RenderOptions& opts = {});

// Total over arbitrary bytes. First whitespace-delimited token of the first
// non-empty line: "1" -> First, "2" -> Second, "0" or "tie" (any case) ->
// Tie, anything else -> invalid.
ParsedVerdict parse_verdict(std::string_view raw_output);

// Ordered template collection; first (role, task) match wins, "*" tasks
// match last-resort. Loaded templates take precedence over builtins.
class TemplateSet {
public:
    TemplateSet() = default;
    explicit TemplateSet(std::vector<PromptTemplate> templates);

    // The Alpaca-style answer template plus the two pairwise judge templates
    // (instruction tuning and summary).
    static TemplateSet builtin();

    // Manifest JSON: {"templates": [{"name","task","role","path"}]} with
    // paths relative to the manifest. Builtins remain as fallback.
    static TemplateSet load_manifest(const std::filesystem::path& manifest);

    void add(PromptTemplate tpl);  // appended with lower precedence

    const PromptTemplate& answer_template(std::string_view task) const;
    const PromptTemplate& judge_template(std::string_view task) const;

    const std::vector<PromptTemplate>& templates() const { return templates_; }

private:
    const PromptTemplate* find(TemplateRole role, std::string_view task) const;
    std::vector<PromptTemplate> templates_;
};

} // namespace fedeval
