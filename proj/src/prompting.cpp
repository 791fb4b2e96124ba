#include "fedeval/prompting.hpp"

#include "fedeval/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace fedeval {

namespace {

constexpr std::string_view kInstruction = "{instruction}";
constexpr std::string_view kInput = "{input}";
constexpr std::string_view kAnswer1 = "{answer 1}";
constexpr std::string_view kAnswer2 = "{answer 2}";

constexpr std::string_view kAnswerBody =
    "Below is an instruction that describes a task, paired with an input that "
    "provides further context.\n"
    "Write a response that appropriately completes the request.\n"
    "\n"
    "Instruction: {instruction}\n"
    "Input: {input}\n"
    "Response:";

constexpr std::string_view kJudgeInstructionBody =
    "Below are two responses for a given task. Evaluate the responses and "
    "decide which response is better in terms of helpfulness, relevance, "
    "accuracy, and level of detail. Output a single line containing only one "
    "value indicating the number of responses you think is better. Use '1' to "
    "represent that response 1 is better, '2' to represent that response 2 is "
    "better, or 'tie' if you think the results are similar or inconclusive. "
    "Avoiding any potential bias and ensuring that the order in which the "
    "responses are presented does not affect your judgment.\n"
    "\n"
    "Instruction: {instruction}\n"
    "Input: {input}\n"
    "Response 1: {answer 1}\n"
    "Response 2: {answer 2}\n"
    "Evaluation:";

constexpr std::string_view kJudgeSummaryBody =
    "Below are two summaries of a given article. Evaluate the summaries and "
    "decide which summary is better in terms of coherence, relevance, "
    "consistency, and fluency. Output a single line containing only one value "
    "indicating the number of the summary you think is better. Use '1' to "
    "represent that response 1 is better, '2' to represent that response 2 is "
    "better, or 'tie' if you think the results are similar or inconclusive. "
    "Avoiding any potential bias and ensuring that the order in which the "
    "responses are presented does not affect your judgment.\n"
    "\n"
    "Instruction: {instruction}\n"
    "Input: {input}\n"
    "Response 1: {answer 1}\n"
    "Response 2: {answer 2}\n"
    "Evaluation:";

constexpr std::array<std::string_view, 4> kKnownPlaceholders = {
    kInstruction, kInput, kAnswer1, kAnswer2};

// Single left-to-right pass; substituted text is never rescanned, so answers
// containing brace sequences stay verbatim.
std::string render_body(const PromptTemplate& tpl,
                        const std::map<std::string_view, std::string_view>& subs) {
    std::string out;
    out.reserve(tpl.body.size() + 256);
    std::map<std::string_view, bool> seen;
    for (const auto& [key, value] : subs) {
        (void)value;
        seen[key] = false;
    }
    const std::string_view body = tpl.body;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] != '{') {
            out += body[i++];
            continue;
        }
        bool matched = false;
        for (std::string_view ph : kKnownPlaceholders) {
            if (body.compare(i, ph.size(), ph) != 0) continue;
            auto it = subs.find(ph);
            if (it == subs.end())
                throw TemplateError("template '" + tpl.name + "' uses " +
                                    std::string(ph) +
                                    ", which this role does not provide");
            out += it->second;
            seen[ph] = true;
            i += ph.size();
            matched = true;
            break;
        }
        if (!matched) out += body[i++];
    }
    for (const auto& [key, was_seen] : seen)
        if (!was_seen)
            throw TemplateError("template '" + tpl.name +
                                "' is missing placeholder " + std::string(key));
    return out;
}

// Drops every line containing the {input} placeholder.
std::string strip_input_line(std::string_view body) {
    std::string out;
    out.reserve(body.size());
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t end = body.find('\n', start);
        const bool last = end == std::string_view::npos;
        std::string_view line =
            body.substr(start, last ? std::string_view::npos : end - start);
        if (line.find(kInput) == std::string_view::npos) {
            out += line;
            if (!last) out += '\n';
        }
        if (last) break;
        start = end + 1;
    }
    return out;
}

void require_task_match(const PromptTemplate& tpl, const Question& question) {
    if (tpl.task != "*" && tpl.task != question.task)
        throw TemplateError("template '" + tpl.name + "' targets task '" +
                            tpl.task + "', question '" + question.id +
                            "' is '" + question.task + "'");
}

} // namespace

std::string_view role_name(TemplateRole role) {
    return role == TemplateRole::Answer ? "answer" : "judge";
}

std::optional<TemplateRole> role_from_name(std::string_view name) {
    if (name == "answer") return TemplateRole::Answer;
    if (name == "judge") return TemplateRole::Judge;
    return std::nullopt;
}

std::string render_answer_prompt(const Question& question,
                                 const PromptTemplate& tpl,
                                 const RenderOptions& opts) {
    if (tpl.role != TemplateRole::Answer)
        throw TemplateError("template '" + tpl.name + "' is not an answer template");
    require_task_match(tpl, question);
    if (question.instruction.empty())
        throw TemplateError("question '" + question.id + "' has an empty instruction");
    std::map<std::string_view, std::string_view> subs{
        {kInstruction, question.instruction}};
    PromptTemplate effective = tpl;
    if (opts.omit_empty_input && question.input.empty())
        effective.body = strip_input_line(tpl.body);
    else
        subs.emplace(kInput, question.input);
    return render_body(effective, subs);
}

std::string render_judge_prompt(const Question& question,
                                std::string_view answer_1,
                                std::string_view answer_2,
                                const PromptTemplate& tpl,
                                const RenderOptions& opts) {
    if (tpl.role != TemplateRole::Judge)
        throw TemplateError("template '" + tpl.name + "' is not a judge template");
    require_task_match(tpl, question);
    if (question.instruction.empty())
        throw TemplateError("question '" + question.id + "' has an empty instruction");
    std::map<std::string_view, std::string_view> subs{
        {kInstruction, question.instruction},
        {kAnswer1, answer_1},
        {kAnswer2, answer_2}};
    PromptTemplate effective = tpl;
    if (opts.omit_empty_input && question.input.empty())
        effective.body = strip_input_line(tpl.body);
    else
        subs.emplace(kInput, question.input);
    return render_body(effective, subs);
}

ParsedVerdict parse_verdict(std::string_view raw_output) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
    };
    std::size_t start = 0;
    while (start < raw_output.size()) {
        std::size_t end = raw_output.find('\n', start);
        if (end == std::string_view::npos) end = raw_output.size();
        std::string_view line = raw_output.substr(start, end - start);
        std::size_t a = 0;
        while (a < line.size() && is_space(line[a])) ++a;
        if (a < line.size()) {
            std::size_t b = a;
            while (b < line.size() && !is_space(line[b])) ++b;
            std::string_view token = line.substr(a, b - a);
            if (token == "1") return Verdict::First;
            if (token == "2") return Verdict::Second;
            if (token == "0") return Verdict::Tie;
            if (token.size() == 3 &&
                std::tolower(static_cast<unsigned char>(token[0])) == 't' &&
                std::tolower(static_cast<unsigned char>(token[1])) == 'i' &&
                std::tolower(static_cast<unsigned char>(token[2])) == 'e')
                return Verdict::Tie;
            return std::nullopt;
        }
        start = end + 1;
    }
    return std::nullopt;  // blank output
}

TemplateSet::TemplateSet(std::vector<PromptTemplate> templates)
    : templates_(std::move(templates)) {}

TemplateSet TemplateSet::builtin() {
    TemplateSet set;
    set.add({"builtin-answer", "*", TemplateRole::Answer, std::string(kAnswerBody)});
    set.add({"builtin-judge-instruction-tuning", "instruction-tuning",
             TemplateRole::Judge, std::string(kJudgeInstructionBody)});
    set.add({"builtin-judge-summary", "summary", TemplateRole::Judge,
             std::string(kJudgeSummaryBody)});
    return set;
}

TemplateSet TemplateSet::load_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in)
        throw IoError("cannot open template manifest '" + manifest.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("template manifest '" + manifest.string() + "': " + e.what());
    }
    if (!doc.is_object() || !doc.contains("templates") ||
        !doc["templates"].is_array())
        throw IoError("template manifest '" + manifest.string() +
                      "' must be an object with a 'templates' array");
    TemplateSet set;
    for (const auto& entry : doc["templates"]) {
        for (const std::string key : {"name", "task", "role", "path"})
            if (!entry.contains(key) || !entry[key].is_string())
                throw IoError("template manifest '" + manifest.string() +
                              "': entry missing string field '" + key + "'");
        const auto role = role_from_name(entry["role"].get<std::string>());
        if (!role)
            throw IoError("template manifest '" + manifest.string() +
                          "': unknown role '" +
                          entry["role"].get<std::string>() + "'");
        const std::filesystem::path body_path =
            manifest.parent_path() / entry["path"].get<std::string>();
        std::ifstream body_in(body_path, std::ios::binary);
        if (!body_in)
            throw IoError("cannot open template file '" + body_path.string() + "'");
        std::ostringstream body;
        body << body_in.rdbuf();
        set.add({entry["name"].get<std::string>(),
                 entry["task"].get<std::string>(), *role, body.str()});
    }
    for (auto& tpl : TemplateSet::builtin().templates_)
        set.add(std::move(tpl));
    return set;
}

void TemplateSet::add(PromptTemplate tpl) { templates_.push_back(std::move(tpl)); }

const PromptTemplate* TemplateSet::find(TemplateRole role,
                                        std::string_view task) const {
    for (const auto& tpl : templates_)
        if (tpl.role == role && tpl.task == task) return &tpl;
    for (const auto& tpl : templates_)
        if (tpl.role == role && tpl.task == "*") return &tpl;
    return nullptr;
}

const PromptTemplate& TemplateSet::answer_template(std::string_view task) const {
    if (const auto* tpl = find(TemplateRole::Answer, task)) return *tpl;
    throw TemplateError("no answer template for task '" + std::string(task) + "'");
}

const PromptTemplate& TemplateSet::judge_template(std::string_view task) const {
    if (const auto* tpl = find(TemplateRole::Judge, task)) return *tpl;
    throw TemplateError("no judge template for task '" + std::string(task) + "'");
}

} // namespace fedeval
