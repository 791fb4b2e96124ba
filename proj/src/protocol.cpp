#include "fedeval/protocol.hpp"

#include "fedeval/error.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace fedeval {

Verdict mirror(Verdict v) {
    switch (v) {
        case Verdict::First: return Verdict::Second;
        case Verdict::Second: return Verdict::First;
        case Verdict::Tie: return Verdict::Tie;
    }
    return Verdict::Tie;
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::First: return "first";
        case Verdict::Second: return "second";
        case Verdict::Tie: return "tie";
    }
    return "tie";
}

std::string_view verdict_label(Verdict v) {
    switch (v) {
        case Verdict::First: return "1";
        case Verdict::Second: return "2";
        case Verdict::Tie: return "tie";
    }
    return "tie";
}

std::optional<Verdict> verdict_from_name(std::string_view name) {
    if (name == "first") return Verdict::First;
    if (name == "second") return Verdict::Second;
    if (name == "tie") return Verdict::Tie;
    return std::nullopt;
}

std::string_view presentation_name(Presentation p) {
    return p == Presentation::AB ? "AB" : "BA";
}

std::optional<Presentation> presentation_from_name(std::string_view name) {
    if (name == "AB") return Presentation::AB;
    if (name == "BA") return Presentation::BA;
    return std::nullopt;
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Win: return "win";
        case Outcome::Lose: return "lose";
        case Outcome::Excluded: return "excluded";
    }
    return "excluded";
}

std::optional<Outcome> outcome_from_name(std::string_view name) {
    if (name == "win") return Outcome::Win;
    if (name == "lose") return Outcome::Lose;
    if (name == "excluded") return Outcome::Excluded;
    return std::nullopt;
}

void validate_question_set(const QuestionSet& set) {
    std::set<std::string_view> ids;
    for (const auto& q : set.questions) {
        if (q.instruction.empty())
            throw ContractError("question '" + q.id + "' has an empty instruction");
        if (!q.task.empty() && q.task != set.task)
            throw ContractError("question '" + q.id + "' task '" + q.task +
                                "' differs from set task '" + set.task + "'");
        if (!ids.insert(q.id).second)
            throw ContractError("duplicate question id '" + q.id + "'");
    }
}

std::optional<Verdict> resolve_order_pair(const Judgment& j_ab,
                                          const Judgment& j_ba,
                                          const ProtocolOptions& opts) {
    if (!j_ab.parsed || !j_ba.parsed) return std::nullopt;
    const Verdict ab = *j_ab.parsed;
    const Verdict ba = *j_ba.parsed;
    // "First" in the AB order and "Second" in the BA order both point at
    // canonical answer a; the mirror points at b.
    if (ab == Verdict::First && ba == Verdict::Second) return Verdict::First;
    if (ab == Verdict::Second && ba == Verdict::First) return Verdict::Second;
    if (ab == Verdict::Tie && ba == Verdict::Tie && opts.tie_tie_valid)
        return Verdict::Tie;
    return std::nullopt;
}

namespace {

std::size_t verdict_index(Verdict v) { return static_cast<std::size_t>(v); }

std::array<std::size_t, 3> resolved_counts(const EvaluationSample& sample) {
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (const auto& pair : sample.referee_pairs)
        if (pair.resolved) ++counts[verdict_index(*pair.resolved)];
    return counts;
}

} // namespace

ConsistencyStats compute_consistency(const EvaluationSample& sample) {
    if (sample.referee_pairs.empty())
        throw ContractError("sample '" + sample.id + "' has no referee pairs");
    const auto counts = resolved_counts(sample);
    const std::size_t resolved = counts[0] + counts[1] + counts[2];
    ConsistencyStats stats;
    stats.output_consistency =
        static_cast<double>(resolved) /
        static_cast<double>(sample.referee_pairs.size());
    if (resolved > 0) {
        const std::size_t modal = *std::max_element(counts.begin(), counts.end());
        stats.judgment_consistency =
            static_cast<double>(modal) / static_cast<double>(resolved);
    }
    return stats;
}

VoteOutcome majority_vote(std::span<const Verdict> resolved_verdicts,
                          int referee_count) {
    if (referee_count <= 0)
        throw ConfigError("majority_vote: referee_count must be positive");
    if (resolved_verdicts.size() > static_cast<std::size_t>(referee_count))
        throw ContractError("majority_vote: more resolved verdicts than referees");
    std::size_t first = 0;
    std::size_t second = 0;
    for (Verdict v : resolved_verdicts) {
        if (v == Verdict::First) ++first;
        if (v == Verdict::Second) ++second;
        // ties support neither side but still occupy a referee slot
    }
    if (first > second)
        return {Outcome::Win,
                static_cast<double>(first) / static_cast<double>(referee_count)};
    if (second > first)
        return {Outcome::Lose,
                static_cast<double>(second) / static_cast<double>(referee_count)};
    return {Outcome::Excluded, 0.0};
}

std::optional<Verdict> modal_verdict(const EvaluationSample& sample) {
    const auto counts = resolved_counts(sample);
    const std::size_t resolved = counts[0] + counts[1] + counts[2];
    if (resolved == 0)
        throw ContractError("modal_verdict: sample '" + sample.id +
                            "' has no resolved pairs");
    const std::size_t modal = *std::max_element(counts.begin(), counts.end());
    std::optional<Verdict> winner;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != modal) continue;
        if (winner) return std::nullopt;  // tied mode
        winner = static_cast<Verdict>(i);
    }
    return winner;
}

void validate_sample(const EvaluationSample& sample) {
    if (sample.answer_a.author == sample.answer_b.author)
        throw ContractError("sample '" + sample.id +
                            "': both answers share author '" +
                            sample.answer_a.author + "'");
    if (sample.answer_a.question_id != sample.question.id ||
        sample.answer_b.question_id != sample.question.id)
        throw ContractError("sample '" + sample.id +
                            "': answer question_id does not match question");
    if (sample.referee_pairs.empty())
        throw ContractError("sample '" + sample.id + "' has no referee pairs");
    std::set<std::string_view> referees;
    for (const auto& pair : sample.referee_pairs) {
        const std::string& ref = pair.j_ab.referee;
        if (pair.j_ba.referee != ref)
            throw ContractError("sample '" + sample.id +
                                "': pair mixes referees '" + ref + "' and '" +
                                pair.j_ba.referee + "'");
        if (ref == sample.answer_a.author || ref == sample.answer_b.author)
            throw ContractError("sample '" + sample.id + "': referee '" + ref +
                                "' is also a contestant");
        if (!referees.insert(ref).second)
            throw ContractError("sample '" + sample.id +
                                "': duplicate referee '" + ref + "'");
        if (pair.j_ab.presentation != Presentation::AB ||
            pair.j_ba.presentation != Presentation::BA)
            throw ContractError("sample '" + sample.id + "': referee '" + ref +
                                "' pair is missing one presentation order");
    }
}

} // namespace fedeval
