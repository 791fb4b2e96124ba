#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedeval {

// Verdicts are always expressed over the canonical (answer_a, answer_b)
// order, never over the presented order.
enum class Verdict { First, Second, Tie };

enum class Presentation { AB, BA };

// nullopt means the raw output failed to parse as a verdict token.
using ParsedVerdict = std::optional<Verdict>;

Verdict mirror(Verdict v);

std::string_view verdict_name(Verdict v);   // "first" / "second" / "tie"
std::string_view verdict_label(Verdict v);  // "1" / "2" / "tie" (record labels)
std::optional<Verdict> verdict_from_name(std::string_view name);

std::string_view presentation_name(Presentation p);
std::optional<Presentation> presentation_from_name(std::string_view name);

struct Question {
    std::string id;
    std::string instruction;
    std::string input;  // may be empty
    std::string task;   // "instruction-tuning" | "summary" | custom
};

struct QuestionSet {
    std::vector<Question> questions;
    std::string task;
};

// Throws ContractError on duplicate ids, empty instructions, or a question
// whose task differs from the set's.
void validate_question_set(const QuestionSet& set);

struct Answer {
    std::string author;       // client id
    std::string text;         // may be empty; degenerate output is kept
    std::string question_id;
};

struct Judgment {
    std::string referee;
    Presentation presentation = Presentation::AB;
    std::string raw_output;
    ParsedVerdict parsed;  // relative to the presented order
};

struct OrderedJudgmentPair {
    Judgment j_ab;
    Judgment j_ba;
    std::optional<Verdict> resolved;  // canonical; present iff order-consistent
};

struct ConsistencyStats {
    double output_consistency = 0.0;
    std::optional<double> judgment_consistency;  // undefined when no pair resolves
};

struct EvaluationSample {
    std::string id;
    Question question;
    Answer answer_a;
    Answer answer_b;
    std::vector<OrderedJudgmentPair> referee_pairs;
    ConsistencyStats stats;
};

struct SelectionCriteria {
    bool require_order_consistency = true;
    double min_output_consistency = 0.6;
    // 0 disables the judgment criterion entirely (samples with no resolved
    // pair would otherwise fail it vacuously).
    double min_judgment_consistency = 0.8;
};

enum class Outcome { Win, Lose, Excluded };

std::string_view outcome_name(Outcome o);
std::optional<Outcome> outcome_from_name(std::string_view name);

struct VoteOutcome {
    Outcome outcome = Outcome::Excluded;
    double weight = 0.0;  // supporters / referee_count
};

struct ProtocolOptions {
    // Tie in both presentation orders counts as a valid (resolved) Tie.
    bool tie_tie_valid = true;
};

// Combines a referee's judgments on both presentation orders. Resolves only
// when the same canonical answer wins in both orders (or both say tie);
// everything else, including any unparseable output, is discarded.
std::optional<Verdict> resolve_order_pair(const Judgment& j_ab,
                                          const Judgment& j_ba,
                                          const ProtocolOptions& opts = {});

// output_consistency  = resolved pairs / all pairs
// judgment_consistency = pairs agreeing with the modal resolved verdict /
//                        resolved pairs (undefined when none resolve)
ConsistencyStats compute_consistency(const EvaluationSample& sample);

// Strict majority among non-Tie verdicts; weight = supporters/referee_count.
// Equal support, all ties, or an empty list yield Excluded with weight 0.
VoteOutcome majority_vote(std::span<const Verdict> resolved_verdicts,
                          int referee_count);

// Unique modal resolved verdict, nullopt when the mode is tied between
// verdict kinds. Throws ContractError when no pair resolved.
std::optional<Verdict> modal_verdict(const EvaluationSample& sample);

// Structural invariants: distinct authors, referees distinct and disjoint
// from authors, AB/BA presentation per pair, answers referencing the
// sample's question. Does not re-run the parser; see
// verify_sample_invariants in bootstrap.hpp for the full post-hoc check.
void validate_sample(const EvaluationSample& sample);

} // namespace fedeval
