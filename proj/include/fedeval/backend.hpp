#pragma once

#include "fedeval/rng.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fedeval {

enum class BackendKind { Scripted, Stochastic, Remote };

std::string_view backend_kind_name(BackendKind kind);
std::optional<BackendKind> backend_kind_from_name(std::string_view name);

struct DecodingParams {
    double temperature = 0.7;
    int max_new_tokens = 512;
};

// Rules fire in order when the hash table misses. `match` is "*" or a
// substring of the prompt. `respond` is one of:
//   const:<text>              fixed completion
//   prefer_longer             judge rule: pick the longer response block
//   prefer_containing:<s>     judge rule: pick the block containing <s>
//   stamp                     "<id>-<hex16 prompt hash>" (distinct per prompt)
struct ScriptedRule {
    std::string match;
    std::string respond;
};

struct ScriptedParams {
    std::map<std::string, std::string> table;  // hex16 prompt hash -> response
    std::vector<ScriptedRule> rules;
    std::optional<std::string> default_response;
};

// Position-biased referee: each call independently answers "1"/"2"/"tie"/
// garbage with the given probabilities. When `accuracy` is set and exactly
// one response block contains `planted_marker`, directional draws prefer the
// marked block with that probability instead of the positional split.
struct StochasticRefereeParams {
    double p_first = 0.0;
    double p_second = 0.0;
    double p_tie = 0.0;
    double p_invalid = 0.0;
    std::optional<double> accuracy;
    std::string planted_marker = "[BETTER]";
    std::string stream_tag;  // extra salt for this backend's RNG streams
};

struct RemoteParams {
    std::string base_url;  // e.g. "http://127.0.0.1:8080"
    std::string path = "/v1/completions";
    int timeout_ms = 5000;
    int max_retries = 3;
    int base_backoff_ms = 200;
    std::string auth_token_env = "FEDEVAL_REMOTE_TOKEN";
    int max_inflight = 4;
};

struct BackendSpec {
    std::string id;
    DecodingParams decoding;
    std::variant<ScriptedParams, StochasticRefereeParams, RemoteParams> params;

    BackendKind kind() const {
        return static_cast<BackendKind>(params.index());
    }
};

struct HealthStatus {
    bool healthy = false;
    std::string detail;
};

class ModelBackend {
public:
    explicit ModelBackend(BackendSpec spec) : spec_(std::move(spec)) {}
    virtual ~ModelBackend() = default;

    const BackendSpec& spec() const { return spec_; }
    const std::string& id() const { return spec_.id; }

    // Salt for per-call stream keys; defaults to the backend id.
    std::string stream_tag() const;

    bool deterministic() const { return spec_.kind() != BackendKind::Remote; }

    // Thread-safe; the caller owns the stream. Scripted and stochastic
    // backends ignore decoding; remote forwards it on the wire.
    std::string generate(std::string_view prompt, const DecodingParams& decoding,
                         RngStream& rng) const;

    virtual HealthStatus probe() const { return {true, ""}; }

    std::uint64_t call_count() const { return calls_.load(); }

private:
    virtual std::string do_generate(std::string_view prompt,
                                    const DecodingParams& decoding,
                                    RngStream& rng) const = 0;

    BackendSpec spec_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

using BackendPtr = std::shared_ptr<const ModelBackend>;
using BackendMap = std::map<std::string, BackendPtr>;

// Validates the spec invariants (stochastic probabilities sum to 1 within
// 1e-9, remote carries a base URL, non-empty id) and instantiates the
// matching backend. Throws ConfigError.
BackendPtr make_backend(BackendSpec spec);

// Hash key used by scripted response tables: hex16 of fnv1a64(prompt).
std::string prompt_key(std::string_view prompt);

// Extracts the two response blocks from a rendered pairwise judge prompt.
// Returns nullopt when the markers are absent.
struct ResponseBlocks {
    std::string first;
    std::string second;
};
std::optional<ResponseBlocks> extract_response_blocks(std::string_view prompt);

} // namespace fedeval
