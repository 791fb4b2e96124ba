#include "fedeval/backend.hpp"

#include "fedeval/error.hpp"

#include "httplib.h"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace fedeval {

std::string_view backend_kind_name(BackendKind kind) {
    switch (kind) {
        case BackendKind::Scripted: return "scripted";
        case BackendKind::Stochastic: return "stochastic";
        case BackendKind::Remote: return "remote";
    }
    return "scripted";
}

std::optional<BackendKind> backend_kind_from_name(std::string_view name) {
    if (name == "scripted") return BackendKind::Scripted;
    if (name == "stochastic") return BackendKind::Stochastic;
    if (name == "remote") return BackendKind::Remote;
    return std::nullopt;
}

std::string prompt_key(std::string_view prompt) {
    return to_hex(fnv1a64(prompt));
}

std::optional<ResponseBlocks> extract_response_blocks(std::string_view prompt) {
    constexpr std::string_view kFirst = "Response 1: ";
    constexpr std::string_view kSecond = "\nResponse 2: ";
    constexpr std::string_view kEnd = "\nEvaluation:";
    const std::size_t p1 = prompt.find(kFirst);
    if (p1 == std::string_view::npos) return std::nullopt;
    const std::size_t p2 = prompt.find(kSecond, p1);
    if (p2 == std::string_view::npos) return std::nullopt;
    const std::size_t pe = prompt.rfind(kEnd);
    if (pe == std::string_view::npos || pe < p2) return std::nullopt;
    ResponseBlocks blocks;
    blocks.first = std::string(prompt.substr(p1 + kFirst.size(),
                                             p2 - p1 - kFirst.size()));
    blocks.second = std::string(prompt.substr(p2 + kSecond.size(),
                                              pe - p2 - kSecond.size()));
    return blocks;
}

std::string ModelBackend::stream_tag() const {
    if (const auto* p = std::get_if<StochasticRefereeParams>(&spec_.params))
        if (!p->stream_tag.empty()) return p->stream_tag;
    return spec_.id;
}

std::string ModelBackend::generate(std::string_view prompt,
                                   const DecodingParams& decoding,
                                   RngStream& rng) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_generate(prompt, decoding, rng);
}

namespace {

class ScriptedBackend final : public ModelBackend {
public:
    explicit ScriptedBackend(BackendSpec spec) : ModelBackend(std::move(spec)) {}

private:
    std::string do_generate(std::string_view prompt, const DecodingParams&,
                            RngStream&) const override {
        const auto& p = std::get<ScriptedParams>(spec().params);
        if (!p.table.empty()) {
            auto it = p.table.find(prompt_key(prompt));
            if (it != p.table.end()) return it->second;
        }
        for (const auto& rule : p.rules) {
            if (rule.match != "*" &&
                prompt.find(rule.match) == std::string_view::npos)
                continue;
            if (auto response = apply_rule(rule, prompt)) return *response;
        }
        if (p.default_response) return *p.default_response;
        throw ConfigError("scripted backend '" + id() +
                          "' has no response for prompt key " +
                          prompt_key(prompt));
    }

    std::optional<std::string> apply_rule(const ScriptedRule& rule,
                                          std::string_view prompt) const {
        const std::string& r = rule.respond;
        if (r.rfind("const:", 0) == 0) return r.substr(6);
        if (r == "stamp") return id() + "-" + prompt_key(prompt);
        if (r == "prefer_longer") {
            const auto blocks = extract_response_blocks(prompt);
            if (!blocks) return std::nullopt;  // not a judge prompt; next rule
            if (blocks->first.size() > blocks->second.size()) return "1";
            if (blocks->second.size() > blocks->first.size()) return "2";
            return "tie";
        }
        if (r.rfind("prefer_containing:", 0) == 0) {
            const std::string needle = r.substr(18);
            const auto blocks = extract_response_blocks(prompt);
            if (!blocks) return std::nullopt;
            const bool in_first = blocks->first.find(needle) != std::string::npos;
            const bool in_second = blocks->second.find(needle) != std::string::npos;
            if (in_first && !in_second) return "1";
            if (in_second && !in_first) return "2";
            return "tie";
        }
        throw ConfigError("scripted backend '" + id() +
                          "': unknown respond rule '" + r + "'");
    }
};

class StochasticBackend final : public ModelBackend {
public:
    explicit StochasticBackend(BackendSpec spec) : ModelBackend(std::move(spec)) {}

private:
    std::string do_generate(std::string_view prompt, const DecodingParams&,
                            RngStream& rng) const override {
        const auto& p = std::get<StochasticRefereeParams>(spec().params);
        const double u = rng.next_unit();
        const double directional = p.p_first + p.p_second;
        if (u < directional) {
            bool first = u < p.p_first;
            if (p.accuracy) {
                if (const auto marked = marked_block(p, prompt)) {
                    const bool follow = rng.next_unit() < *p.accuracy;
                    first = follow ? *marked : !*marked;
                }
            }
            return first ? "1" : "2";
        }
        if (u < directional + p.p_tie) return "tie";
        return "unable to decide between the responses";
    }

    // true -> marker in block 1, false -> block 2, nullopt -> absent/ambiguous
    static std::optional<bool> marked_block(const StochasticRefereeParams& p,
                                            std::string_view prompt) {
        const auto blocks = extract_response_blocks(prompt);
        if (!blocks) return std::nullopt;
        const bool in_first =
            blocks->first.find(p.planted_marker) != std::string::npos;
        const bool in_second =
            blocks->second.find(p.planted_marker) != std::string::npos;
        if (in_first == in_second) return std::nullopt;
        return in_first;
    }
};

class RemoteBackend final : public ModelBackend {
public:
    explicit RemoteBackend(BackendSpec spec) : ModelBackend(std::move(spec)) {}

    HealthStatus probe() const override {
        try {
            RngStream throwaway(0);
            generate("ping", DecodingParams{0.0, 1}, throwaway);
            return {true, ""};
        } catch (const BackendError& e) {
            return {false, e.what()};
        }
    }

private:
    std::string do_generate(std::string_view prompt,
                            const DecodingParams& decoding,
                            RngStream&) const override {
        const auto& p = std::get<RemoteParams>(spec().params);
        InflightSlot slot(*this, p.max_inflight);

        nlohmann::json body{{"model", id()},
                            {"prompt", std::string(prompt)},
                            {"temperature", decoding.temperature},
                            {"max_tokens", decoding.max_new_tokens}};
        httplib::Headers headers;
        if (!p.auth_token_env.empty()) {
            if (const char* token = std::getenv(p.auth_token_env.c_str()))
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        std::string last_error;
        const int attempts_allowed = p.max_retries + 1;
        for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
            if (attempt > 0) {
                const auto delay = std::chrono::milliseconds(
                    p.base_backoff_ms << (attempt - 1));
                std::this_thread::sleep_for(delay);
            }
            httplib::Client client(p.base_url);
            client.set_connection_timeout(0, p.timeout_ms * 1000);
            client.set_read_timeout(0, p.timeout_ms * 1000);
            client.set_write_timeout(0, p.timeout_ms * 1000);
            auto res = client.Post(p.path, headers, body.dump(),
                                   "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;  // retryable
            }
            if (res->status >= 500) {
                last_error = "server error: HTTP " + std::to_string(res->status);
                continue;  // retryable
            }
            if (res->status != 200)
                throw BackendError("backend '" + id() + "': HTTP " +
                                       std::to_string(res->status),
                                   attempt + 1, false);
            try {
                auto doc = nlohmann::json::parse(res->body);
                return doc.at("text").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw BackendError("backend '" + id() +
                                       "': malformed completion response: " +
                                       e.what(),
                                   attempt + 1, false);
            }
        }
        throw BackendError("backend '" + id() + "': " + last_error + " after " +
                               std::to_string(attempts_allowed) + " attempts",
                           attempts_allowed, true);
    }

    // Bounds concurrent requests per endpoint.
    class InflightSlot {
    public:
        InflightSlot(const RemoteBackend& owner, int limit) : owner_(owner) {
            std::unique_lock lock(owner_.mu_);
            owner_.cv_.wait(lock,
                            [&] { return owner_.in_flight_ < std::max(1, limit); });
            ++owner_.in_flight_;
        }
        ~InflightSlot() {
            {
                std::lock_guard lock(owner_.mu_);
                --owner_.in_flight_;
            }
            owner_.cv_.notify_one();
        }

    private:
        const RemoteBackend& owner_;
    };

    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    mutable int in_flight_ = 0;
};

} // namespace

BackendPtr make_backend(BackendSpec spec) {
    if (spec.id.empty()) throw ConfigError("backend spec has an empty id");
    if (spec.decoding.temperature < 0)
        throw ConfigError("backend '" + spec.id + "': negative temperature");
    if (spec.decoding.max_new_tokens <= 0)
        throw ConfigError("backend '" + spec.id +
                          "': max_new_tokens must be positive");
    switch (spec.kind()) {
        case BackendKind::Scripted:
            return std::make_shared<ScriptedBackend>(std::move(spec));
        case BackendKind::Stochastic: {
            const auto& p = std::get<StochasticRefereeParams>(spec.params);
            const double sum = p.p_first + p.p_second + p.p_tie + p.p_invalid;
            if (std::abs(sum - 1.0) > 1e-9)
                throw ConfigError("backend '" + spec.id +
                                  "': probabilities sum to " +
                                  std::to_string(sum) + ", expected 1");
            for (double v : {p.p_first, p.p_second, p.p_tie, p.p_invalid})
                if (v < 0)
                    throw ConfigError("backend '" + spec.id +
                                      "': negative probability");
            if (p.accuracy && (*p.accuracy < 0 || *p.accuracy > 1))
                throw ConfigError("backend '" + spec.id +
                                  "': accuracy outside [0, 1]");
            return std::make_shared<StochasticBackend>(std::move(spec));
        }
        case BackendKind::Remote: {
            const auto& p = std::get<RemoteParams>(spec.params);
            if (p.base_url.empty())
                throw ConfigError("backend '" + spec.id +
                                  "': remote spec needs a base_url");
            if (p.max_retries < 0 || p.timeout_ms <= 0)
                throw ConfigError("backend '" + spec.id +
                                  "': invalid retry/timeout settings");
            return std::make_shared<RemoteBackend>(std::move(spec));
        }
    }
    throw ConfigError("backend '" + spec.id + "': unknown kind");
}

} // namespace fedeval
