#pragma once

#include <stdexcept>
#include <string>

namespace fedeval {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration: files, thresholds, counts.
struct ConfigError : Error {
    using Error::Error;
};

// Prompt template problems: missing placeholder, role/task mismatch.
struct TemplateError : Error {
    using Error::Error;
};

// A protocol value violates its invariants (empty referee list, referee
// doubling as contestant, more verdicts than referees, ...).
struct ContractError : Error {
    using Error::Error;
};

// File and serialization failures. Message carries path and line.
struct IoError : Error {
    using Error::Error;
};

class BackendError : public Error {
public:
    BackendError(const std::string& what, int attempts, bool retryable)
        : Error(what), attempts_(attempts), retryable_(retryable) {}

    int attempts() const { return attempts_; }
    bool retryable() const { return retryable_; }

private:
    int attempts_ = 0;
    bool retryable_ = false;
};

} // namespace fedeval
