#pragma once

#include <stdexcept>
#include <string>

namespace fps {

// Structured failure: `stage` names the pipeline stage that gave up and
// `code` is a stable machine-readable tag (essential-singularity,
// limit-undecided, unknown-function, unsupported-structure, domain-error, ...).
class FpsError : public std::runtime_error {
public:
    FpsError(std::string stage, std::string code, const std::string& detail)
        : std::runtime_error(stage + ": " + code + (detail.empty() ? "" : ": " + detail)),
          stage_(std::move(stage)),
          code_(std::move(code)) {}

    const std::string& stage() const { return stage_; }
    const std::string& code() const { return code_; }

private:
    std::string stage_, code_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t position) : std::runtime_error(msg), position_(position) {}
    size_t position() const { return position_; }

private:
    size_t position_;
};

}  // namespace fps
