#pragma once

// Exception hierarchy shared by every wallscale module.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wallscale {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. y+ <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A value violates a documented type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + ", line " + std::to_string(line)), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MissingMetadataError : public Error {
public:
    explicit MissingMetadataError(std::vector<std::string> keys)
        : Error(compose(keys)), keys_(std::move(keys)) {}

    const std::vector<std::string>& keys() const noexcept { return keys_; }

private:
    static std::string compose(const std::vector<std::string>& keys) {
        std::string msg = "missing metadata:";
        for (const auto& k : keys) msg += " " + k;
        return msg;
    }

    std::vector<std::string> keys_;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class InsufficientPointsError : public Error {
public:
    using Error::Error;
};

/// A fit produced parameters with no physical meaning (kappa from a
/// non-positive slope, A <= C2, alpha <= 0, ...).
class NonPhysicalFitError : public Error {
public:
    using Error::Error;
};

class NoValidBreakpointError : public Error {
public:
    using Error::Error;
};

/// Failure inside the per-run pipeline, annotated with run label and stage.
class StageError : public Error {
public:
    StageError(std::string label, std::string stage, const std::string& cause)
        : Error("run '" + label + "': " + stage + ": " + cause),
          label_(std::move(label)), stage_(std::move(stage)) {}

    const std::string& label() const noexcept { return label_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string label_;
    std::string stage_;
};

}  // namespace wallscale
