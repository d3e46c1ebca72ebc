#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pivotheso {

enum class ErrorCode {
    UnknownScheme,
    UnknownConcept,
    InvalidLabel,
    DuplicatePrefLabel,
    CycleDetected,
    CrossScheme,
    SelfRelation,
    HierarchicallyLinked,
    SyntaxError,
    GraphError,
    FormatVersionMismatch,
    CorruptStore,
    UnknownRule,
    SameScheme,
    DuplicateAccepted,
    ConflictingType,
    UnknownMember,
    UnknownMapping,
    AlreadyDecided,
    UnknownReferential,
    DuplicateReferential,
    InvalidMillesime,
    AlreadyFrozen,
    FrozenReferential,
    NotInReferential,
    IncompatibleTypeCategory,
    FormTypeMismatch,
    DanglingConcept,
    MalformedCsv,
    MalformedRow,
    DuplicateId,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Turtle diagnostics keep the 1-based line and column of the offending byte.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

}  // namespace pivotheso
